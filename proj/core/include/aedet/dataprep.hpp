#pragma once

#include <string>
#include <vector>

#include "aedet/matrix.hpp"
#include "aedet/synthgen.hpp"

namespace aedet {

// Per-feature min/max fitted on training data; reused verbatim at inference.
struct NormStats {
    std::vector<double> min;
    std::vector<double> max;

    std::size_t dim() const { return min.size(); }
    bool operator==(const NormStats&) const = default;
};

struct Dataset {
    std::string node_id;
    Matrix samples;  // normalized, rows = samples
    std::vector<GovernorMode> labels;
};

// Keeps exactly the rows with valid_mask true, order preserved.
LabeledTrace filter_valid(const LabeledTrace& trace);

NormStats fit_norm(const Matrix& samples);

// out[r][i] = (in[r][i] - min[i]) / (max[i] - min[i]); constant columns map
// to 0. Values outside the fitted range are NOT clamped.
Matrix apply_norm(const Matrix& samples, const NormStats& stats);

Matrix denormalize(const Matrix& samples, const NormStats& stats);

struct SplitResult {
    Dataset train;  // leading fraction of valid rows, Default-labeled only, raw units
    Dataset eval;   // remaining valid rows, all labels, raw units
};

// Chronological split over valid rows. The returned matrices are raw
// (un-normalized); callers fit NormStats on train and apply to both.
SplitResult split(const LabeledTrace& trace, double train_fraction);

}  // namespace aedet
