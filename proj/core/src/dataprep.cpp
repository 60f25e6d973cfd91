#include "aedet/dataprep.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace aedet {

LabeledTrace filter_valid(const LabeledTrace& trace) {
    LabeledTrace out;
    out.node_id = trace.node_id;
    out.samples.cols = trace.samples.cols;
    for (std::size_t t = 0; t < trace.samples.rows; ++t) {
        if (!trace.valid_mask[t]) continue;
        const double* row = trace.samples.row(t);
        out.samples.data.insert(out.samples.data.end(), row, row + trace.samples.cols);
        out.labels.push_back(trace.labels[t]);
        out.valid_mask.push_back(true);
        ++out.samples.rows;
    }
    return out;
}

NormStats fit_norm(const Matrix& samples) {
    if (samples.rows == 0) throw std::invalid_argument("fit_norm: empty input");
    NormStats stats;
    stats.min.assign(samples.row(0), samples.row(0) + samples.cols);
    stats.max = stats.min;
    for (std::size_t r = 0; r < samples.rows; ++r) {
        const double* row = samples.row(r);
        for (std::size_t i = 0; i < samples.cols; ++i) {
            if (!std::isfinite(row[i]))
                throw std::invalid_argument("fit_norm: non-finite value");
            if (row[i] < stats.min[i]) stats.min[i] = row[i];
            if (row[i] > stats.max[i]) stats.max[i] = row[i];
        }
    }
    return stats;
}

Matrix apply_norm(const Matrix& samples, const NormStats& stats) {
    if (samples.cols != stats.dim())
        throw std::invalid_argument("apply_norm: dimension mismatch");
    Matrix out(samples.rows, samples.cols);
    for (std::size_t r = 0; r < samples.rows; ++r) {
        const double* in = samples.row(r);
        double* o = out.row(r);
        for (std::size_t i = 0; i < samples.cols; ++i) {
            double range = stats.max[i] - stats.min[i];
            o[i] = range == 0.0 ? 0.0 : (in[i] - stats.min[i]) / range;
        }
    }
    return out;
}

Matrix denormalize(const Matrix& samples, const NormStats& stats) {
    if (samples.cols != stats.dim())
        throw std::invalid_argument("denormalize: dimension mismatch");
    Matrix out(samples.rows, samples.cols);
    for (std::size_t r = 0; r < samples.rows; ++r) {
        const double* in = samples.row(r);
        double* o = out.row(r);
        for (std::size_t i = 0; i < samples.cols; ++i)
            o[i] = stats.min[i] + in[i] * (stats.max[i] - stats.min[i]);
    }
    return out;
}

SplitResult split(const LabeledTrace& trace, double train_fraction) {
    if (train_fraction <= 0.0 || train_fraction >= 1.0)
        throw std::invalid_argument("train_fraction must be in (0,1)");
    LabeledTrace valid = filter_valid(trace);
    std::size_t n = valid.samples.rows;
    std::size_t boundary =
        static_cast<std::size_t>(train_fraction * static_cast<double>(n));

    SplitResult out;
    out.train.node_id = trace.node_id;
    out.eval.node_id = trace.node_id;
    out.train.samples.cols = valid.samples.cols;
    out.eval.samples.cols = valid.samples.cols;

    for (std::size_t r = 0; r < n; ++r) {
        const double* row = valid.samples.row(r);
        Dataset& dst = r < boundary ? out.train : out.eval;
        if (r < boundary && valid.labels[r] != GovernorMode::Default) continue;
        dst.samples.data.insert(dst.samples.data.end(), row, row + valid.samples.cols);
        dst.labels.push_back(valid.labels[r]);
        ++dst.samples.rows;
    }

    if (out.train.samples.rows == 0)
        throw std::invalid_argument("split: no normal rows in training window");
    return out;
}

}  // namespace aedet
