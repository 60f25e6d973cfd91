#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aedet/autoencoder.hpp"
#include "aedet/dataprep.hpp"

namespace aedet {

enum class Verdict { Normal, Anomaly };

struct DetectorProfile {
    std::string node_id;
    double theta = 0.0;
    double percentile_n = 0.0;
    double train_error_mean = 0.0;
};

struct ClassScores {
    double precision = 0.0;
    double recall = 0.0;
    double f_score = 0.0;
};

struct ConfusionCounts {
    std::size_t tp_anomaly = 0;
    std::size_t fp_anomaly = 0;
    std::size_t tn_anomaly = 0;  // true normals
    std::size_t fn_anomaly = 0;
};

struct CandidateResult {
    double percentile_n = 0.0;
    double theta = 0.0;
    ClassScores normal;
    ClassScores anomaly;
    ConfusionCounts counts;
};

struct ErrorRatioSummary {
    std::optional<double> normal_mean;   // mean normalized error, normal rows
    std::optional<double> anomaly_mean;  // mean normalized error, anomaly rows
    std::optional<double> ratio;         // anomaly / normal
};

struct EvaluationReport {
    std::string node_id;
    std::vector<CandidateResult> candidates;
    double best_percentile = 0.0;
    ErrorRatioSummary errors;
};

// Nearest-rank percentile: sorted ascending, element at index
// ceil(n/100 * len) - 1. n in (0, 100].
double percentile(std::vector<double> values, double n);

DetectorProfile calibrate(const std::vector<double>& errors_normal, double n,
                          const std::string& node_id = {});

// Anomaly iff error is strictly greater than theta.
Verdict classify(double error, const DetectorProfile& profile);

struct PerClassScores {
    ClassScores normal;
    ClassScores anomaly;
    ConfusionCounts counts;
};

// predictions are verdicts; labels are ground-truth governor modes, where
// anything but Default counts as anomaly.
PerClassScores f_scores(const std::vector<Verdict>& predictions,
                        const std::vector<GovernorMode>& labels);

// Per-row reconstruction errors of a normalized dataset under the model.
std::vector<double> reconstruction_errors(const AutoencoderModel& model,
                                          const Matrix& normalized);

// Generate-and-test over percentile candidates; best n maximizes the mean of
// the two per-class F-scores, ties broken toward larger n.
EvaluationReport search_percentile(const std::vector<double>& calibration_errors,
                                   const std::vector<double>& eval_errors,
                                   const std::vector<GovernorMode>& eval_labels,
                                   const std::vector<double>& candidates,
                                   const std::string& node_id = {});

ErrorRatioSummary error_ratio_summary(const std::vector<double>& eval_errors,
                                      const std::vector<GovernorMode>& eval_labels,
                                      double train_error_mean);

}  // namespace aedet
