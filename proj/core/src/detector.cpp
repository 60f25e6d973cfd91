#include "aedet/detector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace aedet {

double percentile(std::vector<double> values, double n) {
    if (values.empty()) throw std::invalid_argument("percentile: empty input");
    if (n <= 0.0 || n > 100.0)
        throw std::invalid_argument("percentile: n must be in (0,100]");
    std::sort(values.begin(), values.end());
    auto len = static_cast<double>(values.size());
    auto rank = static_cast<std::size_t>(std::ceil(n / 100.0 * len));
    return values[rank - 1];
}

DetectorProfile calibrate(const std::vector<double>& errors_normal, double n,
                          const std::string& node_id) {
    if (errors_normal.empty()) throw std::invalid_argument("calibrate: empty input");
    DetectorProfile p;
    p.node_id = node_id;
    p.percentile_n = n;
    p.theta = percentile(errors_normal, n);
    p.train_error_mean =
        std::accumulate(errors_normal.begin(), errors_normal.end(), 0.0) /
        static_cast<double>(errors_normal.size());
    return p;
}

Verdict classify(double error, const DetectorProfile& profile) {
    if (!std::isfinite(error)) throw std::invalid_argument("classify: non-finite error");
    return error > profile.theta ? Verdict::Anomaly : Verdict::Normal;
}

PerClassScores f_scores(const std::vector<Verdict>& predictions,
                        const std::vector<GovernorMode>& labels) {
    if (predictions.size() != labels.size() || predictions.empty())
        throw std::invalid_argument("f_scores: length mismatch or empty");

    ConfusionCounts c;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        bool pred_anom = predictions[i] == Verdict::Anomaly;
        bool true_anom = labels[i] != GovernorMode::Default;
        if (pred_anom && true_anom) ++c.tp_anomaly;
        else if (pred_anom && !true_anom) ++c.fp_anomaly;
        else if (!pred_anom && true_anom) ++c.fn_anomaly;
        else ++c.tn_anomaly;
    }

    auto scores = [](std::size_t tp, std::size_t fp, std::size_t fn) {
        ClassScores s;
        s.precision = tp + fp == 0 ? 0.0
                                   : static_cast<double>(tp) / static_cast<double>(tp + fp);
        s.recall = tp + fn == 0 ? 0.0
                                : static_cast<double>(tp) / static_cast<double>(tp + fn);
        s.f_score = s.precision + s.recall == 0.0
                        ? 0.0
                        : 2.0 * s.precision * s.recall / (s.precision + s.recall);
        return s;
    };

    PerClassScores out;
    out.counts = c;
    out.anomaly = scores(c.tp_anomaly, c.fp_anomaly, c.fn_anomaly);
    out.normal = scores(c.tn_anomaly, c.fn_anomaly, c.fp_anomaly);
    return out;
}

std::vector<double> reconstruction_errors(const AutoencoderModel& model,
                                          const Matrix& normalized) {
    if (normalized.cols != model.d)
        throw std::invalid_argument("reconstruction_errors: dimension mismatch");
    std::vector<double> errors;
    errors.reserve(normalized.rows);
    for (std::size_t r = 0; r < normalized.rows; ++r) {
        auto fwd = forward(model, normalized.row(r));
        errors.push_back(reconstruction_error(normalized.row(r), fwd.output.data(),
                                              model.d));
    }
    return errors;
}

EvaluationReport search_percentile(const std::vector<double>& calibration_errors,
                                   const std::vector<double>& eval_errors,
                                   const std::vector<GovernorMode>& eval_labels,
                                   const std::vector<double>& candidates,
                                   const std::string& node_id) {
    if (candidates.empty())
        throw std::invalid_argument("search_percentile: no candidates");
    if (eval_errors.empty() || eval_errors.size() != eval_labels.size())
        throw std::invalid_argument("search_percentile: bad validation set");

    EvaluationReport report;
    report.node_id = node_id;
    double best_objective = -1.0;

    for (double n : candidates) {
        DetectorProfile profile = calibrate(calibration_errors, n, node_id);
        std::vector<Verdict> predictions;
        predictions.reserve(eval_errors.size());
        for (double e : eval_errors) predictions.push_back(classify(e, profile));
        PerClassScores scores = f_scores(predictions, eval_labels);

        CandidateResult row;
        row.percentile_n = n;
        row.theta = profile.theta;
        row.normal = scores.normal;
        row.anomaly = scores.anomaly;
        row.counts = scores.counts;
        report.candidates.push_back(row);

        double objective = 0.5 * (scores.normal.f_score + scores.anomaly.f_score);
        if (objective > best_objective ||
            (objective == best_objective && n > report.best_percentile)) {
            best_objective = objective;
            report.best_percentile = n;
        }
    }
    return report;
}

ErrorRatioSummary error_ratio_summary(const std::vector<double>& eval_errors,
                                      const std::vector<GovernorMode>& eval_labels,
                                      double train_error_mean) {
    if (train_error_mean <= 0.0)
        throw std::invalid_argument("error_ratio_summary: train_error_mean must be > 0");
    if (eval_errors.size() != eval_labels.size())
        throw std::invalid_argument("error_ratio_summary: length mismatch");

    double normal_sum = 0.0, anomaly_sum = 0.0;
    std::size_t normal_count = 0, anomaly_count = 0;
    for (std::size_t i = 0; i < eval_errors.size(); ++i) {
        double normalized = eval_errors[i] / train_error_mean;
        if (eval_labels[i] == GovernorMode::Default) {
            normal_sum += normalized;
            ++normal_count;
        } else {
            anomaly_sum += normalized;
            ++anomaly_count;
        }
    }

    ErrorRatioSummary s;
    if (normal_count > 0) s.normal_mean = normal_sum / static_cast<double>(normal_count);
    if (anomaly_count > 0)
        s.anomaly_mean = anomaly_sum / static_cast<double>(anomaly_count);
    if (s.normal_mean && s.anomaly_mean && *s.normal_mean > 0.0)
        s.ratio = *s.anomaly_mean / *s.normal_mean;
    return s;
}

}  // namespace aedet
