#include "aedet/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string_view>

namespace aedet {

TrainedNode train_on_trace(const LabeledTrace& trace, const PipelineConfig& config) {
    SplitResult parts = split(trace, config.train_fraction);
    NormStats stats = fit_norm(parts.train.samples);
    Matrix train_matrix = apply_norm(parts.train.samples, stats);

    TrainResult result =
        train(train_matrix, config.hidden_mult * train_matrix.cols, config.train);
    result.model.norm = stats;

    TrainedNode node;
    node.model = std::move(result.model);
    node.loss_history = std::move(result.loss_history);
    node.train_errors = reconstruction_errors(node.model, train_matrix);
    return node;
}

CalibrationResult calibrate_on_trace(const AutoencoderModel& model,
                                     const std::vector<double>& calibration_errors,
                                     const LabeledTrace& trace,
                                     const PipelineConfig& config) {
    SplitResult parts = split(trace, config.train_fraction);
    Matrix eval_matrix = apply_norm(parts.eval.samples, model.norm);
    std::vector<double> eval_errors = reconstruction_errors(model, eval_matrix);

    CalibrationResult out;
    out.report = search_percentile(calibration_errors, eval_errors,
                                   parts.eval.labels, config.percentile_candidates,
                                   trace.node_id);
    out.profile =
        calibrate(calibration_errors, out.report.best_percentile, trace.node_id);
    out.report.errors = error_ratio_summary(eval_errors, parts.eval.labels,
                                            out.profile.train_error_mean);
    return out;
}

EvaluationOutput evaluate_on_trace(const AutoencoderModel& model,
                                   const DetectorProfile& profile,
                                   const LabeledTrace& trace,
                                   const PipelineConfig& config) {
    SplitResult parts = split(trace, config.train_fraction);
    Matrix eval_matrix = apply_norm(parts.eval.samples, model.norm);

    EvaluationOutput out;
    out.eval_errors = reconstruction_errors(model, eval_matrix);
    out.eval_labels = parts.eval.labels;
    // Thresholds for the report come from the calibration distribution the
    // profile was built on; here we re-derive only the per-candidate scores
    // by sweeping thetas at the same percentiles over the profile's
    // calibration reference. The profile itself supplies the single
    // deployed threshold.
    std::vector<Verdict> predictions;
    predictions.reserve(out.eval_errors.size());
    for (double e : out.eval_errors) predictions.push_back(classify(e, profile));
    PerClassScores scores = f_scores(predictions, out.eval_labels);

    CandidateResult row;
    row.percentile_n = profile.percentile_n;
    row.theta = profile.theta;
    row.normal = scores.normal;
    row.anomaly = scores.anomaly;
    row.counts = scores.counts;

    out.report.node_id = trace.node_id;
    out.report.candidates.push_back(row);
    out.report.best_percentile = profile.percentile_n;
    out.report.errors = error_ratio_summary(out.eval_errors, out.eval_labels,
                                            profile.train_error_mean);
    return out;
}

namespace {

std::string fmt_score(double v) {
    std::ostringstream ss;
    ss.precision(4);
    ss << std::fixed << v;
    return ss.str();
}

}  // namespace

void write_report_csv(const std::vector<EvaluationReport>& reports,
                      const std::vector<double>& candidates, std::ostream& out) {
    out << "node";
    for (double n : candidates) {
        out << ",n" << n << "_N,n" << n << "_A";
    }
    out << "\n";
    for (const auto& report : reports) {
        out << report.node_id;
        for (double n : candidates) {
            auto it = std::find_if(report.candidates.begin(), report.candidates.end(),
                                   [&](const CandidateResult& c) {
                                       return c.percentile_n == n;
                                   });
            if (it == report.candidates.end())
                throw std::invalid_argument("report missing candidate row");
            out << ',' << fmt_score(it->normal.f_score) << ','
                << fmt_score(it->anomaly.f_score);
        }
        out << "\n";
    }
}

void write_error_summary_csv(const std::vector<EvaluationReport>& reports,
                             std::ostream& out) {
    out << "node,normal_mean_norm_error,anomaly_mean_norm_error,ratio\n";
    for (const auto& report : reports) {
        const auto& e = report.errors;
        out << report.node_id << ','
            << (e.normal_mean ? format_double(*e.normal_mean) : "") << ','
            << (e.anomaly_mean ? format_double(*e.anomaly_mean) : "") << ','
            << (e.ratio ? format_double(*e.ratio) : "") << "\n";
    }
}

StreamStats infer_stream(const AutoencoderModel& model,
                         const DetectorProfile& profile, std::istream& in,
                         std::ostream& out, std::ostream& err) {
    StreamStats stats;
    std::string line;
    std::vector<double> raw(model.d);
    std::vector<double> normalized(model.d);

    while (std::getline(in, line)) {
        if (line.empty()) continue;

        // node_id,seq,v0,...,v{d-1}
        std::vector<std::string_view> fields;
        std::size_t start = 0;
        while (true) {
            std::size_t com = line.find(',', start);
            fields.push_back(std::string_view(line).substr(
                start, com == std::string::npos ? com : com - start));
            if (com == std::string::npos) break;
            start = com + 1;
        }
        if (fields.size() < 3) {
            err << "malformed record: " << line << "\n";
            ++stats.malformed;
            continue;
        }

        std::size_t nvalues = fields.size() - 2;
        bool numeric = true;
        raw.resize(std::max(nvalues, model.d));
        for (std::size_t i = 0; i < nvalues && numeric; ++i) {
            const auto& f = fields[2 + i];
            auto res = std::from_chars(f.data(), f.data() + f.size(), raw[i]);
            numeric = res.ec == std::errc{} && res.ptr == f.data() + f.size() &&
                      std::isfinite(raw[i]);
        }
        if (!numeric) {
            err << "malformed record: " << line << "\n";
            ++stats.malformed;
            continue;
        }
        if (nvalues != model.d)
            throw std::invalid_argument(
                "record dimension " + std::to_string(nvalues) +
                " does not match model dimension " + std::to_string(model.d));
        std::string node_id(fields[0]);
        std::string seq(fields[1]);

        auto t0 = std::chrono::steady_clock::now();
        for (std::size_t i = 0; i < model.d; ++i) {
            double range = model.norm.max[i] - model.norm.min[i];
            normalized[i] = range == 0.0 ? 0.0 : (raw[i] - model.norm.min[i]) / range;
        }
        ForwardResult fwd = forward(model, normalized.data());
        double error = reconstruction_error(normalized.data(), fwd.output.data(),
                                            model.d);
        Verdict verdict = classify(error, profile);
        auto t1 = std::chrono::steady_clock::now();
        double latency_us =
            std::chrono::duration<double, std::micro>(t1 - t0).count();

        out << node_id << ',' << seq << ',' << format_double(error) << ','
            << format_double(error / profile.train_error_mean) << ','
            << (verdict == Verdict::Anomaly ? "anomaly" : "normal") << ','
            << static_cast<long long>(latency_us) << "\n";
        ++stats.processed;
        stats.latencies_us.push_back(latency_us);
    }
    return stats;
}

ReportSeries error_series(const AutoencoderModel& model, const LabeledTrace& trace) {
    Matrix normalized = apply_norm(trace.samples, model.norm);
    ReportSeries series;
    for (std::size_t t = 0; t < trace.samples.rows; ++t) {
        if (!trace.valid_mask[t]) continue;
        ForwardResult fwd = forward(model, normalized.row(t));
        series.indices.push_back(t);
        series.errors.push_back(
            reconstruction_error(normalized.row(t), fwd.output.data(), model.d));
        series.anomaly_labels.push_back(trace.labels[t] != GovernorMode::Default);
    }
    return series;
}

void write_series_csv(const ReportSeries& series, std::ostream& out) {
    out << "timestamp_index,error,anomaly\n";
    for (std::size_t i = 0; i < series.indices.size(); ++i) {
        out << series.indices[i] << ',' << format_double(series.errors[i]) << ','
            << (series.anomaly_labels[i] ? 1 : 0) << "\n";
    }
}

void write_series_svg(const ReportSeries& series, const LabeledTrace& trace,
                      double theta, std::ostream& out) {
    const double width = 960.0, height = 320.0, margin = 40.0;
    std::size_t total = trace.samples.rows;
    double max_err = theta;
    for (double e : series.errors) max_err = std::max(max_err, e);
    if (max_err <= 0.0) max_err = 1.0;

    auto sx = [&](std::size_t t) {
        return margin + (width - 2 * margin) * static_cast<double>(t) /
                            static_cast<double>(std::max<std::size_t>(total - 1, 1));
    };
    auto sy = [&](double e) {
        return height - margin - (height - 2 * margin) * (e / max_err);
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\">\n";

    // Anomaly bands from the trace labels.
    std::size_t t = 0;
    while (t < total) {
        if (trace.labels[t] == GovernorMode::Default) {
            ++t;
            continue;
        }
        std::size_t start = t;
        GovernorMode mode = trace.labels[t];
        while (t < total && trace.labels[t] == mode) ++t;
        const char* color = mode == GovernorMode::Powersave ? "#d62728" : "#1f77b4";
        out << "  <rect x=\"" << sx(start) << "\" y=\"" << margin << "\" width=\""
            << (sx(t - 1) - sx(start)) << "\" height=\"" << (height - 2 * margin)
            << "\" fill=\"" << color << "\" opacity=\"0.2\"/>\n";
    }

    // Threshold line.
    out << "  <line x1=\"" << margin << "\" y1=\"" << sy(theta) << "\" x2=\""
        << (width - margin) << "\" y2=\"" << sy(theta)
        << "\" stroke=\"#555\" stroke-dasharray=\"4 3\"/>\n";

    // One polyline per contiguous run of valid samples.
    std::size_t i = 0;
    while (i < series.indices.size()) {
        std::size_t j = i;
        while (j + 1 < series.indices.size() &&
               series.indices[j + 1] == series.indices[j] + 1)
            ++j;
        out << "  <polyline fill=\"none\" stroke=\"#6baed6\" stroke-width=\"1\" points=\"";
        for (std::size_t k = i; k <= j; ++k) {
            out << sx(series.indices[k]) << ',' << sy(series.errors[k]);
            if (k != j) out << ' ';
        }
        out << "\"/>\n";
        i = j + 1;
    }

    out << "</svg>\n";
}

}  // namespace aedet
