#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "aedet/detector.hpp"
#include "aedet/modelstore.hpp"
#include "aedet/synthgen.hpp"
#include "aedet/trace_io.hpp"

namespace aedet {

struct PipelineConfig {
    double train_fraction = 0.5;
    std::size_t hidden_mult = 10;
    TrainConfig train;
    std::vector<double> percentile_candidates = {95.0, 97.0, 99.0};
};

struct TrainedNode {
    AutoencoderModel model;
    std::vector<double> train_errors;  // reconstruction errors on training rows
    std::vector<double> loss_history;
};

// filter_valid -> split -> fit_norm on train -> train. The returned model
// carries its NormStats.
TrainedNode train_on_trace(const LabeledTrace& trace, const PipelineConfig& config);

struct CalibrationResult {
    DetectorProfile profile;  // at the best percentile
    EvaluationReport report;
};

// Generate-and-test percentile search: thresholds from calibration errors,
// scored against the trace's eval split.
CalibrationResult calibrate_on_trace(const AutoencoderModel& model,
                                     const std::vector<double>& calibration_errors,
                                     const LabeledTrace& trace,
                                     const PipelineConfig& config);

struct EvaluationOutput {
    EvaluationReport report;
    std::vector<double> eval_errors;
    std::vector<GovernorMode> eval_labels;
};

// Evaluates a calibrated model against the eval split of a labeled trace.
EvaluationOutput evaluate_on_trace(const AutoencoderModel& model,
                                   const DetectorProfile& profile,
                                   const LabeledTrace& trace,
                                   const PipelineConfig& config);

// Table I layout: node,n95_N,n95_A,n97_N,n97_A,n99_N,n99_A (column names
// follow the candidate list).
void write_report_csv(const std::vector<EvaluationReport>& reports,
                      const std::vector<double>& candidates, std::ostream& out);
void write_error_summary_csv(const std::vector<EvaluationReport>& reports,
                             std::ostream& out);

struct StreamStats {
    std::size_t processed = 0;
    std::size_t malformed = 0;
    std::vector<double> latencies_us;
};

// Line-delimited streaming inference.
// Input:  node_id,seq,v0,...,v{d-1}
// Output: node_id,seq,error,normalized_error,verdict,latency_us
// Malformed lines go to `err` and processing continues; a well-formed line
// with the wrong dimension throws.
StreamStats infer_stream(const AutoencoderModel& model,
                         const DetectorProfile& profile, std::istream& in,
                         std::ostream& out, std::ostream& err);

struct ReportSeries {
    std::vector<std::size_t> indices;   // timestamp indices of valid rows
    std::vector<double> errors;         // reconstruction error per valid row
    std::vector<bool> anomaly_labels;   // ground truth per valid row
};

// Per-row errors of the full trace (invalid rows skipped), for plotting.
ReportSeries error_series(const AutoencoderModel& model, const LabeledTrace& trace);

void write_series_csv(const ReportSeries& series, std::ostream& out);

// SVG: one polyline segment per contiguous valid run (gaps break the line),
// one shaded band per anomaly interval, horizontal threshold line.
void write_series_svg(const ReportSeries& series, const LabeledTrace& trace,
                      double theta, std::ostream& out);

}  // namespace aedet
