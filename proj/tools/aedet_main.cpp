// aedet: synthesize telemetry, train per-node autoencoders, calibrate
// thresholds, and run streaming anomaly detection.

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "aedet/pipeline.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitModel = 3;

aedet::AnomalySchedule default_schedule(std::size_t length) {
    // One powersave and one performance interval in the eval half.
    aedet::AnomalySchedule schedule;
    schedule.push_back({length * 11 / 20, length * 13 / 20,
                        aedet::GovernorMode::Powersave});
    schedule.push_back({length * 16 / 20, length * 18 / 20,
                        aedet::GovernorMode::Performance});
    return schedule;
}

int run_synth(std::size_t nodes, std::size_t length, std::size_t dim,
              std::uint64_t seed, double gap_fraction, const std::string& out_dir) {
    std::vector<aedet::NodeProfile> profiles;
    for (std::size_t i = 0; i < nodes; ++i)
        profiles.push_back(aedet::make_node_profile(
            "node" + std::to_string(i), seed + i * 1000003ULL, dim));

    auto traces = aedet::fleet_generate(profiles, length, dim,
                                        default_schedule(length), gap_fraction);
    for (const auto& trace : traces) {
        std::string path = out_dir + "/" + trace.node_id + ".csv";
        aedet::write_trace_csv(trace, path);
        std::cout << "wrote " << path << " (" << trace.samples.rows << " samples)\n";
    }
    return 0;
}

int run_train(const std::string& trace_path, const std::string& model_path,
              const aedet::PipelineConfig& config) {
    aedet::LabeledTrace trace = aedet::read_trace_csv(trace_path);
    aedet::TrainedNode node = aedet::train_on_trace(trace, config);
    for (std::size_t e = 0; e < node.loss_history.size(); ++e)
        std::cout << "epoch " << (e + 1) << " loss "
                  << aedet::format_double(node.loss_history[e]) << "\n";
    aedet::save_model(node.model, std::nullopt, model_path);
    std::cout << "wrote " << model_path << "\n";
    return 0;
}

int run_calibrate(const std::string& model_path, const std::string& trace_path,
                  const std::string& report_path, bool holdout,
                  const aedet::PipelineConfig& config) {
    aedet::LoadedModel loaded = aedet::load_model(model_path);
    aedet::LabeledTrace trace = aedet::read_trace_csv(trace_path);

    // Calibration errors come from the training split by default, or from
    // the held-out normal rows of the eval split with --holdout.
    aedet::SplitResult parts = aedet::split(trace, config.train_fraction);
    std::vector<double> calibration_errors;
    if (holdout) {
        aedet::Matrix eval_matrix =
            aedet::apply_norm(parts.eval.samples, loaded.model.norm);
        std::vector<double> all =
            aedet::reconstruction_errors(loaded.model, eval_matrix);
        for (std::size_t i = 0; i < all.size(); ++i)
            if (parts.eval.labels[i] == aedet::GovernorMode::Default)
                calibration_errors.push_back(all[i]);
        if (calibration_errors.empty()) {
            std::cerr << "no normal rows in the held-out window\n";
            return kExitData;
        }
    } else {
        aedet::Matrix train_matrix =
            aedet::apply_norm(parts.train.samples, loaded.model.norm);
        calibration_errors =
            aedet::reconstruction_errors(loaded.model, train_matrix);
    }

    aedet::CalibrationResult result = aedet::calibrate_on_trace(
        loaded.model, calibration_errors, trace, config);

    std::ofstream report(report_path);
    if (!report) {
        std::cerr << "cannot write " << report_path << "\n";
        return kExitData;
    }
    aedet::write_report_csv({result.report}, config.percentile_candidates, report);

    aedet::save_model(loaded.model, result.profile, model_path);
    std::cout << "best percentile " << result.profile.percentile_n << " theta "
              << aedet::format_double(result.profile.theta) << "\n";
    std::cout << "wrote " << report_path << " and updated " << model_path << "\n";
    return 0;
}

int run_infer(const std::string& model_path, const std::string& input_path) {
    aedet::LoadedModel loaded = aedet::load_model(model_path);
    if (!loaded.profile) {
        std::cerr << "model has no embedded detector profile; run calibrate first\n";
        return kExitModel;
    }
    aedet::StreamStats stats;
    if (input_path.empty() || input_path == "-") {
        stats = aedet::infer_stream(loaded.model, *loaded.profile, std::cin,
                                    std::cout, std::cerr);
    } else {
        std::ifstream in(input_path);
        if (!in) {
            std::cerr << "cannot open " << input_path << "\n";
            return kExitData;
        }
        stats = aedet::infer_stream(loaded.model, *loaded.profile, in, std::cout,
                                    std::cerr);
    }
    std::cerr << "processed " << stats.processed << " records, "
              << stats.malformed << " malformed\n";
    return 0;
}

int run_evaluate(const std::string& model_path, const std::string& trace_path,
                 const std::string& report_path, const std::string& summary_path,
                 const aedet::PipelineConfig& config) {
    aedet::LoadedModel loaded = aedet::load_model(model_path);
    if (!loaded.profile) {
        std::cerr << "model has no embedded detector profile; run calibrate first\n";
        return kExitModel;
    }
    aedet::LabeledTrace trace = aedet::read_trace_csv(trace_path);
    bool any_anomaly_label =
        std::any_of(trace.labels.begin(), trace.labels.end(), [](auto m) {
            return m != aedet::GovernorMode::Default;
        });
    if (!any_anomaly_label)
        std::cerr << "warning: trace contains no anomaly labels\n";

    // Full candidate sweep against the same calibration distribution.
    aedet::SplitResult parts = aedet::split(trace, config.train_fraction);
    aedet::Matrix train_matrix =
        aedet::apply_norm(parts.train.samples, loaded.model.norm);
    std::vector<double> calibration_errors =
        aedet::reconstruction_errors(loaded.model, train_matrix);
    aedet::CalibrationResult swept = aedet::calibrate_on_trace(
        loaded.model, calibration_errors, trace, config);

    std::ofstream report(report_path);
    std::ofstream summary(summary_path);
    if (!report || !summary) {
        std::cerr << "cannot write report outputs\n";
        return kExitData;
    }
    aedet::write_report_csv({swept.report}, config.percentile_candidates, report);
    aedet::write_error_summary_csv({swept.report}, summary);

    const auto& e = swept.report.errors;
    if (e.normal_mean)
        std::cout << "normal mean normalized error "
                  << aedet::format_double(*e.normal_mean) << "\n";
    if (e.anomaly_mean)
        std::cout << "anomaly mean normalized error "
                  << aedet::format_double(*e.anomaly_mean) << "\n";
    if (e.ratio)
        std::cout << "anomaly/normal ratio " << aedet::format_double(*e.ratio) << "\n";
    return 0;
}

int run_report(const std::string& model_path, const std::string& trace_path,
               const std::string& csv_path, const std::string& svg_path) {
    aedet::LoadedModel loaded = aedet::load_model(model_path);
    aedet::LabeledTrace trace = aedet::read_trace_csv(trace_path);
    aedet::ReportSeries series = aedet::error_series(loaded.model, trace);
    double theta = loaded.profile ? loaded.profile->theta : 0.0;

    std::ofstream csv(csv_path);
    std::ofstream svg(svg_path);
    if (!csv || !svg) {
        std::cerr << "cannot write report outputs\n";
        return kExitData;
    }
    aedet::write_series_csv(series, csv);
    aedet::write_series_svg(series, trace, theta, svg);
    std::cout << "wrote " << csv_path << " and " << svg_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"autoencoder-based telemetry anomaly detection"};
    app.require_subcommand(1);

    // Shared knobs.
    std::uint64_t seed = 42;
    std::size_t dim = 32;
    std::size_t hidden_mult = 10;
    std::size_t epochs = 100;
    std::size_t batch_size = 32;
    double lr = 1e-3;
    double l1 = 1e-4;
    double train_fraction = 0.5;
    std::vector<double> percentiles = {95.0, 97.0, 99.0};

    auto add_train_flags = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed);
        cmd->add_option("--hidden-mult", hidden_mult);
        cmd->add_option("--epochs", epochs);
        cmd->add_option("--batch-size", batch_size);
        cmd->add_option("--lr", lr);
        cmd->add_option("--l1", l1);
        cmd->add_option("--train-fraction", train_fraction);
    };

    auto* synth = app.add_subcommand("synth", "generate synthetic labeled traces");
    std::size_t nodes = 4, length = 8000;
    double gap_fraction = 0.05;
    std::string out_dir = ".";
    synth->add_option("--nodes", nodes);
    synth->add_option("--length", length);
    synth->add_option("--dim", dim);
    synth->add_option("--seed", seed);
    synth->add_option("--gap-fraction", gap_fraction);
    synth->add_option("--out-dir", out_dir);

    auto* train_cmd = app.add_subcommand("train", "train a model on one trace");
    std::string trace_path, model_path = "model.bin";
    train_cmd->add_option("trace", trace_path)->required();
    train_cmd->add_option("--model", model_path);
    add_train_flags(train_cmd);

    auto* calibrate_cmd =
        app.add_subcommand("calibrate", "pick a percentile threshold");
    std::string report_path = "report.csv";
    calibrate_cmd->add_option("model", model_path)->required();
    calibrate_cmd->add_option("trace", trace_path)->required();
    calibrate_cmd->add_option("--report", report_path);
    calibrate_cmd->add_option("--percentiles", percentiles);
    calibrate_cmd->add_option("--train-fraction", train_fraction);
    bool holdout = false;
    calibrate_cmd->add_flag("--holdout", holdout,
                            "calibrate on held-out normal rows instead of the "
                            "training window");

    auto* infer_cmd = app.add_subcommand("infer", "stream records through a model");
    std::string input_path;
    infer_cmd->add_option("model", model_path)->required();
    infer_cmd->add_option("--input", input_path,
                          "line-delimited records; default standard input");

    auto* evaluate_cmd =
        app.add_subcommand("evaluate", "score a calibrated model on a labeled trace");
    std::string summary_path = "summary.csv";
    evaluate_cmd->add_option("model", model_path)->required();
    evaluate_cmd->add_option("trace", trace_path)->required();
    evaluate_cmd->add_option("--report", report_path);
    evaluate_cmd->add_option("--summary", summary_path);
    evaluate_cmd->add_option("--percentiles", percentiles);
    evaluate_cmd->add_option("--train-fraction", train_fraction);

    auto* report_cmd =
        app.add_subcommand("report", "reconstruction-error time series CSV + SVG");
    std::string series_csv = "series.csv", series_svg = "series.svg";
    report_cmd->add_option("model", model_path)->required();
    report_cmd->add_option("trace", trace_path)->required();
    report_cmd->add_option("--csv", series_csv);
    report_cmd->add_option("--svg", series_svg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    aedet::PipelineConfig config;
    config.train_fraction = train_fraction;
    config.hidden_mult = hidden_mult;
    config.train.epochs = epochs;
    config.train.batch_size = batch_size;
    config.train.learning_rate = lr;
    config.train.l1_lambda = l1;
    config.train.seed = seed;
    config.percentile_candidates = percentiles;

    try {
        if (synth->parsed())
            return run_synth(nodes, length, dim, seed, gap_fraction, out_dir);
        if (train_cmd->parsed()) return run_train(trace_path, model_path, config);
        if (calibrate_cmd->parsed())
            return run_calibrate(model_path, trace_path, report_path, holdout, config);
        if (infer_cmd->parsed()) return run_infer(model_path, input_path);
        if (evaluate_cmd->parsed())
            return run_evaluate(model_path, trace_path, report_path, summary_path,
                                config);
        if (report_cmd->parsed())
            return run_report(model_path, trace_path, series_csv, series_svg);
    } catch (const aedet::ModelStoreError& e) {
        std::cerr << "model file error: " << e.what() << "\n";
        return kExitModel;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
