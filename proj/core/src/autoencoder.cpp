#include "aedet/autoencoder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "aedet/rng.hpp"

namespace aedet {

namespace {

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

AdamState AdamState::zeros_like(const AutoencoderModel& model) {
    AdamState s;
    s.m.w1 = Matrix(model.h, model.d);
    s.m.b1.assign(model.h, 0.0);
    s.m.w2 = Matrix(model.d, model.h);
    s.m.b2.assign(model.d, 0.0);
    s.v = s.m;
    return s;
}

AutoencoderModel make_model(std::size_t d, std::size_t h, double l1_lambda) {
    if (d == 0 || h == 0) throw std::invalid_argument("zero layer width");
    AutoencoderModel m;
    m.d = d;
    m.h = h;
    m.l1_lambda = l1_lambda;
    m.w1 = Matrix(h, d);
    m.b1.assign(h, 0.0);
    m.w2 = Matrix(d, h);
    m.b2.assign(d, 0.0);
    return m;
}

void init_weights(AutoencoderModel& model, std::uint64_t seed) {
    Rng rng(seed);
    double limit1 = std::sqrt(6.0 / static_cast<double>(model.d + model.h));
    for (double& w : model.w1.data) w = rng.uniform(-limit1, limit1);
    double limit2 = std::sqrt(6.0 / static_cast<double>(model.h + model.d));
    for (double& w : model.w2.data) w = rng.uniform(-limit2, limit2);
    std::fill(model.b1.begin(), model.b1.end(), 0.0);
    std::fill(model.b2.begin(), model.b2.end(), 0.0);
}

ForwardResult forward(const AutoencoderModel& model, const double* x) {
    ForwardResult r;
    r.hidden.resize(model.h);
    r.output.resize(model.d);
    for (std::size_t j = 0; j < model.h; ++j) {
        const double* wrow = model.w1.row(j);
        double z = model.b1[j];
        for (std::size_t i = 0; i < model.d; ++i) z += wrow[i] * x[i];
        r.hidden[j] = z > 0.0 ? z : 0.0;
    }
    for (std::size_t i = 0; i < model.d; ++i) {
        const double* wrow = model.w2.row(i);
        double o = model.b2[i];
        for (std::size_t j = 0; j < model.h; ++j) o += wrow[j] * r.hidden[j];
        r.output[i] = o;
    }
    return r;
}

ForwardResult forward(const AutoencoderModel& model, const std::vector<double>& x) {
    if (x.size() != model.d)
        throw std::invalid_argument("forward: input dimension mismatch");
    return forward(model, x.data());
}

double reconstruction_error(const double* x, const double* output, std::size_t d) {
    double sum = 0.0;
    for (std::size_t i = 0; i < d; ++i) sum += std::fabs(x[i] - output[i]);
    return sum / static_cast<double>(d);
}

double reconstruction_error(const std::vector<double>& x,
                            const std::vector<double>& output) {
    if (x.size() != output.size())
        throw std::invalid_argument("reconstruction_error: length mismatch");
    return reconstruction_error(x.data(), output.data(), x.size());
}

double batch_loss(const AutoencoderModel& model, const Matrix& batch) {
    if (batch.rows == 0) throw std::invalid_argument("batch_loss: empty batch");
    if (batch.cols != model.d)
        throw std::invalid_argument("batch_loss: dimension mismatch");
    double loss = 0.0;
    for (std::size_t r = 0; r < batch.rows; ++r) {
        auto fwd = forward(model, batch.row(r));
        loss += reconstruction_error(batch.row(r), fwd.output.data(), model.d);
        double l1 = std::accumulate(fwd.hidden.begin(), fwd.hidden.end(), 0.0);
        loss += model.l1_lambda * l1;  // hidden is non-negative, |h| = h
    }
    return loss / static_cast<double>(batch.rows);
}

Gradients backward(const AutoencoderModel& model, const Matrix& batch) {
    if (batch.rows == 0) throw std::invalid_argument("backward: empty batch");
    if (batch.cols != model.d)
        throw std::invalid_argument("backward: dimension mismatch");

    Gradients g;
    g.w1 = Matrix(model.h, model.d);
    g.b1.assign(model.h, 0.0);
    g.w2 = Matrix(model.d, model.h);
    g.b2.assign(model.d, 0.0);

    const double inv_b = 1.0 / static_cast<double>(batch.rows);
    const double inv_bd = inv_b / static_cast<double>(model.d);
    std::vector<double> pre(model.h);
    std::vector<double> g_out(model.d);
    std::vector<double> g_hidden(model.h);

    for (std::size_t r = 0; r < batch.rows; ++r) {
        const double* x = batch.row(r);
        // Forward, keeping pre-activations for the ReLU mask.
        for (std::size_t j = 0; j < model.h; ++j) {
            const double* wrow = model.w1.row(j);
            double z = model.b1[j];
            for (std::size_t i = 0; i < model.d; ++i) z += wrow[i] * x[i];
            pre[j] = z;
        }
        for (std::size_t i = 0; i < model.d; ++i) {
            const double* wrow = model.w2.row(i);
            double o = model.b2[i];
            for (std::size_t j = 0; j < model.h; ++j)
                o += wrow[j] * (pre[j] > 0.0 ? pre[j] : 0.0);
            // d/d o of (1/Bd) |x - o|
            g_out[i] = inv_bd * sign(o - x[i]);
        }
        // Output layer grads and backprop into hidden activations.
        std::fill(g_hidden.begin(), g_hidden.end(), 0.0);
        for (std::size_t i = 0; i < model.d; ++i) {
            double gi = g_out[i];
            g.b2[i] += gi;
            double* gw = g.w2.row(i);
            const double* wrow = model.w2.row(i);
            for (std::size_t j = 0; j < model.h; ++j) {
                double hj = pre[j] > 0.0 ? pre[j] : 0.0;
                gw[j] += gi * hj;
                g_hidden[j] += gi * wrow[j];
            }
        }
        // L1 activity penalty: d/dh of lambda*|h| with h >= 0 is lambda for
        // h > 0, subgradient 0 at h = 0.
        for (std::size_t j = 0; j < model.h; ++j) {
            if (pre[j] <= 0.0) continue;  // ReLU mask kills the path
            double gz = g_hidden[j] + model.l1_lambda * inv_b;
            g.b1[j] += gz;
            double* gw = g.w1.row(j);
            for (std::size_t i = 0; i < model.d; ++i) gw[i] += gz * x[i];
        }
    }
    return g;
}

namespace {

void adam_update(std::vector<double>& param, const std::vector<double>& grad,
                 std::vector<double>& m, std::vector<double>& v,
                 const TrainConfig& cfg, double bc1, double bc2) {
    for (std::size_t i = 0; i < param.size(); ++i) {
        m[i] = cfg.adam_beta1 * m[i] + (1.0 - cfg.adam_beta1) * grad[i];
        v[i] = cfg.adam_beta2 * v[i] + (1.0 - cfg.adam_beta2) * grad[i] * grad[i];
        double m_hat = m[i] / bc1;
        double v_hat = v[i] / bc2;
        param[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.adam_epsilon);
    }
}

}  // namespace

void adam_step(AutoencoderModel& model, const Gradients& grads, AdamState& state,
               const TrainConfig& config) {
    state.t += 1;
    double bc1 = 1.0 - std::pow(config.adam_beta1, static_cast<double>(state.t));
    double bc2 = 1.0 - std::pow(config.adam_beta2, static_cast<double>(state.t));
    adam_update(model.w1.data, grads.w1.data, state.m.w1.data, state.v.w1.data,
                config, bc1, bc2);
    adam_update(model.b1, grads.b1, state.m.b1, state.v.b1, config, bc1, bc2);
    adam_update(model.w2.data, grads.w2.data, state.m.w2.data, state.v.w2.data,
                config, bc1, bc2);
    adam_update(model.b2, grads.b2, state.m.b2, state.v.b2, config, bc1, bc2);
}

TrainResult train(const Matrix& dataset, std::size_t hidden_width,
                  const TrainConfig& config) {
    if (dataset.rows == 0) throw std::invalid_argument("train: empty dataset");
    if (config.epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
    if (config.batch_size < 1)
        throw std::invalid_argument("train: batch_size must be >= 1");
    if (config.learning_rate <= 0.0 || config.l1_lambda < 0.0)
        throw std::invalid_argument("train: bad rates");

    TrainResult result;
    result.model = make_model(dataset.cols, hidden_width, config.l1_lambda);
    init_weights(result.model, config.seed);
    AdamState state = AdamState::zeros_like(result.model);

    Rng shuffle_rng(config.seed ^ 0xA5A5A5A5A5A5A5A5ULL);
    std::vector<std::size_t> order(dataset.rows);
    std::iota(order.begin(), order.end(), 0);

    Matrix batch;
    batch.cols = dataset.cols;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        // Fisher-Yates with our own RNG keeps the run reproducible.
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[shuffle_rng.index(i)]);

        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < dataset.rows; start += config.batch_size) {
            std::size_t end = std::min(start + config.batch_size, dataset.rows);
            batch.rows = end - start;
            batch.data.clear();
            for (std::size_t r = start; r < end; ++r) {
                const double* row = dataset.row(order[r]);
                batch.data.insert(batch.data.end(), row, row + dataset.cols);
            }
            epoch_loss += batch_loss(result.model, batch) *
                          static_cast<double>(batch.rows);
            Gradients grads = backward(result.model, batch);
            adam_step(result.model, grads, state, config);
        }
        result.loss_history.push_back(epoch_loss / static_cast<double>(dataset.rows));
    }
    return result;
}

GradientCheckReport gradient_check(std::size_t d, std::size_t h,
                                   std::size_t trials, double tolerance,
                                   double l1_lambda, std::uint64_t seed) {
    if (d * h > 1024) throw std::invalid_argument("gradient_check: dims too large");
    constexpr double kStep = 1e-6;
    constexpr double kKinkMargin = 1e-4;

    GradientCheckReport report;
    report.trials = trials;
    Rng rng(seed);

    for (std::size_t trial = 0; trial < trials; ++trial) {
        AutoencoderModel model;
        Matrix batch;
        // Resample until no |x-o|, pre-activation, or hidden unit sits near a
        // kink, where finite differences straddle the non-smooth point.
        bool clean = false;
        for (int attempt = 0; attempt < 200 && !clean; ++attempt) {
            model = make_model(d, h, l1_lambda);
            init_weights(model, rng.next_u64());
            for (double& b : model.b1) b = rng.uniform(-0.1, 0.1);
            for (double& b : model.b2) b = rng.uniform(-0.1, 0.1);
            batch = Matrix(3, d);
            for (double& v : batch.data) v = rng.uniform(-1.0, 1.0);

            clean = true;
            for (std::size_t r = 0; r < batch.rows && clean; ++r) {
                auto fwd = forward(model, batch.row(r));
                for (std::size_t i = 0; i < d; ++i)
                    if (std::fabs(batch.at(r, i) - fwd.output[i]) < kKinkMargin)
                        clean = false;
                for (std::size_t j = 0; j < h; ++j) {
                    const double* wrow = model.w1.row(j);
                    double z = model.b1[j];
                    for (std::size_t i = 0; i < d; ++i) z += wrow[i] * batch.at(r, i);
                    if (std::fabs(z) < kKinkMargin) clean = false;
                    if (l1_lambda > 0.0 && z > 0.0 && z < kKinkMargin) clean = false;
                }
            }
        }

        Gradients analytic = backward(model, batch);

        auto check_param = [&](double* param, double analytic_grad) {
            double saved = *param;
            *param = saved + kStep;
            double plus = batch_loss(model, batch);
            *param = saved - kStep;
            double minus = batch_loss(model, batch);
            *param = saved;
            double numeric = (plus - minus) / (2.0 * kStep);
            // Below 1e-4 the central difference itself only carries ~1e-10
            // of absolute accuracy, so the comparison floor sits there.
            double denom = std::max({std::fabs(numeric), std::fabs(analytic_grad), 1e-4});
            double rel = std::fabs(numeric - analytic_grad) / denom;
            report.max_relative_error = std::max(report.max_relative_error, rel);
        };

        for (std::size_t i = 0; i < model.w1.data.size(); ++i)
            check_param(&model.w1.data[i], analytic.w1.data[i]);
        for (std::size_t i = 0; i < model.b1.size(); ++i)
            check_param(&model.b1[i], analytic.b1[i]);
        for (std::size_t i = 0; i < model.w2.data.size(); ++i)
            check_param(&model.w2.data[i], analytic.w2.data[i]);
        for (std::size_t i = 0; i < model.b2.size(); ++i)
            check_param(&model.b2[i], analytic.b2[i]);
    }

    report.passed = report.max_relative_error < tolerance;
    return report;
}

}  // namespace aedet
