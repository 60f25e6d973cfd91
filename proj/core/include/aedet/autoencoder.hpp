#pragma once

#include <cstdint>
#include <vector>

#include "aedet/dataprep.hpp"
#include "aedet/matrix.hpp"

namespace aedet {

// Three-layer dense autoencoder: ReLU hidden layer of width h = mult * d,
// linear output layer. Linear output lets reconstructions exceed [0,1],
// which out-of-range anomaly inputs require.
struct AutoencoderModel {
    std::size_t d = 0;
    std::size_t h = 0;
    double l1_lambda = 0.0;
    Matrix w1;               // h x d
    std::vector<double> b1;  // h
    Matrix w2;               // d x h
    std::vector<double> b2;  // d
    NormStats norm;

    bool operator==(const AutoencoderModel&) const = default;
};

struct TrainConfig {
    std::size_t epochs = 100;
    std::size_t batch_size = 32;
    double learning_rate = 1e-3;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    double l1_lambda = 1e-4;
    std::uint64_t seed = 0;
};

struct Gradients {
    Matrix w1;
    std::vector<double> b1;
    Matrix w2;
    std::vector<double> b2;
};

struct AdamState {
    Gradients m;  // first moments
    Gradients v;  // second moments
    std::uint64_t t = 0;

    static AdamState zeros_like(const AutoencoderModel& model);
};

AutoencoderModel make_model(std::size_t d, std::size_t h, double l1_lambda);

// Glorot-uniform weights, zero biases, deterministic in seed.
void init_weights(AutoencoderModel& model, std::uint64_t seed);

struct ForwardResult {
    std::vector<double> hidden;  // post-ReLU
    std::vector<double> output;
};

ForwardResult forward(const AutoencoderModel& model, const double* x);
ForwardResult forward(const AutoencoderModel& model, const std::vector<double>& x);

// Mean absolute error over features.
double reconstruction_error(const double* x, const double* output, std::size_t d);
double reconstruction_error(const std::vector<double>& x,
                            const std::vector<double>& output);

// Mean reconstruction error over the batch plus l1_lambda times mean L1 norm
// of the hidden activations.
double batch_loss(const AutoencoderModel& model, const Matrix& batch);

// Analytic gradients of batch_loss; subgradient 0 at ReLU and |.| kinks.
Gradients backward(const AutoencoderModel& model, const Matrix& batch);

void adam_step(AutoencoderModel& model, const Gradients& grads, AdamState& state,
               const TrainConfig& config);

struct TrainResult {
    AutoencoderModel model;
    std::vector<double> loss_history;  // per-epoch mean training loss
};

// Trains on an already-normalized dataset. Deterministic in config.seed.
TrainResult train(const Matrix& dataset, std::size_t hidden_width,
                  const TrainConfig& config);

struct GradientCheckReport {
    double max_relative_error = 0.0;
    std::size_t trials = 0;
    bool passed = false;
};

// Compares backward against central finite differences on random small
// models and batches, resampling near loss kinks.
GradientCheckReport gradient_check(std::size_t d, std::size_t h,
                                   std::size_t trials, double tolerance,
                                   double l1_lambda = 0.0,
                                   std::uint64_t seed = 12345);

}  // namespace aedet
