#include <benchmark/benchmark.h>

#include "aedet/autoencoder.hpp"
#include "aedet/rng.hpp"

using namespace aedet;

namespace {

AutoencoderModel bench_model(std::size_t d, std::size_t mult) {
    auto m = make_model(d, mult * d, 1e-4);
    init_weights(m, 1);
    return m;
}

void BM_Forward(benchmark::State& state) {
    std::size_t d = static_cast<std::size_t>(state.range(0));
    auto model = bench_model(d, 10);
    Rng rng(2);
    std::vector<double> x(d);
    for (auto& v : x) v = rng.uniform(0.0, 1.0);
    for (auto _ : state) {
        auto fwd = forward(model, x.data());
        benchmark::DoNotOptimize(fwd.output.data());
    }
}
BENCHMARK(BM_Forward)->Arg(32)->Arg(166);

void BM_ReconstructionError(benchmark::State& state) {
    std::size_t d = static_cast<std::size_t>(state.range(0));
    Rng rng(3);
    std::vector<double> x(d), o(d);
    for (auto& v : x) v = rng.uniform(0.0, 1.0);
    for (auto& v : o) v = rng.uniform(0.0, 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(reconstruction_error(x.data(), o.data(), d));
}
BENCHMARK(BM_ReconstructionError)->Arg(166);

void BM_TrainStep(benchmark::State& state) {
    std::size_t d = static_cast<std::size_t>(state.range(0));
    auto model = bench_model(d, 10);
    Rng rng(4);
    Matrix batch(32, d);
    for (auto& v : batch.data) v = rng.uniform(0.0, 1.0);
    auto adam = AdamState::zeros_like(model);
    TrainConfig cfg;
    for (auto _ : state) {
        auto grads = backward(model, batch);
        adam_step(model, grads, adam, cfg);
    }
}
BENCHMARK(BM_TrainStep)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
