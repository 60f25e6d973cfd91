#include <doctest.h>

#include <cmath>

#include "aedet/dataprep.hpp"
#include "aedet/rng.hpp"
#include "aedet/synthgen.hpp"

using namespace aedet;

namespace {

LabeledTrace tiny_trace(std::size_t rows, std::size_t cols,
                        const std::vector<bool>& mask,
                        const std::vector<GovernorMode>& labels) {
    LabeledTrace t;
    t.node_id = "t";
    t.samples = Matrix(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            t.samples.at(r, c) = static_cast<double>(r * cols + c);
    t.valid_mask = mask;
    t.labels = labels;
    return t;
}

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(rows, cols);
    for (double& v : m.data) v = rng.uniform(-100.0, 100.0);
    return m;
}

}  // namespace

TEST_CASE("filter_valid keeps masked rows in order") {
    auto t = tiny_trace(3, 2, {true, false, true},
                        {GovernorMode::Default, GovernorMode::Default,
                         GovernorMode::Powersave});
    auto f = filter_valid(t);
    REQUIRE(f.samples.rows == 2);
    CHECK(f.samples.at(0, 0) == 0.0);
    CHECK(f.samples.at(1, 0) == 4.0);
    CHECK(f.labels[1] == GovernorMode::Powersave);

    SUBCASE("idempotent") {
        auto ff = filter_valid(f);
        CHECK(ff.samples == f.samples);
        CHECK(ff.labels == f.labels);
    }
}

TEST_CASE("filter_valid on all-valid trace is identity, all-invalid is empty") {
    auto all = tiny_trace(3, 2, {true, true, true},
                          std::vector<GovernorMode>(3, GovernorMode::Default));
    CHECK(filter_valid(all).samples == all.samples);

    auto none = tiny_trace(3, 2, {false, false, false},
                           std::vector<GovernorMode>(3, GovernorMode::Default));
    CHECK(filter_valid(none).samples.rows == 0);
}

TEST_CASE("fit_norm basics") {
    Matrix single(1, 3);
    single.data = {1.0, 2.0, 3.0};
    auto s = fit_norm(single);
    CHECK(s.min == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(s.max == s.min);

    Matrix two(2, 2);
    two.data = {0.0, 10.0, 1.0, 20.0};
    auto s2 = fit_norm(two);
    CHECK(s2.min == std::vector<double>{0.0, 10.0});
    CHECK(s2.max == std::vector<double>{1.0, 20.0});

    CHECK_THROWS_AS(fit_norm(Matrix{}), std::invalid_argument);
    Matrix bad(1, 1);
    bad.data = {std::nan("")};
    CHECK_THROWS_AS(fit_norm(bad), std::invalid_argument);
}

TEST_CASE("fit_norm matches a brute-force column scan") {
    auto m = random_matrix(100, 5, 3);
    auto s = fit_norm(m);
    for (std::size_t c = 0; c < 5; ++c) {
        double lo = m.at(0, c), hi = m.at(0, c);
        for (std::size_t r = 0; r < 100; ++r) {
            lo = std::min(lo, m.at(r, c));
            hi = std::max(hi, m.at(r, c));
        }
        CHECK(s.min[c] == lo);
        CHECK(s.max[c] == hi);
    }
}

TEST_CASE("apply_norm arithmetic and degenerate column") {
    NormStats s;
    s.min = {20.0, 5.0};
    s.max = {40.0, 5.0};
    Matrix m(1, 2);
    m.data = {30.0, 123.0};
    auto out = apply_norm(m, s);
    CHECK(out.at(0, 0) == doctest::Approx(0.5));
    CHECK(out.at(0, 1) == 0.0);  // constant column maps to zero

    Matrix wrong(1, 3);
    CHECK_THROWS_AS(apply_norm(wrong, s), std::invalid_argument);
}

TEST_CASE("normalizing the fitting data lands in [0,1]") {
    auto m = random_matrix(50, 4, 9);
    auto s = fit_norm(m);
    auto out = apply_norm(m, s);
    for (double v : out.data) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("normalization round trip within 1e-12 relative") {
    auto m = random_matrix(30, 6, 21);
    auto s = fit_norm(m);
    auto back = denormalize(apply_norm(m, s), s);
    for (std::size_t i = 0; i < m.data.size(); ++i) {
        double rel = std::fabs(back.data[i] - m.data[i]) /
                     std::max(1.0, std::fabs(m.data[i]));
        CHECK(rel <= 1e-12);
    }
}

TEST_CASE("split is chronological and keeps anomalies out of training") {
    std::vector<GovernorMode> labels(100, GovernorMode::Default);
    for (std::size_t i = 60; i < 80; ++i) labels[i] = GovernorMode::Powersave;
    auto t = tiny_trace(100, 2, std::vector<bool>(100, true), labels);

    auto parts = split(t, 0.5);
    CHECK(parts.train.samples.rows == 50);
    CHECK(parts.eval.samples.rows == 50);
    for (auto l : parts.train.labels) CHECK(l == GovernorMode::Default);
    // eval retains its labels
    std::size_t anomalies = 0;
    for (auto l : parts.eval.labels)
        if (l != GovernorMode::Default) ++anomalies;
    CHECK(anomalies == 20);
}

TEST_CASE("split sizes: 100 valid rows at 0.6 leave 40 for eval") {
    auto t = tiny_trace(100, 2, std::vector<bool>(100, true),
                        std::vector<GovernorMode>(100, GovernorMode::Default));
    auto parts = split(t, 0.6);
    CHECK(parts.train.samples.rows == 60);
    CHECK(parts.eval.samples.rows == 40);
    // partition: all valid rows accounted for, disjoint by construction
    CHECK(parts.train.samples.rows + parts.eval.samples.rows == 100);
}

TEST_CASE("split rejects bad fractions and anomaly-only training windows") {
    auto t = tiny_trace(10, 2, std::vector<bool>(10, true),
                        std::vector<GovernorMode>(10, GovernorMode::Powersave));
    CHECK_THROWS_AS(split(t, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(split(t, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(split(t, 1.0), std::invalid_argument);
}
