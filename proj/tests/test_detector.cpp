#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aedet/detector.hpp"
#include "aedet/rng.hpp"

using namespace aedet;

TEST_CASE("percentile: singleton and 1..100") {
    CHECK(percentile({5.0}, 1.0) == 5.0);
    CHECK(percentile({5.0}, 100.0) == 5.0);

    std::vector<double> v(100);
    std::iota(v.begin(), v.end(), 1.0);
    CHECK(percentile(v, 95.0) == 95.0);
    CHECK(percentile(v, 100.0) == 100.0);
    CHECK(percentile(v, 1.0) == 1.0);
}

TEST_CASE("percentile rejects empty input and out-of-range n") {
    CHECK_THROWS_AS(percentile({}, 50.0), std::invalid_argument);
    CHECK_THROWS_AS(percentile({1.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(percentile({1.0}, 100.5), std::invalid_argument);
}

TEST_CASE("percentile equals brute-force sort-and-index and is permutation invariant") {
    Rng rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t len = 1 + rng.index(37);
        std::vector<double> values(len);
        for (auto& v : values) v = rng.uniform(-10.0, 10.0);
        for (double n : {95.0, 97.0, 99.0}) {
            // brute force oracle
            std::vector<double> sorted = values;
            std::sort(sorted.begin(), sorted.end());
            std::size_t rank = static_cast<std::size_t>(
                std::ceil(n / 100.0 * static_cast<double>(len)));
            double expected = sorted[rank - 1];
            CHECK(percentile(values, n) == expected);

            std::vector<double> shuffled = values;
            for (std::size_t i = shuffled.size(); i > 1; --i)
                std::swap(shuffled[i - 1], shuffled[rng.index(i)]);
            CHECK(percentile(shuffled, n) == expected);
        }
    }
}

TEST_CASE("percentile is monotone in n") {
    Rng rng(9);
    std::vector<double> values(63);
    for (auto& v : values) v = rng.uniform(0.0, 1.0);
    double last = -1.0;
    for (double n = 5.0; n <= 100.0; n += 5.0) {
        double p = percentile(values, n);
        CHECK(p >= last);
        last = p;
    }
}

TEST_CASE("calibrate: constant errors and threshold monotonicity") {
    auto p = calibrate({2.0, 2.0, 2.0}, 99.0);
    CHECK(p.theta == 2.0);
    CHECK(p.train_error_mean == 2.0);

    Rng rng(10);
    std::vector<double> errors(200);
    for (auto& e : errors) e = rng.uniform(0.0, 5.0);
    double t95 = calibrate(errors, 95.0).theta;
    double t97 = calibrate(errors, 97.0).theta;
    double t99 = calibrate(errors, 99.0).theta;
    CHECK(t95 <= t97);
    CHECK(t97 <= t99);
    CHECK(t99 <= *std::max_element(errors.begin(), errors.end()));
    CHECK(t95 >= *std::min_element(errors.begin(), errors.end()));

    CHECK_THROWS_AS(calibrate({}, 95.0), std::invalid_argument);
}

TEST_CASE("classify uses a strict-greater threshold") {
    DetectorProfile p;
    p.theta = 1.5;
    CHECK(classify(1.5, p) == Verdict::Normal);  // boundary is normal
    CHECK(classify(std::nextafter(1.5, 2.0), p) == Verdict::Anomaly);
    CHECK(classify(0.0, p) == Verdict::Normal);
    CHECK_THROWS_AS(classify(std::nan(""), p), std::invalid_argument);
}

TEST_CASE("classify is monotone in the error") {
    DetectorProfile p;
    p.theta = 0.7;
    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        double e1 = rng.uniform(0.0, 2.0);
        double e2 = e1 + rng.uniform(0.0, 1.0);
        if (classify(e1, p) == Verdict::Anomaly)
            CHECK(classify(e2, p) == Verdict::Anomaly);
    }
}

TEST_CASE("f_scores: perfect predictions give F=1 for both classes") {
    std::vector<GovernorMode> labels = {GovernorMode::Default, GovernorMode::Powersave,
                                        GovernorMode::Default, GovernorMode::Performance};
    std::vector<Verdict> preds = {Verdict::Normal, Verdict::Anomaly, Verdict::Normal,
                                  Verdict::Anomaly};
    auto s = f_scores(preds, labels);
    CHECK(s.normal.f_score == 1.0);
    CHECK(s.anomaly.f_score == 1.0);
    CHECK(s.counts.tp_anomaly + s.counts.fp_anomaly + s.counts.tn_anomaly +
              s.counts.fn_anomaly ==
          4);
}

TEST_CASE("f_scores: all-normal predictions on half-anomaly labels give F(A)=0") {
    std::vector<GovernorMode> labels = {GovernorMode::Default, GovernorMode::Powersave};
    std::vector<Verdict> preds = {Verdict::Normal, Verdict::Normal};
    auto s = f_scores(preds, labels);
    CHECK(s.anomaly.f_score == 0.0);
    CHECK(s.anomaly.precision == 0.0);
    CHECK(s.anomaly.recall == 0.0);
}

TEST_CASE("f_scores match a hand confusion-matrix oracle") {
    Rng rng(12);
    std::vector<GovernorMode> labels;
    std::vector<Verdict> preds;
    for (int i = 0; i < 57; ++i) {
        labels.push_back(rng.uniform() < 0.3 ? GovernorMode::Powersave
                                             : GovernorMode::Default);
        preds.push_back(rng.uniform() < 0.35 ? Verdict::Anomaly : Verdict::Normal);
    }
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        bool a = labels[i] != GovernorMode::Default;
        bool pa = preds[i] == Verdict::Anomaly;
        tp += a && pa;
        fp += !a && pa;
        fn += a && !pa;
        tn += !a && !pa;
    }
    auto s = f_scores(preds, labels);
    auto f = [](double p, double r) { return p + r == 0 ? 0.0 : 2 * p * r / (p + r); };
    double pa = tp + fp ? double(tp) / double(tp + fp) : 0.0;
    double ra = tp + fn ? double(tp) / double(tp + fn) : 0.0;
    CHECK(s.anomaly.f_score == doctest::Approx(f(pa, ra)).epsilon(1e-15));
    double pn = tn + fn ? double(tn) / double(tn + fn) : 0.0;
    double rn = tn + fp ? double(tn) / double(tn + fp) : 0.0;
    CHECK(s.normal.f_score == doctest::Approx(f(pn, rn)).epsilon(1e-15));
    CHECK(s.normal.f_score >= 0.0);
    CHECK(s.normal.f_score <= 1.0);

    CHECK_THROWS_AS(f_scores({Verdict::Normal}, labels), std::invalid_argument);
}

TEST_CASE("search_percentile: single candidate, tie-break, one row per candidate") {
    Rng rng(13);
    std::vector<double> calibration(500);
    for (auto& e : calibration) e = rng.uniform(0.0, 1.0);

    // eval errors cleanly separated: anomalies way above any threshold
    std::vector<double> eval_errors;
    std::vector<GovernorMode> eval_labels;
    for (int i = 0; i < 200; ++i) {
        eval_errors.push_back(rng.uniform(0.0, 0.5));
        eval_labels.push_back(GovernorMode::Default);
    }
    for (int i = 0; i < 50; ++i) {
        eval_errors.push_back(rng.uniform(10.0, 20.0));
        eval_labels.push_back(GovernorMode::Powersave);
    }

    auto single = search_percentile(calibration, eval_errors, eval_labels, {97.0});
    CHECK(single.best_percentile == 97.0);
    CHECK(single.candidates.size() == 1);

    // perfect separation at both 95 and 99 -> tie broken toward 99
    auto tied = search_percentile(calibration, eval_errors, eval_labels, {95.0, 99.0});
    CHECK(tied.candidates.size() == 2);
    CHECK(tied.candidates[0].anomaly.f_score == tied.candidates[1].anomaly.f_score);
    CHECK(tied.best_percentile == 99.0);

    CHECK_THROWS_AS(search_percentile(calibration, {}, {}, {95.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(search_percentile(calibration, eval_errors, eval_labels, {}),
                    std::invalid_argument);
}

TEST_CASE("raising theta never increases false positives") {
    Rng rng(14);
    std::vector<double> errors(300);
    for (auto& e : errors) e = rng.uniform(0.0, 3.0);
    std::vector<GovernorMode> labels(300, GovernorMode::Default);

    std::size_t last_fp = errors.size() + 1;
    for (double theta : {0.5, 1.0, 2.0, 3.0}) {
        DetectorProfile p;
        p.theta = theta;
        std::size_t fp = 0;
        for (double e : errors)
            if (classify(e, p) == Verdict::Anomaly) ++fp;
        CHECK(fp <= last_fp);
        last_fp = fp;
    }
}

TEST_CASE("error_ratio_summary on the training data itself is about 1") {
    Rng rng(15);
    std::vector<double> errors(400);
    for (auto& e : errors) e = rng.uniform(0.5, 1.5);
    double mean = std::accumulate(errors.begin(), errors.end(), 0.0) / 400.0;
    std::vector<GovernorMode> labels(400, GovernorMode::Default);

    auto s = error_ratio_summary(errors, labels, mean);
    REQUIRE(s.normal_mean.has_value());
    CHECK(*s.normal_mean == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(s.anomaly_mean.has_value());
    CHECK_FALSE(s.ratio.has_value());

    CHECK_THROWS_AS(error_ratio_summary(errors, labels, 0.0), std::invalid_argument);
}
