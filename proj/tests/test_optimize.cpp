#include "qkd/optimize.hpp"

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "test_support.hpp"

using namespace qkd;

namespace {
constexpr double pi = std::numbers::pi;

OptimizationConfig quick_cfg(int restarts = 8, int iters = 400, std::uint64_t seed = 5) {
    OptimizationConfig cfg;
    cfg.restarts = restarts;
    cfg.max_iterations = iters;
    cfg.seed = seed;
    return cfg;
}
}  // namespace

TEST_CASE("nelder_mead minimizes a shifted quadratic") {
    auto f = [](const std::vector<double>& x) {
        double v = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) v += (x[i] - (1.0 + i)) * (x[i] - (1.0 + i));
        return v;
    };
    OptimizationConfig cfg;
    cfg.max_iterations = 2000;
    cfg.tolerance_f = 1e-15;
    cfg.tolerance_x = 1e-10;
    SimplexResult res = nelder_mead(f, {0.0, 0.0, 0.0}, cfg);
    CHECK(res.value < 1e-10);
    CHECK(res.x[0] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(res.x[2] == doctest::Approx(3.0).epsilon(1e-4));
}

TEST_CASE("optimize_eve: identity gate yields the BB84 ratio 2.0") {
    EveOptimum opt = optimize_eve(GateSpec::identity(2), {0, 1}, quick_cfg());
    CHECK(opt.value == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(opt.report.info == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(opt.report.qber == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("optimize_eve: one-qubit interception of U2* scores zero") {
    EveOptimum opt = optimize_eve(GateSpec::ustar(2), {0}, quick_cfg(6, 200));
    CHECK(opt.value == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("optimizer value is reproducible from the reported angles") {
    const GateSpec gate = GateSpec::make_cartan({pi / 32, 3 * pi / 8, pi / 32});
    EveOptimum opt = optimize_eve(gate, {0, 1}, quick_cfg());
    MetricsReport again = compute_metrics(
        enumerate_attack(gate, EveStrategy::with_angles(opt.intercept_set, opt.angles)));
    CHECK(again.ratio == doctest::Approx(opt.value).epsilon(1e-9));
}

TEST_CASE("best value is non-decreasing in the number of restarts") {
    const GateSpec gate = GateSpec::make_cartan({0.7, 1.9, 0.4});
    double prev = -1.0;
    for (int restarts : {1, 2, 4, 8}) {
        EveOptimum opt = optimize_eve(gate, {0, 1}, quick_cfg(restarts, 250, 77));
        CHECK(opt.value >= prev - 1e-12);
        prev = opt.value;
    }
}

TEST_CASE("optimizer dominates any finite sweep grid") {
    const GateSpec gate = GateSpec::ustar(2);
    EveOptimum opt = optimize_eve(gate, {0, 1}, quick_cfg());
    double grid_best = 0.0;
    for (const auto& p : sweep_eve(gate, 5, EveSweepMode::Both))
        if (p.qber > 0) grid_best = std::max(grid_best, p.info / p.qber);
    CHECK(opt.value >= grid_best - 1e-9);
}

TEST_CASE("C(c) metrics are symmetric under swapping the qubits' angle pairs") {
    std::mt19937_64 rng(59);
    for (int it = 0; it < 20; ++it) {
        const GateSpec gate = GateSpec::make_cartan({qkd::testing::random_angle(rng),
                                                     qkd::testing::random_angle(rng),
                                                     qkd::testing::random_angle(rng)});
        auto a0 = std::pair{qkd::testing::random_angle(rng), qkd::testing::random_angle(rng)};
        auto a1 = std::pair{qkd::testing::random_angle(rng), qkd::testing::random_angle(rng)};
        MetricsReport fwd =
            compute_metrics(enumerate_attack(gate, EveStrategy::with_angles({0, 1}, {a0, a1})));
        MetricsReport rev =
            compute_metrics(enumerate_attack(gate, EveStrategy::with_angles({0, 1}, {a1, a0})));
        CHECK(fwd.info == doctest::Approx(rev.info).epsilon(1e-9));
        CHECK(fwd.qber == doctest::Approx(rev.qber).epsilon(1e-9));
    }
}

TEST_CASE("sweep_cartan ranges for z-basis Eve") {
    auto both = sweep_cartan(5, CartanEveMode::BothZ);
    REQUIRE(both.size() == 125);
    double lo = 1.0, hi = 0.0;
    for (const auto& p : both) {
        lo = std::min(lo, p.info);
        hi = std::max(hi, p.info);
    }
    CHECK(hi == doctest::Approx(0.5).epsilon(1e-9));    // BB84 corner
    CHECK(lo == doctest::Approx(0.125).epsilon(1e-9));  // C(0,pi/2,0)

    auto one = sweep_cartan(5, CartanEveMode::OneZ);
    lo = 1.0;
    hi = 0.0;
    for (const auto& p : one) {
        lo = std::min(lo, p.info);
        hi = std::max(hi, p.info);
    }
    CHECK(hi == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(lo == doctest::Approx(0.0).epsilon(1e-9));

    auto degenerate = sweep_cartan(1, CartanEveMode::BothZ);
    REQUIRE(degenerate.size() == 1);
    CHECK(degenerate[0].info == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(degenerate[0].qber == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("sweep_eve at U2* finds no one-qubit information") {
    for (const auto& p : sweep_eve(GateSpec::ustar(2), 5, EveSweepMode::One))
        CHECK(p.info == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("sweep grid cardinality") {
    CHECK(sweep_cartan(2, CartanEveMode::BothZ).size() == 8);
    CHECK(sweep_eve(GateSpec::identity(2), 3, EveSweepMode::Both).size() == 81);
    CHECK(sweep_eve(GateSpec::identity(2), 4, EveSweepMode::One).size() == 16);
}
