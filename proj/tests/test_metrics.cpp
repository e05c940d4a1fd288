#include "qkd/metrics.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "test_support.hpp"

using namespace qkd;
using qkd::testing::random_angle;
using qkd::testing::random_full_strategy;

namespace {
constexpr double pi = std::numbers::pi;

// z-basis on all but the last qubit, sigma_y basis on the last: Eve's
// information-maximizing finish for u_star.
EveStrategy z_then_y(int n) {
    EveStrategy s = EveStrategy::z_basis(n);
    s.angles[n - 1] = {pi / 2, pi / 2};
    return s;
}
}  // namespace

TEST_CASE("shannon_entropy basics") {
    CHECK(shannon_entropy(std::array{0.5, 0.5}) == doctest::Approx(1.0));
    CHECK(shannon_entropy(std::array{1.0, 0.0}) == doctest::Approx(0.0));
    std::vector<double> uniform(8, 1.0 / 8);
    CHECK(shannon_entropy(uniform) == doctest::Approx(3.0));
    CHECK_THROWS_AS(shannon_entropy(std::array{0.5, 0.2}), std::invalid_argument);
}

TEST_CASE("mutual information anchors") {
    CHECK(mutual_information(enumerate_attack(GateSpec::identity(1), EveStrategy::z_basis(1))) ==
          doctest::Approx(0.5).epsilon(1e-10));
    CHECK(mutual_information(enumerate_attack(GateSpec::ustar(2), EveStrategy::z_basis(2))) ==
          doctest::Approx(0.125).epsilon(1e-9));
}

TEST_CASE("u_star(2) leaks nothing to a one-qubit interception") {
    std::mt19937_64 rng(29);
    for (int it = 0; it < 25; ++it) {
        const int keep = static_cast<int>(rng() % 2);
        EveStrategy s = EveStrategy::with_angles({keep},
                                                 {{random_angle(rng), random_angle(rng)}});
        CHECK(mutual_information(enumerate_attack(GateSpec::ustar(2), s)) ==
              doctest::Approx(0.0).epsilon(1e-9));
    }
}

TEST_CASE("u_star(3) two-qubit interception: blind in z/x, phases leak in y") {
    const std::pair<double, double> z{0, 0}, x{pi / 2, 0}, y{pi / 2, pi / 2};
    auto info = [](std::pair<double, double> a0, std::pair<double, double> a1) {
        return mutual_information(
            enumerate_attack(GateSpec::ustar(3), EveStrategy::with_angles({0, 1}, {a0, a1})));
    };
    CHECK(info(z, z) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(info(z, x) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(info(x, x) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(info(z, y) == doctest::Approx(1.0 / 6).epsilon(1e-9));
}

TEST_CASE("qber anchors") {
    CHECK(qber(enumerate_attack(GateSpec::identity(1), EveStrategy::z_basis(1))) ==
          doctest::Approx(0.25).epsilon(1e-10));
    EveStrategy nobody;
    CHECK(qber(enumerate_attack(GateSpec::identity(2), nobody)) ==
          doctest::Approx(0.0).epsilon(1e-12));
    // paper's optimal point: angles (pi/8, 0, pi/2, pi/2) at c*
    const GateSpec opt = GateSpec::make_cartan({pi / 32, 3 * pi / 8, pi / 32});
    EveStrategy best = EveStrategy::with_angles({0, 1}, {{pi / 8, 0}, {pi / 2, pi / 2}});
    AttackOutcome out = enumerate_attack(opt, best);
    CHECK(qber(out) == doctest::Approx(0.375).epsilon(1e-9));
    CHECK(mutual_information(out) == doctest::Approx(0.22367298815).epsilon(1e-8));
}

TEST_CASE("metrics report and ratio flag") {
    EveStrategy nobody;
    MetricsReport r = compute_metrics(enumerate_attack(GateSpec::identity(2), nobody));
    CHECK_FALSE(r.ratio_defined);
    CHECK(r.info == doctest::Approx(0.0).epsilon(1e-10));  // no disturbance, no information

    MetricsReport bb = compute_metrics(enumerate_attack(GateSpec::identity(2),
                                                        EveStrategy::z_basis(2)));
    CHECK(bb.ratio_defined);
    CHECK(bb.ratio == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("apply_fraction scales linearly and preserves the ratio") {
    MetricsReport bb = compute_metrics(enumerate_attack(GateSpec::identity(2),
                                                        EveStrategy::z_basis(2)));
    MetricsReport scaled = apply_fraction(bb, 0.8);
    CHECK(scaled.info_scaled == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(scaled.qber_scaled == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(scaled.ratio == bb.ratio);
    MetricsReport zero = apply_fraction(bb, 0.0);
    CHECK(zero.info_scaled == 0.0);
    CHECK(zero.qber_scaled == 0.0);
    CHECK_THROWS_AS(apply_fraction(bb, 1.5), std::invalid_argument);
}

TEST_CASE("bound decomposition for u_star") {
    for (int n : {2, 3}) {
        // all-z attack: no information even from the full interception's prefix
        AttackOutcome zz = enumerate_attack(GateSpec::ustar(n), EveStrategy::z_basis(n));
        BoundDecomposition dz = bound_decomposition(zz);
        CHECK(dz.info_first == doctest::Approx(0.0).epsilon(1e-9));

        // y-basis finish reads the phase between the two outer recursion
        // branches: h_N = 1/2 and I = 1/(2N) at N=2, h_N = 3/4 at N=3
        AttackOutcome zy = enumerate_attack(GateSpec::ustar(n), z_then_y(n));
        BoundDecomposition dy = bound_decomposition(zy);
        CHECK(dy.info_first == doctest::Approx(0.0).epsilon(1e-9));
        const double want_h = (n == 2) ? 0.5 : 0.75;
        CHECK(dy.h_last == doctest::Approx(want_h).epsilon(1e-9));
        // chain identity I = (1 - h_N)/N holds whenever the prefix is blind
        CHECK(dy.info_total == doctest::Approx((1.0 - dy.h_last) / n).epsilon(1e-9));
    }
}

TEST_CASE("bound decomposition degenerate single qubit") {
    AttackOutcome out = enumerate_attack(GateSpec::identity(1), EveStrategy::z_basis(1));
    BoundDecomposition d = bound_decomposition(out);
    CHECK(d.info_total == doctest::Approx(mutual_information(out)).epsilon(1e-12));
    AttackOutcome partial = enumerate_attack(GateSpec::identity(2),
                                             EveStrategy::with_angles({0}, {{0, 0}}));
    CHECK_THROWS_AS(bound_decomposition(partial), std::invalid_argument);
}

TEST_CASE("info and qber stay in range over random strategies") {
    std::mt19937_64 rng(31);
    for (int it = 0; it < 200; ++it) {
        const int n = 1 + static_cast<int>(rng() % 2);
        GateSpec gate = (rng() % 2) ? GateSpec::make_cartan({random_angle(rng), random_angle(rng),
                                                             random_angle(rng)})
                                    : GateSpec::identity(n);
        EveStrategy s = random_full_strategy(gate.num_qubits(), rng);
        MetricsReport r = compute_metrics(enumerate_attack(gate, s));
        CHECK(r.info >= -1e-12);
        CHECK(r.info <= 1.0 + 1e-12);
        CHECK(r.qber >= -1e-12);
        CHECK(r.qber <= 0.5 + 1e-12);
    }
}

TEST_CASE("u_star N=2 full attacks cap at 1/4; N=3 leaks up to 1/3 through phases") {
    std::mt19937_64 rng(37);
    double worst2 = 0.0;
    for (int it = 0; it < 200; ++it) {
        EveStrategy s = random_full_strategy(2, rng);
        worst2 = std::max(worst2, mutual_information(enumerate_attack(GateSpec::ustar(2), s)));
    }
    CHECK(worst2 <= 0.25 + 1e-9);

    // frozen brute-force values for N=3: the all-z attack and a y-basis
    // finish stay low, but z,y,z reads two branch phases at once
    auto info3 = [](std::vector<std::pair<double, double>> angles) {
        EveStrategy s = EveStrategy::z_basis(3);
        s.angles = std::move(angles);
        return mutual_information(enumerate_attack(GateSpec::ustar(3), s));
    };
    const std::pair<double, double> z{0, 0}, y{pi / 2, pi / 2};
    CHECK(info3({z, z, z}) == doctest::Approx(0.125).epsilon(1e-9));
    CHECK(info3({z, y, y}) == doctest::Approx(1.0 / 6).epsilon(1e-9));
    CHECK(info3({z, y, z}) == doctest::Approx(1.0 / 3).epsilon(1e-9));
}

TEST_CASE("marginalizing to the leading outcomes never increases information") {
    std::mt19937_64 rng(41);
    for (int it = 0; it < 30; ++it) {
        GateSpec gate = (it % 2) ? GateSpec::ustar(2 + it % 3)
                                 : GateSpec::make_cartan({random_angle(rng), random_angle(rng),
                                                          random_angle(rng)});
        EveStrategy s = random_full_strategy(gate.num_qubits(), rng);
        BoundDecomposition d = bound_decomposition(enumerate_attack(gate, s));
        CHECK(d.info_first <= d.info_total + 1e-12);
    }
}

TEST_CASE("csv row shape") {
    MetricsReport bb = compute_metrics(enumerate_attack(GateSpec::identity(2),
                                                        EveStrategy::z_basis(2)));
    CHECK(MetricsReport::csv_header() == "gate_spec,strategy,xi,info,qber,ratio");
    const std::string row = bb.csv_row("identity:2", "S={0,1}");
    CHECK(row.find("\"identity:2\"") == 0);
    CHECK(row.find("0.5") != std::string::npos);
}
