#include "qkd/session.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "doctest.h"
#include "qkd/metrics.hpp"

using namespace qkd;

namespace {
constexpr double pi = std::numbers::pi;

SessionConfig bb84_z_config(int groups, std::uint64_t seed) {
    SessionConfig cfg;
    cfg.gate = GateSpec::identity(1);
    cfg.strategy = EveStrategy::z_basis(1);
    cfg.num_groups = groups;
    cfg.seed = seed;
    return cfg;
}
}  // namespace

TEST_CASE("identical seeds give identical results") {
    SessionConfig cfg = bb84_z_config(2000, 99);
    SessionResult a = run_session(cfg), b = run_session(cfg);
    CHECK(a.sifted_length == b.sifted_length);
    CHECK(a.sifted_errors == b.sifted_errors);
    CHECK(a.joint_counts == b.joint_counts);
    cfg.seed = 100;
    SessionResult c = run_session(cfg);
    CHECK(a.joint_counts != c.joint_counts);
}

TEST_CASE("no eavesdropper, no errors") {
    SessionConfig cfg;
    cfg.gate = GateSpec::ustar(2);
    cfg.num_groups = 10000;
    cfg.seed = 3;
    SessionResult res = run_session(cfg);
    CHECK(res.sifted_errors == 0);
    CHECK(res.estimated_qber == 0.0);
    CHECK(res.attacked_groups == 0);
}

TEST_CASE("BB84 z interception converges to QBER 1/4") {
    SessionResult res = run_session(bb84_z_config(100000, 12345));
    const double sigma = std::sqrt(0.25 * 0.75 / res.sifted_length);
    CHECK(std::abs(res.estimated_qber - 0.25) < 3 * sigma);
    CHECK(std::abs(res.eve_empirical_info_proxy - 0.5) < 0.01);
}

TEST_CASE("sifted fraction is about one half") {
    SessionResult res = run_session(bb84_z_config(100000, 7));
    const double frac = static_cast<double>(res.sifted_length) / 100000;
    CHECK(std::abs(frac - 0.5) < 3 * std::sqrt(0.25 / 100000));
}

TEST_CASE("empirical QBER converges at the 1/sqrt(n) rate") {
    double prev_err = 1.0;
    for (int n : {1000, 100000}) {
        SessionResult res = run_session(bb84_z_config(n, 21));
        const double err = std::abs(res.estimated_qber - 0.25);
        // allow statistical slack of 5 standard errors at each size
        CHECK(err < 5.0 * std::sqrt(0.25 * 0.75 / res.sifted_length));
        prev_err = err;
    }
}

TEST_CASE("trace: depth 1 is strictly serialized") {
    SessionConfig cfg;
    cfg.gate = GateSpec::identity(2);
    cfg.num_groups = 2;
    cfg.interleave_depth = 1;
    auto log = interleaving_trace(cfg);
    std::vector<std::string> kinds;
    std::vector<int> groups;
    for (const auto& ev : log) {
        kinds.push_back(ev.event);
        groups.push_back(ev.group);
    }
    const std::vector<std::string> want_kinds = {"send", "ack", "send", "ack", "group-complete",
                                                "send", "ack", "send", "ack", "group-complete"};
    CHECK(kinds == want_kinds);
    CHECK(groups == std::vector<int>{0, 0, 0, 0, 0, 1, 1, 1, 1, 1});
}

TEST_CASE("trace: depth 2 interleaves the two groups") {
    SessionConfig cfg;
    cfg.gate = GateSpec::identity(2);
    cfg.num_groups = 2;
    cfg.interleave_depth = 2;
    auto log = interleaving_trace(cfg);
    // g1's first send happens before g0's first ack
    long g1_first_send = -1, g0_first_ack = -1;
    for (const auto& ev : log) {
        if (ev.event == "send" && ev.group == 1 && g1_first_send < 0) g1_first_send = ev.t;
        if (ev.event == "ack" && ev.group == 0 && g0_first_ack < 0) g0_first_ack = ev.t;
    }
    CHECK(g1_first_send >= 0);
    CHECK(g1_first_send < g0_first_ack);
}

TEST_CASE("trace: every ack precedes the next send of the same group") {
    for (int depth : {1, 2, 3, 5}) {
        SessionConfig cfg;
        cfg.gate = GateSpec::identity(3);
        cfg.num_groups = 6;
        cfg.interleave_depth = depth;
        auto log = interleaving_trace(cfg);
        std::map<int, int> outstanding;  // group -> sends not yet acked
        for (const auto& ev : log) {
            if (ev.event == "send") {
                CHECK(outstanding[ev.group] == 0);
                outstanding[ev.group]++;
            } else if (ev.event == "ack") {
                outstanding[ev.group]--;
            }
        }
    }
}

TEST_CASE("trace: depth >= 2 keeps the channel busy") {
    SessionConfig cfg;
    cfg.gate = GateSpec::identity(2);
    cfg.num_groups = 8;
    cfg.interleave_depth = 3;
    auto log = interleaving_trace(cfg);
    std::vector<long> send_times;
    for (const auto& ev : log)
        if (ev.event == "send") send_times.push_back(ev.t);
    for (std::size_t i = 1; i + 1 < send_times.size(); ++i)
        CHECK(send_times[i] - send_times[i - 1] == 1);
}

TEST_CASE("session agrees with the exact enumeration") {
    SessionConfig cfg;
    cfg.gate = GateSpec::ustar(2);
    cfg.strategy = EveStrategy::z_basis(2);
    cfg.num_groups = 20000;
    cfg.seed = 2024;
    AttackOutcome outcome = enumerate_attack(cfg.gate, cfg.strategy);
    ComparisonReport rep = compare_with_analytic(cfg, outcome);
    CHECK(rep.exact_qber == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(rep.max_abs_z < 4.5);
    CHECK(!rep.cells.empty());
}

TEST_CASE("xi thins the attacked fraction of groups") {
    SessionConfig cfg = bb84_z_config(50000, 77);
    cfg.strategy.xi = 0.8;
    SessionResult res = run_session(cfg);
    const double frac = static_cast<double>(res.attacked_groups) / cfg.num_groups;
    CHECK(std::abs(frac - 0.8) < 0.02);
    const double sigma = std::sqrt(0.2 * 0.8 / res.sifted_length);
    CHECK(std::abs(res.estimated_qber - 0.2) < 4 * sigma);
}

TEST_CASE("result and trace serialize to JSON") {
    SessionConfig cfg = bb84_z_config(100, 5);
    SessionResult res = run_session(cfg);
    CHECK(res.to_json().find("estimated_qber") != std::string::npos);
    TraceEvent ev{3, "send", 1, 0};
    CHECK(ev.to_json() == R"({"event":"send","group":1,"qubit":0,"t":3})");
}
