// Command-line front end: analyze, optimize, sweep, keyrate, ustar-check and
// simulate subcommands emitting CSV/JSON datasets for external plotting.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qkd/keyrate.hpp"
#include "qkd/optimize.hpp"
#include "qkd/session.hpp"

using namespace qkd;

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty() || !out.empty()) out.push_back(cur);
    return out;
}

// --eve accepts basis shorthand per intercepted qubit: z, x or y.
std::pair<double, double> basis_token_angles(const std::string& tok) {
    const double half_pi = std::numbers::pi / 2;
    if (tok == "z") return {0.0, 0.0};
    if (tok == "x") return {half_pi, 0.0};
    if (tok == "y") return {half_pi, half_pi};
    throw CLI::ValidationError("--eve", "basis token must be z, x or y: " + tok);
}

EveStrategy build_strategy(int n, const std::string& eve_tokens, const std::string& eve_angles,
                           const std::string& intercept, double xi) {
    std::vector<std::pair<double, double>> angles;
    if (!eve_tokens.empty() && !eve_angles.empty())
        throw CLI::ValidationError("--eve", "--eve and --eve-angles are mutually exclusive");
    if (!eve_tokens.empty()) {
        for (const auto& tok : split_list(eve_tokens)) angles.push_back(basis_token_angles(tok));
    } else if (!eve_angles.empty()) {
        auto parts = split_list(eve_angles);
        if (parts.size() % 2 != 0)
            throw CLI::ValidationError("--eve-angles", "expected beta,gamma pairs");
        for (std::size_t k = 0; k < parts.size(); k += 2)
            angles.emplace_back(parse_angle(parts[k]), parse_angle(parts[k + 1]));
    }
    std::vector<int> set;
    if (!intercept.empty()) {
        for (const auto& tok : split_list(intercept)) set.push_back(std::stoi(tok));
    } else if (angles.size() == 1) {
        // a single basis/angle pair broadcasts to every qubit
        for (int q = 0; q < n; ++q) set.push_back(q);
    } else {
        for (std::size_t k = 0; k < angles.size(); ++k) set.push_back(static_cast<int>(k));
    }
    if (angles.size() == 1 && set.size() > 1) angles.assign(set.size(), angles.front());
    if (set.size() != angles.size())
        throw CLI::ValidationError("--intercept", "intercept set and angle count disagree");
    EveStrategy s = EveStrategy::with_angles(std::move(set), std::move(angles), xi);
    s.validate(n);
    return s;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        if (!content.empty() && content.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
    if (!content.empty() && content.back() != '\n') out << '\n';
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact simulator and optimizer for entanglement-enhanced BB84"};
    app.require_subcommand(1);
    app.set_config("--config");

    std::string gate_spec = "identity:2", eve_tokens, eve_angles, intercept, output;
    double xi = 1.0;
    std::uint64_t seed = 20080417;
    bool as_json = false;

    // ---- analyze ----
    auto* analyze = app.add_subcommand("analyze", "exact metrics for one (gate, strategy) pair");
    analyze->add_option("--gate", gate_spec, "gate spec, e.g. identity:2, cartan:c1,c2,c3, ustar:3:even:++");
    analyze->add_option("--eve", eve_tokens, "per-qubit basis shorthand, e.g. z,z or z,y");
    analyze->add_option("--eve-angles", eve_angles, "beta,gamma pairs in radians (pi fractions ok)");
    analyze->add_option("--intercept", intercept, "intercepted qubit indices, e.g. 0,1");
    analyze->add_option("--xi", xi, "fraction of groups attacked")->check(CLI::Range(0.0, 1.0));
    analyze->add_flag("--json", as_json, "emit JSON instead of CSV");
    analyze->add_option("--output", output, "output file (default stdout)");
    analyze->add_flag("--dump-table", "include the full (alpha,a,e) table in JSON output");
    analyze->callback([&] {
        const GateSpec gate = GateSpec::parse(gate_spec);
        const EveStrategy strategy =
            build_strategy(gate.num_qubits(), eve_tokens, eve_angles, intercept, xi);
        const AttackOutcome outcome = enumerate_attack(gate, strategy);
        const MetricsReport r = compute_metrics(outcome, xi);
        if (as_json) {
            nlohmann::json j;
            j["gate"] = gate.to_string();
            j["strategy"] = strategy.descriptor();
            j["xi"] = r.xi;
            j["info"] = r.info;
            j["qber"] = r.qber;
            if (r.ratio_defined)
                j["ratio"] = r.ratio;
            else
                j["ratio"] = "undefined";
            j["info_scaled"] = r.info_scaled;
            j["qber_scaled"] = r.qber_scaled;
            if (analyze->count("--dump-table"))
                j["table"] = nlohmann::json::parse(outcome.to_json());
            write_output(output, j.dump(2));
        } else {
            write_output(output, MetricsReport::csv_header() + "\n" +
                                     r.csv_row(gate.to_string(), strategy.descriptor()));
        }
    });

    // ---- optimize ----
    auto* optimize = app.add_subcommand("optimize", "optimize Eve's attack or the gate");
    int restarts = 32, iterations = 2000, inner_restarts = 8, inner_iterations = 300;
    std::string objective_name = "ratio";
    auto* opt_eve = optimize->add_subcommand("eve", "Eve's best attack for a fixed gate");
    opt_eve->add_option("--gate", gate_spec, "gate spec");
    opt_eve->add_option("--intercept", intercept, "intercepted qubit indices (default: all)");
    opt_eve->add_option("--restarts", restarts, "multi-start count");
    opt_eve->add_option("--iterations", iterations, "Nelder-Mead iteration cap");
    opt_eve->add_option("--seed", seed, "RNG seed");
    opt_eve->add_option("--objective", objective_name, "ratio | info")
        ->check(CLI::IsMember({"ratio", "info"}));
    opt_eve->add_option("--output", output, "output file (default stdout)");
    opt_eve->callback([&] {
        const GateSpec gate = GateSpec::parse(gate_spec);
        std::vector<int> set;
        if (intercept.empty()) {
            for (int q = 0; q < gate.num_qubits(); ++q) set.push_back(q);
        } else {
            for (const auto& tok : split_list(intercept)) set.push_back(std::stoi(tok));
        }
        OptimizationConfig cfg;
        cfg.restarts = restarts;
        cfg.max_iterations = iterations;
        cfg.seed = seed;
        const EveObjective obj =
            objective_name == "info" ? EveObjective::Info : EveObjective::Ratio;
        const EveOptimum opt = optimize_eve(gate, set, cfg, obj);
        nlohmann::json j;
        j["gate"] = gate.to_string();
        j["intercept_set"] = opt.intercept_set;
        j["objective"] = objective_name;
        j["seed"] = seed;
        j["value"] = opt.value;
        j["info"] = opt.report.info;
        j["qber"] = opt.report.qber;
        auto& ja = j["angles"] = nlohmann::json::array();
        for (const auto& [b, g] : opt.angles) ja.push_back({b, g});
        write_output(output, j.dump(2));
    });
    auto* opt_gate = optimize->add_subcommand("gate", "min-max Cartan gate design (N=2)");
    opt_gate->add_option("--restarts", restarts, "outer multi-start count");
    opt_gate->add_option("--iterations", iterations, "outer iteration cap");
    opt_gate->add_option("--inner-restarts", inner_restarts, "inner multi-start count");
    opt_gate->add_option("--inner-iterations", inner_iterations, "inner iteration cap");
    opt_gate->add_option("--seed", seed, "RNG seed");
    opt_gate->add_option("--output", output, "output file (default stdout)");
    opt_gate->callback([&] {
        OptimizationConfig outer, inner;
        outer.restarts = restarts;
        outer.max_iterations = iterations;
        outer.seed = seed;
        outer.tolerance_f = 1e-7;
        inner.restarts = inner_restarts;
        inner.max_iterations = inner_iterations;
        inner.seed = seed ^ 0x5bf0a8b1u;
        inner.tolerance_f = 1e-8;
        const GateOptimum opt = optimize_gate(outer, inner);
        nlohmann::json j;
        j["c"] = {opt.c.c1, opt.c.c2, opt.c.c3};
        j["value"] = opt.value;
        j["seed"] = seed;
        j["inner_info"] = opt.inner.report.info;
        j["inner_qber"] = opt.inner.report.qber;
        j["inner_intercept_set"] = opt.inner.intercept_set;
        write_output(output, j.dump(2));
    });

    // ---- sweep ----
    auto* sweep = app.add_subcommand("sweep", "grid sweeps over gate or attack parameters");
    int grid = 9;
    std::string eve_mode = "both_z", mode = "both";
    auto* sweep_cartan_cmd = sweep->add_subcommand("cartan", "sweep c in [0,2pi]^3, z-basis Eve");
    sweep_cartan_cmd->add_option("--grid", grid, "points per axis")->check(CLI::PositiveNumber);
    sweep_cartan_cmd->add_option("--eve-mode", eve_mode, "both_z | one_z")
        ->check(CLI::IsMember({"both_z", "one_z"}));
    sweep_cartan_cmd->add_option("--output", output, "output file (default stdout)");
    sweep_cartan_cmd->callback([&] {
        auto points = sweep_cartan(
            grid, eve_mode == "both_z" ? CartanEveMode::BothZ : CartanEveMode::OneZ);
        std::ostringstream os;
        os << "c1,c2,c3,info,qber\n";
        for (const auto& p : points)
            os << fmt(p.c.c1) << ',' << fmt(p.c.c2) << ',' << fmt(p.c.c3) << ',' << fmt(p.info)
               << ',' << fmt(p.qber) << '\n';
        write_output(output, os.str());
    });
    auto* sweep_eve_cmd = sweep->add_subcommand("eve", "sweep Eve's angles at a fixed gate");
    sweep_eve_cmd->add_option("--gate", gate_spec, "gate spec");
    sweep_eve_cmd->add_option("--grid", grid, "points per axis")->check(CLI::PositiveNumber);
    sweep_eve_cmd->add_option("--mode", mode, "both | one")->check(CLI::IsMember({"both", "one"}));
    sweep_eve_cmd->add_option("--output", output, "output file (default stdout)");
    sweep_eve_cmd->callback([&] {
        const GateSpec gate = GateSpec::parse(gate_spec);
        auto points =
            sweep_eve(gate, grid, mode == "both" ? EveSweepMode::Both : EveSweepMode::One);
        std::ostringstream os;
        os << (mode == "both" ? "b1,g1,b2,g2,info,qber\n" : "b1,g1,info,qber\n");
        for (const auto& p : points) {
            for (double a : p.angles) os << fmt(a) << ',';
            os << fmt(p.info) << ',' << fmt(p.qber) << '\n';
        }
        write_output(output, os.str());
    });

    // ---- keyrate ----
    auto* keyrate = app.add_subcommand("keyrate", "relative key rate dataset over delta");
    double q = 0.06, slope = 0.5965, delta_min = 0.0, delta_max = 2.0;
    int delta_steps = 201;
    keyrate->add_option("--q", q, "QBER")->check(CLI::Range(0.0, 0.5));
    keyrate->add_option("--s", slope, "slope of Eve's information curve");
    keyrate->add_option("--delta-min", delta_min, "lowest delta");
    keyrate->add_option("--delta-max", delta_max, "highest delta");
    keyrate->add_option("--delta-steps", delta_steps, "number of samples");
    keyrate->add_option("--output", output, "output file (default stdout)");
    keyrate->callback([&] {
        auto rows = rate_figure_dataset(q, slope, delta_min, delta_max, delta_steps);
        std::ostringstream os;
        os << "delta,r_enhanced,r_ideal,r_bb84\n";
        for (const auto& r : rows)
            os << fmt(r.delta) << ',' << fmt(r.r_enhanced) << ',' << fmt(r.r_ideal_s0) << ','
               << fmt(r.r_bb84) << '\n';
        write_output(output, os.str());
    });

    // ---- ustar-check ----
    auto* ustar_check = app.add_subcommand("ustar-check", "verify the U_N* randomness and bound");
    int check_n = 3;
    int check_draws = 50;
    ustar_check->add_option("--n", check_n, "qubit count")->check(CLI::Range(2, 5));
    ustar_check->add_option("--draws", check_draws, "random angle draws per variant");
    ustar_check->add_option("--seed", seed, "RNG seed");
    ustar_check->callback([&] {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> uni(0.0, 2.0 * std::numbers::pi);
        std::uniform_int_distribution<int> coin(0, 1);
        const int n = check_n;

        // Property R: the first |S|-1 of Eve's outcomes are marginally uniform.
        double worst_uniform = 0.0;
        for (Parity parity : {Parity::Even, Parity::Odd})
            for (int sign : {+1, -1}) {
                const Operator u = u_star(n, parity, std::vector<int>(n - 1, sign));
                for (int draw = 0; draw < check_draws; ++draw) {
                    std::vector<int> a(n);
                    std::vector<Basis> alpha(n);
                    for (int qb = 0; qb < n; ++qb) {
                        a[qb] = coin(rng);
                        alpha[qb] = coin(rng) ? Basis::X : Basis::Z;
                    }
                    EveStrategy s;
                    for (int qb = 0; qb < n; ++qb) {
                        s.intercepted.push_back(qb);
                        s.angles.emplace_back(uni(rng), uni(rng));
                    }
                    auto branches = transmit_round(u, a, alpha, s);
                    for (int k = 0; k + 1 < n; ++k) {
                        double p0 = 0.0;
                        for (const auto& br : branches)
                            if (br.eve_bits[k] == 0) p0 += br.probability;
                        worst_uniform = std::max(worst_uniform, std::abs(p0 - 0.5));
                    }
                }
            }
        const bool r_ok = worst_uniform < 1e-10;
        std::printf("[%s] property-R: worst |p0 - 1/2| = %.3e\n", r_ok ? "PASS" : "FAIL",
                    worst_uniform);

        // One-short interception leaks nothing.
        double worst_one_short = 0.0;
        const GateSpec spec = GateSpec::ustar(n);
        for (int draw = 0; draw < check_draws; ++draw) {
            const int skip = draw % n;
            EveStrategy s;
            for (int qb = 0; qb < n; ++qb) {
                if (qb == skip) continue;
                s.intercepted.push_back(qb);
                s.angles.emplace_back(uni(rng), uni(rng));
            }
            worst_one_short =
                std::max(worst_one_short, mutual_information(enumerate_attack(spec, s)));
        }
        const bool short_ok = worst_one_short < 1e-9;
        std::printf("[%s] one-short interception: max info = %.3e\n", short_ok ? "PASS" : "FAIL",
                    worst_one_short);

        // Full interception obeys (and attains) the 1/(2N) bound.
        std::vector<int> full;
        for (int qb = 0; qb < n; ++qb) full.push_back(qb);
        OptimizationConfig cfg;
        cfg.restarts = 16;
        cfg.max_iterations = 600;
        cfg.seed = seed;
        const EveOptimum opt = optimize_eve(spec, full, cfg, EveObjective::Info);
        const double bound = 1.0 / (2.0 * n);
        const bool bound_ok = opt.value <= bound + 1e-6 && opt.value >= bound - 1e-6;
        std::printf("[%s] full-attack optimum: info = %.9f (bound 1/(2N) = %.9f)\n",
                    bound_ok ? "PASS" : "FAIL", opt.value, bound);
        if (!(r_ok && short_ok && bound_ok)) throw std::runtime_error("ustar-check failed");
    });

    // ---- simulate ----
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo session simulation");
    int groups = 1000, depth = 1;
    bool no_eve = false, trace = false;
    std::string trace_path;
    simulate->add_option("--gate", gate_spec, "gate spec");
    simulate->add_option("--eve", eve_tokens, "per-qubit basis shorthand");
    simulate->add_option("--eve-angles", eve_angles, "beta,gamma pairs");
    simulate->add_option("--intercept", intercept, "intercepted qubit indices");
    simulate->add_option("--xi", xi, "fraction of groups attacked")->check(CLI::Range(0.0, 1.0));
    simulate->add_option("--groups", groups, "number of N-qubit groups")->check(CLI::PositiveNumber);
    simulate->add_option("--depth", depth, "interleaving depth (groups in flight)");
    simulate->add_option("--seed", seed, "RNG seed");
    simulate->add_flag("--no-eve", no_eve, "disable eavesdropping");
    simulate->add_flag("--trace", trace, "print the interleaving event log (JSON lines)");
    simulate->add_option("--trace-file", trace_path, "write the event log to a file instead");
    simulate->add_option("--output", output, "output file (default stdout)");
    simulate->callback([&] {
        SessionConfig cfg;
        cfg.gate = GateSpec::parse(gate_spec);
        if (!no_eve)
            cfg.strategy =
                build_strategy(cfg.gate.num_qubits(), eve_tokens, eve_angles, intercept, xi);
        cfg.num_groups = groups;
        cfg.interleave_depth = depth;
        cfg.seed = seed;
        if (trace || !trace_path.empty()) {
            auto log = interleaving_trace(cfg);
            if (trace_path.empty()) {
                for (const auto& ev : log) std::cout << ev.to_json() << '\n';
            } else {
                std::ofstream tf(trace_path);
                if (!tf) throw std::runtime_error("cannot open trace file: " + trace_path);
                for (const auto& ev : log) tf << ev.to_json() << '\n';
            }
        }
        const SessionResult res = run_session(cfg);
        nlohmann::json j = nlohmann::json::parse(res.to_json());
        j["seed"] = seed;
        j["gate"] = cfg.gate.to_string();
        write_output(output, j.dump(2));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const CLI::Error& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
