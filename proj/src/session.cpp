#include "qkd/session.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "json.hpp"
#include "qkd/metrics.hpp"

namespace qkd {

namespace {

double plogp(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

int sample_outcome(double p0, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    return uni(rng) < p0 ? 0 : 1;
}

}  // namespace

SessionResult run_session(const SessionConfig& config) {
    const int n = config.gate.num_qubits();
    config.strategy.validate(n);
    if (config.num_groups < 1) throw std::invalid_argument("run_session: num_groups must be >= 1");
    const Operator gate = config.gate.resolve();
    const Operator gate_dag = dagger(gate);
    const int ne = static_cast<int>(config.strategy.intercepted.size());

    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::uniform_int_distribution<int> coin(0, 1);

    SessionResult res;
    res.per_qubit_flip_counts.assign(n, 0);
    res.per_qubit_sifted_counts.assign(n, 0);
    res.joint_counts.assign((std::size_t{1} << (2 * n)) << ne, 0);

    std::vector<int> a(n), bob_basis(n), b(n);
    std::vector<Basis> alpha(n);
    const Operator h = hadamard();

    for (int g = 0; g < config.num_groups; ++g) {
        std::uint32_t ai = 0, bi = 0;
        for (int q = 0; q < n; ++q) {
            a[q] = coin(rng);
            alpha[q] = coin(rng) ? Basis::X : Basis::Z;
            bob_basis[q] = coin(rng);
            ai |= static_cast<std::uint32_t>(a[q]) << (n - 1 - q);
            bi |= (alpha[q] == Basis::X ? 1u : 0u) << (n - 1 - q);
        }

        const bool attacked = ne > 0 && uni(rng) < config.strategy.xi;
        StateVector bob_pre;
        std::uint32_t e = 0;
        if (attacked) {
            auto branches = transmit_round(gate, a, alpha, config.strategy);
            double draw = uni(rng);
            std::size_t pick = branches.size() - 1;
            for (std::size_t k = 0; k < branches.size(); ++k) {
                if (draw < branches[k].probability) {
                    pick = k;
                    break;
                }
                draw -= branches[k].probability;
            }
            for (int bit : branches[pick].eve_bits) e = (e << 1) | static_cast<std::uint32_t>(bit);
            bob_pre = std::move(branches[pick].bob_pre_state);
            res.attacked_groups++;
            res.joint_counts[((std::size_t{bi} << n | ai) << ne) | e]++;
        } else {
            StateVector psi = basis_state(a[0], alpha[0]);
            for (int q = 1; q < n; ++q) psi = tensor(psi, basis_state(a[q], alpha[q]));
            bob_pre = apply(gate, psi);
        }

        StateVector state = apply(gate_dag, bob_pre);
        for (int q = 0; q < n; ++q) {
            if (bob_basis[q] == 1) state = apply_on_qubit(h, q, state);
            auto [b0, b1] = measure_qubit_z(q, state);
            const int outcome = sample_outcome(b0.probability, rng);
            b[q] = outcome;
            state = (outcome == 0) ? std::move(b0.post_state) : std::move(b1.post_state);
        }

        for (int q = 0; q < n; ++q) {
            const int alice_basis = (alpha[q] == Basis::X) ? 1 : 0;
            if (bob_basis[q] != alice_basis) continue;  // sifted out
            res.sifted_length++;
            res.per_qubit_sifted_counts[q]++;
            if (b[q] != a[q]) {
                res.sifted_errors++;
                res.per_qubit_flip_counts[q]++;
            }
        }
    }

    res.estimated_qber =
        res.sifted_length > 0 ? static_cast<double>(res.sifted_errors) / res.sifted_length : 0.0;

    // Plug-in mutual information from joint counts of the attacked groups.
    if (res.attacked_groups > 0) {
        const std::uint32_t dim = 1u << n;
        const std::uint32_t ecount = 1u << ne;
        double h_a = 0.0, h_e = 0.0, h_ae = 0.0;
        for (std::uint32_t alpha_i = 0; alpha_i < dim; ++alpha_i) {
            long n_alpha = 0;
            for (std::uint32_t ai = 0; ai < dim; ++ai)
                for (std::uint32_t ei = 0; ei < ecount; ++ei)
                    n_alpha += res.joint_counts[((std::size_t{alpha_i} << n | ai) << ne) | ei];
            if (n_alpha == 0) continue;
            const double w = static_cast<double>(n_alpha) / res.attacked_groups;
            std::vector<double> pa(dim, 0.0), pe(ecount, 0.0);
            double h_joint = 0.0;
            for (std::uint32_t ai = 0; ai < dim; ++ai)
                for (std::uint32_t ei = 0; ei < ecount; ++ei) {
                    const double p =
                        static_cast<double>(
                            res.joint_counts[((std::size_t{alpha_i} << n | ai) << ne) | ei]) /
                        n_alpha;
                    pa[ai] += p;
                    pe[ei] += p;
                    h_joint += plogp(p);
                }
            double ha = 0.0, he = 0.0;
            for (double p : pa) ha += plogp(p);
            for (double p : pe) he += plogp(p);
            h_a += w * ha;
            h_e += w * he;
            h_ae += w * h_joint;
        }
        res.eve_empirical_info_proxy = (h_a + h_e - h_ae) / n;
    }
    return res;
}

std::vector<TraceEvent> interleaving_trace(const SessionConfig& config) {
    const int n = config.gate.num_qubits();
    if (config.interleave_depth < 1)
        throw std::invalid_argument("interleaving_trace: depth must be >= 1");

    struct GroupState {
        int id = 0;
        int next_qubit = 0;
        int acked = 0;
        bool waiting_ack = false;
    };
    struct PendingAck {
        long t = 0;
        int group = 0, qubit = 0;
    };

    std::vector<TraceEvent> log;
    std::vector<GroupState> active;
    std::vector<PendingAck> acks;
    int next_group = 0;
    long t = 0;

    while (next_group < config.num_groups || !active.empty()) {
        // deliver acks scheduled for this tick
        for (std::size_t i = 0; i < acks.size();) {
            if (acks[i].t == t) {
                log.push_back({t, "ack", acks[i].group, acks[i].qubit});
                for (std::size_t g = 0; g < active.size(); ++g) {
                    if (active[g].id != acks[i].group) continue;
                    active[g].waiting_ack = false;
                    active[g].acked++;
                    if (active[g].acked == n) {
                        log.push_back({t, "group-complete", active[g].id, -1});
                        active.erase(active.begin() + g);
                    }
                    break;
                }
                acks.erase(acks.begin() + i);
            } else {
                ++i;
            }
        }

        // channel sends at most one qubit per tick; lowest-id eligible group
        // goes first, otherwise a new group starts if the window allows
        GroupState* sender = nullptr;
        for (auto& g : active)
            if (!g.waiting_ack && g.next_qubit < n && (!sender || g.id < sender->id)) sender = &g;
        if (!sender && static_cast<int>(active.size()) < config.interleave_depth &&
            next_group < config.num_groups) {
            active.push_back({next_group++, 0, 0, false});
            sender = &active.back();
        }
        if (sender) {
            log.push_back({t, "send", sender->id, sender->next_qubit});
            acks.push_back({t + 2, sender->id, sender->next_qubit});  // 1 tick each way
            sender->next_qubit++;
            sender->waiting_ack = true;
        }
        ++t;
        if (t > 16L * (config.num_groups + 1) * (n + 1) + 16)
            throw std::logic_error("interleaving_trace: scheduler stalled");
    }
    return log;
}

ComparisonReport compare_with_analytic(const SessionConfig& config, const AttackOutcome& outcome) {
    const int n = config.gate.num_qubits();
    if (outcome.n != n || outcome.intercepted != config.strategy.intercepted)
        throw std::invalid_argument("compare_with_analytic: outcome does not match config");
    const SessionResult res = run_session(config);

    ComparisonReport rep;
    rep.empirical_qber = res.estimated_qber;
    rep.exact_qber = config.strategy.xi * qber(outcome);
    const double se = std::sqrt(std::max(rep.exact_qber * (1.0 - rep.exact_qber), 1e-300) /
                                std::max<long>(res.sifted_length, 1));
    rep.qber_z = (rep.empirical_qber - rep.exact_qber) / se;
    rep.max_abs_z = std::abs(rep.qber_z);

    const std::uint32_t dim = 1u << n;
    const int ne = outcome.num_eve_bits();
    for (std::uint32_t alpha = 0; alpha < dim; ++alpha)
        for (std::uint32_t a = 0; a < dim; ++a) {
            long n_cell = 0;
            for (std::uint32_t e = 0; e < (1u << ne); ++e)
                n_cell += res.joint_counts[((std::size_t{alpha} << n | a) << ne) | e];
            if (n_cell == 0) continue;
            for (std::uint32_t e = 0; e < (1u << ne); ++e) {
                const double p = outcome.joint_at(alpha, a, e);
                const double expected = n_cell * p;
                if (expected < 10.0) continue;
                const long obs = res.joint_counts[((std::size_t{alpha} << n | a) << ne) | e];
                const double z = (obs - expected) / std::sqrt(n_cell * p * (1.0 - p));
                rep.cells.push_back({alpha, a, e, expected, obs, z});
                rep.max_abs_z = std::max(rep.max_abs_z, std::abs(z));
            }
        }
    return rep;
}

std::string SessionResult::to_json() const {
    nlohmann::json j;
    j["sifted_length"] = sifted_length;
    j["sifted_errors"] = sifted_errors;
    j["estimated_qber"] = estimated_qber;
    j["eve_empirical_info_proxy"] = eve_empirical_info_proxy;
    j["eve_info_proxy_note"] = "plug-in estimate; biased upward at small sample sizes";
    j["attacked_groups"] = attacked_groups;
    j["per_qubit_flip_counts"] = per_qubit_flip_counts;
    j["per_qubit_sifted_counts"] = per_qubit_sifted_counts;
    return j.dump();
}

std::string TraceEvent::to_json() const {
    nlohmann::json j;
    j["t"] = t;
    j["event"] = event;
    j["group"] = group;
    j["qubit"] = qubit;
    return j.dump();
}

}  // namespace qkd
