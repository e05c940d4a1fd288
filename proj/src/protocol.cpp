#include "qkd/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qkd {

void EveStrategy::validate(int num_qubits) const {
    if (intercepted.size() != angles.size())
        throw std::invalid_argument("EveStrategy: angles must match intercepted qubits");
    if (xi < 0.0 || xi > 1.0) throw std::invalid_argument("EveStrategy: xi out of [0,1]");
    int prev = -1;
    for (int q : intercepted) {
        if (q <= prev) throw std::invalid_argument("EveStrategy: indices must be ascending unique");
        if (q < 0 || q >= num_qubits) throw std::invalid_argument("EveStrategy: index out of range");
        prev = q;
    }
}

std::string EveStrategy::descriptor() const {
    std::ostringstream os;
    os << "S={";
    for (std::size_t k = 0; k < intercepted.size(); ++k) {
        if (k) os << ',';
        os << intercepted[k];
    }
    os << "};angles=";
    for (std::size_t k = 0; k < angles.size(); ++k) {
        if (k) os << ';';
        char buf[48];
        std::snprintf(buf, sizeof buf, "(%.10f,%.10f)", angles[k].first, angles[k].second);
        os << buf;
    }
    return os.str();
}

EveStrategy EveStrategy::z_basis(int num_intercepted) {
    EveStrategy s;
    for (int q = 0; q < num_intercepted; ++q) {
        s.intercepted.push_back(q);
        s.angles.emplace_back(0.0, 0.0);
    }
    return s;
}

EveStrategy EveStrategy::with_angles(std::vector<int> intercepted,
                                     std::vector<std::pair<double, double>> angles, double xi) {
    EveStrategy s;
    s.intercepted = std::move(intercepted);
    s.angles = std::move(angles);
    s.xi = xi;
    return s;
}

std::vector<TransmitBranch> transmit_round(const Operator& gate, const std::vector<int>& a,
                                           const std::vector<Basis>& alpha,
                                           const EveStrategy& strategy) {
    const int n = gate.num_qubits;
    if (static_cast<int>(a.size()) != n || static_cast<int>(alpha.size()) != n)
        throw std::invalid_argument("transmit_round: a/alpha length mismatch");
    strategy.validate(n);

    StateVector psi = basis_state(a[0], alpha[0]);
    for (int q = 1; q < n; ++q) psi = tensor(psi, basis_state(a[q], alpha[q]));
    psi = apply(gate, psi);

    std::vector<TransmitBranch> branches;
    branches.push_back({1.0, {}, std::move(psi)});

    for (std::size_t k = 0; k < strategy.intercepted.size(); ++k) {
        const int q = strategy.intercepted[k];
        const Operator eve = eve_premeasure_gate(strategy.angles[k].first, strategy.angles[k].second);
        const Operator eve_dag = dagger(eve);
        std::vector<TransmitBranch> next;
        for (auto& br : branches) {
            StateVector rotated = apply_on_qubit(eve, q, br.bob_pre_state);
            auto [b0, b1] = measure_qubit_z(q, rotated);
            for (const MeasurementBranch* mb : {&b0, &b1}) {
                if (mb->probability <= 0.0) continue;
                TransmitBranch nb;
                nb.probability = br.probability * mb->probability;
                nb.eve_bits = br.eve_bits;
                nb.eve_bits.push_back(mb->outcome);
                // Post-measurement, qubit q factors out as |e;z>; undoing Eve's
                // rotation there yields the resent state eve_dag |e;z> exactly.
                nb.bob_pre_state = apply_on_qubit(eve_dag, q, mb->post_state);
                next.push_back(std::move(nb));
            }
        }
        branches = std::move(next);
    }
    return branches;
}

AttackOutcome enumerate_attack(const GateSpec& gate_spec, const EveStrategy& strategy) {
    const int n = gate_spec.num_qubits();
    strategy.validate(n);
    const Operator gate = gate_spec.resolve();
    const Operator gate_dag = dagger(gate);
    const int ne = static_cast<int>(strategy.intercepted.size());

    AttackOutcome out;
    out.n = n;
    out.intercepted = strategy.intercepted;
    out.joint.assign((std::size_t{1} << (2 * n)) << ne, 0.0);
    out.flip.assign(static_cast<std::size_t>(n) * 4, 0.0);

    const std::uint32_t dim = 1u << n;
    // 4^{n-1} (alpha, a) combinations share each fixed (alpha_j, a_j) cell.
    const double flip_weight = 1.0 / std::pow(4.0, n - 1);

    std::vector<int> a(n);
    std::vector<Basis> alpha(n);
    for (std::uint32_t ai = 0; ai < dim; ++ai) {
        for (std::uint32_t bi = 0; bi < dim; ++bi) {
            for (int q = 0; q < n; ++q) {
                alpha[q] = ((bi >> (n - 1 - q)) & 1u) ? Basis::X : Basis::Z;
                a[q] = static_cast<int>((ai >> (n - 1 - q)) & 1u);
            }
            auto branches = transmit_round(gate, a, alpha, strategy);
            for (const auto& br : branches) {
                std::uint32_t e = 0;
                for (int bit : br.eve_bits) e = (e << 1) | static_cast<std::uint32_t>(bit);
                out.joint[((std::size_t{bi} << n | ai) << ne) | e] += br.probability;
                const StateVector bob = apply(gate_dag, br.bob_pre_state);
                for (int j = 0; j < n; ++j) {
                    const double pf = marginal_flip_probability(j, alpha[j], a[j], bob);
                    const int basis_idx = (alpha[j] == Basis::X) ? 1 : 0;
                    out.flip[(j * 2 + basis_idx) * 2 + a[j]] += flip_weight * br.probability * pf;
                }
            }
        }
    }
    return out;
}

std::string AttackOutcome::to_json() const {
    std::ostringstream os;
    os << "{\"n\":" << n << ",\"intercepted\":[";
    for (std::size_t k = 0; k < intercepted.size(); ++k) {
        if (k) os << ',';
        os << intercepted[k];
    }
    os << "],\"table\":[";
    const std::uint32_t dim = 1u << n;
    bool first = true;
    for (std::uint32_t bi = 0; bi < dim; ++bi)
        for (std::uint32_t ai = 0; ai < dim; ++ai)
            for (std::uint32_t e = 0; e < (1u << num_eve_bits()); ++e) {
                const double p = joint_at(bi, ai, e);
                if (p <= 0.0) continue;
                if (!first) os << ',';
                first = false;
                std::string alpha_s, a_s, e_s;
                for (int q = 0; q < n; ++q) {
                    alpha_s += ((bi >> (n - 1 - q)) & 1u) ? 'x' : 'z';
                    a_s += static_cast<char>('0' + ((ai >> (n - 1 - q)) & 1u));
                }
                for (int k = num_eve_bits() - 1; k >= 0; --k)
                    e_s += static_cast<char>('0' + ((e >> k) & 1u));
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.17g", p);
                os << "{\"alpha\":\"" << alpha_s << "\",\"a\":\"" << a_s << "\",\"e\":\"" << e_s
                   << "\",\"p\":" << buf << '}';
            }
    os << "]}";
    return os.str();
}

}  // namespace qkd
