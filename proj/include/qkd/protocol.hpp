// protocol.hpp
// Exact enumeration of one protocol round: Alice's preparation and entangling,
// Eve's sequential per-qubit intercept-resend, Bob's disentangling — producing
// exact joint distributions over (alpha, a, e) and per-qubit flip tables.

#pragma once

#include <string>
#include <vector>

#include "qkd/gates.hpp"
#include "qkd/linalg.hpp"

namespace qkd {

struct EveStrategy {
    std::vector<int> intercepted;                    // ascending qubit indices
    std::vector<std::pair<double, double>> angles;   // (beta, gamma) per intercepted qubit
    double xi = 1.0;                                 // fraction of groups attacked

    void validate(int num_qubits) const;
    std::string descriptor() const;

    // Helper: intercept the first k qubits (or the given set), one angle pair each.
    static EveStrategy z_basis(int num_intercepted);
    static EveStrategy with_angles(std::vector<int> intercepted,
                                   std::vector<std::pair<double, double>> angles, double xi = 1.0);
};

struct TransmitBranch {
    double probability = 0.0;
    std::vector<int> eve_bits;   // one bit per intercepted qubit, measurement order
    StateVector bob_pre_state;   // the N-qubit state arriving at Bob, before U_N^dagger
};

// One round for fixed raw bits a and bases alpha. The gate must already be
// resolved to an operator of matching size. Only branches with probability > 0
// are returned; probabilities sum to 1.
std::vector<TransmitBranch> transmit_round(const Operator& gate, const std::vector<int>& a,
                                           const std::vector<Basis>& alpha,
                                           const EveStrategy& strategy);

// Exact attack statistics at xi = 1. Bit packing: for both alpha and a, qubit
// q's bit sits at position n-1-q (alpha bit 1 means the x basis); Eve's bits
// pack in measurement order, first-measured most significant.
struct AttackOutcome {
    int n = 0;
    std::vector<int> intercepted;
    // p(e | alpha, a), indexed ((alpha << n | a) << |S|) | e.
    std::vector<double> joint;
    // p(B_j = !a_j | A_j = a_j; alpha_j) averaged over the other qubits,
    // indexed (j * 2 + basis) * 2 + a_j with basis 0 = z, 1 = x.
    std::vector<double> flip;

    int num_eve_bits() const { return static_cast<int>(intercepted.size()); }
    double joint_at(std::uint32_t alpha, std::uint32_t a, std::uint32_t e) const {
        return joint[((std::size_t{alpha} << n | a) << num_eve_bits()) | e];
    }
    double flip_at(int j, Basis basis, int a_j) const {
        return flip[(j * 2 + (basis == Basis::X ? 1 : 0)) * 2 + a_j];
    }

    std::string to_json() const;  // debugging dump
};

AttackOutcome enumerate_attack(const GateSpec& gate, const EveStrategy& strategy);

}  // namespace qkd
