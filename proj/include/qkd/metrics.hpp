// metrics.hpp
// Information-theoretic metrics over exact attack statistics: Shannon
// entropies, Eve's per-bit mutual information, QBER, the I/QBER ratio,
// xi-scaling and the E1/E_N bound decomposition.

#pragma once

#include <span>
#include <string>

#include "qkd/protocol.hpp"

namespace qkd {

struct MetricsReport {
    double info = 0.0;          // I(A,E) per bit at xi = 1
    double qber = 0.0;
    double ratio = 0.0;         // info/qber; meaningless when !ratio_defined
    bool ratio_defined = false; // false iff qber == 0
    double xi = 1.0;
    double info_scaled = 0.0;   // xi * info
    double qber_scaled = 0.0;   // xi * qber

    std::string csv_row(const std::string& gate_spec, const std::string& strategy) const;
    static std::string csv_header();
};

// -sum p log2 p with 0 log 0 := 0. Throws if the input is not a distribution.
double shannon_entropy(std::span<const double> dist);

// Eq.-(1)-style per-bit mutual information, entropies averaged over alpha.
double mutual_information(const AttackOutcome& outcome);

// Average over qubits of the per-qubit flip probability, uniformly weighted
// over (alpha_j, a_j).
double qber(const AttackOutcome& outcome);

// Full report at the given fraction xi.
MetricsReport compute_metrics(const AttackOutcome& outcome, double xi = 1.0);

// Rescale an existing report to a new fraction.
MetricsReport apply_fraction(const MetricsReport& report, double xi);

// Split of Eve's outcomes into the first |S|-1 measurements (E1) and the last
// one (E_N); requires full interception.
struct BoundDecomposition {
    double info_first = 0.0;  // I(A, E1), not divided by N
    double h_last = 0.0;      // H(E_N | A, E1)
    double info_total = 0.0;  // I(A,E) per bit
};
BoundDecomposition bound_decomposition(const AttackOutcome& outcome);

// Regression anchor: metrics of the identity gate (plain BB84) under the
// given strategy.
MetricsReport bb84_reduction_check(int num_qubits, const EveStrategy& strategy);

}  // namespace qkd
