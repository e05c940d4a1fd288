// keyrate.hpp
// Post-processing arithmetic: binary entropy, Eve's information after error
// correction, relative key rates, the delta break-even point and the
// photon-number-splitting advantage bound.

#pragma once

#include <optional>
#include <vector>

namespace qkd {

enum class KeyRateProtocol { BB84, Enhanced2Q, IdealS0 };

struct KeyRateInputs {
    double q = 0.06;       // QBER in [0, 0.5)
    double delta = 1.0;    // factor by which the scheme changes the QBER
    double s = 0.5965;     // slope of Eve's information curve
    KeyRateProtocol protocol = KeyRateProtocol::BB84;
};

double binary_entropy(double q);

// BB84: 2q + H_bin(q); enhanced: s*delta*q + H_bin(delta*q); ideal: H_bin(delta*q).
double eve_info_after_ec(const KeyRateInputs& in);

// 1 - eve_info_after_ec; negative values mean no secure key and are returned as-is.
double relative_key_rate(const KeyRateInputs& in);

// Root delta of r_enhanced(q, delta, s) = r_bb84(q) on [1, 0.5/q); nullopt if
// there is no sign change on that interval.
std::optional<double> delta_breakeven(double q, double s);

// Probability that all N qubits of a group present a multi-photon copy.
double pns_advantage_bound(double epsilon, int n);

struct RateFigureRow {
    double delta = 0.0;
    double r_enhanced = 0.0;
    double r_ideal_s0 = 0.0;
    double r_bb84 = 0.0;
};

std::vector<RateFigureRow> rate_figure_dataset(double q, double s, double delta_min,
                                               double delta_max, int steps);

}  // namespace qkd
