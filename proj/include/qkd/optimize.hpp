// optimize.hpp
// Derivative-free optimization of the attack and of the gate: multi-start
// Nelder-Mead for Eve's best attack, a nested min-max for the Cartan gate
// design, and the grid sweeps behind the information/QBER scatter plots.

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qkd/metrics.hpp"

namespace qkd {

struct OptimizationConfig {
    int max_iterations = 2000;
    double tolerance_f = 1e-10;
    double tolerance_x = 1e-8;
    int restarts = 32;
    std::uint64_t seed = 20080417;
    double initial_step = 0.3;  // initial simplex edge, radians
};

// Generic Nelder-Mead minimizer, standard coefficients (1, 2, 0.5, 0.5).
struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
};
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, const OptimizationConfig& cfg);

enum class EveObjective { Ratio, Info };

struct EveOptimum {
    std::vector<int> intercept_set;
    std::vector<std::pair<double, double>> angles;
    double value = 0.0;  // best objective (ratio by default)
    MetricsReport report;
};

// Inner maximization: Eve's best angles for a fixed gate and intercept set.
// Deterministic given cfg.seed; restarts run in parallel.
EveOptimum optimize_eve(const GateSpec& gate, const std::vector<int>& intercept_set,
                        const OptimizationConfig& cfg, EveObjective objective = EveObjective::Ratio);

struct GateOptimum {
    CartanParams c;
    EveOptimum inner;    // Eve's best response at the returned c
    double value = 0.0;  // min over c of max(one-qubit, two-qubit inner optimum)
};

// Outer minimization over c in [0,2pi]^3 of Eve's best ratio, defending
// against both one- and two-qubit interception.
GateOptimum optimize_gate(const OptimizationConfig& outer, const OptimizationConfig& inner);

enum class CartanEveMode { BothZ, OneZ };
struct CartanSweepPoint {
    CartanParams c;
    double info = 0.0;
    double qber = 0.0;
};
// Uniform grid over c in [0,2pi]^3, fixed z-basis Eve on both or one qubit.
std::vector<CartanSweepPoint> sweep_cartan(int points_per_axis, CartanEveMode mode);

enum class EveSweepMode { Both, One };
struct EveSweepPoint {
    std::vector<double> angles;  // (b1,g1[,b2,g2])
    double info = 0.0;
    double qber = 0.0;
};
// Uniform angle grid at fixed gate; Both sweeps (b1,g1,b2,g2), One sweeps (b,g).
std::vector<EveSweepPoint> sweep_eve(const GateSpec& gate, int points_per_axis, EveSweepMode mode);

}  // namespace qkd
