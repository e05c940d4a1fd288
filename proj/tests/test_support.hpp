// Shared generators for the property-style tests.

#pragma once

#include <numbers>
#include <random>

#include "qkd/gates.hpp"
#include "qkd/protocol.hpp"

namespace qkd::testing {

inline double random_angle(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 2.0 * std::numbers::pi);
    return uni(rng);
}

inline StateVector random_state(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    StateVector s(n);
    for (auto& a : s.amp) a = cplx{g(rng), g(rng)};
    s.normalize();
    return s;
}

// Random unitary built from rotation layers and Cartan gates on adjacent
// pairs; unitary by construction.
inline Operator random_unitary(int n, std::mt19937_64& rng) {
    Operator u = Operator::identity(n);
    for (int layer = 0; layer < 2; ++layer) {
        Operator locals = eve_premeasure_gate(random_angle(rng), random_angle(rng));
        for (int q = 1; q < n; ++q)
            locals = tensor(locals, eve_premeasure_gate(random_angle(rng), random_angle(rng)));
        u = matmul(locals, u);
        for (int q = 0; q + 1 < n; ++q) {
            Operator c = cartan_gate({random_angle(rng), random_angle(rng), random_angle(rng)});
            if (q > 0) c = tensor(Operator::identity(q), c);
            if (q + 2 < n) c = tensor(c, Operator::identity(n - q - 2));
            u = matmul(c, u);
        }
    }
    return u;
}

inline EveStrategy random_full_strategy(int n, std::mt19937_64& rng) {
    EveStrategy s;
    for (int q = 0; q < n; ++q) {
        s.intercepted.push_back(q);
        s.angles.emplace_back(random_angle(rng), random_angle(rng));
    }
    return s;
}

}  // namespace qkd::testing
