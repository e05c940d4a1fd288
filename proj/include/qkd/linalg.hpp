// linalg.hpp
// Dense complex linear algebra for small (<= 5 qubit) systems: state vectors,
// operators, tensor products and projective z measurements with branch tracking.

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace qkd {

using cplx = std::complex<double>;

enum class Basis { Z, X };

// Normalized amplitude vector over num_qubits qubits.
// Qubit 0 is the leftmost tensor factor: for amplitude index i, the bit of
// qubit q is (i >> (num_qubits - 1 - q)) & 1.
struct StateVector {
    int num_qubits = 1;
    std::vector<cplx> amp;

    StateVector() : amp(2, cplx{0, 0}) { amp[0] = 1.0; }
    explicit StateVector(int n) : num_qubits(n), amp(std::size_t{1} << n, cplx{0, 0}) {
        amp[0] = 1.0;
    }
    StateVector(int n, std::vector<cplx> a);

    std::size_t dim() const { return amp.size(); }
    int bit_of(std::size_t index, int qubit) const {
        return static_cast<int>((index >> (num_qubits - 1 - qubit)) & 1u);
    }
    double squared_norm() const;
    void normalize();
};

// Dense 2^n x 2^n complex matrix, row-major.
struct Operator {
    int num_qubits = 1;
    std::vector<cplx> m;

    Operator() : m(4, cplx{0, 0}) {}
    explicit Operator(int n)
        : num_qubits(n), m((std::size_t{1} << n) * (std::size_t{1} << n), cplx{0, 0}) {}

    std::size_t dim() const { return std::size_t{1} << num_qubits; }
    cplx& at(std::size_t r, std::size_t c) { return m[r * dim() + c]; }
    const cplx& at(std::size_t r, std::size_t c) const { return m[r * dim() + c]; }

    static Operator identity(int n);
};

struct MeasurementBranch {
    double probability = 0.0;
    int outcome = 0;
    StateVector post_state;
};

Operator tensor(const Operator& a, const Operator& b);
StateVector tensor(const StateVector& a, const StateVector& b);

Operator matmul(const Operator& a, const Operator& b);
Operator dagger(const Operator& a);
Operator scale(const Operator& a, cplx factor);
Operator add(const Operator& a, const Operator& b);

// Matrix-vector product; throws std::invalid_argument on dimension mismatch.
StateVector apply(const Operator& u, const StateVector& s);

// Apply a 1-qubit gate to qubit q of s; throws std::out_of_range on bad index.
StateVector apply_on_qubit(const Operator& u, int q, const StateVector& s);

// Projective z measurement of qubit q. Both branches are always returned;
// a zero-probability branch carries probability exactly 0 and a normalized
// placeholder state.
std::pair<MeasurementBranch, MeasurementBranch> measure_qubit_z(int q, const StateVector& s);

// Probability that measuring qubit q of s in the given basis yields the
// negation of reference_bit.
double marginal_flip_probability(int q, Basis basis, int reference_bit, const StateVector& s);

bool is_unitary(const Operator& u, double tol = 1e-12);
double max_entry_diff(const Operator& a, const Operator& b);

// Equality of states up to a global phase.
bool approx_equal_up_to_phase(const StateVector& a, const StateVector& b, double tol = 1e-10);

}  // namespace qkd
