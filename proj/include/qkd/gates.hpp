// gates.hpp
// Gate constructors: Paulis, Bloch rotations, BB84 basis states, the Cartan
// two-qubit gate C(c), and the recursive entangler U_N* with its parity
// decomposition. GateSpec is the textual/CLI-facing gate description.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qkd/linalg.hpp"

namespace qkd {

enum class Parity { Even, Odd };

struct CartanParams {
    double c1 = 0.0, c2 = 0.0, c3 = 0.0;
};

Operator pauli_x();
Operator pauli_y();
Operator pauli_z();
Operator hadamard();

// |a; alpha> for a in {0,1}, alpha in {z,x}.
StateVector basis_state(int a, Basis alpha);

enum class RotationAxis { Y, Z };

// R_y(b) = exp(-i b sigma_y / 2), R_z(g) = exp(-i g sigma_z / 2).
Operator rotation(RotationAxis axis, double angle);

// R_y(beta) R_z(gamma): the gate Eve applies before her z measurement.
Operator eve_premeasure_gate(double beta, double gamma);

// exp[(i/2)(c1 XX + c2 YY + c3 ZZ)]; the three terms commute so the
// exponential factorizes, and each factor is cos(c/2) I + i sin(c/2) M.
Operator cartan_gate(const CartanParams& p);

// Recursive N-qubit entangler. signs has one +1/-1 entry per recursion step
// (length N-1). Base cases: even -> I1, odd -> sigma_y.
Operator u_star(int n, Parity parity, const std::vector<int>& signs);

// All 2^{N-1} tensor words over {I1, sigma_y} whose sigma_y count has the
// requested parity. mask bit for qubit q is at position N-1-q.
struct ParityWord {
    std::uint32_t mask = 0;  // set bit -> sigma_y on that qubit
    Operator op;
};
std::vector<ParityWord> u_star_parity_expansion(int n, Parity parity);

// Tagged gate description with a canonical textual form:
//   identity:2
//   cartan:0.0981747704,1.1780972451,0.0981747704[:beta_loc,gamma_loc]
//   ustar:3:even:++
struct GateSpec {
    enum class Kind { Identity, Cartan, UStar, Explicit };
    Kind kind = Kind::Identity;
    int n = 1;  // qubit count (Cartan is always 2)
    CartanParams cartan;
    std::optional<std::pair<double, double>> local;  // (beta_loc, gamma_loc) pre-layer
    Parity parity = Parity::Even;
    std::vector<int> signs;
    Operator explicit_op;

    static GateSpec identity(int n);
    static GateSpec make_cartan(const CartanParams& c,
                                std::optional<std::pair<double, double>> local = std::nullopt);
    static GateSpec ustar(int n, Parity parity = Parity::Even, std::vector<int> signs = {});
    static GateSpec explicit_gate(Operator op);

    int num_qubits() const { return kind == Kind::Cartan ? 2 : n; }
    Operator resolve() const;
    std::string to_string() const;
    static GateSpec parse(const std::string& text);
};

// Angle literal: plain radians or pi fractions such as "pi/32", "3pi/8", "-pi".
double parse_angle(const std::string& text);

}  // namespace qkd
