#include "qkd/linalg.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qkd {

StateVector::StateVector(int n, std::vector<cplx> a) : num_qubits(n), amp(std::move(a)) {
    if (amp.size() != (std::size_t{1} << n)) {
        throw std::invalid_argument("StateVector: amplitude count != 2^n");
    }
}

double StateVector::squared_norm() const {
    double s = 0.0;
    for (const auto& c : amp) s += std::norm(c);
    return s;
}

void StateVector::normalize() {
    double s = std::sqrt(squared_norm());
    if (s <= 0.0) throw std::invalid_argument("StateVector: cannot normalize zero vector");
    for (auto& c : amp) c /= s;
}

Operator Operator::identity(int n) {
    Operator id(n);
    for (std::size_t i = 0; i < id.dim(); ++i) id.at(i, i) = 1.0;
    return id;
}

Operator tensor(const Operator& a, const Operator& b) {
    Operator out(a.num_qubits + b.num_qubits);
    const std::size_t db = b.dim();
    for (std::size_t ra = 0; ra < a.dim(); ++ra)
        for (std::size_t ca = 0; ca < a.dim(); ++ca) {
            const cplx f = a.at(ra, ca);
            if (f == cplx{0, 0}) continue;
            for (std::size_t rb = 0; rb < db; ++rb)
                for (std::size_t cb = 0; cb < db; ++cb)
                    out.at(ra * db + rb, ca * db + cb) = f * b.at(rb, cb);
        }
    return out;
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    StateVector out(a.num_qubits + b.num_qubits);
    const std::size_t db = b.dim();
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < db; ++j) out.amp[i * db + j] = a.amp[i] * b.amp[j];
    return out;
}

Operator matmul(const Operator& a, const Operator& b) {
    if (a.num_qubits != b.num_qubits) throw std::invalid_argument("matmul: dimension mismatch");
    Operator out(a.num_qubits);
    const std::size_t d = a.dim();
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t k = 0; k < d; ++k) {
            const cplx f = a.at(r, k);
            if (f == cplx{0, 0}) continue;
            for (std::size_t c = 0; c < d; ++c) out.at(r, c) += f * b.at(k, c);
        }
    return out;
}

Operator dagger(const Operator& a) {
    Operator out(a.num_qubits);
    for (std::size_t r = 0; r < a.dim(); ++r)
        for (std::size_t c = 0; c < a.dim(); ++c) out.at(c, r) = std::conj(a.at(r, c));
    return out;
}

Operator scale(const Operator& a, cplx factor) {
    Operator out = a;
    for (auto& e : out.m) e *= factor;
    return out;
}

Operator add(const Operator& a, const Operator& b) {
    if (a.num_qubits != b.num_qubits) throw std::invalid_argument("add: dimension mismatch");
    Operator out = a;
    for (std::size_t i = 0; i < out.m.size(); ++i) out.m[i] += b.m[i];
    return out;
}

StateVector apply(const Operator& u, const StateVector& s) {
    if (u.num_qubits != s.num_qubits) throw std::invalid_argument("apply: dimension mismatch");
    StateVector out(s.num_qubits);
    const std::size_t d = s.dim();
    for (std::size_t r = 0; r < d; ++r) {
        cplx acc{0, 0};
        for (std::size_t c = 0; c < d; ++c) acc += u.at(r, c) * s.amp[c];
        out.amp[r] = acc;
    }
    return out;
}

StateVector apply_on_qubit(const Operator& u, int q, const StateVector& s) {
    if (u.num_qubits != 1) throw std::invalid_argument("apply_on_qubit: gate must act on 1 qubit");
    if (q < 0 || q >= s.num_qubits) throw std::out_of_range("apply_on_qubit: qubit index");
    StateVector out = s;
    const std::size_t step = std::size_t{1} << (s.num_qubits - 1 - q);
    const std::size_t block = step << 1;
    const cplx u00 = u.at(0, 0), u01 = u.at(0, 1), u10 = u.at(1, 0), u11 = u.at(1, 1);
    for (std::size_t base = 0; base < s.dim(); base += block)
        for (std::size_t off = 0; off < step; ++off) {
            const std::size_t i0 = base + off;
            const std::size_t i1 = i0 + step;
            const cplx a = out.amp[i0], b = out.amp[i1];
            out.amp[i0] = u00 * a + u01 * b;
            out.amp[i1] = u10 * a + u11 * b;
        }
    return out;
}

std::pair<MeasurementBranch, MeasurementBranch> measure_qubit_z(int q, const StateVector& s) {
    if (q < 0 || q >= s.num_qubits) throw std::out_of_range("measure_qubit_z: qubit index");
    MeasurementBranch b0, b1;
    b0.outcome = 0;
    b1.outcome = 1;
    b0.post_state = StateVector(s.num_qubits);
    b1.post_state = StateVector(s.num_qubits);
    b0.post_state.amp.assign(s.dim(), cplx{0, 0});
    b1.post_state.amp.assign(s.dim(), cplx{0, 0});
    for (std::size_t i = 0; i < s.dim(); ++i) {
        if (s.bit_of(i, q) == 0) {
            b0.probability += std::norm(s.amp[i]);
            b0.post_state.amp[i] = s.amp[i];
        } else {
            b1.probability += std::norm(s.amp[i]);
            b1.post_state.amp[i] = s.amp[i];
        }
    }
    auto finish = [&](MeasurementBranch& b) {
        if (b.probability > 0.0) {
            b.post_state.normalize();
        } else {
            b.probability = 0.0;
            b.post_state = StateVector(s.num_qubits);  // |0...0> placeholder
        }
    };
    finish(b0);
    finish(b1);
    return {b0, b1};
}

double marginal_flip_probability(int q, Basis basis, int reference_bit, const StateVector& s) {
    const StateVector* t = &s;
    StateVector rotated;
    if (basis == Basis::X) {
        // Hadamard maps the x eigenbasis onto z.
        Operator h(1);
        const double r = 1.0 / std::numbers::sqrt2;
        h.at(0, 0) = r;
        h.at(0, 1) = r;
        h.at(1, 0) = r;
        h.at(1, 1) = -r;
        rotated = apply_on_qubit(h, q, s);
        t = &rotated;
    }
    double p = 0.0;
    for (std::size_t i = 0; i < t->dim(); ++i)
        if (t->bit_of(i, q) != reference_bit) p += std::norm(t->amp[i]);
    return p;
}

bool is_unitary(const Operator& u, double tol) {
    const Operator prod = matmul(dagger(u), u);
    for (std::size_t r = 0; r < prod.dim(); ++r)
        for (std::size_t c = 0; c < prod.dim(); ++c) {
            const cplx want = (r == c) ? cplx{1, 0} : cplx{0, 0};
            if (std::abs(prod.at(r, c) - want) > tol) return false;
        }
    return true;
}

double max_entry_diff(const Operator& a, const Operator& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.m.size(); ++i) worst = std::max(worst, std::abs(a.m[i] - b.m[i]));
    return worst;
}

bool approx_equal_up_to_phase(const StateVector& a, const StateVector& b, double tol) {
    if (a.num_qubits != b.num_qubits) return false;
    cplx phase{0, 0};
    for (std::size_t i = 0; i < a.dim(); ++i) {
        if (std::abs(b.amp[i]) > tol) {
            phase = a.amp[i] / b.amp[i];
            break;
        }
    }
    if (std::abs(std::abs(phase) - 1.0) > tol) return false;
    for (std::size_t i = 0; i < a.dim(); ++i)
        if (std::abs(a.amp[i] - phase * b.amp[i]) > tol) return false;
    return true;
}

}  // namespace qkd
