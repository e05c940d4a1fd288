#include "qkd/gates.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qkd {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_2pi(double x) {
    double r = std::fmod(x, kTwoPi);
    if (r < 0) r += kTwoPi;
    return r;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

std::string fmt_angle(double a) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10f", a);
    return buf;
}

}  // namespace

Operator pauli_x() {
    Operator p(1);
    p.at(0, 1) = 1.0;
    p.at(1, 0) = 1.0;
    return p;
}

Operator pauli_y() {
    Operator p(1);
    p.at(0, 1) = cplx{0, -1};
    p.at(1, 0) = cplx{0, 1};
    return p;
}

Operator pauli_z() {
    Operator p(1);
    p.at(0, 0) = 1.0;
    p.at(1, 1) = -1.0;
    return p;
}

Operator hadamard() {
    Operator h(1);
    const double r = 1.0 / std::numbers::sqrt2;
    h.at(0, 0) = r;
    h.at(0, 1) = r;
    h.at(1, 0) = r;
    h.at(1, 1) = -r;
    return h;
}

StateVector basis_state(int a, Basis alpha) {
    StateVector s(1);
    if (alpha == Basis::Z) {
        s.amp[0] = (a == 0) ? 1.0 : 0.0;
        s.amp[1] = (a == 0) ? 0.0 : 1.0;
    } else {
        const double r = 1.0 / std::numbers::sqrt2;
        s.amp[0] = r;
        s.amp[1] = (a == 0) ? r : -r;
    }
    return s;
}

Operator rotation(RotationAxis axis, double angle) {
    Operator r(1);
    const double c = std::cos(angle / 2), s = std::sin(angle / 2);
    if (axis == RotationAxis::Y) {
        r.at(0, 0) = c;
        r.at(0, 1) = -s;
        r.at(1, 0) = s;
        r.at(1, 1) = c;
    } else {
        r.at(0, 0) = cplx{c, -s};
        r.at(1, 1) = cplx{c, s};
    }
    return r;
}

Operator eve_premeasure_gate(double beta, double gamma) {
    return matmul(rotation(RotationAxis::Y, beta), rotation(RotationAxis::Z, gamma));
}

Operator cartan_gate(const CartanParams& p) {
    const Operator terms[3] = {tensor(pauli_x(), pauli_x()), tensor(pauli_y(), pauli_y()),
                               tensor(pauli_z(), pauli_z())};
    const double coeff[3] = {p.c1, p.c2, p.c3};
    Operator out = Operator::identity(2);
    for (int k = 0; k < 3; ++k) {
        // M^2 = I, so exp(i c M / 2) = cos(c/2) I + i sin(c/2) M.
        Operator factor = add(scale(Operator::identity(2), std::cos(coeff[k] / 2)),
                              scale(terms[k], cplx{0, std::sin(coeff[k] / 2)}));
        out = matmul(factor, out);
    }
    return out;
}

Operator u_star(int n, Parity parity, const std::vector<int>& signs) {
    if (n < 1) throw std::invalid_argument("u_star: n must be >= 1");
    if (static_cast<int>(signs.size()) != n - 1)
        throw std::invalid_argument("u_star: signs length must be n-1");
    Operator u = (parity == Parity::Even) ? Operator::identity(1) : pauli_y();
    const double r = 1.0 / std::numbers::sqrt2;
    for (int step = 0; step < n - 1; ++step) {
        const int m = step + 1;  // current qubit count
        Operator flip_first = (m == 1) ? pauli_y() : tensor(pauli_y(), Operator::identity(m - 1));
        const cplx s{0, signs[step] > 0 ? r : -r};
        u = add(scale(tensor(Operator::identity(1), u), r),
                scale(tensor(pauli_y(), matmul(flip_first, u)), s));
    }
    return u;
}

std::vector<ParityWord> u_star_parity_expansion(int n, Parity parity) {
    if (n < 1) throw std::invalid_argument("u_star_parity_expansion: n must be >= 1");
    std::vector<ParityWord> words;
    const int want = (parity == Parity::Even) ? 0 : 1;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if ((std::popcount(mask) & 1) != want) continue;
        Operator word = ((mask >> (n - 1)) & 1) ? pauli_y() : Operator::identity(1);
        for (int q = 1; q < n; ++q)
            word = tensor(word, ((mask >> (n - 1 - q)) & 1) ? pauli_y() : Operator::identity(1));
        words.push_back({mask, std::move(word)});
    }
    return words;
}

GateSpec GateSpec::identity(int n) {
    GateSpec g;
    g.kind = Kind::Identity;
    g.n = n;
    return g;
}

GateSpec GateSpec::make_cartan(const CartanParams& c,
                               std::optional<std::pair<double, double>> local) {
    GateSpec g;
    g.kind = Kind::Cartan;
    g.n = 2;
    g.cartan = {wrap_2pi(c.c1), wrap_2pi(c.c2), wrap_2pi(c.c3)};
    g.local = local;
    return g;
}

GateSpec GateSpec::ustar(int n, Parity parity, std::vector<int> signs) {
    GateSpec g;
    g.kind = Kind::UStar;
    g.n = n;
    g.parity = parity;
    g.signs = std::move(signs);
    if (g.signs.empty()) g.signs.assign(n > 0 ? n - 1 : 0, +1);
    return g;
}

GateSpec GateSpec::explicit_gate(Operator op) {
    GateSpec g;
    g.kind = Kind::Explicit;
    g.n = op.num_qubits;
    g.explicit_op = std::move(op);
    return g;
}

Operator GateSpec::resolve() const {
    switch (kind) {
        case Kind::Identity:
            return Operator::identity(n);
        case Kind::Cartan: {
            Operator c = cartan_gate(cartan);
            if (local) {
                Operator k = eve_premeasure_gate(local->first, local->second);
                c = matmul(c, tensor(k, k));
            }
            return c;
        }
        case Kind::UStar:
            return u_star(n, parity, signs);
        case Kind::Explicit:
            if (!is_unitary(explicit_op, 1e-10))
                throw std::invalid_argument("GateSpec: explicit matrix is not unitary");
            return explicit_op;
    }
    throw std::logic_error("GateSpec: unknown kind");
}

std::string GateSpec::to_string() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Identity:
            os << "identity:" << n;
            break;
        case Kind::Cartan:
            os << "cartan:" << fmt_angle(cartan.c1) << ',' << fmt_angle(cartan.c2) << ','
               << fmt_angle(cartan.c3);
            if (local) os << ':' << fmt_angle(local->first) << ',' << fmt_angle(local->second);
            break;
        case Kind::UStar:
            os << "ustar:" << n << ':' << (parity == Parity::Even ? "even" : "odd") << ':';
            for (int s : signs) os << (s > 0 ? '+' : '-');
            break;
        case Kind::Explicit:
            os << "explicit:" << n;
            break;
    }
    return os.str();
}

GateSpec GateSpec::parse(const std::string& text) {
    auto parts = split(text, ':');
    if (parts.empty() || parts[0].empty()) throw std::invalid_argument("empty gate spec");
    const std::string& kind = parts[0];
    if (kind == "identity") {
        if (parts.size() != 2) throw std::invalid_argument("identity spec: expected identity:N");
        int n = std::stoi(parts[1]);
        if (n < 1 || n > 10) throw std::invalid_argument("identity spec: bad qubit count");
        return identity(n);
    }
    if (kind == "cartan") {
        if (parts.size() < 2 || parts.size() > 3)
            throw std::invalid_argument("cartan spec: expected cartan:c1,c2,c3[:bloc,gloc]");
        auto angles = split(parts[1], ',');
        if (angles.size() != 3) throw std::invalid_argument("cartan spec: expected 3 angles");
        CartanParams c{parse_angle(angles[0]), parse_angle(angles[1]), parse_angle(angles[2])};
        std::optional<std::pair<double, double>> local;
        if (parts.size() == 3) {
            auto la = split(parts[2], ',');
            if (la.size() != 2) throw std::invalid_argument("cartan spec: expected 2 local angles");
            local = {{parse_angle(la[0]), parse_angle(la[1])}};
        }
        return make_cartan(c, local);
    }
    if (kind == "ustar") {
        if (parts.size() < 2 || parts.size() > 4)
            throw std::invalid_argument("ustar spec: expected ustar:N[:parity[:signs]]");
        int n = std::stoi(parts[1]);
        if (n < 1 || n > 10) throw std::invalid_argument("ustar spec: bad qubit count");
        Parity parity = Parity::Even;
        if (parts.size() >= 3) {
            if (parts[2] == "even")
                parity = Parity::Even;
            else if (parts[2] == "odd")
                parity = Parity::Odd;
            else
                throw std::invalid_argument("ustar spec: parity must be even|odd");
        }
        std::vector<int> signs;
        if (parts.size() == 4) {
            for (char ch : parts[3]) {
                if (ch == '+')
                    signs.push_back(+1);
                else if (ch == '-')
                    signs.push_back(-1);
                else
                    throw std::invalid_argument("ustar spec: signs must be +/-");
            }
            if (static_cast<int>(signs.size()) != n - 1)
                throw std::invalid_argument("ustar spec: need N-1 signs");
        }
        return ustar(n, parity, std::move(signs));
    }
    throw std::invalid_argument("unknown gate kind: " + kind);
}

double parse_angle(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty angle");
    const auto pi_pos = text.find("pi");
    if (pi_pos == std::string::npos) {
        std::size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("bad angle: " + text);
        return v;
    }
    // Forms: [k]pi[/d], e.g. "pi", "3pi/8", "-pi/4", "2pi".
    std::string head = text.substr(0, pi_pos);
    std::string tail = text.substr(pi_pos + 2);
    double num = 1.0;
    if (head == "-")
        num = -1.0;
    else if (!head.empty()) {
        std::size_t used = 0;
        num = std::stod(head, &used);
        if (used != head.size()) throw std::invalid_argument("bad angle: " + text);
    }
    double den = 1.0;
    if (!tail.empty()) {
        if (tail[0] != '/') throw std::invalid_argument("bad angle: " + text);
        std::size_t used = 0;
        den = std::stod(tail.substr(1), &used);
        if (used != tail.size() - 1 || den == 0.0)
            throw std::invalid_argument("bad angle: " + text);
    }
    return num * std::numbers::pi / den;
}

}  // namespace qkd
