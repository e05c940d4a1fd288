#include "qkd/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace qkd {

namespace {

double plogp(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

}  // namespace

double shannon_entropy(std::span<const double> dist) {
    double sum = 0.0, h = 0.0;
    for (double p : dist) {
        if (p < -1e-15) throw std::invalid_argument("shannon_entropy: negative probability");
        sum += p;
        h += plogp(p);
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("shannon_entropy: distribution not normalized");
    return h;
}

double mutual_information(const AttackOutcome& o) {
    const int n = o.n;
    const std::uint32_t dim = 1u << n;
    const std::uint32_t ne = 1u << o.num_eve_bits();
    const double pa = 1.0 / dim;       // uniform p(a | alpha)
    const double palpha = 1.0 / dim;   // uniform weight per basis string

    double h_e = 0.0, h_ae = 0.0;
    std::vector<double> pe(ne);
    for (std::uint32_t alpha = 0; alpha < dim; ++alpha) {
        std::fill(pe.begin(), pe.end(), 0.0);
        for (std::uint32_t a = 0; a < dim; ++a)
            for (std::uint32_t e = 0; e < ne; ++e) {
                const double p = pa * o.joint_at(alpha, a, e);
                pe[e] += p;
                h_ae += palpha * plogp(p);
            }
        for (std::uint32_t e = 0; e < ne; ++e) h_e += palpha * plogp(pe[e]);
    }
    return (n + h_e - h_ae) / n;
}

double qber(const AttackOutcome& o) {
    double total = 0.0;
    for (int j = 0; j < o.n; ++j) {
        double qj = 0.0;
        for (int b = 0; b < 2; ++b)
            for (int a = 0; a < 2; ++a) qj += o.flip[(j * 2 + b) * 2 + a];
        total += qj / 4.0;
    }
    return total / o.n;
}

MetricsReport compute_metrics(const AttackOutcome& outcome, double xi) {
    MetricsReport r;
    r.info = mutual_information(outcome);
    r.qber = qber(outcome);
    r.ratio_defined = r.qber > 0.0;
    r.ratio = r.ratio_defined ? r.info / r.qber : 0.0;
    return apply_fraction(r, xi);
}

MetricsReport apply_fraction(const MetricsReport& report, double xi) {
    if (xi < 0.0 || xi > 1.0) throw std::invalid_argument("apply_fraction: xi out of [0,1]");
    MetricsReport r = report;
    r.xi = xi;
    r.info_scaled = xi * r.info;
    r.qber_scaled = xi * r.qber;
    return r;
}

BoundDecomposition bound_decomposition(const AttackOutcome& o) {
    if (o.num_eve_bits() != o.n)
        throw std::invalid_argument("bound_decomposition: requires full interception");
    const int n = o.n;
    const std::uint32_t dim = 1u << n;
    const std::uint32_t ne = 1u << n;
    const std::uint32_t ne1 = ne >> 1;  // E1 = all but the last-measured bit
    const double pa = 1.0 / dim, palpha = 1.0 / dim;

    double h_ae = 0.0, h_ae1 = 0.0, h_e1 = 0.0;
    std::vector<double> p_ae1(static_cast<std::size_t>(dim) * ne1);
    std::vector<double> p_e1(ne1);
    for (std::uint32_t alpha = 0; alpha < dim; ++alpha) {
        std::fill(p_ae1.begin(), p_ae1.end(), 0.0);
        std::fill(p_e1.begin(), p_e1.end(), 0.0);
        for (std::uint32_t a = 0; a < dim; ++a)
            for (std::uint32_t e = 0; e < ne; ++e) {
                const double p = pa * o.joint_at(alpha, a, e);
                h_ae += palpha * plogp(p);
                p_ae1[a * ne1 + (e >> 1)] += p;
            }
        for (std::uint32_t a = 0; a < dim; ++a)
            for (std::uint32_t e1 = 0; e1 < ne1; ++e1) {
                h_ae1 += palpha * plogp(p_ae1[a * ne1 + e1]);
                p_e1[e1] += p_ae1[a * ne1 + e1];
            }
        for (std::uint32_t e1 = 0; e1 < ne1; ++e1) h_e1 += palpha * plogp(p_e1[e1]);
    }

    BoundDecomposition d;
    d.info_first = (n + h_e1 - h_ae1) / n;
    d.h_last = h_ae - h_ae1;
    d.info_total = mutual_information(o);
    return d;
}

MetricsReport bb84_reduction_check(int num_qubits, const EveStrategy& strategy) {
    AttackOutcome out = enumerate_attack(GateSpec::identity(num_qubits), strategy);
    return compute_metrics(out, strategy.xi);
}

std::string MetricsReport::csv_header() { return "gate_spec,strategy,xi,info,qber,ratio"; }

std::string MetricsReport::csv_row(const std::string& gate_spec, const std::string& strategy) const {
    char buf[64];
    std::ostringstream os;
    os << csv_quote(gate_spec) << ',' << csv_quote(strategy) << ',';
    std::snprintf(buf, sizeof buf, "%.10g", xi);
    os << buf << ',';
    std::snprintf(buf, sizeof buf, "%.12g", info);
    os << buf << ',';
    std::snprintf(buf, sizeof buf, "%.12g", qber);
    os << buf << ',';
    if (ratio_defined) {
        std::snprintf(buf, sizeof buf, "%.12g", ratio);
        os << buf;
    } else {
        os << "undefined";
    }
    return os.str();
}

}  // namespace qkd
