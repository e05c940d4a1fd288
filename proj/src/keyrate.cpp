#include "qkd/keyrate.hpp"

#include <cmath>
#include <stdexcept>

namespace qkd {

double binary_entropy(double q) {
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("binary_entropy: q out of [0,1]");
    if (q == 0.0 || q == 1.0) return 0.0;
    return -q * std::log2(q) - (1.0 - q) * std::log2(1.0 - q);
}

double eve_info_after_ec(const KeyRateInputs& in) {
    if (in.q < 0.0 || in.delta < 0.0) throw std::invalid_argument("eve_info_after_ec: bad inputs");
    switch (in.protocol) {
        case KeyRateProtocol::BB84:
            return 2.0 * in.q + binary_entropy(in.q);
        case KeyRateProtocol::Enhanced2Q:
            return in.s * in.delta * in.q + binary_entropy(in.delta * in.q);
        case KeyRateProtocol::IdealS0:
            return binary_entropy(in.delta * in.q);
    }
    throw std::logic_error("eve_info_after_ec: unknown protocol");
}

double relative_key_rate(const KeyRateInputs& in) { return 1.0 - eve_info_after_ec(in); }

std::optional<double> delta_breakeven(double q, double s) {
    if (q <= 0.0 || q >= 0.5) throw std::invalid_argument("delta_breakeven: q out of (0,0.5)");
    const double r_bb84 = relative_key_rate({q, 1.0, s, KeyRateProtocol::BB84});
    auto diff = [&](double delta) {
        return relative_key_rate({q, delta, s, KeyRateProtocol::Enhanced2Q}) - r_bb84;
    };
    double lo = 1.0;
    double hi = std::nextafter(0.5 / q, 0.0);
    double flo = diff(lo), fhi = diff(hi);
    if (flo == 0.0) return lo;
    if (flo * fhi > 0.0) return std::nullopt;
    for (int it = 0; it < 200 && hi - lo > 1e-9; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = diff(mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

double pns_advantage_bound(double epsilon, int n) {
    if (epsilon < 0.0 || epsilon > 1.0) throw std::invalid_argument("pns bound: epsilon out of [0,1]");
    if (n < 1) throw std::invalid_argument("pns bound: n must be >= 1");
    return std::pow(epsilon, n);
}

std::vector<RateFigureRow> rate_figure_dataset(double q, double s, double delta_min,
                                               double delta_max, int steps) {
    if (steps < 2 || delta_min < 0.0 || delta_max <= delta_min)
        throw std::invalid_argument("rate_figure_dataset: bad delta range");
    std::vector<RateFigureRow> rows;
    rows.reserve(steps);
    const double r_bb84 = relative_key_rate({q, 1.0, s, KeyRateProtocol::BB84});
    for (int i = 0; i < steps; ++i) {
        RateFigureRow row;
        row.delta = delta_min + (delta_max - delta_min) * i / (steps - 1);
        row.r_enhanced = relative_key_rate({q, row.delta, s, KeyRateProtocol::Enhanced2Q});
        row.r_ideal_s0 = relative_key_rate({q, row.delta, s, KeyRateProtocol::IdealS0});
        row.r_bb84 = r_bb84;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace qkd
