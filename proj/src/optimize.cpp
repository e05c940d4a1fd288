#include "qkd/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <random>
#include <stdexcept>

namespace qkd {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_2pi(double x) {
    double r = std::fmod(x, kTwoPi);
    if (r < 0) r += kTwoPi;
    return r;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double eve_objective_value(const GateSpec& gate, const std::vector<int>& intercept_set,
                           const std::vector<double>& x, EveObjective objective,
                           MetricsReport* report_out = nullptr) {
    std::vector<std::pair<double, double>> angles(intercept_set.size());
    for (std::size_t k = 0; k < intercept_set.size(); ++k)
        angles[k] = {wrap_2pi(x[2 * k]), wrap_2pi(x[2 * k + 1])};
    const AttackOutcome out =
        enumerate_attack(gate, EveStrategy::with_angles(intercept_set, std::move(angles)));
    const MetricsReport r = compute_metrics(out);
    if (report_out) *report_out = r;
    if (objective == EveObjective::Info) return r.info;
    // qber == 0 points score 0: no disturbance means no information under IR.
    return r.ratio_defined ? r.ratio : 0.0;
}

}  // namespace

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, const OptimizationConfig& cfg) {
    const std::size_t d = x0.size();
    if (d == 0) throw std::invalid_argument("nelder_mead: empty start point");

    std::vector<std::vector<double>> pts(d + 1, x0);
    for (std::size_t i = 0; i < d; ++i) pts[i + 1][i] += cfg.initial_step;
    std::vector<double> vals(d + 1);
    for (std::size_t i = 0; i <= d; ++i) vals[i] = f(pts[i]);

    auto order = [&] {
        std::vector<std::size_t> idx(d + 1);
        for (std::size_t i = 0; i <= d; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return vals[a] < vals[b]; });
        std::vector<std::vector<double>> np(d + 1);
        std::vector<double> nv(d + 1);
        for (std::size_t i = 0; i <= d; ++i) {
            np[i] = std::move(pts[idx[i]]);
            nv[i] = vals[idx[i]];
        }
        pts = std::move(np);
        vals = std::move(nv);
    };

    int iter = 0;
    for (; iter < cfg.max_iterations; ++iter) {
        order();
        if (vals[d] - vals[0] < cfg.tolerance_f) break;
        double diam = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            diam = std::max(diam, std::abs(pts[d][i] - pts[0][i]));
        if (diam < cfg.tolerance_x) break;

        std::vector<double> centroid(d, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) centroid[j] += pts[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(d);

        auto at = [&](double t) {
            std::vector<double> p(d);
            for (std::size_t j = 0; j < d; ++j) p[j] = centroid[j] + t * (pts[d][j] - centroid[j]);
            return p;
        };

        std::vector<double> xr = at(-1.0);
        const double fr = f(xr);
        if (fr < vals[0]) {
            std::vector<double> xe = at(-2.0);
            const double fe = f(xe);
            if (fe < fr) {
                pts[d] = std::move(xe);
                vals[d] = fe;
            } else {
                pts[d] = std::move(xr);
                vals[d] = fr;
            }
        } else if (fr < vals[d - 1]) {
            pts[d] = std::move(xr);
            vals[d] = fr;
        } else {
            const bool outside = fr < vals[d];
            std::vector<double> xc = at(outside ? -0.5 : 0.5);
            const double fc = f(xc);
            if (fc < std::min(fr, vals[d])) {
                pts[d] = std::move(xc);
                vals[d] = fc;
            } else {
                // shrink toward the best vertex
                for (std::size_t i = 1; i <= d; ++i) {
                    for (std::size_t j = 0; j < d; ++j)
                        pts[i][j] = pts[0][j] + 0.5 * (pts[i][j] - pts[0][j]);
                    vals[i] = f(pts[i]);
                }
            }
        }
    }
    order();
    return {pts[0], vals[0], iter};
}

EveOptimum optimize_eve(const GateSpec& gate, const std::vector<int>& intercept_set,
                        const OptimizationConfig& cfg, EveObjective objective) {
    if (intercept_set.empty()) throw std::invalid_argument("optimize_eve: empty intercept set");
    const std::size_t d = 2 * intercept_set.size();

    auto run_restart = [&](int index) {
        std::mt19937_64 rng(splitmix64(cfg.seed ^ static_cast<std::uint64_t>(index)));
        std::uniform_real_distribution<double> uni(0.0, kTwoPi);
        std::vector<double> x0(d);
        for (double& v : x0) v = uni(rng);
        auto f = [&](const std::vector<double>& x) {
            return -eve_objective_value(gate, intercept_set, x, objective);
        };
        return nelder_mead(f, std::move(x0), cfg);
    };

    std::vector<std::future<SimplexResult>> futures;
    futures.reserve(cfg.restarts);
    for (int r = 0; r < cfg.restarts; ++r)
        futures.push_back(std::async(std::launch::async, run_restart, r));

    SimplexResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (auto& fut : futures) {
        SimplexResult res = fut.get();
        if (res.value < best.value) best = std::move(res);
    }

    EveOptimum opt;
    opt.intercept_set = intercept_set;
    opt.value = eve_objective_value(gate, intercept_set, best.x, objective, &opt.report);
    opt.angles.resize(intercept_set.size());
    for (std::size_t k = 0; k < intercept_set.size(); ++k)
        opt.angles[k] = {wrap_2pi(best.x[2 * k]), wrap_2pi(best.x[2 * k + 1])};
    return opt;
}

GateOptimum optimize_gate(const OptimizationConfig& outer, const OptimizationConfig& inner) {
    auto defended_value = [&](const std::vector<double>& cv) {
        const GateSpec gate =
            GateSpec::make_cartan({wrap_2pi(cv[0]), wrap_2pi(cv[1]), wrap_2pi(cv[2])});
        const EveOptimum both = optimize_eve(gate, {0, 1}, inner);
        const EveOptimum one = optimize_eve(gate, {0}, inner);
        return std::max(both.value, one.value);
    };

    SimplexResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (int r = 0; r < outer.restarts; ++r) {
        std::mt19937_64 rng(splitmix64(outer.seed ^ static_cast<std::uint64_t>(r)));
        std::uniform_real_distribution<double> uni(0.0, kTwoPi);
        std::vector<double> c0 = {uni(rng), uni(rng), uni(rng)};
        SimplexResult res = nelder_mead(defended_value, std::move(c0), outer);
        if (res.value < best.value) best = std::move(res);
    }

    GateOptimum opt;
    opt.c = {wrap_2pi(best.x[0]), wrap_2pi(best.x[1]), wrap_2pi(best.x[2])};
    const GateSpec gate = GateSpec::make_cartan(opt.c);
    EveOptimum both = optimize_eve(gate, {0, 1}, inner);
    EveOptimum one = optimize_eve(gate, {0}, inner);
    opt.inner = (both.value >= one.value) ? std::move(both) : std::move(one);
    opt.value = opt.inner.value;
    return opt;
}

std::vector<CartanSweepPoint> sweep_cartan(int points_per_axis, CartanEveMode mode) {
    if (points_per_axis < 1) throw std::invalid_argument("sweep_cartan: bad grid");
    const EveStrategy eve = (mode == CartanEveMode::BothZ)
                                ? EveStrategy::z_basis(2)
                                : EveStrategy::with_angles({0}, {{0.0, 0.0}});
    std::vector<double> axis;
    if (points_per_axis == 1) {
        axis.push_back(0.0);
    } else {
        for (int k = 0; k < points_per_axis; ++k)
            axis.push_back(kTwoPi * k / (points_per_axis - 1));
    }
    std::vector<CartanSweepPoint> out;
    out.reserve(axis.size() * axis.size() * axis.size());
    for (double c1 : axis)
        for (double c2 : axis)
            for (double c3 : axis) {
                CartanSweepPoint p;
                p.c = {c1, c2, c3};
                const MetricsReport r =
                    compute_metrics(enumerate_attack(GateSpec::make_cartan(p.c), eve));
                p.info = r.info;
                p.qber = r.qber;
                out.push_back(p);
            }
    return out;
}

std::vector<EveSweepPoint> sweep_eve(const GateSpec& gate, int points_per_axis, EveSweepMode mode) {
    if (points_per_axis < 2) throw std::invalid_argument("sweep_eve: bad grid");
    std::vector<double> axis;
    for (int k = 0; k < points_per_axis; ++k) axis.push_back(kTwoPi * k / (points_per_axis - 1));
    const int dims = (mode == EveSweepMode::Both) ? 4 : 2;
    std::vector<EveSweepPoint> out;
    std::vector<int> idx(dims, 0);
    for (;;) {
        EveSweepPoint p;
        for (int k = 0; k < dims; ++k) p.angles.push_back(axis[idx[k]]);
        EveStrategy eve = (mode == EveSweepMode::Both)
                              ? EveStrategy::with_angles({0, 1}, {{p.angles[0], p.angles[1]},
                                                                  {p.angles[2], p.angles[3]}})
                              : EveStrategy::with_angles({0}, {{p.angles[0], p.angles[1]}});
        const MetricsReport r = compute_metrics(enumerate_attack(gate, eve));
        p.info = r.info;
        p.qber = r.qber;
        out.push_back(std::move(p));
        int k = dims - 1;
        while (k >= 0 && ++idx[k] == points_per_axis) idx[k--] = 0;
        if (k < 0) break;
    }
    return out;
}

}  // namespace qkd
