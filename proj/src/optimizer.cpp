#include "qmono/optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qmono {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Fold an unconstrained (t, p) point back into [0, pi] x [0, 2pi):
// p is periodic, t reflects at both ends of its range.
MeasurementBasis canonical(double t, double p) {
    t = std::fmod(t, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    if (t > kPi) t = kTwoPi - t;
    p = std::fmod(p, kTwoPi);
    if (p < 0.0) p += kTwoPi;
    return MeasurementBasis{t, p};
}

struct Point {
    double t, p, f;
};

}  // namespace

void OptimizerConfig::validate() const {
    if (grid_t < 8) throw std::invalid_argument("OptimizerConfig: grid_t must be >= 8");
    if (grid_p < 16) throw std::invalid_argument("OptimizerConfig: grid_p must be >= 16");
    if (!(refine_tol > 0.0) || refine_tol > 1e-4) {
        throw std::invalid_argument("OptimizerConfig: refine_tol must be in (0, 1e-4]");
    }
    if (max_iters < 1) throw std::invalid_argument("OptimizerConfig: max_iters must be >= 1");
}

OptResult minimize_over_basis(const std::function<double(const MeasurementBasis&)>& obj,
                              const OptimizerConfig& cfg) {
    cfg.validate();

    long evals = 0;
    double best_f = std::numeric_limits<double>::infinity();
    MeasurementBasis best_arg{};
    auto eval = [&](double t, double p) {
        const MeasurementBasis b = canonical(t, p);
        const double f = obj(b);
        ++evals;
        if (f < best_f) {
            best_f = f;
            best_arg = b;
        }
        return f;
    };

    // Coarse lattice: t includes both poles, p is periodic.
    std::vector<Point> grid;
    grid.reserve(static_cast<size_t>(cfg.grid_t) * cfg.grid_p);
    for (int i = 0; i < cfg.grid_t; ++i) {
        const double t = kPi * i / (cfg.grid_t - 1);
        for (int j = 0; j < cfg.grid_p; ++j) {
            const double p = kTwoPi * j / cfg.grid_p;
            grid.push_back({t, p, eval(t, p)});
        }
    }
    std::partial_sort(grid.begin(), grid.begin() + 3, grid.end(),
                      [](const Point& a, const Point& b) { return a.f < b.f; });

    const double dt = 0.5 * kPi / (cfg.grid_t - 1);
    const double dp = 0.5 * kTwoPi / cfg.grid_p;
    bool best_converged = false;
    double best_run_f = std::numeric_limits<double>::infinity();

    // Nelder-Mead in the unconstrained plane; evaluation folds the domain.
    for (int seed_idx = 0; seed_idx < 3; ++seed_idx) {
        std::array<Point, 3> s;
        const Point& g = grid[seed_idx];
        s[0] = g;
        s[1] = {g.t + dt, g.p, eval(g.t + dt, g.p)};
        s[2] = {g.t, g.p + dp, eval(g.t, g.p + dp)};

        bool converged = false;
        for (int iter = 0; iter < cfg.max_iters; ++iter) {
            std::sort(s.begin(), s.end(), [](const Point& a, const Point& b) { return a.f < b.f; });
            if (s[2].f - s[0].f <= cfg.refine_tol) {
                converged = true;
                break;
            }
            const double ct = 0.5 * (s[0].t + s[1].t);
            const double cp = 0.5 * (s[0].p + s[1].p);

            const double rt = ct + (ct - s[2].t), rp = cp + (cp - s[2].p);
            const double fr = eval(rt, rp);
            if (fr < s[0].f) {
                const double et = ct + 2.0 * (ct - s[2].t), ep = cp + 2.0 * (cp - s[2].p);
                const double fe = eval(et, ep);
                s[2] = fe < fr ? Point{et, ep, fe} : Point{rt, rp, fr};
            } else if (fr < s[1].f) {
                s[2] = {rt, rp, fr};
            } else {
                const bool outside = fr < s[2].f;
                const double xt = outside ? ct + 0.5 * (rt - ct) : ct + 0.5 * (s[2].t - ct);
                const double xp = outside ? cp + 0.5 * (rp - cp) : cp + 0.5 * (s[2].p - cp);
                const double fx = eval(xt, xp);
                if (fx < std::min(fr, s[2].f)) {
                    s[2] = {xt, xp, fx};
                } else {
                    // Shrink toward the best vertex.
                    for (int k = 1; k < 3; ++k) {
                        s[k].t = s[0].t + 0.5 * (s[k].t - s[0].t);
                        s[k].p = s[0].p + 0.5 * (s[k].p - s[0].p);
                        s[k].f = eval(s[k].t, s[k].p);
                    }
                }
            }
        }
        const double run_f = std::min({s[0].f, s[1].f, s[2].f});
        if (run_f < best_run_f) {
            best_run_f = run_f;
            best_converged = converged;
        }
    }

    return OptResult{best_f, best_arg, evals, best_converged};
}

}  // namespace qmono
