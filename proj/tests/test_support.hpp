#pragma once

#include <cmath>
#include <vector>

#include "slopecalc/analysis.hpp"
#include "slopecalc/rng.hpp"
#include "slopecalc/slope.hpp"

namespace testsupport {

using namespace slopecalc;

// Independent derivative oracle: plain central differences, no Richardson,
// deliberately separate from the library's finite-difference path.
inline LinOp fd_jacobian(const DiffFunction& f, const Vector& x, double h = 1e-6) {
    LinOp d(f.dim_out, f.dim_in);
    for (int k = 0; k < f.dim_in; ++k) {
        Vector xp = x, xm = x;
        xp[k] += h;
        xm[k] -= h;
        const Vector diff = f(xp) - f(xm);
        for (int i = 0; i < f.dim_out; ++i) d(i, k) = diff[i] / (2.0 * h);
    }
    return d;
}

// Brute-force operator norm over a fine grid of the unit sphere (n <= 3).
// The grid max is a lower bound with O(step^2) defect, so the step is chosen
// well below the 1e-4 comparison tolerance.
inline double brute_force_opnorm(const LinOp& a) {
    const int n = a.cols();
    double best = 0.0;
    auto consider = [&](const Vector& v) {
        const double nv = norm2(v);
        if (nv > 0) best = std::max(best, norm2(a.apply(v)) / nv);
    };
    if (n == 1) {
        consider(Vector{1.0});
    } else if (n == 2) {
        const int grid = 4000;
        for (int i = 0; i < grid; ++i) {
            const double th = 2.0 * M_PI * i / grid;
            consider(Vector{std::cos(th), std::sin(th)});
        }
    } else {
        const int phis = 500, thetas = 1000;
        for (int i = 0; i <= phis; ++i) {
            const double ph = M_PI * i / phis;
            for (int j = 0; j < thetas; ++j) {
                const double th = 2.0 * M_PI * j / thetas;
                consider(Vector{std::sin(ph) * std::cos(th), std::sin(ph) * std::sin(th),
                                std::cos(ph)});
            }
        }
    }
    return best;
}

inline double identity_residual(const DiffFunction& f, const Vector& x, const LinOp& phi_xy,
                                const Vector& y) {
    const Vector lhs = f(y) - f(x);
    return norm2(lhs - phi_xy.apply(y - x)) / (1.0 + norm2(lhs));
}

// Dyadic tail test of continuity at the base: the last `tail` moduli along
// t = 2^-k must be non-increasing and the final one below the threshold.
inline bool continuity_tail(const SlopeOp& phi, const Vector& z, double threshold, int k_max = 20,
                            int tail = 5) {
    std::vector<double> m;
    const LinOp diag = phi.diagonal();
    for (int k = 1; k <= k_max; ++k)
        m.push_back(spectral_norm(phi.eval(phi.base() + std::ldexp(1.0, -k) * z) - diag));
    for (int k = k_max - tail + 1; k < k_max; ++k)
        if (m[static_cast<std::size_t>(k)] > m[static_cast<std::size_t>(k - 1)] + 1e-15) return false;
    return m.back() <= threshold;
}

// Pair (x, y) with the ball around x through y inside the box, mirroring the
// CLI sampler but local to the tests.
inline std::pair<Vector, Vector> sample_pair(Rng& rng, const Box& box) {
    std::vector<double> v(static_cast<std::size_t>(box.dim()));
    for (int i = 0; i < box.dim(); ++i) {
        const double w = box.hi[i] - box.lo[i];
        v[static_cast<std::size_t>(i)] = rng.uniform(box.lo[i] + 0.25 * w, box.hi[i] - 0.25 * w);
    }
    Vector x(std::move(v));
    const double len = box.min_margin(x) * (1e-3 + 0.85 * rng.uniform());
    return {x, x + len * rng.unit_vector(box.dim())};
}

}  // namespace testsupport
