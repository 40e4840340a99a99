#include "slopecalc/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "slopecalc/rng.hpp"

namespace slopecalc {

SegmentSampling SegmentSampling::uniform(int count) {
    if (count < 1) throw std::invalid_argument("SegmentSampling: count must be >= 1");
    std::vector<double> t(static_cast<std::size_t>(count));
    for (int k = 1; k <= count; ++k)
        t[static_cast<std::size_t>(k - 1)] = static_cast<double>(k) / (count + 1);
    return SegmentSampling{std::move(t)};
}

MviReport mvi_witness(const DiffFunction& f, const Vector& x, const Vector& y, const LinOp& a,
                      const SegmentSampling& sampling) {
    if (norm2(y - x) == 0.0) throw std::invalid_argument("mvi_witness: x == y");
    const Vector d = y - x;
    const Vector ad = a.apply(d);

    MviReport rep;
    rep.lhs = norm2(f(y) - f(x) - ad);
    for (double t : sampling.t_values) {
        const Vector c = x + t * d;
        if (!f.domain.contains(c)) throw std::domain_error("mvi_witness: segment exits domain");
        const double rhs = norm2(derivative_oracle(f, c).apply(d) - ad);
        if (rhs > rep.max_rhs) {
            rep.max_rhs = rhs;
            rep.max_rhs_t = t;
        }
        if (!rep.witness_found && rhs >= rep.lhs - 1e-9) {
            rep.witness_found = true;
            rep.t = t;
            rep.rhs = rhs;
        }
    }
    return rep;
}

SlopeBoundReport canonical_slope_bound_check(const DiffFunction& f, const Vector& x, const Vector& y,
                                             const LinOp& a, const NormSpec& spec,
                                             const SegmentSampling& sampling) {
    const SlopeOp phi = canonical_slope(f, x, spec);
    const LinOp dfx = phi.diagonal();
    const double base_term = spectral_norm(dfx - a);

    SlopeBoundReport rep;
    rep.lhs = spectral_norm(phi.eval(y) - a);
    bool first = true;
    const Vector d = y - x;
    for (double t : sampling.t_values) {
        const Vector c = x + t * d;
        if (!f.domain.contains(c))
            throw std::domain_error("canonical_slope_bound_check: segment exits domain");
        const double rhs = spectral_norm(derivative_oracle(f, c) - dfx) + base_term;
        if (first || rhs < rep.best_rhs) {
            rep.best_rhs = rhs;
            rep.best_t = t;
            first = false;
        }
        if (rep.lhs <= rhs + 1e-8) rep.holds = true;
    }
    return rep;
}

const char* to_string(ProbeVerdict v) {
    switch (v) {
        case ProbeVerdict::converging: return "converging";
        case ProbeVerdict::non_converging: return "non_converging";
        default: return "inconclusive";
    }
}

std::vector<double> default_probe_radii() {
    return {1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
}

namespace {

ProbeVerdict classify(const std::vector<double>& radii, const std::vector<double>& moduli,
                      double noise_floor) {
    const std::size_t n = moduli.size();
    const double first = moduli.front();
    const double last = moduli.back();
    // Moduli at the rounding floor count as converged; the residual term of
    // the canonical slope amplifies eps-level noise by 1/||y-x|| near the
    // diagonal, which would otherwise fake growth for exactly linear maps.
    if (last <= noise_floor) return ProbeVerdict::converging;
    if (n >= 3 && moduli[n - 3] >= moduli[n - 2] && moduli[n - 2] >= moduli[n - 1] &&
        last < 0.1 * first)
        return ProbeVerdict::converging;
    if (radii.front() / radii.back() >= 16.0 && last >= 0.5 * first)
        return ProbeVerdict::non_converging;
    return ProbeVerdict::inconclusive;
}

// Deterministic quasi-random unit direction (Halton + Box-Muller).
Vector halton_direction(std::uint64_t index, int dim, int dim_offset) {
    while (true) {
        std::vector<double> g(static_cast<std::size_t>(dim));
        for (int j = 0; j < dim; ++j) {
            double u1 = halton_dim(index, dim_offset + 2 * j);
            const double u2 = halton_dim(index, dim_offset + 2 * j + 1);
            if (u1 <= 1e-12) u1 = 1e-12;
            g[static_cast<std::size_t>(j)] =
                std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
        }
        Vector v(std::move(g));
        const double n = norm2(v);
        if (n > 1e-9) return (1.0 / n) * v;
        ++index;
    }
}

ContinuityProbeResult probe_impl(const std::function<LinOp(const Vector&, const Vector&)>& value,
                                 const LinOp& reference, const Vector& x0,
                                 const std::vector<double>& radii, int grid_per_radius) {
    if (radii.size() < 2) throw std::invalid_argument("c1_probe: need at least two radii");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] < radii[i - 1]) || !(radii[i] > 0.0))
            throw std::invalid_argument("c1_probe: radii must be positive and decreasing");

    const int n = x0.dim();
    ContinuityProbeResult res;
    res.radii = radii;
    for (double r : radii) {
        double modulus = 0.0;
        auto consider = [&](const Vector& x, const Vector& y) {
            if (norm2(y - x) == 0.0) return;
            modulus = std::max(modulus, spectral_norm(value(x, y) - reference));
        };
        for (int i = 0; i < grid_per_radius; ++i) {
            const auto idx = static_cast<std::uint64_t>(i);
            const double mag = std::max(halton_dim(idx, 0), 1e-6);
            const Vector dir = halton_direction(idx, n, 1);
            switch (i % 4) {
                case 0:  // x-pinned: probes continuity in the first argument
                    consider(x0 + (r * mag) * dir, x0);
                    break;
                case 1:  // y-pinned: continuity in the second argument
                    consider(x0, x0 + (r * mag) * dir);
                    break;
                default: {  // generic pair, y near x
                    const Vector x = x0 + (0.5 * r * mag) * dir;
                    const double step = (i % 4 == 2) ? 1e-3 * r : 0.25 * r;
                    const Vector d2 = halton_direction(idx, n, 1 + 2 * n);
                    consider(x, x + step * d2);
                    break;
                }
            }
        }
        res.moduli.push_back(modulus);
    }
    res.verdict = classify(res.radii, res.moduli, 1e-10 * (1.0 + spectral_norm(reference)));
    return res;
}

}  // namespace

ContinuityProbeResult c1_probe(const DiffFunction& f, const Vector& x0, const NormSpec& spec,
                               const std::vector<double>& radii, int grid_per_radius) {
    if (!f.domain.contains(x0)) throw std::domain_error("c1_probe: x0 outside domain");
    if (f.domain.min_margin(x0) < radii.front())
        throw std::domain_error("c1_probe: ball exits domain at the largest radius");
    const LinOp reference = derivative_oracle(f, x0);
    auto value = [&f, &spec](const Vector& x, const Vector& y) {
        return canonical_slope(f, x, spec).eval(y);
    };
    return probe_impl(value, reference, x0, radii, grid_per_radius);
}

ContinuityProbeResult c1_probe_family(const SlopeFamily& family, const LinOp& derivative_at_x0,
                                      const Vector& x0, const std::vector<double>& radii,
                                      int grid_per_radius) {
    auto value = [&family](const Vector& x, const Vector& y) { return family(x, y); };
    return probe_impl(value, derivative_at_x0, x0, radii, grid_per_radius);
}

std::vector<double> default_schwarz_s_values() {
    return {1e-1, 5e-2, 2e-2, 1e-2, 5e-3, 2e-3, 1e-3};
}

namespace {

// Compensated sum of four doubles. After canonical ordering the result is
// independent of the order the terms were supplied in.
double exact_sum4(std::array<double, 4> t) {
    std::sort(t.begin(), t.end(), [](double a, double b) {
        const double fa = std::fabs(a), fb = std::fabs(b);
        return fa > fb || (fa == fb && a > b);
    });
    double s = 0.0, comp = 0.0;
    for (double x : t) {
        const double sum = s + x;
        const double bp = sum - s;
        comp += (s - (sum - bp)) + (x - bp);
        s = sum;
    }
    return s + comp;
}

// Double difference for one argument order. Probe points are formed as
// x + (s*a + s*b) componentwise, which is symmetric under swapping a and b.
Vector double_difference(const DiffFunction& f, const Vector& x, const Vector& a, const Vector& b,
                         double s) {
    const int n = x.dim();
    std::vector<double> pab(static_cast<std::size_t>(n)), pa(static_cast<std::size_t>(n)),
        pb(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double sa = s * a[i], sb = s * b[i];
        pab[static_cast<std::size_t>(i)] = x[i] + (sa + sb);
        pa[static_cast<std::size_t>(i)] = x[i] + sa;
        pb[static_cast<std::size_t>(i)] = x[i] + sb;
    }
    const Vector fab = f(Vector(std::move(pab)));
    const Vector fa = f(Vector(std::move(pa)));
    const Vector fb = f(Vector(std::move(pb)));
    const Vector f0 = f(x);

    std::vector<double> e(static_cast<std::size_t>(f.dim_out));
    for (int i = 0; i < f.dim_out; ++i)
        e[static_cast<std::size_t>(i)] = exact_sum4({fab[i], -fa[i], -fb[i], f0[i]}) / (s * s);
    return Vector(std::move(e));
}

}  // namespace

SchwarzResult schwarz_limit(const DiffFunction& f, const Vector& x, const Vector& u, const Vector& v,
                            const std::vector<double>& s_values) {
    if (s_values.empty()) throw std::invalid_argument("schwarz_limit: empty s grid");
    for (std::size_t i = 1; i < s_values.size(); ++i)
        if (!(s_values[i] < s_values[i - 1]) || !(s_values[i] > 0.0))
            throw std::invalid_argument("schwarz_limit: s values must be positive and decreasing");

    SchwarzResult res;
    res.s_values = s_values;
    for (double s : s_values) {
        res.e_uv.push_back(double_difference(f, x, u, v, s));
        res.e_vu.push_back(double_difference(f, x, v, u, s));
    }
    res.final_gap = norm2(res.e_uv.back() - res.e_vu.back());
    return res;
}

LipschitzReport lipschitz_check(const DiffFunction& f, double lipschitz_constant,
                                const std::vector<Vector>& xs) {
    LipschitzReport rep;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double on = spectral_norm(derivative_oracle(f, xs[i]));
        rep.max_opnorm = std::max(rep.max_opnorm, on);
        if (on > lipschitz_constant + 1e-9) {
            rep.forward_ok = false;
            rep.violations.push_back({true, static_cast<int>(i), on, lipschitz_constant});
        }
    }
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const double lhs = norm2(f(xs[i + 1]) - f(xs[i]));
        const double rhs = rep.max_opnorm * norm2(xs[i + 1] - xs[i]) * (1.0 + 1e-9);
        if (lhs > rhs) {
            rep.converse_ok = false;
            rep.violations.push_back({false, static_cast<int>(i), lhs, rhs});
        }
    }
    return rep;
}

DirectionalLimitResult directional_limit(const DiffFunction& f, const SlopeOp& phi, const Vector& z,
                                         const std::vector<double>& t_values) {
    const Vector& x = phi.base();
    DirectionalLimitResult res;
    res.t_values = t_values;
    if (norm2(z) == 0.0) {
        for (std::size_t i = 0; i < t_values.size(); ++i) res.values.push_back(Vector::zeros(phi.dim_out()));
        return res;
    }
    for (double t : t_values) {
        if (!(t > 0.0)) throw std::invalid_argument("directional_limit: t must be positive");
        const Vector y = x + t * z;
        if (!f.domain.contains(y)) throw std::domain_error("directional_limit: probe exits domain");
        const Vector zhat = (1.0 / t) * (y - x);  // realized direction
        const Vector value = phi.eval(y).apply(zhat);
        const Vector quotient = (1.0 / t) * (f(y) - f(x));
        const double gap = norm2(value - quotient);
        res.max_identity_gap = std::max(res.max_identity_gap, gap);
        if (gap > 1e-10 * (1.0 + norm2(quotient)))
            throw std::runtime_error("directional_limit: slope identity violated along the ray");
        res.values.push_back(value);
    }
    return res;
}

}  // namespace slopecalc
