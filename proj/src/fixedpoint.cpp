#include "slopecalc/fixedpoint.hpp"

#include <cmath>

namespace slopecalc {

namespace {

void check_problem(const ContractionProblem& p) {
    if (!(p.contraction_constant > 0.0 && p.contraction_constant < 1.0))
        throw std::invalid_argument("ContractionProblem: L must lie in (0, 1)");
    if (p.x_box.dim() != p.x_dim || p.lambda_box.dim() != p.lambda_dim)
        throw std::invalid_argument("ContractionProblem: box dimensions inconsistent");
}

void check_lambda(const ContractionProblem& p, const Vector& lambda) {
    if (lambda.dim() != p.lambda_dim)
        throw std::invalid_argument("fixedpoint: parameter dimension mismatch");
    if (!p.lambda_box.contains(lambda))
        throw std::domain_error("fixedpoint: parameter outside lambda box");
}

}  // namespace

DiffFunction product_function(const ContractionProblem& p) {
    const int n = p.x_dim, m = p.lambda_dim;
    auto f = p.f;
    std::function<LinOp(const Vector&)> jac;
    if (p.dx && p.dlambda) {
        auto dx = p.dx;
        auto dl = p.dlambda;
        jac = [n, m, dx, dl](const Vector& w) {
            const Vector x = slice(w, 0, n);
            const Vector lam = slice(w, n, n + m);
            const LinOp jx = dx(x, lam);
            const LinOp jl = dl(x, lam);
            LinOp full(jx.rows(), n + m);
            for (int i = 0; i < jx.rows(); ++i) {
                for (int j = 0; j < n; ++j) full(i, j) = jx(i, j);
                for (int j = 0; j < m; ++j) full(i, n + j) = jl(i, j);
            }
            return full;
        };
    }
    return DiffFunction{
        n + m, n,
        [n, m, f](const Vector& w) { return f(slice(w, 0, n), slice(w, n, n + m)); },
        std::move(jac), Box(concat(p.x_box.lo, p.lambda_box.lo), concat(p.x_box.hi, p.lambda_box.hi))};
}

std::pair<LinOp, LinOp> partials(const ContractionProblem& p, const Vector& x, const Vector& lambda) {
    if (p.dx && p.dlambda) return {p.dx(x, lambda), p.dlambda(x, lambda)};
    const DiffFunction prod = product_function(p);
    const LinOp full = derivative_oracle(prod, concat(x, lambda));
    return {block_columns(full, 0, p.x_dim), block_columns(full, p.x_dim, p.x_dim + p.lambda_dim)};
}

FixedPointResult solve_from(const ContractionProblem& p, const Vector& lambda, const Vector& start) {
    check_problem(p);
    check_lambda(p, lambda);
    if (start.dim() != p.x_dim) throw std::invalid_argument("solve: start dimension mismatch");

    const double l = p.contraction_constant;
    const double step_tol = p.tol * (1.0 - l) / l;
    const int cap = static_cast<int>(std::ceil(std::log(p.tol) / std::log(l))) + 100;

    Vector x = start;
    for (int it = 1; it <= cap; ++it) {
        const Vector next = p.f(x, lambda);
        const double step = norm2(next - x);
        x = next;
        if (step <= step_tol) {
            const double residual = norm2(p.f(x, lambda) - x);
            if (residual <= p.tol) return FixedPointResult{x, it, residual, std::nullopt, 0};
            // Step rule fired but the residual is not yet certified; keep going.
        }
    }
    throw std::runtime_error(
        "solve: iteration cap exceeded; the contraction hypothesis appears violated");
}

FixedPointResult solve(const ContractionProblem& p, const Vector& lambda) {
    return solve_from(p, lambda, p.x_box.center());
}

FixedPointResult solve_with_sensitivity(const ContractionProblem& p, const Vector& lambda) {
    FixedPointResult r = solve(p, lambda);
    r.sensitivity = sensitivity(p, lambda, SensitivityMethod::neumann, &r.neumann_terms);
    return r;
}

ContinuityBoundReport continuity_bound(const ContractionProblem& p, const Vector& lambda,
                                       const Vector& mu) {
    const FixedPointResult a = solve(p, lambda);
    const FixedPointResult b = solve(p, mu);
    ContinuityBoundReport rep{0.0, 0.0, false, a.x, b.x};
    rep.lhs = norm2(b.x - a.x);
    rep.rhs = norm2(p.f(a.x, mu) - p.f(a.x, lambda)) / (1.0 - p.contraction_constant);
    rep.holds = rep.lhs <= rep.rhs + 1e-9 * (1.0 + rep.rhs);
    return rep;
}

LinOp sensitivity(const ContractionProblem& p, const Vector& lambda, SensitivityMethod method,
                  int* neumann_terms) {
    const FixedPointResult fp = solve(p, lambda);
    const auto [jx, jl] = partials(p, fp.x, lambda);

    if (method == SensitivityMethod::direct) {
        if (neumann_terms) *neumann_terms = 0;
        return lu_solve(LinOp::identity(p.x_dim) - jx, jl);
    }

    const int k_max =
        static_cast<int>(std::ceil(std::log(1e-14) / std::log(p.contraction_constant))) + 8;
    LinOp sum = jl;
    LinOp term = jl;
    for (int k = 1; k <= k_max; ++k) {
        term = jx * term;
        sum = sum + term;
        if (spectral_norm(term) < 1e-14) {
            if (neumann_terms) *neumann_terms = k + 1;
            return sum;
        }
    }
    throw std::runtime_error(
        "sensitivity: Neumann series did not converge; ||D_x f|| >= 1 at the fixed point");
}

LinOp fixed_point_slope(const ContractionProblem& p, const Vector& lambda, const Vector& mu) {
    check_problem(p);
    check_lambda(p, lambda);
    check_lambda(p, mu);

    const Vector x_lambda = solve(p, lambda).x;
    const Vector x_mu = solve(p, mu).x;

    const DiffFunction prod = product_function(p);
    const SlopeOp full = canonical_slope(prod, concat(x_lambda, mu), Euclidean{});
    const SlopeOp phi1 = partial_slope(full, 1, p.x_dim);
    const SlopeOp phi2 = partial_slope(full, 2, p.x_dim);

    const LinOp phi1_at = phi1.eval(x_mu);
    if (spectral_norm(phi1_at) >= 1.0)
        throw std::domain_error(
            "fixed_point_slope: ||Phi_1|| >= 1; mu is outside the contraction neighbourhood");
    const LinOp phi2_at = phi2.eval(lambda);
    return lu_solve(LinOp::identity(p.x_dim) - phi1_at, phi2_at);
}

double find_slope_radius(const ContractionProblem& p, const Vector& lambda) {
    check_problem(p);
    check_lambda(p, lambda);
    double delta = 0.1 * p.lambda_box.max_width();
    for (int halvings = 0; halvings < 60; ++halvings) {
        bool ok = true;
        for (int j = 0; j < p.lambda_dim && ok; ++j) {
            for (double sgn : {-1.0, 1.0}) {
                Vector mu = lambda;
                mu[j] += sgn * delta;
                if (!p.lambda_box.contains(mu)) {
                    ok = false;
                    break;
                }
                try {
                    fixed_point_slope(p, lambda, mu);
                } catch (const std::domain_error&) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) return delta;
        delta *= 0.5;
    }
    throw std::runtime_error("find_slope_radius: no admissible radius found");
}

}  // namespace slopecalc
