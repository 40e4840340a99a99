#pragma once

#include <optional>

#include "slopecalc/calculus.hpp"
#include "slopecalc/slope.hpp"

namespace slopecalc {

/// Parameterized uniform contraction f(., lambda) : x_box -> x_box with a
/// lambda-independent constant L < 1. Analytic partials are optional; absent
/// ones are supplied by finite differences on the product space.
struct ContractionProblem {
    int x_dim = 0;
    int lambda_dim = 0;
    std::function<Vector(const Vector&, const Vector&)> f;
    double contraction_constant = 0.0;  // L in (0, 1)
    Box x_box;
    Box lambda_box;
    double tol = 1e-12;
    std::function<LinOp(const Vector&, const Vector&)> dx;       // optional d/dx
    std::function<LinOp(const Vector&, const Vector&)> dlambda;  // optional d/dlambda
};

struct FixedPointResult {
    Vector x;
    int iterations = 0;
    double residual = 0.0;  // ||f(x, lambda) - x||, certified <= tol
    std::optional<LinOp> sensitivity;
    int neumann_terms = 0;
};

/// f as a function of the stacked variable (x, lambda) on the product box,
/// with the Jacobian assembled from analytic partials when both are present.
DiffFunction product_function(const ContractionProblem& p);

/// Partials (D_x f, D_lambda f) at (x, lambda); analytic if provided, else
/// sliced from the product-space derivative oracle.
std::pair<LinOp, LinOp> partials(const ContractionProblem& p, const Vector& x, const Vector& lambda);

/// Picard iteration from the box center; stops once the step size is below
/// tol * (1-L)/L, which bounds both the distance to the fixed point and the
/// residual by tol. Exceeding the iteration cap signals a violated
/// contraction hypothesis and throws.
FixedPointResult solve(const ContractionProblem& p, const Vector& lambda);
FixedPointResult solve_from(const ContractionProblem& p, const Vector& lambda, const Vector& start);

/// solve() plus the sensitivity field filled in; the result then satisfies
/// [I - D_x f(x_lambda, lambda)] S = D_lambda f(x_lambda, lambda).
FixedPointResult solve_with_sensitivity(const ContractionProblem& p, const Vector& lambda);

/// Continuous dependence: ||x_mu - x_lambda|| <= (1-L)^{-1} ||f(x_lambda, mu)
/// - f(x_lambda, lambda)||, both sides reported.
struct ContinuityBoundReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
    Vector x_lambda;
    Vector x_mu;
};

ContinuityBoundReport continuity_bound(const ContractionProblem& p, const Vector& lambda,
                                       const Vector& mu);

enum class SensitivityMethod { neumann, direct };

/// Derivative of lambda |-> x_lambda:
///   neumann  sum_k (D_x f)^k D_lambda f, truncated when the term norm drops
///            below 1e-14 (valid since ||D_x f|| <= L < 1);
///   direct   solve [I - D_x f] S = D_lambda f.
LinOp sensitivity(const ContractionProblem& p, const Vector& lambda, SensitivityMethod method,
                  int* neumann_terms = nullptr);

/// Two-point slope of the fixed-point map:
///   Psi(lambda, mu) = [I - Phi_1((x_lambda, mu), x_mu)]^{-1} Phi_2((x_lambda, mu), lambda)
/// with the partial slopes cut from a canonical slope on the product space.
/// Satisfies x_mu = x_lambda + Psi(lambda, mu)(mu - lambda); at mu = lambda it
/// equals the sensitivity. Throws when ||Phi_1|| >= 1 (mu outside the
/// contraction neighbourhood; shrink mu - lambda).
LinOp fixed_point_slope(const ContractionProblem& p, const Vector& lambda, const Vector& mu);

/// Largest radius delta (found by halving from 0.1 * lambda-box width) such
/// that the coordinate probes mu = lambda +- delta e_j all keep
/// ||Phi_1|| < 1 and stay inside the lambda box.
double find_slope_radius(const ContractionProblem& p, const Vector& lambda);

}  // namespace slopecalc
