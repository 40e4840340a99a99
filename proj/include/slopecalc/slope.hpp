#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "slopecalc/duality.hpp"
#include "slopecalc/vecspace.hpp"

namespace slopecalc {

/// Differentiable function f : R^n -> R^m on an axis-aligned box, with an
/// optional analytic Jacobian. Evaluation outside the box throws.
struct DiffFunction {
    int dim_in = 0;
    int dim_out = 0;
    std::function<Vector(const Vector&)> evaluator;
    std::function<LinOp(const Vector&)> jacobian;  // empty when only finite differences apply
    Box domain;

    Vector operator()(const Vector& x) const;
    bool has_jacobian() const { return static_cast<bool>(jacobian); }
};

enum class SlopeKind { canonical, basis, one_dim, combinator, custom };

/// Slope operator family of f at a base point x: a map y |-> L(R^n, R^m) with
///   f(y) = f(x) + eval(y)(y - x)        for all y in the domain,
/// continuous at y = x with eval(x) = Df(x). Evaluation is lazy and pure;
/// nothing is cached per y.
class SlopeOp {
public:
    SlopeOp(Vector base, std::function<LinOp(const Vector&)> eval, SlopeKind kind,
            std::shared_ptr<const DiffFunction> function);

    const Vector& base() const { return base_; }
    LinOp eval(const Vector& y) const { return eval_(y); }
    LinOp diagonal() const { return eval_(base_); }
    SlopeKind kind() const { return kind_; }
    const DiffFunction& function() const { return *function_; }
    std::shared_ptr<const DiffFunction> function_ptr() const { return function_; }
    int dim_in() const { return function_->dim_in; }
    int dim_out() const { return function_->dim_out; }

private:
    Vector base_;
    std::function<LinOp(const Vector&)> eval_;
    SlopeKind kind_;
    std::shared_ptr<const DiffFunction> function_;
};

/// Two-point slope family (x, y) |-> Phi(x, y).
using SlopeFamily = std::function<LinOp(const Vector&, const Vector&)>;

/// Df(x): the analytic Jacobian when available, otherwise Richardson-
/// extrapolated central differences at steps h and h/2 with
/// h = 1e-5 * max(1, ||x||). Requires interior margin >= h.
LinOp derivative_oracle(const DiffFunction& f, const Vector& x);

/// Step used by the finite-difference path of derivative_oracle.
double fd_step(const Vector& x);

/// Canonical slope operator of f at x:
///   eval(y) z = [(f(y) - f(x) - Df(x)(y-x)) / ||y-x||] <l(x,y), z> + Df(x) z
/// for y != x, and Df(x) at y = x. The norm and the duality functional follow
/// the given spec, so the slope identity holds in any of the supported norms.
SlopeOp canonical_slope(const DiffFunction& f, const Vector& x, const NormSpec& spec);

/// One-dimensional slope: eval(t) = (g(t) - g(s)) / (t - s) for t != s and
/// g'(s) at t = s. Symmetric in (s, t) exactly, including in floating point.
SlopeOp one_dim_slope(const DiffFunction& g, double s);

/// Orthonormal basis of R^n whose first column is the given unit vector.
/// n = 2 uses the quarter-turn (-v2, v1); n > 2 completes with the
/// cancellation-free Householder reflection sending e1 to -sign(v1[0]) * v1.
LinOp orthonormal_basis_from(const Vector& v1);

/// Secant-plane slope operator defined on the basis (v1..vn), v1 = (y-x)/h:
///   Phi(x,y) v_k = [f(x + h v_k) - f(x)] / h,   h = ||y - x||.
LinOp basis_slope(const DiffFunction& f, const Vector& x, const Vector& y);

/// The same operator reconstructed from its action on the secant basis
/// (w_1..w_n) = (-v1, v2 - v1, ...):
///   Phi(x,y) w_k = [f(y + h w_k) - f(y)] / h.
/// Agreement with basis_slope is the construction's central cross-check.
LinOp basis_slope_wform(const DiffFunction& f, const Vector& x, const Vector& y);

/// basis_slope packaged as a slope operator at x (diagonal = Df(x)).
SlopeOp basis_slope_op(const DiffFunction& f, const Vector& x);

/// Symmetrization (Phi(x,y) + Phi(y,x)) / 2 of a two-point family; still
/// satisfies the slope identity and is symmetric in its arguments.
LinOp symmetric_part(const SlopeFamily& family, const Vector& x, const Vector& y);

}  // namespace slopecalc
