#include "slopecalc/slope.hpp"

#include <cmath>

namespace slopecalc {

Vector DiffFunction::operator()(const Vector& x) const {
    if (x.dim() != dim_in) throw std::invalid_argument("DiffFunction: input dimension mismatch");
    if (!domain.contains(x)) throw std::domain_error("DiffFunction: point outside domain box");
    Vector y = evaluator(x);
    if (y.dim() != dim_out) throw std::invalid_argument("DiffFunction: output dimension mismatch");
    return y;
}

SlopeOp::SlopeOp(Vector base, std::function<LinOp(const Vector&)> eval, SlopeKind kind,
                 std::shared_ptr<const DiffFunction> function)
    : base_(std::move(base)), eval_(std::move(eval)), kind_(kind), function_(std::move(function)) {
    if (!function_) throw std::invalid_argument("SlopeOp: missing function");
    if (base_.dim() != function_->dim_in) throw std::invalid_argument("SlopeOp: base dimension mismatch");
}

double fd_step(const Vector& x) { return 1e-5 * std::max(1.0, norm2(x)); }

LinOp derivative_oracle(const DiffFunction& f, const Vector& x) {
    if (x.dim() != f.dim_in) throw std::invalid_argument("derivative_oracle: dimension mismatch");
    if (f.has_jacobian()) {
        LinOp j = f.jacobian(x);
        if (j.rows() != f.dim_out || j.cols() != f.dim_in)
            throw std::invalid_argument("derivative_oracle: analytic Jacobian has wrong shape");
        return j;
    }
    const double h = fd_step(x);
    if (f.domain.min_margin(x) < h)
        throw std::domain_error("derivative_oracle: point too close to the domain boundary");

    auto central = [&](double step) {
        LinOp d(f.dim_out, f.dim_in);
        for (int k = 0; k < f.dim_in; ++k) {
            Vector xp = x, xm = x;
            xp[k] += step;
            xm[k] -= step;
            const Vector diff = f(xp) - f(xm);
            for (int i = 0; i < f.dim_out; ++i) d(i, k) = diff[i] / (2.0 * step);
        }
        return d;
    };
    // Richardson: central differences are O(h^2), so (4 D_{h/2} - D_h) / 3.
    const LinOp dh = central(h);
    const LinOp dh2 = central(h / 2.0);
    return (1.0 / 3.0) * (4.0 * dh2 - dh);
}

SlopeOp canonical_slope(const DiffFunction& f, const Vector& x, const NormSpec& spec) {
    check_spec(spec, f.dim_in);
    auto fn = std::make_shared<const DiffFunction>(f);
    const Vector fx = (*fn)(x);
    const LinOp dfx = derivative_oracle(*fn, x);
    const double diag_tol = kCoincidentTol * std::max(1.0, norm(x, spec));

    auto eval = [fn, x, fx, dfx, spec, diag_tol](const Vector& y) -> LinOp {
        const Vector d = y - x;
        const double dist = norm(d, spec);
        if (dist <= diag_tol) return dfx;
        const DualityFunctional ell = dual_functional(x, y, spec);
        const Vector residual = (1.0 / dist) * ((*fn)(y) - fx - dfx.apply(d));
        return dfx + outer(residual, ell.coeffs);
    };
    return SlopeOp(x, std::move(eval), SlopeKind::canonical, std::move(fn));
}

SlopeOp one_dim_slope(const DiffFunction& g, double s) {
    if (g.dim_in != 1 || g.dim_out != 1)
        throw std::invalid_argument("one_dim_slope: function must be scalar -> scalar");
    auto fn = std::make_shared<const DiffFunction>(g);
    const Vector sv{s};
    const double gs = (*fn)(sv)[0];
    const double gprime = derivative_oracle(*fn, sv)(0, 0);

    auto eval = [fn, s, gs, gprime](const Vector& t) -> LinOp {
        const double tt = t[0];
        if (tt == s) return LinOp(1, 1, {gprime});
        return LinOp(1, 1, {((*fn)(t)[0] - gs) / (tt - s)});
    };
    return SlopeOp(sv, std::move(eval), SlopeKind::one_dim, std::move(fn));
}

LinOp orthonormal_basis_from(const Vector& v1) {
    const int n = v1.dim();
    LinOp v(n, n);
    for (int i = 0; i < n; ++i) v(i, 0) = v1[i];
    if (n == 1) return v;
    if (n == 2) {
        v(0, 1) = -v1[1];
        v(1, 1) = v1[0];
        return v;
    }
    // Reflection through u = v1 + sign(v1[0]) e1 maps e1 to -sign(v1[0]) v1;
    // ||u||^2 = 2 (1 + |v1[0]|) never degenerates. Columns 2..n are H e_k.
    const double s = v1[0] >= 0.0 ? 1.0 : -1.0;
    Vector u = v1;
    u[0] += s;
    const double unn = 2.0 * (1.0 + s * v1[0]);
    for (int k = 1; k < n; ++k) {
        const double c = 2.0 * u[k] / unn;
        for (int i = 0; i < n; ++i) v(i, k) = (i == k ? 1.0 : 0.0) - c * u[i];
    }
    return v;
}

namespace {

double separation(const DiffFunction& f, const Vector& x, const Vector& y, const char* who) {
    if (x.dim() != f.dim_in || y.dim() != f.dim_in)
        throw std::invalid_argument(std::string(who) + ": dimension mismatch");
    const double h = norm2(y - x);
    if (h <= kCoincidentTol * std::max(1.0, norm2(x)))
        throw std::invalid_argument(std::string(who) + ": coincident points");
    return h;
}

}  // namespace

LinOp basis_slope(const DiffFunction& f, const Vector& x, const Vector& y) {
    const double h = separation(f, x, y, "basis_slope");
    const LinOp v = orthonormal_basis_from((1.0 / h) * (y - x));
    const Vector fx = f(x);
    LinOp c(f.dim_out, f.dim_in);
    for (int k = 0; k < f.dim_in; ++k) {
        const Vector probe = x + h * v.column(k);
        if (!f.domain.contains(probe))
            throw std::domain_error("basis_slope: probe point outside domain");
        const Vector col = (1.0 / h) * (f(probe) - fx);
        for (int i = 0; i < f.dim_out; ++i) c(i, k) = col[i];
    }
    return c * transpose(v);
}

LinOp basis_slope_wform(const DiffFunction& f, const Vector& x, const Vector& y) {
    const double h = separation(f, x, y, "basis_slope_wform");
    const int n = f.dim_in;
    const Vector v1 = (1.0 / h) * (y - x);
    const LinOp v = orthonormal_basis_from(v1);

    LinOp w(n, n);
    for (int i = 0; i < n; ++i) w(i, 0) = -v1[i];
    for (int k = 1; k < n; ++k)
        for (int i = 0; i < n; ++i) w(i, k) = v(i, k) - v1[i];

    const Vector fy = f(y);
    LinOp d(f.dim_out, n);
    for (int k = 0; k < n; ++k) {
        const Vector probe = y + h * w.column(k);
        if (!f.domain.contains(probe))
            throw std::domain_error("basis_slope_wform: probe point outside domain");
        const Vector col = (1.0 / h) * (f(probe) - fy);
        for (int i = 0; i < f.dim_out; ++i) d(i, k) = col[i];
    }
    // Phi W = D  =>  Phi = D W^{-1}, solved as W^T Phi^T = D^T.
    return transpose(lu_solve(transpose(w), transpose(d)));
}

SlopeOp basis_slope_op(const DiffFunction& f, const Vector& x) {
    auto fn = std::make_shared<const DiffFunction>(f);
    const double diag_tol = kCoincidentTol * std::max(1.0, norm2(x));
    auto eval = [fn, x, diag_tol](const Vector& y) -> LinOp {
        if (norm2(y - x) <= diag_tol) return derivative_oracle(*fn, x);
        return basis_slope(*fn, x, y);
    };
    return SlopeOp(x, std::move(eval), SlopeKind::basis, std::move(fn));
}

LinOp symmetric_part(const SlopeFamily& family, const Vector& x, const Vector& y) {
    return 0.5 * (family(x, y) + family(y, x));
}

}  // namespace slopecalc
