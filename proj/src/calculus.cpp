#include "slopecalc/calculus.hpp"

#include <cmath>

namespace slopecalc {

namespace {

Box intersect(const Box& a, const Box& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("combine: domain dimension mismatch");
    std::vector<double> lo(static_cast<std::size_t>(a.dim())), hi(static_cast<std::size_t>(a.dim()));
    for (int i = 0; i < a.dim(); ++i) {
        lo[static_cast<std::size_t>(i)] = std::max(a.lo[i], b.lo[i]);
        hi[static_cast<std::size_t>(i)] = std::min(a.hi[i], b.hi[i]);
        if (!(lo[static_cast<std::size_t>(i)] < hi[static_cast<std::size_t>(i)]))
            throw std::invalid_argument("combine: empty domain intersection");
    }
    return Box(Vector(std::move(lo)), Vector(std::move(hi)));
}

}  // namespace

SlopeOp combine_linear(double lam, const SlopeOp& phi, double mu, const SlopeOp& psi) {
    if (!(phi.base() == psi.base())) throw std::invalid_argument("combine_linear: base mismatch");
    if (phi.dim_in() != psi.dim_in() || phi.dim_out() != psi.dim_out())
        throw std::invalid_argument("combine_linear: dimension mismatch");

    auto f = phi.function_ptr();
    auto g = psi.function_ptr();
    std::function<LinOp(const Vector&)> jac;
    if (f->has_jacobian() && g->has_jacobian())
        jac = [lam, mu, f, g](const Vector& y) { return lam * f->jacobian(y) + mu * g->jacobian(y); };
    auto fn = std::make_shared<const DiffFunction>(DiffFunction{
        f->dim_in, f->dim_out,
        [lam, mu, f, g](const Vector& y) { return lam * (*f)(y) + mu * (*g)(y); }, std::move(jac),
        intersect(f->domain, g->domain)});

    auto eval = [lam, mu, phi, psi](const Vector& y) { return lam * phi.eval(y) + mu * psi.eval(y); };
    return SlopeOp(phi.base(), std::move(eval), SlopeKind::combinator, std::move(fn));
}

SlopeOp chain(const SlopeOp& phi_f, const SlopeOp& psi_g, const DiffFunction& g) {
    if (psi_g.dim_in() != g.dim_in || psi_g.dim_out() != g.dim_out)
        throw std::invalid_argument("chain: inner slope does not match g");
    if (phi_f.dim_in() != g.dim_out) throw std::invalid_argument("chain: dimension mismatch");
    const Vector gx = g(psi_g.base());
    if (norm2(phi_f.base() - gx) > 1e-9 * (1.0 + norm2(gx)))
        throw std::invalid_argument("chain: outer slope is not based at g(x)");

    auto f = phi_f.function_ptr();
    auto gp = std::make_shared<const DiffFunction>(g);
    std::function<LinOp(const Vector&)> jac;
    if (f->has_jacobian() && g.has_jacobian())
        jac = [f, gp](const Vector& y) { return f->jacobian((*gp)(y)) * gp->jacobian(y); };
    auto fn = std::make_shared<const DiffFunction>(DiffFunction{
        g.dim_in, f->dim_out, [f, gp](const Vector& y) { return (*f)((*gp)(y)); }, std::move(jac),
        g.domain});

    auto eval = [phi_f, psi_g, gp](const Vector& y) { return phi_f.eval((*gp)(y)) * psi_g.eval(y); };
    return SlopeOp(psi_g.base(), std::move(eval), SlopeKind::combinator, std::move(fn));
}

SlopeOp product(const BilinearMap& b, const SlopeOp& phi1, const SlopeOp& phi2,
                const DiffFunction& f1, const DiffFunction& f2) {
    if (!(phi1.base() == phi2.base())) throw std::invalid_argument("product: base mismatch");
    if (phi1.dim_out() != b.dim1 || phi2.dim_out() != b.dim2)
        throw std::invalid_argument("product: slope ranges do not match the bilinear map");
    if (f1.dim_out != b.dim1 || f2.dim_out != b.dim2 || f1.dim_in != f2.dim_in ||
        f1.dim_in != phi1.dim_in())
        throw std::invalid_argument("product: dimension mismatch");

    const Vector x = phi1.base();
    const int n = f1.dim_in;
    // f1(x) enters the rule as given data; the slope never re-derives it.
    const Vector f1x = f1(x);

    auto fa = std::make_shared<const DiffFunction>(f1);
    auto fb = std::make_shared<const DiffFunction>(f2);
    std::function<LinOp(const Vector&)> jac;
    if (f1.has_jacobian() && f2.has_jacobian())
        jac = [b, fa, fb, n](const Vector& y) {
            const Vector v1 = (*fa)(y), v2 = (*fb)(y);
            const LinOp j1 = fa->jacobian(y), j2 = fb->jacobian(y);
            LinOp out(b.dim_out, n);
            for (int k = 0; k < n; ++k) {
                const Vector col =
                    apply_bilinear(b, j1.column(k), v2) + apply_bilinear(b, v1, j2.column(k));
                for (int i = 0; i < b.dim_out; ++i) out(i, k) = col[i];
            }
            return out;
        };
    auto fn = std::make_shared<const DiffFunction>(DiffFunction{
        n, b.dim_out,
        [b, fa, fb](const Vector& y) { return apply_bilinear(b, (*fa)(y), (*fb)(y)); },
        std::move(jac), intersect(f1.domain, f2.domain)});

    auto eval = [b, phi1, phi2, fb, f1x, n](const Vector& y) {
        const Vector f2y = (*fb)(y);
        const LinOp p1 = phi1.eval(y), p2 = phi2.eval(y);
        LinOp out(b.dim_out, n);
        for (int k = 0; k < n; ++k) {
            const Vector col = apply_bilinear(b, p1.column(k), f2y) +
                               apply_bilinear(b, f1x, p2.column(k));
            for (int i = 0; i < b.dim_out; ++i) out(i, k) = col[i];
        }
        return out;
    };
    return SlopeOp(x, std::move(eval), SlopeKind::combinator, std::move(fn));
}

LinOp inversion_slope(const LinOp& a, const LinOp& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw std::invalid_argument("inversion_slope: operators must be square of equal size");
    const int n = a.rows();
    if (n > 64) throw std::invalid_argument("inversion_slope: dimension above the dense target");
    const LinOp ainv = inverse(a);
    const LinOp binv = inverse(b);
    if (spectral_norm(a) * spectral_norm(ainv) >= 1e12 ||
        spectral_norm(b) * spectral_norm(binv) >= 1e12)
        throw std::domain_error("inversion_slope: operator too ill-conditioned");

    // Row-major vec: [(i,j),(k,l)] entry of Z |-> -A^{-1} Z B^{-1}.
    const int nn = n * n;
    LinOp phi(nn, nn);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    phi(i * n + j, k * n + l) = -ainv(i, k) * binv(l, j);
    return phi;
}

SlopeOp partial_slope(const SlopeOp& phi, int block, int dim1) {
    const int n = phi.dim_in();
    if (block != 1 && block != 2) throw std::invalid_argument("partial_slope: block must be 1 or 2");
    if (dim1 < 1 || dim1 >= n) throw std::invalid_argument("partial_slope: block dimension mismatch");
    const int lo = block == 1 ? 0 : dim1;
    const int hi = block == 1 ? dim1 : n;

    const Vector x = phi.base();
    const Vector x_block = slice(x, lo, hi);
    auto f = phi.function_ptr();

    auto embed = [x, lo, hi](const Vector& y_block) {
        Vector y = x;
        for (int i = lo; i < hi; ++i) y[i] = y_block[i - lo];
        return y;
    };

    std::function<LinOp(const Vector&)> jac;
    if (f->has_jacobian())
        jac = [f, embed, lo, hi](const Vector& y_block) {
            return block_columns(f->jacobian(embed(y_block)), lo, hi);
        };
    auto fn = std::make_shared<const DiffFunction>(DiffFunction{
        hi - lo, f->dim_out, [f, embed](const Vector& y_block) { return (*f)(embed(y_block)); },
        std::move(jac), Box(slice(f->domain.lo, lo, hi), slice(f->domain.hi, lo, hi))});

    auto eval = [phi, embed, lo, hi](const Vector& y_block) {
        return block_columns(phi.eval(embed(y_block)), lo, hi);
    };
    return SlopeOp(x_block, std::move(eval), SlopeKind::combinator, std::move(fn));
}

}  // namespace slopecalc
