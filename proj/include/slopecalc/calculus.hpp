#pragma once

#include "slopecalc/slope.hpp"

namespace slopecalc {

/// Slope of lam*f + mu*g from slopes of f and g at the same base:
/// eval(y) = lam*Phi(y) + mu*Psi(y).
SlopeOp combine_linear(double lam, const SlopeOp& phi, double mu, const SlopeOp& psi);

/// Slope of f o g at x from a slope of f at g(x) and a slope of g at x:
/// eval(y) = Phi_f(g(y)) * Psi_g(y). Probing a y with g(y) outside the domain
/// of f surfaces as a domain error.
SlopeOp chain(const SlopeOp& phi_f, const SlopeOp& psi_g, const DiffFunction& g);

/// Slope of y |-> b(f1(y), f2(y)) over a bounded bilinear map:
/// eval(y) z = b(Phi1(y) z, f2(y)) + b(f1(x), Phi2(y) z).
SlopeOp product(const BilinearMap& b, const SlopeOp& phi1, const SlopeOp& phi2,
                const DiffFunction& f1, const DiffFunction& f2);

/// Slope of operator inversion between invertible A and B, flattened to a
/// linear map on row-major vec(Z): Z |-> -A^{-1} Z B^{-1}. Satisfies
/// B^{-1} - A^{-1} = Phi(A,B)(B - A); at B = A it is the derivative of
/// inversion. Rejects inputs with condition estimate >= 1e12.
LinOp inversion_slope(const LinOp& a, const LinOp& b);

/// Restriction of a product-space slope to one block: for block 1,
/// eval(y1) z1 = Phi(x, (y1, x2))(z1, 0); it slopes y1 |-> f(y1, x2) at x1.
/// dim1 is the declared size of the first block.
SlopeOp partial_slope(const SlopeOp& phi, int block, int dim1);

}  // namespace slopecalc
