#pragma once

#include "slopecalc/vecspace.hpp"

namespace slopecalc {

/// Norming functional l(x,y) for the direction y - x: a linear functional
/// with <l, y-x> = ||y-x|| and dual norm bounded by norm_bound uniformly in y.
/// It selects the complement of span(y-x) on which a canonical slope operator
/// falls back to the derivative.
struct DualityFunctional {
    Vector coeffs;         // z |-> sum_i coeffs_i z_i
    double norm_bound;     // ||l||_{E'} <= norm_bound (exactly 1 for Euclidean / p-norms)
    double pairing_value;  // <l, y-x>

    double pair(const Vector& z) const { return dot(coeffs, z); }
};

/// Relative threshold below which x and y count as coincident and the
/// functional is undefined (callers must branch to the diagonal case).
inline constexpr double kCoincidentTol = 1e-14;

/// Builds the duality functional for the given norm:
///   Euclidean:    <l, z> = <(y-x)/||y-x||, z>
///   PNorm:        coeffs_i = w_i |d_i|^{p-2} d_i / ||d||_p^{p-1},  d = y-x
///   InnerProduct: coeffs = (||d||_spec / ||d||_G^2) G d
/// Throws on coincident points (relative to max(1, ||x||)) or dimension
/// mismatch.
DualityFunctional dual_functional(const Vector& x, const Vector& y, const NormSpec& spec);

}  // namespace slopecalc
