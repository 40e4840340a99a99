#include "doctest.h"

#include <cmath>

#include "slopecalc/calculus.hpp"
#include "slopecalc/registry.hpp"
#include "test_support.hpp"

using namespace slopecalc;
using testsupport::fd_jacobian;
using testsupport::identity_residual;
using testsupport::sample_pair;

namespace {

DiffFunction scalar_fn(std::function<double(double)> f, double half_width = 8.0) {
    return DiffFunction{1, 1, [f](const Vector& x) { return Vector{f(x[0])}; }, nullptr,
                        Box::centered(1, half_width)};
}

}  // namespace

TEST_CASE("linear combination of slopes") {
    const DiffFunction sq = scalar_fn([](double t) { return t * t; });
    const DiffFunction id = scalar_fn([](double t) { return t; });
    const SlopeOp phi = one_dim_slope(sq, 1.0);
    const SlopeOp psi = one_dim_slope(id, 1.0);

    // identity combination leaves the slope untouched
    const SlopeOp same = combine_linear(1.0, phi, 0.0, psi);
    for (double y : {-2.0, 0.5, 3.0})
        CHECK(same.eval(Vector{y})(0, 0) == phi.eval(Vector{y})(0, 0));

    // cancellation yields the slope of the zero function
    const SlopeOp zero = combine_linear(1.0, phi, -1.0, phi);
    for (double y : {-2.0, 0.5, 3.0}) CHECK(zero.eval(Vector{y})(0, 0) == 0.0);
    CHECK(zero.function()(Vector{2.0})[0] == 0.0);

    // 2 t^2 + 3 t has derivative 7 at t = 1
    const SlopeOp combo = combine_linear(2.0, phi, 3.0, psi);
    CHECK(combo.diagonal()(0, 0) == doctest::Approx(7.0).epsilon(1e-9));
    CHECK(identity_residual(combo.function(), combo.base(), combo.eval(Vector{2.5}), Vector{2.5}) <=
          1e-10);

    const SlopeOp shifted = one_dim_slope(sq, 2.0);
    CHECK_THROWS_AS(combine_linear(1.0, phi, 1.0, shifted), std::invalid_argument);
}

TEST_CASE("chain rule on slopes") {
    const DiffFunction dbl = scalar_fn([](double t) { return 2.0 * t; });
    const DiffFunction sq = scalar_fn([](double t) { return t * t; }, 32.0);

    const SlopeOp psi_g = one_dim_slope(dbl, 1.0);
    const SlopeOp phi_f = one_dim_slope(sq, 2.0);  // based at g(1)
    const SlopeOp lam = chain(phi_f, psi_g, dbl);
    for (double y : {-1.0, 0.0, 2.0})
        CHECK(lam.eval(Vector{y})(0, 0) == doctest::Approx(4.0 * y + 4.0).epsilon(1e-12));
    CHECK(lam.diagonal()(0, 0) == doctest::Approx(8.0).epsilon(1e-9));
    CHECK(identity_residual(lam.function(), lam.base(), lam.eval(Vector{3.0}), Vector{3.0}) <= 1e-10);

    // identity outer map returns the inner slope
    const DiffFunction ident = scalar_fn([](double t) { return t; }, 32.0);
    const SlopeOp outer_id = one_dim_slope(ident, 2.0);
    const SlopeOp same = chain(outer_id, psi_g, dbl);
    for (double y : {-1.5, 0.25, 2.0})
        CHECK(std::fabs(same.eval(Vector{y})(0, 0) - psi_g.eval(Vector{y})(0, 0)) <= 1e-12);

    // constant inner map slopes a constant composite
    const DiffFunction constant = scalar_fn([](double) { return 0.5; });
    const SlopeOp psi_c = one_dim_slope(constant, 1.0);
    const SlopeOp phi_at_c = one_dim_slope(sq, 0.5);
    const SlopeOp lam_c = chain(phi_at_c, psi_c, constant);
    CHECK(lam_c.diagonal()(0, 0) == 0.0);
    CHECK(lam_c.eval(Vector{4.0})(0, 0) == 0.0);

    // base mismatch is rejected
    CHECK_THROWS_AS(chain(one_dim_slope(sq, 7.0), psi_g, dbl), std::invalid_argument);
}

TEST_CASE("chain surfaces range violations of the outer domain") {
    const DiffFunction inner = scalar_fn([](double t) { return 10.0 * t; });
    const DiffFunction narrow{1, 1, [](const Vector& x) { return Vector{x[0] * x[0]}; }, nullptr,
                              Box::centered(1, 5.0)};
    const SlopeOp psi = one_dim_slope(inner, 0.0);
    const SlopeOp phi = one_dim_slope(narrow, 0.0);
    const SlopeOp lam = chain(phi, psi, inner);
    CHECK_THROWS_AS(lam.eval(Vector{2.0}), std::domain_error);  // g(2) = 20 outside
}

TEST_CASE("product rule over bilinear maps") {
    const BilinearMap scalar{1, 1, 1, 1.0,
                             [](const Vector& a, const Vector& b) { return Vector{a[0] * b[0]}; }};
    const DiffFunction id = scalar_fn([](double t) { return t; });
    const SlopeOp phi = one_dim_slope(id, 1.0);
    const SlopeOp prod = product(scalar, phi, phi, id, id);
    for (double y : {-1.0, 0.5, 2.0})
        CHECK(prod.eval(Vector{y})(0, 0) == doctest::Approx(y + 1.0).epsilon(1e-12));
    CHECK(prod.diagonal()(0, 0) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(identity_residual(prod.function(), prod.base(), prod.eval(Vector{2.0}), Vector{2.0}) <=
          1e-10);

    // one factor identically zero kills the slope
    const DiffFunction zero = scalar_fn([](double) { return 0.0; });
    const SlopeOp phi_zero = one_dim_slope(zero, 1.0);
    const SlopeOp prod_zero = product(scalar, phi, phi_zero, id, zero);
    for (double y : {-1.0, 0.5, 2.0}) CHECK(std::fabs(prod_zero.eval(Vector{y})(0, 0)) <= 1e-15);

    // dot product of the identity with itself: gradient of the squared norm
    const BilinearMap dot2{2, 2, 1, 1.0,
                           [](const Vector& a, const Vector& b) { return Vector{dot(a, b)}; }};
    const DiffFunction id2{2, 2, [](const Vector& x) { return x; },
                           [](const Vector&) { return LinOp::identity(2); }, Box::centered(2, 4.0)};
    const Vector x{1.0, 0.0};
    const SlopeOp p2 = canonical_slope(id2, x, Euclidean{});
    const SlopeOp norm_slope = product(dot2, p2, p2, id2, id2);
    const LinOp diag = norm_slope.diagonal();
    CHECK(diag(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::fabs(diag(0, 1)) <= 1e-12);
}

TEST_CASE("inversion slope: identity case and scalars") {
    const LinOp eye = LinOp::identity(2);
    const LinOp phi = inversion_slope(eye, eye);
    Rng rng(7);
    for (int i = 0; i < 20; ++i) {
        const Vector z = rng.unit_vector(4);
        CHECK(norm2(phi.apply(z) + z) <= 1e-14);  // Z |-> -Z
    }

    const LinOp a(1, 1, {2.0}), b(1, 1, {4.0});
    const LinOp phi1 = inversion_slope(a, b);
    CHECK(phi1(0, 0) == doctest::Approx(-0.125).epsilon(1e-14));
    CHECK(phi1.apply(Vector{2.0})[0] == doctest::Approx(-0.25).epsilon(1e-14));
}

TEST_CASE("inversion slope: exact resolvent identity on random 5x5 pairs") {
    Rng rng(19);
    for (int rep = 0; rep < 25; ++rep) {
        LinOp a = LinOp::identity(5), b = LinOp::identity(5);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) {
                a(i, j) += rng.uniform(-0.3, 0.3);
                b(i, j) += rng.uniform(-0.3, 0.3);
            }
        const LinOp phi = inversion_slope(a, b);
        const LinOp lhs = inverse(b) - inverse(a);
        const Vector rhs = phi.apply(flatten(b - a));
        CHECK(norm2(flatten(lhs) - rhs) <= 1e-10 * norm2(flatten(lhs)));
    }
}

TEST_CASE("inversion slope: continuity bound and rejection of bad input") {
    Rng rng(23);
    for (int rep = 0; rep < 10; ++rep) {
        LinOp a = LinOp::identity(4);
        LinOp perturb(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                a(i, j) += rng.uniform(-0.25, 0.25);
                perturb(i, j) = rng.uniform(-0.05, 0.05);
            }
        const LinOp b = a + perturb;
        const double lhs = spectral_norm(inversion_slope(a, b) - inversion_slope(a, a));
        const double rhs = spectral_norm(inverse(a)) * spectral_norm(inverse(a) - inverse(b));
        CHECK(lhs <= rhs * (1.0 + 1e-9));
    }
    CHECK_THROWS_AS(inversion_slope(LinOp(2, 2), LinOp::identity(2)), std::domain_error);
    LinOp nearly_singular = LinOp::from_rows({{1.0, 0.0}, {0.0, 1e-13}});
    CHECK_THROWS_AS(inversion_slope(nearly_singular, nearly_singular), std::domain_error);
}

TEST_CASE("partial slopes of product-space functions") {
    // f(x1, x2) = x1
    const DiffFunction proj{2, 1, [](const Vector& x) { return Vector{x[0]}; },
                            [](const Vector&) { return LinOp(1, 2, {1.0, 0.0}); },
                            Box::centered(2, 4.0)};
    const SlopeOp full = canonical_slope(proj, Vector{0.5, -0.5}, Euclidean{});
    const SlopeOp b1 = partial_slope(full, 1, 1);
    const SlopeOp b2 = partial_slope(full, 2, 1);
    for (double y : {-1.0, 0.0, 2.0}) {
        CHECK(b1.eval(Vector{y})(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::fabs(b2.eval(Vector{y})(0, 0)) <= 1e-12);
    }

    // f(x1, x2) = x1 x2 at (2, 3)
    const DiffFunction& bil = find_entry("bilinear_x1x2").function;
    const SlopeOp fb = canonical_slope(bil, Vector{1.0, 1.5}, Euclidean{});
    CHECK(partial_slope(fb, 1, 1).diagonal()(0, 0) == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(partial_slope(fb, 2, 1).diagonal()(0, 0) == doctest::Approx(1.0).epsilon(1e-9));
    // the partial slope really slopes y1 |-> f(y1, x2)
    const SlopeOp p1 = partial_slope(fb, 1, 1);
    CHECK(identity_residual(p1.function(), p1.base(), p1.eval(Vector{1.9}), Vector{1.9}) <= 1e-10);

    // dependence on the other block only
    const DiffFunction only2{2, 1, [](const Vector& x) { return Vector{std::sin(x[1])}; },
                             [](const Vector& x) { return LinOp(1, 2, {0.0, std::cos(x[1])}); },
                             Box::centered(2, 4.0)};
    const SlopeOp fo = canonical_slope(only2, Vector{0.2, 0.4}, Euclidean{});
    const SlopeOp o1 = partial_slope(fo, 1, 1);
    for (double y : {-0.5, 0.1, 1.0}) CHECK(std::fabs(o1.eval(Vector{y})(0, 0)) <= 1e-12);

    CHECK_THROWS_AS(partial_slope(fb, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(partial_slope(fb, 1, 2), std::invalid_argument);
}

TEST_CASE("combinator diagonals match finite differences of the composites") {
    const DiffFunction& quad = find_entry("quad_norm2").function;
    const DiffFunction& trig = find_entry("trig2").function;
    const Vector x{0.3, -0.2};

    const SlopeOp sq = canonical_slope(quad, x, Euclidean{});
    const SlopeOp st = canonical_slope(trig, x, Euclidean{});
    const SlopeOp lin = combine_linear(2.0, sq, 0.0, sq);
    CHECK(max_abs(lin.diagonal() - fd_jacobian(lin.function(), x)) <= 1e-6);

    const SlopeOp outer = canonical_slope(quad, trig(x), Euclidean{});
    const SlopeOp composed = chain(outer, st, trig);
    CHECK(max_abs(composed.diagonal() - fd_jacobian(composed.function(), x)) <= 1e-6);
}

TEST_CASE("chain associativity at the diagonal") {
    // h: R^2 -> R^2, g: R^2 -> R^3, f: R^3 -> R
    const DiffFunction h{2, 2,
                         [](const Vector& x) {
                             return Vector{std::sin(x[0]) + x[1], x[0] * x[1]};
                         },
                         [](const Vector& x) {
                             return LinOp::from_rows({{std::cos(x[0]), 1.0}, {x[1], x[0]}});
                         },
                         Box::centered(2, 2.0)};
    const DiffFunction g{2, 3,
                         [](const Vector& u) {
                             return Vector{u[0] * u[0], u[0] + u[1], std::cos(u[1])};
                         },
                         [](const Vector& u) {
                             return LinOp::from_rows(
                                 {{2.0 * u[0], 0.0}, {1.0, 1.0}, {0.0, -std::sin(u[1])}});
                         },
                         Box::centered(2, 8.0)},
        f{3, 1,
          [](const Vector& v) { return Vector{v[0] * v[2] + v[1]}; },
          [](const Vector& v) { return LinOp(1, 3, {v[2], 1.0, v[0]}); }, Box::centered(3, 64.0)};

    const Vector x{0.4, -0.3};
    const Vector hx = h(x);
    const Vector ghx = g(hx);

    const SlopeOp sh = canonical_slope(h, x, Euclidean{});
    const SlopeOp sg = canonical_slope(g, hx, Euclidean{});
    const SlopeOp sf = canonical_slope(f, ghx, Euclidean{});

    const SlopeOp gh = chain(sg, sh, h);
    const SlopeOp nested = chain(sf, gh, gh.function());
    const LinOp triple = f.jacobian(ghx) * g.jacobian(hx) * h.jacobian(x);
    CHECK(max_abs(nested.diagonal() - triple) <= 1e-9);
}
