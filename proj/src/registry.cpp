#include "slopecalc/registry.hpp"

#include <cmath>

namespace slopecalc {

namespace {

// Oscillator of Example-type non-C1 behaviour: s^2 cos(1/s), extended by 0.
double osc(double s) { return s == 0.0 ? 0.0 : s * s * std::cos(1.0 / s); }
double osc_prime(double s) {
    return s == 0.0 ? 0.0 : 2.0 * s * std::cos(1.0 / s) + std::sin(1.0 / s);
}

std::vector<RegistryEntry> build_registry() {
    std::vector<RegistryEntry> r;

    r.push_back({"affine2",
                 DiffFunction{2, 2,
                              [](const Vector& x) {
                                  return Vector{2.0 * x[0] + x[1] + 0.5, -x[1] - 1.0};
                              },
                              [](const Vector&) { return LinOp::from_rows({{2, 1}, {0, -1}}); },
                              Box::centered(2, 2.0)},
                 {"smooth", "c1", "c2"},
                 std::sqrt(3.0 + std::sqrt(5.0)),  // largest singular value of the matrix
                 std::nullopt,
                 "affine map, constant Jacobian"});

    r.push_back({"quad_norm2",
                 DiffFunction{2, 1,
                              [](const Vector& x) { return Vector{x[0] * x[0] + x[1] * x[1]}; },
                              [](const Vector& x) {
                                  return LinOp(1, 2, {2.0 * x[0], 2.0 * x[1]});
                              },
                              Box::centered(2, 2.0)},
                 {"smooth", "c1", "c2"},
                 std::nullopt,
                 std::nullopt,
                 "squared Euclidean norm on the plane"});

    r.push_back({"bilinear_x1x2",
                 DiffFunction{2, 1, [](const Vector& x) { return Vector{x[0] * x[1]}; },
                              [](const Vector& x) { return LinOp(1, 2, {x[1], x[0]}); },
                              Box::centered(2, 2.0)},
                 {"smooth", "c1", "c2"},
                 std::nullopt,
                 std::nullopt,
                 "coordinate product; mixed second derivative exactly 1"});

    r.push_back({"x1sq_x2",
                 DiffFunction{2, 1, [](const Vector& x) { return Vector{x[0] * x[0] * x[1]}; },
                              [](const Vector& x) {
                                  return LinOp(1, 2, {2.0 * x[0] * x[1], x[0] * x[0]});
                              },
                              Box::centered(2, 2.0)},
                 {"smooth", "c1", "c2"},
                 std::nullopt,
                 std::nullopt,
                 "degree-3 monomial; Hessian [[2 x2, 2 x1], [2 x1, 0]]"});

    r.push_back({"trig2",
                 DiffFunction{2, 2,
                              [](const Vector& x) {
                                  return Vector{std::sin(x[0]) * std::cos(x[1]),
                                                std::cos(x[0]) + std::sin(x[1])};
                              },
                              [](const Vector& x) {
                                  return LinOp::from_rows(
                                      {{std::cos(x[0]) * std::cos(x[1]),
                                        -std::sin(x[0]) * std::sin(x[1])},
                                       {-std::sin(x[0]), std::cos(x[1])}});
                              },
                              Box::centered(2, 2.0)},
                 {"smooth", "c1", "c2"},
                 std::nullopt,
                 std::nullopt,
                 "trigonometric plane map"});

    r.push_back({"cubic3d",
                 DiffFunction{3, 3,
                              [](const Vector& x) {
                                  return Vector{x[0] * x[1] * x[2], x[0] * x[0] - x[1] * x[2],
                                                x[2] * x[2] * x[2] / 3.0 + x[0]};
                              },
                              [](const Vector& x) {
                                  return LinOp::from_rows({{x[1] * x[2], x[0] * x[2], x[0] * x[1]},
                                                           {2.0 * x[0], -x[2], -x[1]},
                                                           {1.0, 0.0, x[2] * x[2]}});
                              },
                              Box::centered(3, 2.0)},
                 {"smooth", "c1", "c2"},
                 std::nullopt,
                 std::nullopt,
                 "cubic polynomial map on R^3"});

    // Deliberately without an analytic Jacobian: exercises the
    // finite-difference oracle inside every diagnostic that needs Df.
    r.push_back({"poly8",
                 DiffFunction{8, 3,
                              [](const Vector& x) {
                                  double q = 0.0, lin = 0.0, cub = 0.0;
                                  for (int i = 0; i < 8; ++i) {
                                      q += x[i] * x[i];
                                      lin += (i + 1) * x[i] / 8.0;
                                      cub += x[i] * x[i] * x[i] / 3.0;
                                  }
                                  return Vector{q, lin + x[0] * x[7], cub};
                              },
                              nullptr, Box::centered(8, 2.0)},
                 {"smooth", "c1", "c2"},
                 std::nullopt,
                 std::nullopt,
                 "degree-3 polynomial on R^8, finite-difference Jacobian path"});

    r.push_back({"sine1d",
                 DiffFunction{1, 1, [](const Vector& x) { return Vector{std::sin(x[0])}; },
                              [](const Vector& x) { return LinOp(1, 1, {std::cos(x[0])}); },
                              Box::centered(1, 4.0)},
                 {"smooth", "c1", "c2"},
                 1.0,
                 std::nullopt,
                 "sine; Lipschitz constant 1 attained at 0"});

    r.push_back({"half_affine1d",
                 DiffFunction{1, 1, [](const Vector& x) { return Vector{0.5 * x[0]}; },
                              [](const Vector&) { return LinOp(1, 1, {0.5}); },
                              Box::centered(1, 4.0)},
                 {"smooth", "c1", "c2"},
                 0.5,
                 std::nullopt,
                 "linear contraction with zero Lipschitz slack"});

    r.push_back({"scaled_sines2",
                 DiffFunction{2, 1,
                              [](const Vector& x) {
                                  return Vector{0.5 * (std::sin(x[0]) + std::cos(x[1]))};
                              },
                              [](const Vector& x) {
                                  return LinOp(1, 2, {0.5 * std::cos(x[0]), -0.5 * std::sin(x[1])});
                              },
                              Box::centered(2, 2.0)},
                 {"smooth", "c1", "c2"},
                 std::sqrt(0.5),  // sup of 0.5 * sqrt(cos^2 x1 + sin^2 x2)
                 std::nullopt,
                 "scaled trigonometric sum with known gradient bound"});

    r.push_back({"double1d",
                 DiffFunction{1, 1, [](const Vector& x) { return Vector{2.0 * x[0]}; },
                              [](const Vector&) { return LinOp(1, 1, {2.0}); },
                              Box::centered(1, 4.0)},
                 {"pathological"},
                 1.0,  // deliberately understated; every Lipschitz sample must flag it
                 std::nullopt,
                 "declared Lipschitz 1 but actual slope 2; expected failure entry"});

    r.push_back({"osc_square",
                 DiffFunction{2, 1, [](const Vector& x) { return Vector{osc(x[0])}; },
                              [](const Vector& x) { return LinOp(1, 2, {osc_prime(x[0]), 0.0}); },
                              Box::centered(2, 1.0)},
                 {"pathological"},
                 std::nullopt,
                 std::nullopt,
                 "differentiable everywhere, derivative discontinuous on x1 = 0"});

    // Slope family of the zero function that rotates y - x by a quarter turn,
    // switched on exactly when y = 0 and x != 0. Annihilates y - x, so it is
    // a slope family, continuous in y at every base but not in x at 0.
    SlopeFamily perp = [](const Vector& x, const Vector& y) {
        LinOp m(1, 2);
        const Vector d = y - x;
        const double h = norm2(d);
        if (h == 0.0) return m;
        const bool on = (y[0] == 0.0 && y[1] == 0.0) && !(x[0] == 0.0 && x[1] == 0.0);
        if (!on) return m;
        m(0, 0) = -d[1] / h;
        m(0, 1) = d[0] / h;
        return m;
    };
    r.push_back({"zero_perp",
                 DiffFunction{2, 1, [](const Vector&) { return Vector{0.0}; },
                              [](const Vector&) { return LinOp(1, 2); }, Box::centered(2, 1.0)},
                 {"pathological"},
                 0.0,
                 perp,
                 "zero function with a slope family that is not continuous in x at 0"});

    return r;
}

std::vector<NamedProblem> build_problems() {
    std::vector<NamedProblem> v;

    v.push_back({"affine_mean", "x |-> (x + lambda)/2; fixed point x = lambda, sensitivity 1",
                 ContractionProblem{
                     1, 1, [](const Vector& x, const Vector& l) { return Vector{0.5 * (x[0] + l[0])}; },
                     0.5, Box::centered(1, 8.0), Box::centered(1, 4.0), 1e-12,
                     [](const Vector&, const Vector&) { return LinOp(1, 1, {0.5}); },
                     [](const Vector&, const Vector&) { return LinOp(1, 1, {0.5}); }}});

    v.push_back({"cos_shift", "x |-> cos(x)/2 + lambda; sensitivity 1/(1 + sin(x)/2)",
                 ContractionProblem{
                     1, 1,
                     [](const Vector& x, const Vector& l) { return Vector{0.5 * std::cos(x[0]) + l[0]}; },
                     0.5, Box::centered(1, 2.0), Box::centered(1, 0.5), 1e-12,
                     [](const Vector& x, const Vector&) { return LinOp(1, 1, {-0.5 * std::sin(x[0])}); },
                     [](const Vector&, const Vector&) { return LinOp(1, 1, {1.0}); }}});

    v.push_back(
        {"rot_shrink2", "x |-> 0.4 R(lambda_1) x + (lambda_2, lambda_1 / 2); planar contraction",
         ContractionProblem{
             2, 2,
             [](const Vector& x, const Vector& l) {
                 const double c = std::cos(l[0]), s = std::sin(l[0]);
                 return Vector{0.4 * (c * x[0] - s * x[1]) + l[1],
                               0.4 * (s * x[0] + c * x[1]) + 0.5 * l[0]};
             },
             0.4, Box::centered(2, 3.0), Box::centered(2, 1.0), 1e-12,
             [](const Vector&, const Vector& l) {
                 const double c = std::cos(l[0]), s = std::sin(l[0]);
                 return LinOp::from_rows({{0.4 * c, -0.4 * s}, {0.4 * s, 0.4 * c}});
             },
             [](const Vector& x, const Vector& l) {
                 const double c = std::cos(l[0]), s = std::sin(l[0]);
                 return LinOp::from_rows({{0.4 * (-s * x[0] - c * x[1]), 1.0},
                                          {0.4 * (c * x[0] - s * x[1]) + 0.5, 0.0}});
             }}});

    return v;
}

}  // namespace

const std::vector<RegistryEntry>& registry() {
    static const std::vector<RegistryEntry> r = build_registry();
    return r;
}

const RegistryEntry& find_entry(const std::string& name) {
    for (const auto& e : registry())
        if (e.name == name) return e;
    throw std::invalid_argument("registry: unknown function '" + name + "'");
}

std::vector<std::string> registry_names(const std::string& flag) {
    std::vector<std::string> names;
    for (const auto& e : registry())
        if (flag.empty() || e.has_flag(flag)) names.push_back(e.name);
    return names;
}

const std::vector<NamedProblem>& problem_registry() {
    static const std::vector<NamedProblem> v = build_problems();
    return v;
}

const NamedProblem& find_problem(const std::string& name) {
    for (const auto& p : problem_registry())
        if (p.name == name) return p;
    throw std::invalid_argument("registry: unknown problem '" + name + "'");
}

}  // namespace slopecalc
