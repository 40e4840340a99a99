#include "slopecalc/duality.hpp"

#include <cmath>

#include "slopecalc/rng.hpp"

namespace slopecalc {

DualityFunctional dual_functional(const Vector& x, const Vector& y, const NormSpec& spec) {
    if (x.dim() != y.dim()) throw std::invalid_argument("dual_functional: dimension mismatch");
    check_spec(spec, x.dim());

    const Vector d = y - x;
    const double dist = norm(d, spec);
    if (dist <= kCoincidentTol * std::max(1.0, norm(x, spec)))
        throw std::invalid_argument("dual_functional: coincident points");

    if (std::holds_alternative<Euclidean>(spec)) {
        return DualityFunctional{(1.0 / dist) * d, 1.0, dist};
    }

    if (const auto* pn = std::get_if<PNorm>(&spec)) {
        // Discrete weighted-measure duality map; Hoelder gives dual norm 1.
        const double p = pn->p;
        std::vector<double> c(static_cast<std::size_t>(d.dim()));
        const double denom = std::pow(dist, p - 1.0);
        for (int i = 0; i < d.dim(); ++i) {
            const double di = d[i];
            // |d|^{p-2} d tends to 0 for p > 1; the direct product would be
            // inf * 0 at d = 0 when p < 2.
            c[static_cast<std::size_t>(i)] =
                di == 0.0 ? 0.0
                          : pn->weights[static_cast<std::size_t>(i)] *
                                std::pow(std::fabs(di), p - 2.0) * di / denom;
        }
        Vector coeffs(std::move(c));
        return DualityFunctional{coeffs, 1.0, dot(coeffs, d)};
    }

    const auto& g = std::get<InnerProduct>(spec).gram;
    const double dist_g = std::sqrt(std::max(0.0, dot(d, g.apply(d))));
    Vector coeffs = (dist / (dist_g * dist_g)) * g.apply(d);

    // The dual bound is taken empirically as the max of |<l,z>| / ||z|| over
    // probe directions: coordinates, the direction d itself (where the max is
    // attained), and a fixed quasi-random set.
    double bound = 0.0;
    auto consider = [&](const Vector& z) {
        const double nz = norm(z, spec);
        if (nz > 0.0) bound = std::max(bound, std::fabs(dot(coeffs, z)) / nz);
    };
    for (int k = 0; k < d.dim(); ++k) consider(Vector::unit(d.dim(), k));
    consider(d);
    for (int i = 0; i < 32; ++i) {
        std::vector<double> z(static_cast<std::size_t>(d.dim()));
        for (int j = 0; j < d.dim(); ++j)
            z[static_cast<std::size_t>(j)] = 2.0 * halton_dim(static_cast<std::uint64_t>(i), j) - 1.0;
        consider(Vector(std::move(z)));
    }
    return DualityFunctional{coeffs, bound, dot(coeffs, d)};
}

}  // namespace slopecalc
