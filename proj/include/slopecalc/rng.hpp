#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

#include "slopecalc/vecspace.hpp"

namespace slopecalc {

/// Seedable generator used for all randomized sampling. Doubles are extracted
/// with a fixed bit recipe and normals via Box-Muller so that a given seed
/// reproduces the same stream on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }

    double uniform() {  // [0, 1)
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double th = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(th);
        have_spare_ = true;
        return r * std::cos(th);
    }

    int uniform_int(int lo, int hi) {  // inclusive range
        const auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<int>(gen_() % span);
    }

    Vector unit_vector(int dim) {
        while (true) {
            std::vector<double> v(static_cast<std::size_t>(dim));
            for (double& x : v) x = normal();
            Vector u{std::move(v)};
            const double n = norm2(u);
            if (n > 1e-6) return (1.0 / n) * u;
        }
    }

    Vector in_box(const Box& box) {
        std::vector<double> v(static_cast<std::size_t>(box.dim()));
        for (int i = 0; i < box.dim(); ++i)
            v[static_cast<std::size_t>(i)] = uniform(box.lo[i], box.hi[i]);
        return Vector(std::move(v));
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// FNV-1a mix of a base seed and a tag, so independent sampling streams can be
/// derived per named check without ordering dependence.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag) {
    std::uint64_t h = 1469598103934665603ull ^ base;
    for (char c : tag) {
        h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
        h *= 1099511628211ull;
    }
    return h;
}

/// Van der Corput radical inverse; the workhorse of the low-discrepancy grids.
inline double halton(std::uint64_t index, std::uint64_t base) {
    double f = 1.0, r = 0.0;
    for (std::uint64_t i = index + 1; i > 0; i /= base) {
        f /= static_cast<double>(base);
        r += f * static_cast<double>(i % base);
    }
    return r;
}

/// Halton coordinate in dimension d (prime bases 2, 3, 5, ...).
inline double halton_dim(std::uint64_t index, int d) {
    static constexpr std::uint64_t primes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                                               41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};
    return halton(index, primes[d % 24]);
}

}  // namespace slopecalc
