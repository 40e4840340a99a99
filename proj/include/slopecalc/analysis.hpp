#pragma once

#include <vector>

#include "slopecalc/slope.hpp"

namespace slopecalc {

/// Interior sample parameters 0 < t_1 < ... < t_N < 1 of a segment.
struct SegmentSampling {
    std::vector<double> t_values;
    static SegmentSampling uniform(int count = 1001);
};

/// Mean value inequality scan: the first sampled c = x + t(y-x) with
///   ||Df(c)(y-x) - A(y-x)|| >= ||f(y) - f(x) - A(y-x)|| - 1e-9
/// is reported as a witness. Absence of a witness is a refutation report
/// (sampling too coarse or hypotheses violated), never a silent pass.
struct MviReport {
    bool witness_found = false;
    double t = 0.0;      // witness parameter
    double lhs = 0.0;    // ||f(y) - f(x) - A(y-x)||
    double rhs = 0.0;    // RHS at the witness
    double max_rhs = 0.0;
    double max_rhs_t = 0.0;
};

MviReport mvi_witness(const DiffFunction& f, const Vector& x, const Vector& y, const LinOp& a,
                      const SegmentSampling& sampling = SegmentSampling::uniform());

/// Slope-operator bound through a segment point:
///   ||Phi(x,y) - A|| <= ||Df(c) - Df(x)|| + ||Df(x) - A||
/// for the canonical slope. Reports whether a sampled c satisfies it (within
/// 1e-8, Euclidean operator norms) and the c with the smallest right side.
struct SlopeBoundReport {
    bool holds = false;
    double lhs = 0.0;
    double best_t = 0.0;   // minimizer of the right side among samples
    double best_rhs = 0.0;
};

SlopeBoundReport canonical_slope_bound_check(const DiffFunction& f, const Vector& x, const Vector& y,
                                             const LinOp& a, const NormSpec& spec,
                                             const SegmentSampling& sampling = SegmentSampling::uniform());

enum class ProbeVerdict { converging, non_converging, inconclusive };

const char* to_string(ProbeVerdict v);

/// Moduli sup ||Phi(x,y) - Df(x0)|| over shrinking balls. Verdict rule:
///   converging      final modulus below the rounding floor
///                   1e-10 * (1 + ||Df(x0)||), or the last three moduli
///                   non-increasing with final < 0.1 * first;
///   non_converging  final >= 0.5 * first while first/last radius >= 16;
///   inconclusive    otherwise.
struct ContinuityProbeResult {
    std::vector<double> radii;
    std::vector<double> moduli;
    ProbeVerdict verdict = ProbeVerdict::inconclusive;
};

std::vector<double> default_probe_radii();  // 1/4 ... 1/128, ratio 32

/// Probes the canonical slope of f around x0. The pair grid per radius is
/// low-discrepancy and deterministic; it mixes x-pinned pairs (x, x0),
/// y-pinned pairs (x0, y) and generic near-diagonal pairs, so failures of
/// either separate continuity are caught.
ContinuityProbeResult c1_probe(const DiffFunction& f, const Vector& x0, const NormSpec& spec,
                               const std::vector<double>& radii = default_probe_radii(),
                               int grid_per_radius = 256);

/// Same probe for an arbitrary two-point slope family with known diagonal
/// value at x0.
ContinuityProbeResult c1_probe_family(const SlopeFamily& family, const LinOp& derivative_at_x0,
                                      const Vector& x0,
                                      const std::vector<double>& radii = default_probe_radii(),
                                      int grid_per_radius = 256);

/// Second-derivative estimates from the one-sided double difference
///   E(s) = [f(x+su+sv) - f(x+sv) - f(x+su) + f(x)] / s^2
/// in both argument orders. The four-term combination is accumulated with a
/// compensated sum, so the two orders agree to the last bit whenever the
/// probe evaluations coincide.
struct SchwarzResult {
    std::vector<double> s_values;
    std::vector<Vector> e_uv;
    std::vector<Vector> e_vu;
    double final_gap = 0.0;  // ||E_uv - E_vu|| at the smallest s
};

std::vector<double> default_schwarz_s_values();  // 1e-1 ... 1e-3

SchwarzResult schwarz_limit(const DiffFunction& f, const Vector& x, const Vector& u, const Vector& v,
                            const std::vector<double>& s_values = default_schwarz_s_values());

/// Lipschitz diagnostics: forward, ||Df(x)|| <= L + 1e-9 at each sample;
/// converse, ||f(y)-f(x)|| <= (sup sampled ||Df||) * ||y-x|| * (1 + 1e-9)
/// over consecutive sample pairs. Violations are itemized, not summarized.
struct LipschitzViolation {
    bool forward = false;  // false = converse pair violation
    int index = 0;
    double lhs = 0.0;
    double rhs = 0.0;
};

struct LipschitzReport {
    bool forward_ok = true;
    bool converse_ok = true;
    double max_opnorm = 0.0;
    std::vector<LipschitzViolation> violations;
    bool ok() const { return forward_ok && converse_ok; }
};

LipschitzReport lipschitz_check(const DiffFunction& f, double lipschitz_constant,
                                const std::vector<Vector>& xs);

/// Directional values Phi(x+tz)z per t, checked against the difference
/// quotient [f(x+tz) - f(x)] / t. The identity is algebraic, so each check is
/// enforced at 1e-10 * (1 + ||quotient||); violation throws. The direction is
/// re-derived from the realized probe point so the comparison stays exact in
/// floating point.
struct DirectionalLimitResult {
    std::vector<double> t_values;
    std::vector<Vector> values;
    double max_identity_gap = 0.0;
};

DirectionalLimitResult directional_limit(const DiffFunction& f, const SlopeOp& phi, const Vector& z,
                                         const std::vector<double>& t_values);

}  // namespace slopecalc
