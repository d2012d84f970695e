#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "holoq/qfunc.hpp"
#include "holoq/quaternion.hpp"

namespace holoq {

/// The eight Wirtinger partials of the doubling-form constituents at a
/// point, realized by central differences on the four real coordinates:
///   d_a = (d_x - i d_y)/2,  d_abar = (d_x + i d_y)/2,
///   d_b = (d_z - i d_u)/2,  d_bbar = (d_z + i d_u)/2.
/// Conjugated quantities follow from d_bbar(conj g) == conj(d_b g), so no
/// extra evaluations are spent on them.
struct WirtingerJet {
    Quaternion point{};
    double step_h = 0.0;
    Complex phi1{}, phi2{};
    Complex d_a_phi1{}, d_abar_phi1{}, d_b_phi1{}, d_bbar_phi1{};
    Complex d_a_phi2{}, d_abar_phi2{}, d_b_phi2{}, d_bbar_phi2{};
};

/// Central-difference jet with truncation O(h^2); one optional level of
/// Richardson extrapolation. Throws StencilError when any of the nine
/// evaluation points hits a singularity.
WirtingerJet wirtinger_jet(const QFunction& f, const Quaternion& p, double h,
                           bool richardson = false);

/// Absolute residuals of the four generalized Cauchy-Riemann equations at a
/// 3D-slice point (y = 0):
///   eq1 = |d_a phi1 - d_bbar conj(phi2)|   eq2 = |d_a phi2 + d_bbar conj(phi1)|
///   eq3 = |d_a phi1 - d_b phi2|            eq4 = |d_abar phi2 + d_bbar phi1|
/// scale = max(1, largest partial magnitude in the jet).
struct CRResidual {
    Quaternion point{};
    double eq1 = 0.0, eq2 = 0.0, eq3 = 0.0, eq4 = 0.0;
    double scale = 1.0;

    double max_abs() const;
    double max_rel() const { return max_abs() / scale; }
};

/// Throws PreconditionError unless the jet's point has y = 0.
CRResidual cr_residuals(const WirtingerJet& jet);

enum class Verdict { holomorphic, violated, inconclusive };

const char* to_string(Verdict v);

struct HolomorphyReport {
    std::vector<CRResidual> samples;
    double max_rel_residual = 0.0;
    double mean_rel_residual = 0.0;
    std::array<double, 4> max_rel_per_equation{};
    Verdict verdict = Verdict::inconclusive;
    double tolerance = 0.0;
    int num_requested = 0;
    int num_skipped_singular = 0;
};

/// Sampling region for the 3D slice: a box in (x, z, u) with y = 0 and
/// exclusion predicates. Sampling is seeded and rejection-based, so every
/// emitted point satisfies all predicates.
struct Domain {
    double x_lo = -2.0, x_hi = 2.0;
    double z_lo = -2.0, z_hi = 2.0;
    double u_lo = -2.0, u_hi = 2.0;
    double min_abs_p = 0.0;      // minimum |p|
    double min_abs_b = 0.0;      // minimum |b| = sqrt(z^2 + u^2)
    double branch_margin = 0.0;  // minimum distance from the closed negative real axis
    int sample_count = 100;
    std::uint64_t seed = 0;

    bool admits(const Quaternion& p) const;
    std::vector<Quaternion> sample() const;
};

/// Distance from a point to the set { (t, 0, 0, 0) : t <= 0 }.
double negative_axis_distance(const Quaternion& p);

/// Verdict over the sampled domain: holomorphic iff every evaluated sample
/// has max residual / scale <= tol; inconclusive when nothing could be
/// evaluated. Steps scale per point as h * max(1, |p|). Singular samples
/// are skipped and counted, never fatal.
HolomorphyReport check_holomorphy(const QFunction& f, const Domain& dom, double tol, double h,
                                  bool richardson = false);

enum class DerivMode {
    auto_chain,    // catalog trees: analytic derivative chain + one numeric step
    pure_numeric,  // nested central differences; order capped at 4
};

/// Full quaternionic derivative of order k >= 1. Order 1 is the central
/// x-difference of the whole function value (d_a + d_abar == d_x). Higher
/// orders follow the mode. Nested differencing enlarges the step to
/// h * 10^((k-1)/2) to keep roundoff in check.
Quaternion full_derivative_numeric(const QFunction& f, const Quaternion& p, int order, double h,
                                   DerivMode mode = DerivMode::auto_chain);

/// check_holomorphy applied to the order'th analytic derivative of f.
HolomorphyReport derivative_is_holomorphic(const QFunction& f, int order, const Domain& dom,
                                           double tol, double h, bool richardson = false);

}  // namespace holoq
