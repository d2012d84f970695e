#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "holoq/qfunc.hpp"
#include "holoq/quaternion.hpp"

namespace holoq {

struct PropertyReport {
    std::string property;
    int points_used = 0;
    int points_skipped = 0;
    double max_abs_deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;  // max_abs_deviation <= tolerance and at least one point used
};

struct StructurePoint {
    Quaternion point{};
    double im_dev = 0.0;        // |Im(phi2 * conj(b))| / (|phi2| |b|)
    double phi1_rot_dev = 0.0;  // |phi1(p) - phi1(p_rot)| / (1 + |phi1|)
    double phi2_rot_dev = 0.0;  // |phi2/b - phi2_rot/b_rot|
};

struct StructureReport {
    std::vector<StructurePoint> points;
    double max_im_dev = 0.0;
    double max_phi1_rot_dev = 0.0;
    double max_phi2_rot_dev = 0.0;
    double tolerance = 0.0;
    int points_used = 0;
    int points_skipped = 0;
    bool pass = false;
};

/// Seeded sample of full 4D quaternions in the box [lo, hi]^4, rejecting
/// points with |p| < min_abs_p, |b| < min_abs_b, or closer than
/// branch_margin to the closed negative real axis.
std::vector<Quaternion> sample_quaternions(std::uint64_t seed, int count, double lo, double hi,
                                           double min_abs_p = 0.0, double min_abs_b = 0.0,
                                           double branch_margin = 0.0);

/// max over points of |f(p)g(p) - g(p)f(p)| / (1 + |f(p)||g(p)|).
/// Both trees must be catalog-holomorphic; points with evaluation errors
/// are skipped and counted.
PropertyReport check_commutativity(const QFunction& f, const QFunction& g,
                                   const std::vector<Quaternion>& points, double tol);

/// Left quotient g^-1 * f against right quotient f * g^-1, normalized by
/// (1 + |f||g^-1|). Zero-denominator points are skipped.
PropertyReport check_quotient_equality(const QFunction& f, const QFunction& g,
                                       const std::vector<Quaternion>& points, double tol);

/// The representation-form tests: phi2 * conj(b) is real, and both phi1 and
/// phi2/b are invariant when b rotates by a phase (dependence on b only
/// through b*conj(b)). Eight seeded phase angles per point; points with
/// |b| <= min_abs_b are skipped.
StructureReport check_structure_forms(const QFunction& f, const std::vector<Quaternion>& points,
                                      double tol, std::uint64_t phase_seed = 1,
                                      double min_abs_b = 1e-6);

/// Sum, product and composition of f and g: the numeric full derivative of
/// each combination against the evaluated analytic rule tree, normalized by
/// (1 + |analytic|). h scales per point as h * max(1, |p|).
PropertyReport check_derivative_rules(const QFunction& f, const QFunction& g,
                                      const std::vector<Quaternion>& points, double tol,
                                      double h);

}  // namespace holoq
