#include "holoq/properties.hpp"

#include <algorithm>
#include <cmath>

#include "holoq/rng.hpp"
#include "holoq/wirtinger.hpp"

namespace holoq {

namespace {

void require_catalog(const QFunction& f, const char* what) {
    if (!f.is_catalog())
        throw UnsupportedNodeError(std::string(what) + " requires catalog-holomorphic trees");
}

void finish(PropertyReport& report) {
    report.pass = report.points_used >= 1 && report.max_abs_deviation <= report.tolerance;
}

}  // namespace

std::vector<Quaternion> sample_quaternions(std::uint64_t seed, int count, double lo, double hi,
                                           double min_abs_p, double min_abs_b,
                                           double branch_margin) {
    Rng rng(seed);
    std::vector<Quaternion> out;
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    const long long max_attempts = 10000LL * std::max(count, 1);
    long long attempts = 0;
    while (static_cast<int>(out.size()) < count && attempts < max_attempts) {
        ++attempts;
        const Quaternion p{rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi),
                           rng.uniform(lo, hi)};
        if (norm(p) < min_abs_p) continue;
        if (std::hypot(p.z, p.u) < min_abs_b) continue;
        if (branch_margin > 0.0 && negative_axis_distance(p) < branch_margin) continue;
        out.push_back(p);
    }
    return out;
}

PropertyReport check_commutativity(const QFunction& f, const QFunction& g,
                                   const std::vector<Quaternion>& points, double tol) {
    require_catalog(f, "commutativity check");
    require_catalog(g, "commutativity check");
    PropertyReport report;
    report.property = "commutativity";
    report.tolerance = tol;
    for (const Quaternion& p : points) {
        Quaternion fv, gv;
        try {
            fv = f.eval(p).value;
            gv = g.eval(p).value;
        } catch (const DomainError&) {
            ++report.points_skipped;
            continue;
        }
        const double dev = norm(fv * gv - gv * fv) / (1.0 + norm(fv) * norm(gv));
        report.max_abs_deviation = std::max(report.max_abs_deviation, dev);
        ++report.points_used;
    }
    finish(report);
    return report;
}

PropertyReport check_quotient_equality(const QFunction& f, const QFunction& g,
                                       const std::vector<Quaternion>& points, double tol) {
    require_catalog(f, "quotient check");
    require_catalog(g, "quotient check");
    PropertyReport report;
    report.property = "quotient_equality";
    report.tolerance = tol;
    for (const Quaternion& p : points) {
        Quaternion fv, gi;
        try {
            fv = f.eval(p).value;
            gi = inverse(g.eval(p).value);
        } catch (const DomainError&) {
            ++report.points_skipped;
            continue;
        }
        const double dev = norm(gi * fv - fv * gi) / (1.0 + norm(fv) * norm(gi));
        report.max_abs_deviation = std::max(report.max_abs_deviation, dev);
        ++report.points_used;
    }
    finish(report);
    return report;
}

StructureReport check_structure_forms(const QFunction& f, const std::vector<Quaternion>& points,
                                      double tol, std::uint64_t phase_seed, double min_abs_b) {
    require_catalog(f, "structure-form check");
    StructureReport report;
    report.tolerance = tol;
    Rng rng(phase_seed);
    constexpr int kAnglesPerPoint = 8;
    for (const Quaternion& p : points) {
        const Complex b{p.z, p.u};
        if (std::abs(b) <= min_abs_b) {
            ++report.points_skipped;
            continue;
        }
        StructurePoint sp;
        sp.point = p;
        Complex phi1, phi2;
        try {
            const EvalResult r = f.eval(p);
            phi1 = r.phi1;
            phi2 = r.phi2;
            const double denom = std::abs(phi2) * std::abs(b);
            sp.im_dev = denom > 0.0 ? std::abs(std::imag(phi2 * std::conj(b))) / denom : 0.0;
            for (int a = 0; a < kAnglesPerPoint; ++a) {
                const double phi = rng.uniform(0.0, 2.0 * M_PI);
                const Complex b_rot = b * std::polar(1.0, phi);
                const Quaternion p_rot{p.x, p.y, b_rot.real(), b_rot.imag()};
                const EvalResult rot = f.eval(p_rot);
                sp.phi1_rot_dev = std::max(
                    sp.phi1_rot_dev, std::abs(phi1 - rot.phi1) / (1.0 + std::abs(phi1)));
                sp.phi2_rot_dev =
                    std::max(sp.phi2_rot_dev, std::abs(phi2 / b - rot.phi2 / b_rot));
            }
        } catch (const DomainError&) {
            ++report.points_skipped;
            continue;
        }
        report.max_im_dev = std::max(report.max_im_dev, sp.im_dev);
        report.max_phi1_rot_dev = std::max(report.max_phi1_rot_dev, sp.phi1_rot_dev);
        report.max_phi2_rot_dev = std::max(report.max_phi2_rot_dev, sp.phi2_rot_dev);
        report.points.push_back(sp);
        ++report.points_used;
    }
    report.pass = report.points_used >= 1 && report.max_im_dev <= tol &&
                  report.max_phi1_rot_dev <= tol && report.max_phi2_rot_dev <= tol;
    return report;
}

PropertyReport check_derivative_rules(const QFunction& f, const QFunction& g,
                                      const std::vector<Quaternion>& points, double tol,
                                      double h) {
    require_catalog(f, "derivative-rule check");
    require_catalog(g, "derivative-rule check");
    PropertyReport report;
    report.property = "derivative_rules";
    report.tolerance = tol;
    const QFunction combos[] = {f + g, f * g, f.compose(g)};
    for (const Quaternion& p : points) {
        const double hp = h * std::max(1.0, norm(p));
        double dev = 0.0;
        bool ok = true;
        for (const QFunction& combo : combos) {
            try {
                const Quaternion analytic = combo.derivative().eval(p).value;
                const Quaternion numeric = full_derivative_numeric(combo, p, 1, hp);
                dev = std::max(dev, norm(numeric - analytic) / (1.0 + norm(analytic)));
            } catch (const DomainError&) {
                ok = false;
                break;
            } catch (const StencilError&) {
                ok = false;
                break;
            }
        }
        if (!ok) {
            ++report.points_skipped;
            continue;
        }
        report.max_abs_deviation = std::max(report.max_abs_deviation, dev);
        ++report.points_used;
    }
    finish(report);
    return report;
}

}  // namespace holoq
