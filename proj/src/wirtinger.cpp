#include "holoq/wirtinger.hpp"

#include <algorithm>
#include <cmath>

#include "holoq/rng.hpp"

namespace holoq {

namespace {

struct PhiPair {
    Complex phi1, phi2;
};

PhiPair eval_phi(const QFunction& f, const Quaternion& p) {
    const EvalResult r = f.eval(p);
    return {r.phi1, r.phi2};
}

constexpr Quaternion axis_offset(int axis, double h) {
    switch (axis) {
        case 0: return {h, 0.0, 0.0, 0.0};
        case 1: return {0.0, h, 0.0, 0.0};
        case 2: return {0.0, 0.0, h, 0.0};
        default: return {0.0, 0.0, 0.0, h};
    }
}

double component(const Quaternion& p, int axis) {
    switch (axis) {
        case 0: return p.x;
        case 1: return p.y;
        case 2: return p.z;
        default: return p.u;
    }
}

struct AxisDiffs {
    // central differences of phi1/phi2 along x, y, z, u
    std::array<Complex, 4> d1{}, d2{};
};

AxisDiffs axis_diffs(const QFunction& f, const Quaternion& p, double h) {
    AxisDiffs out;
    for (int axis = 0; axis < 4; ++axis) {
        const Quaternion e = axis_offset(axis, h);
        const Quaternion pp = p + e;
        const Quaternion pm = p - e;
        // divide by the realized span: p +- h rounds, 2h does not
        const double span = component(pp, axis) - component(pm, axis);
        const PhiPair plus = eval_phi(f, pp);
        const PhiPair minus = eval_phi(f, pm);
        out.d1[axis] = (plus.phi1 - minus.phi1) / span;
        out.d2[axis] = (plus.phi2 - minus.phi2) / span;
    }
    return out;
}

WirtingerJet assemble_jet(const Quaternion& p, double h, const PhiPair& center,
                          const AxisDiffs& d) {
    constexpr Complex I{0.0, 1.0};
    WirtingerJet jet;
    jet.point = p;
    jet.step_h = h;
    jet.phi1 = center.phi1;
    jet.phi2 = center.phi2;
    jet.d_a_phi1 = 0.5 * (d.d1[0] - I * d.d1[1]);
    jet.d_abar_phi1 = 0.5 * (d.d1[0] + I * d.d1[1]);
    jet.d_b_phi1 = 0.5 * (d.d1[2] - I * d.d1[3]);
    jet.d_bbar_phi1 = 0.5 * (d.d1[2] + I * d.d1[3]);
    jet.d_a_phi2 = 0.5 * (d.d2[0] - I * d.d2[1]);
    jet.d_abar_phi2 = 0.5 * (d.d2[0] + I * d.d2[1]);
    jet.d_b_phi2 = 0.5 * (d.d2[2] - I * d.d2[3]);
    jet.d_bbar_phi2 = 0.5 * (d.d2[2] + I * d.d2[3]);
    return jet;
}

}  // namespace

WirtingerJet wirtinger_jet(const QFunction& f, const Quaternion& p, double h, bool richardson) {
    if (!(h > 0.0)) throw PreconditionError("step h must be positive");
    try {
        const PhiPair center = eval_phi(f, p);
        const AxisDiffs coarse = axis_diffs(f, p, h);
        if (!richardson) return assemble_jet(p, h, center, coarse);
        const AxisDiffs fine = axis_diffs(f, p, 0.5 * h);
        AxisDiffs extrapolated;
        for (int axis = 0; axis < 4; ++axis) {
            extrapolated.d1[axis] = (4.0 * fine.d1[axis] - coarse.d1[axis]) / 3.0;
            extrapolated.d2[axis] = (4.0 * fine.d2[axis] - coarse.d2[axis]) / 3.0;
        }
        return assemble_jet(p, h, center, extrapolated);
    } catch (const DomainError& e) {
        throw StencilError(std::string("stencil point hit a singularity: ") + e.what());
    }
}

double CRResidual::max_abs() const { return std::max({eq1, eq2, eq3, eq4}); }

CRResidual cr_residuals(const WirtingerJet& jet) {
    if (jet.point.y != 0.0)
        throw PreconditionError("Cauchy-Riemann residuals are defined on the y = 0 slice");
    CRResidual r;
    r.point = jet.point;
    r.eq1 = std::abs(jet.d_a_phi1 - std::conj(jet.d_b_phi2));
    r.eq2 = std::abs(jet.d_a_phi2 + std::conj(jet.d_b_phi1));
    r.eq3 = std::abs(jet.d_a_phi1 - jet.d_b_phi2);
    r.eq4 = std::abs(jet.d_abar_phi2 + jet.d_bbar_phi1);
    const double largest =
        std::max({std::abs(jet.d_a_phi1), std::abs(jet.d_abar_phi1), std::abs(jet.d_b_phi1),
                  std::abs(jet.d_bbar_phi1), std::abs(jet.d_a_phi2), std::abs(jet.d_abar_phi2),
                  std::abs(jet.d_b_phi2), std::abs(jet.d_bbar_phi2)});
    r.scale = std::max(1.0, largest);
    return r;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::holomorphic: return "holomorphic";
        case Verdict::violated: return "violated";
        default: return "inconclusive";
    }
}

double negative_axis_distance(const Quaternion& p) {
    const double v = vec_norm(p);
    return p.x <= 0.0 ? v : std::sqrt(p.x * p.x + v * v);
}

bool Domain::admits(const Quaternion& p) const {
    if (p.y != 0.0) return false;
    if (p.x < x_lo || p.x > x_hi || p.z < z_lo || p.z > z_hi || p.u < u_lo || p.u > u_hi)
        return false;
    const double abs_b = std::hypot(p.z, p.u);
    if (abs_b < min_abs_b) return false;
    if (norm(p) < min_abs_p) return false;
    if (branch_margin > 0.0 && negative_axis_distance(p) < branch_margin) return false;
    return true;
}

std::vector<Quaternion> Domain::sample() const {
    Rng rng(seed);
    std::vector<Quaternion> out;
    out.reserve(static_cast<std::size_t>(std::max(sample_count, 0)));
    const long long max_attempts = 10000LL * std::max(sample_count, 1);
    long long attempts = 0;
    while (static_cast<int>(out.size()) < sample_count && attempts < max_attempts) {
        ++attempts;
        const Quaternion p{rng.uniform(x_lo, x_hi), 0.0, rng.uniform(z_lo, z_hi),
                           rng.uniform(u_lo, u_hi)};
        if (admits(p)) out.push_back(p);
    }
    return out;
}

HolomorphyReport check_holomorphy(const QFunction& f, const Domain& dom, double tol, double h,
                                  bool richardson) {
    HolomorphyReport report;
    report.tolerance = tol;
    report.num_requested = dom.sample_count;
    double rel_sum = 0.0;
    for (const Quaternion& p : dom.sample()) {
        const double hp = h * std::max(1.0, norm(p));
        CRResidual res;
        try {
            res = cr_residuals(wirtinger_jet(f, p, hp, richardson));
        } catch (const StencilError&) {
            ++report.num_skipped_singular;
            continue;
        }
        const double rel = res.max_rel();
        report.max_rel_residual = std::max(report.max_rel_residual, rel);
        rel_sum += rel;
        report.max_rel_per_equation[0] =
            std::max(report.max_rel_per_equation[0], res.eq1 / res.scale);
        report.max_rel_per_equation[1] =
            std::max(report.max_rel_per_equation[1], res.eq2 / res.scale);
        report.max_rel_per_equation[2] =
            std::max(report.max_rel_per_equation[2], res.eq3 / res.scale);
        report.max_rel_per_equation[3] =
            std::max(report.max_rel_per_equation[3], res.eq4 / res.scale);
        report.samples.push_back(res);
    }
    if (report.samples.empty()) {
        report.verdict = Verdict::inconclusive;
    } else {
        report.mean_rel_residual = rel_sum / static_cast<double>(report.samples.size());
        report.verdict =
            report.max_rel_residual <= tol ? Verdict::holomorphic : Verdict::violated;
    }
    return report;
}

namespace {

Quaternion nested_difference(const QFunction& f, const Quaternion& p, int order, double h) {
    if (order == 0) return f.eval(p).value;
    const Quaternion e = axis_offset(0, h);
    const Quaternion pp = p + e;
    const Quaternion pm = p - e;
    const Quaternion plus = nested_difference(f, pp, order - 1, h);
    const Quaternion minus = nested_difference(f, pm, order - 1, h);
    return (plus - minus) / (pp.x - pm.x);
}

}  // namespace

Quaternion full_derivative_numeric(const QFunction& f, const Quaternion& p, int order, double h,
                                   DerivMode mode) {
    if (order < 1) throw PreconditionError("derivative order must be >= 1");
    if (!(h > 0.0)) throw PreconditionError("step h must be positive");
    try {
        if (mode == DerivMode::auto_chain && f.is_catalog()) {
            const QFunction g = f.derivative(order - 1);
            return nested_difference(g, p, 1, h);
        }
        if (order > 4)
            throw UnsupportedOrderError("pure-numeric differentiation supports order <= 4");
        const double hk = h * std::pow(10.0, (order - 1) / 2.0);
        return nested_difference(f, p, order, hk);
    } catch (const DomainError& e) {
        throw StencilError(std::string("stencil point hit a singularity: ") + e.what());
    }
}

HolomorphyReport derivative_is_holomorphic(const QFunction& f, int order, const Domain& dom,
                                           double tol, double h, bool richardson) {
    if (!f.is_catalog())
        throw UnsupportedNodeError("derivative holomorphy requires a catalog tree");
    return check_holomorphy(f.derivative(order), dom, tol, h, richardson);
}

}  // namespace holoq
