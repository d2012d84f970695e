#include "holoq/commands.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "holoq/parser.hpp"
#include "holoq/properties.hpp"
#include "holoq/qfunc.hpp"
#include "holoq/wirtinger.hpp"

namespace holoq {

namespace {

using nlohmann::json;

constexpr const char* kSchema = "holoq/1";

std::string num17(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string num_short(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_number(std::string_view text, const char* what) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr != end)
        throw ConfigError(std::string("malformed ") + what + ": '" + std::string(text) + "'");
    return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

struct Range {
    double lo, hi;
};

Range parse_range(std::string_view text, const char* what) {
    const auto parts = split(text, ':');
    if (parts.size() != 2)
        throw ConfigError(std::string("expected 'lo:hi' in ") + what + ": '" +
                          std::string(text) + "'");
    Range r{parse_number(parts[0], what), parse_number(parts[1], what)};
    if (r.hi < r.lo) throw ConfigError(std::string("empty range in ") + what);
    return r;
}

// "lo:hi" applies to all three axes; "a:b,c:d,e:f" is per-axis (x, z, u).
std::array<Range, 3> parse_ranges3(std::string_view text, const char* what) {
    const auto parts = split(text, ',');
    if (parts.size() == 1) {
        const Range r = parse_range(parts[0], what);
        return {r, r, r};
    }
    if (parts.size() != 3)
        throw ConfigError(std::string(what) + " wants one range or three comma-separated ranges");
    return {parse_range(parts[0], what), parse_range(parts[1], what),
            parse_range(parts[2], what)};
}

Quaternion parse_point(std::string_view text) {
    const auto parts = split(text, ',');
    if (parts.size() != 4) throw ConfigError("--at wants four comma-separated components");
    return {parse_number(parts[0], "--at"), parse_number(parts[1], "--at"),
            parse_number(parts[2], "--at"), parse_number(parts[3], "--at")};
}

struct SingularityProfile {
    bool pole = false;    // recip, negative power, or log
    bool branch = false;  // log branch cut
};

void scan_singularities(const QFunction::Node& n, SingularityProfile& prof) {
    if (n.kind == NodeKind::recip) prof.pole = true;
    if (n.kind == NodeKind::pow_int && n.exponent < 0) prof.pole = true;
    if (n.kind == NodeKind::ln) {
        prof.pole = true;
        prof.branch = true;
    }
    if (n.lhs) scan_singularities(*n.lhs, prof);
    if (n.rhs) scan_singularities(*n.rhs, prof);
}

SingularityProfile profile(const QFunction& f) {
    SingularityProfile prof;
    scan_singularities(f.root(), prof);
    return prof;
}

void validate(const RunConfig& cfg) {
    if (!(cfg.tol > 0.0)) throw ConfigError("--tol must be positive");
    if (!(cfg.step > 0.0)) throw ConfigError("--step must be positive");
    if (cfg.points < 1) throw ConfigError("--points must be at least 1");
    if (cfg.min_b < 0.0) throw ConfigError("--min-b must be nonnegative");
}

Domain make_domain(const RunConfig& cfg, const QFunction& f) {
    const SingularityProfile prof = profile(f);
    Domain dom;
    dom.x_lo = cfg.box_lo[0];
    dom.x_hi = cfg.box_hi[0];
    dom.z_lo = cfg.box_lo[1];
    dom.z_hi = cfg.box_hi[1];
    dom.u_lo = cfg.box_lo[2];
    dom.u_hi = cfg.box_hi[2];
    dom.min_abs_b = cfg.min_b;
    dom.min_abs_p = cfg.exclude_radius.value_or(prof.pole ? 0.1 : 0.0);
    dom.branch_margin = cfg.branch_margin.value_or(prof.branch ? 0.1 : 0.0);
    dom.sample_count = cfg.points;
    dom.seed = cfg.seed;
    return dom;
}

json domain_json(const Domain& dom, const RunConfig& cfg) {
    return {{"box", {{dom.x_lo, dom.x_hi}, {dom.z_lo, dom.z_hi}, {dom.u_lo, dom.u_hi}}},
            {"min_abs_p", dom.min_abs_p},
            {"min_abs_b", dom.min_abs_b},
            {"branch_margin", dom.branch_margin},
            {"points", dom.sample_count},
            {"seed", dom.seed},
            {"step", cfg.step},
            {"tol", cfg.tol},
            {"richardson", cfg.richardson}};
}

json quat_json(const Quaternion& q) { return {q.x, q.y, q.z, q.u}; }

std::string quat_text(const Quaternion& q) {
    return "(" + num_short(q.x) + ", " + num_short(q.y) + ", " + num_short(q.z) + ", " +
           num_short(q.u) + ")";
}

std::string complex_text(const Complex& c) {
    return num_short(c.real()) + (std::signbit(c.imag()) ? " - " : " + ") +
           num_short(std::abs(c.imag())) + "i";
}

std::string displayed_expr(const RunConfig& cfg, const QFunction& f) {
    return cfg.raw_conj ? format(f) : cfg.expr;
}

// --- check ---------------------------------------------------------------

CmdResult render_check(const RunConfig& cfg, const std::string& expr,
                       const Domain& dom, const HolomorphyReport& rep) {
    int code = kExitInconclusive;
    if (rep.verdict == Verdict::holomorphic) code = kExitOk;
    if (rep.verdict == Verdict::violated) code = kExitViolation;

    if (cfg.format == "json") {
        json samples = json::array();
        for (const CRResidual& s : rep.samples)
            samples.push_back({{"point", quat_json(s.point)},
                               {"eq", {s.eq1, s.eq2, s.eq3, s.eq4}},
                               {"scale", s.scale}});
        const json j = {{"schema", kSchema},
                        {"command", "check"},
                        {"expression", expr},
                        {"config", domain_json(dom, cfg)},
                        {"verdict", to_string(rep.verdict)},
                        {"num_evaluated", static_cast<int>(rep.samples.size())},
                        {"num_requested", rep.num_requested},
                        {"num_skipped_singular", rep.num_skipped_singular},
                        {"max_rel_residual", rep.max_rel_residual},
                        {"mean_rel_residual", rep.mean_rel_residual},
                        {"per_equation_max_rel",
                         {{"eq1", rep.max_rel_per_equation[0]},
                          {"eq2", rep.max_rel_per_equation[1]},
                          {"eq3", rep.max_rel_per_equation[2]},
                          {"eq4", rep.max_rel_per_equation[3]}}},
                        {"samples", samples}};
        return {code, j.dump(2) + "\n"};
    }
    if (cfg.format == "csv") {
        std::string out = "x,z,u,eq1,eq2,eq3,eq4,scale\n";
        for (const CRResidual& s : rep.samples) {
            out += num17(s.point.x) + "," + num17(s.point.z) + "," + num17(s.point.u) + "," +
                   num17(s.eq1) + "," + num17(s.eq2) + "," + num17(s.eq3) + "," +
                   num17(s.eq4) + "," + num17(s.scale) + "\n";
        }
        return {code, out};
    }
    std::string out;
    out += "expression:    " + expr + "\n";
    out += "verdict:       " + std::string(to_string(rep.verdict)) + "\n";
    out += "samples:       " + std::to_string(rep.samples.size()) + " evaluated, " +
           std::to_string(rep.num_skipped_singular) + " skipped (of " +
           std::to_string(rep.num_requested) + " requested)\n";
    out += "max residual:  " + num_short(rep.max_rel_residual) + " (relative, tol " +
           num_short(rep.tolerance) + ")\n";
    out += "mean residual: " + num_short(rep.mean_rel_residual) + "\n";
    out += "per equation:  eq1 " + num_short(rep.max_rel_per_equation[0]) + "  eq2 " +
           num_short(rep.max_rel_per_equation[1]) + "  eq3 " +
           num_short(rep.max_rel_per_equation[2]) + "  eq4 " +
           num_short(rep.max_rel_per_equation[3]) + "\n";
    return {code, out};
}

}  // namespace

CmdResult cmd_check(const RunConfig& cfg) {
    validate(cfg);
    QFunction f = parse(cfg.expr);
    if (cfg.raw_conj) f = raw_conj(f);
    const Domain dom = make_domain(cfg, f);
    const HolomorphyReport rep = check_holomorphy(f, dom, cfg.tol, cfg.step, cfg.richardson);
    return render_check(cfg, displayed_expr(cfg, f), dom, rep);
}

CmdResult cmd_derive(const RunConfig& cfg) {
    validate(cfg);
    const QFunction f = parse(cfg.expr);
    if (!f.is_catalog())
        throw UnsupportedNodeError("derive requires a catalog-holomorphic expression");
    if (cfg.order < 1) throw ConfigError("--order must be >= 1");
    const QFunction d = f.derivative(cfg.order);
    const std::string d_text = format(d);

    const Domain dom = make_domain(cfg, f);
    struct Row {
        Quaternion point;
        double dev;
    };
    std::vector<Row> rows;
    double max_dev = 0.0;
    int skipped = 0;
    for (const Quaternion& p : dom.sample()) {
        try {
            const Quaternion analytic = d.eval(p).value;
            const Quaternion numeric =
                full_derivative_numeric(f, p, cfg.order, cfg.step * std::max(1.0, norm(p)));
            const double dev = norm(numeric - analytic) / (1.0 + norm(analytic));
            max_dev = std::max(max_dev, dev);
            rows.push_back({p, dev});
        } catch (const StencilError&) {
            ++skipped;
        } catch (const DomainError&) {
            ++skipped;
        }
    }

    if (cfg.format == "json") {
        json points = json::array();
        for (const Row& r : rows)
            points.push_back({{"point", quat_json(r.point)}, {"deviation", r.dev}});
        const json j = {{"schema", kSchema},
                        {"command", "derive"},
                        {"expression", cfg.expr},
                        {"order", cfg.order},
                        {"derivative", d_text},
                        {"config", domain_json(dom, cfg)},
                        {"points_used", static_cast<int>(rows.size())},
                        {"points_skipped", skipped},
                        {"max_rel_deviation", max_dev},
                        {"points", points}};
        return {kExitOk, j.dump(2) + "\n"};
    }
    if (cfg.format == "csv") {
        std::string out = "x,z,u,deviation\n";
        for (const Row& r : rows)
            out += num17(r.point.x) + "," + num17(r.point.z) + "," + num17(r.point.u) + "," +
                   num17(r.dev) + "\n";
        return {kExitOk, out};
    }
    std::string out;
    out += "derivative:    " + d_text + "\n";
    out += "order:         " + std::to_string(cfg.order) + "\n";
    out += "max deviation: " + num_short(max_dev) + " (numeric vs analytic, " +
           std::to_string(rows.size()) + " points, " + std::to_string(skipped) +
           " skipped)\n";
    for (const Row& r : rows)
        out += "  " + quat_text(r.point) + "  dev " + num_short(r.dev) + "\n";
    return {kExitOk, out};
}

CmdResult cmd_eval(const RunConfig& cfg) {
    validate(cfg);
    QFunction f = parse(cfg.expr);
    if (cfg.raw_conj) f = raw_conj(f);
    if (cfg.at.empty()) throw ConfigError("eval needs --at x,y,z,u");
    const Quaternion p = parse_point(cfg.at);
    const EvalResult r = f.eval(p);  // DomainError maps to exit 2 in the frontend

    if (cfg.format == "json") {
        const json j = {{"schema", kSchema},
                        {"command", "eval"},
                        {"expression", displayed_expr(cfg, f)},
                        {"at", quat_json(p)},
                        {"value", quat_json(r.value)},
                        {"phi1", {r.phi1.real(), r.phi1.imag()}},
                        {"phi2", {r.phi2.real(), r.phi2.imag()}}};
        return {kExitOk, j.dump(2) + "\n"};
    }
    if (cfg.format == "csv") {
        std::string out = "x,y,z,u,psi_w,psi_x,psi_y,psi_z\n";
        out += num17(p.x) + "," + num17(p.y) + "," + num17(p.z) + "," + num17(p.u) + "," +
               num17(r.value.x) + "," + num17(r.value.y) + "," + num17(r.value.z) + "," +
               num17(r.value.u) + "\n";
        return {kExitOk, out};
    }
    std::string out;
    out += "value: " + quat_text(r.value) + "\n";
    out += "phi1:  " + complex_text(r.phi1) + "\n";
    out += "phi2:  " + complex_text(r.phi2) + "\n";
    return {kExitOk, out};
}

CmdResult cmd_props(const RunConfig& cfg) {
    validate(cfg);
    if (cfg.left.empty()) throw ConfigError("props needs --left");
    const QFunction f = parse(cfg.left);
    const bool needs_right = cfg.check_kind != "structure";
    if (needs_right && cfg.right.empty()) throw ConfigError("props needs --right");
    const QFunction g = needs_right ? parse(cfg.right) : QFunction::var();

    SingularityProfile prof = profile(f);
    if (needs_right) {
        const SingularityProfile pg = profile(g);
        prof.pole = prof.pole || pg.pole;
        prof.branch = prof.branch || pg.branch;
    }
    const double min_p = cfg.exclude_radius.value_or(prof.pole ? 0.1 : 0.0);
    const double margin = cfg.branch_margin.value_or(prof.branch ? 0.1 : 0.0);
    // props samples full 4D quaternions; the x box range is used for every
    // component
    const std::vector<Quaternion> points = sample_quaternions(
        cfg.seed, cfg.points, cfg.box_lo[0], cfg.box_hi[0], min_p, cfg.min_b, margin);

    json j = {{"schema", kSchema},
              {"command", "props"},
              {"check", cfg.check_kind},
              {"left", cfg.left},
              {"seed", cfg.seed},
              {"tolerance", cfg.tol}};
    if (needs_right) j["right"] = cfg.right;

    std::string text;
    bool pass = false;
    if (cfg.check_kind == "structure") {
        const StructureReport rep = check_structure_forms(f, points, cfg.tol, cfg.seed + 1);
        pass = rep.pass;
        j["points_used"] = rep.points_used;
        j["points_skipped"] = rep.points_skipped;
        j["max_im_dev"] = rep.max_im_dev;
        j["max_phi1_rotation_dev"] = rep.max_phi1_rot_dev;
        j["max_phi2_rotation_dev"] = rep.max_phi2_rot_dev;
        j["pass"] = rep.pass;
        text = "check:      structure\nresult:     " + std::string(pass ? "pass" : "fail") +
               "\npoints:     " + std::to_string(rep.points_used) + " used, " +
               std::to_string(rep.points_skipped) + " skipped\nmax dev:    B realness " +
               num_short(rep.max_im_dev) + ", phi1 rotation " +
               num_short(rep.max_phi1_rot_dev) + ", phi2/b rotation " +
               num_short(rep.max_phi2_rot_dev) + "\ntolerance:  " + num_short(cfg.tol) + "\n";
    } else {
        PropertyReport rep;
        if (cfg.check_kind == "commute") {
            rep = check_commutativity(f, g, points, cfg.tol);
        } else if (cfg.check_kind == "quotient") {
            rep = check_quotient_equality(f, g, points, cfg.tol);
        } else if (cfg.check_kind == "rules") {
            rep = check_derivative_rules(f, g, points, cfg.tol, cfg.step);
        } else {
            throw ConfigError("--check must be commute, quotient, structure or rules");
        }
        pass = rep.pass;
        j["property"] = rep.property;
        j["points_used"] = rep.points_used;
        j["points_skipped"] = rep.points_skipped;
        j["max_abs_deviation"] = rep.max_abs_deviation;
        j["pass"] = rep.pass;
        text = "check:      " + rep.property + "\nresult:     " +
               std::string(pass ? "pass" : "fail") + "\npoints:     " +
               std::to_string(rep.points_used) + " used, " +
               std::to_string(rep.points_skipped) + " skipped\nmax dev:    " +
               num_short(rep.max_abs_deviation) + " (tol " + num_short(rep.tolerance) + ")\n";
    }

    const int code = pass ? kExitOk : kExitViolation;
    if (cfg.format == "json") return {code, j.dump(2) + "\n"};
    return {code, text};
}

CmdResult cmd_field(const RunConfig& cfg) {
    validate(cfg);
    const QFunction f = parse(cfg.expr);
    if (!f.is_catalog())
        throw UnsupportedNodeError("field requires a catalog-holomorphic expression");
    const QFunction d = f.derivative();

    const auto grid_parts = split(cfg.grid, 'x');
    if (grid_parts.size() != 3) throw ConfigError("--grid wants AxBxC");
    int counts[3];
    for (int i = 0; i < 3; ++i) {
        const double n = parse_number(grid_parts[i], "--grid");
        if (n < 1 || n != std::floor(n) || n > 1e6)
            throw ConfigError("--grid counts must be positive integers");
        counts[i] = static_cast<int>(n);
    }
    std::array<Range, 3> ranges = {Range{cfg.box_lo[0], cfg.box_hi[0]},
                                   Range{cfg.box_lo[1], cfg.box_hi[1]},
                                   Range{cfg.box_lo[2], cfg.box_hi[2]}};
    if (!cfg.range.empty()) ranges = parse_ranges3(cfg.range, "--range");

    const auto coordinate = [&](int axis, int index) {
        if (counts[axis] == 1) return ranges[axis].lo;
        return ranges[axis].lo +
               (ranges[axis].hi - ranges[axis].lo) * index / (counts[axis] - 1.0);
    };

    struct NodeValue {
        Quaternion point;
        std::optional<Quaternion> value;
    };
    std::vector<NodeValue> nodes;
    nodes.reserve(static_cast<std::size_t>(counts[0]) * counts[1] * counts[2]);
    for (int ix = 0; ix < counts[0]; ++ix)
        for (int iz = 0; iz < counts[1]; ++iz)
            for (int iu = 0; iu < counts[2]; ++iu) {
                const Quaternion p{coordinate(0, ix), 0.0, coordinate(1, iz),
                                   coordinate(2, iu)};
                NodeValue node{p, std::nullopt};
                try {
                    node.value = d.eval(p).value;
                } catch (const DomainError&) {
                    // singular grid node: emitted with empty value fields
                }
                nodes.push_back(node);
            }

    if (cfg.format == "json") {
        json arr = json::array();
        for (const NodeValue& n : nodes) {
            json entry = {{"point", {n.point.x, n.point.z, n.point.u}}};
            entry["value"] = n.value ? quat_json(*n.value) : json(nullptr);
            arr.push_back(entry);
        }
        const json j = {{"schema", kSchema},
                        {"command", "field"},
                        {"expression", cfg.expr},
                        {"derivative", format(d)},
                        {"grid", {counts[0], counts[1], counts[2]}},
                        {"range",
                         {{ranges[0].lo, ranges[0].hi},
                          {ranges[1].lo, ranges[1].hi},
                          {ranges[2].lo, ranges[2].hi}}},
                        {"nodes", arr}};
        return {kExitOk, j.dump(2) + "\n"};
    }
    // CSV (default for field even in text mode): one row per grid node
    std::string out = "x,z,u,psi_w,psi_x,psi_y,psi_z\n";
    for (const NodeValue& n : nodes) {
        out += num17(n.point.x) + "," + num17(n.point.z) + "," + num17(n.point.u) + ",";
        if (n.value) {
            out += num17(n.value->x) + "," + num17(n.value->y) + "," + num17(n.value->z) +
                   "," + num17(n.value->u);
        } else {
            out += ",,,";
        }
        out += "\n";
    }
    return {kExitOk, out};
}

}  // namespace holoq
