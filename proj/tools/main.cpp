#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "holoq/commands.hpp"
#include "holoq/parser.hpp"

namespace {

using holoq::RunConfig;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("HOLOQ_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            std::cerr << "warning: ignoring non-numeric HOLOQ_SEED\n";
        }
    }
    return 0;
}

void add_common_flags(CLI::App* cmd, RunConfig& cfg, std::string& box) {
    cmd->add_option("--tol", cfg.tol, "residual/deviation tolerance")->capture_default_str();
    cmd->add_option("--step", cfg.step, "finite-difference step, scaled per point")
        ->capture_default_str();
    cmd->add_option("--points", cfg.points, "number of sample points")->capture_default_str();
    cmd->add_option("--seed", cfg.seed, "RNG seed (HOLOQ_SEED overrides the default)");
    cmd->add_option("--box", box, "sampling box, 'lo:hi' or 'x:x,z:z,u:u' (default -2:2)");
    cmd->add_option_function<double>(
        "--exclude-radius", [&cfg](const double& v) { cfg.exclude_radius = v; },
        "minimum |p| for samples (default inferred from the expression)");
    cmd->add_option("--min-b", cfg.min_b, "minimum |b| for samples")->capture_default_str();
    cmd->add_option_function<double>(
        "--branch-margin", [&cfg](const double& v) { cfg.branch_margin = v; },
        "minimum distance from the closed negative real axis (default inferred)");
    cmd->add_option("--format", cfg.format, "output format: text | json | csv")
        ->check(CLI::IsMember({"text", "json", "csv"}))
        ->capture_default_str();
    cmd->add_option("--output,-o", cfg.output, "write the report to a file instead of stdout");
    cmd->add_flag("--richardson", cfg.richardson,
                  "one level of Richardson extrapolation on the difference stencils");
}

void apply_box(const std::string& box, RunConfig& cfg) {
    if (box.empty()) return;
    // reuse the range syntax: one range for all axes or three ranges
    std::string part;
    std::vector<std::string> parts;
    for (char c : box) {
        if (c == ',') {
            parts.push_back(part);
            part.clear();
        } else {
            part += c;
        }
    }
    parts.push_back(part);
    if (parts.size() == 1) parts = {parts[0], parts[0], parts[0]};
    if (parts.size() != 3) throw holoq::ConfigError("--box wants one or three ranges");
    for (int i = 0; i < 3; ++i) {
        const auto colon = parts[i].find(':');
        if (colon == std::string::npos) throw holoq::ConfigError("--box wants 'lo:hi' ranges");
        try {
            cfg.box_lo[i] = std::stod(parts[i].substr(0, colon));
            cfg.box_hi[i] = std::stod(parts[i].substr(colon + 1));
        } catch (...) {
            throw holoq::ConfigError("malformed --box range: '" + parts[i] + "'");
        }
        if (cfg.box_hi[i] < cfg.box_lo[i]) throw holoq::ConfigError("empty --box range");
    }
}

int emit(const holoq::CmdResult& result, const std::string& output) {
    if (output.empty()) {
        std::fwrite(result.output.data(), 1, result.output.size(), stdout);
    } else {
        std::ofstream out(output, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot open output file '" << output << "'\n";
            return holoq::kExitUsage;
        }
        out.write(result.output.data(), static_cast<std::streamsize>(result.output.size()));
    }
    return result.exit_code;
}

void print_span_diagnostic(const std::string& expr, const holoq::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cerr << "  in: " << expr << "\n";
    std::cerr << "      ";
    for (std::size_t i = 0; i < e.span().begin; ++i) std::cerr << ' ';
    const std::size_t width = std::max<std::size_t>(1, e.span().end - e.span().begin);
    for (std::size_t i = 0; i < width; ++i) std::cerr << '^';
    std::cerr << " [bytes " << e.span().begin << ".." << e.span().end << "]\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "holoq: construct quaternionic holomorphic functions from complex analogues,\n"
        "verify the generalized Cauchy-Riemann equations numerically, and check their\n"
        "algebraic properties.\n"};
    app.require_subcommand(1);
    app.footer(std::string("Expression grammar:\n") + std::string(holoq::grammar_text()) +
               "\nExit codes: 0 pass, 1 usage/parse error, 2 violation or domain error, "
               "3 inconclusive.");

    RunConfig cfg;
    cfg.seed = default_seed();
    std::string box;

    auto* check = app.add_subcommand("check", "verify holomorphy over a sampled 3D domain");
    check->add_option("--expr", cfg.expr, "expression to check")->required();
    check->add_flag("--raw-conj", cfg.raw_conj,
                    "wrap the expression in quaternionic conjugation (negative control)");
    add_common_flags(check, cfg, box);

    auto* derive = app.add_subcommand("derive", "analytic derivative with numeric verification");
    derive->add_option("--expr", cfg.expr, "expression to differentiate")->required();
    derive->add_option("--order", cfg.order, "derivative order")->capture_default_str();
    add_common_flags(derive, cfg, box);

    auto* eval = app.add_subcommand("eval", "evaluate at a point, with the doubling-form split");
    eval->add_option("--expr", cfg.expr, "expression to evaluate")->required();
    eval->add_option("--at", cfg.at, "point 'x,y,z,u'")->required();
    eval->add_flag("--raw-conj", cfg.raw_conj,
                   "wrap the expression in quaternionic conjugation");
    add_common_flags(eval, cfg, box);

    auto* props = app.add_subcommand("props", "algebraic property checks on function pairs");
    props->add_option("--left", cfg.left, "left expression")->required();
    props->add_option("--right", cfg.right, "right expression");
    props->add_option("--check", cfg.check_kind, "commute | quotient | structure | rules")
        ->required();
    add_common_flags(props, cfg, box);

    auto* field = app.add_subcommand("field", "export the derivative field on a 3D grid");
    field->add_option("--expr", cfg.expr, "potential expression")->required();
    field->add_option("--grid", cfg.grid, "node counts 'AxBxC'")->capture_default_str();
    field->add_option("--range", cfg.range, "grid ranges, 'lo:hi' or per-axis; defaults to --box");
    add_common_flags(field, cfg, box);

    CLI11_PARSE(app, argc, argv);

    try {
        apply_box(box, cfg);
        holoq::CmdResult result;
        if (*check) {
            cfg.command = "check";
            result = holoq::cmd_check(cfg);
        } else if (*derive) {
            cfg.command = "derive";
            result = holoq::cmd_derive(cfg);
        } else if (*eval) {
            cfg.command = "eval";
            result = holoq::cmd_eval(cfg);
        } else if (*props) {
            cfg.command = "props";
            result = holoq::cmd_props(cfg);
        } else {
            cfg.command = "field";
            result = holoq::cmd_field(cfg);
        }
        return emit(result, cfg.output);
    } catch (const holoq::ParseError& e) {
        if (*props) {
            // two candidate sources; report the span without a caret line
            std::cerr << "error: " << e.what() << " [bytes " << e.span().begin << ".."
                      << e.span().end << "]\n";
        } else {
            print_span_diagnostic(cfg.expr, e);
        }
        return holoq::kExitUsage;
    } catch (const holoq::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return holoq::kExitUsage;
    } catch (const holoq::UnsupportedNodeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return holoq::kExitUsage;
    } catch (const holoq::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return holoq::kExitViolation;
    } catch (const holoq::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return holoq::kExitUsage;
    }
}
