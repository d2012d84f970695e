#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "holoq/errors.hpp"

namespace holoq {

/// Bad command-line arguments or malformed flag payloads.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Everything a subcommand needs, already parsed from flags. Identical
/// configs produce byte-identical output.
struct RunConfig {
    std::string command;         // check | derive | eval | props | field
    std::string expr;
    std::string left, right;     // props operands
    std::string check_kind;      // commute | quotient | structure | rules
    int order = 1;
    int points = 100;
    std::uint64_t seed = 0;
    double tol = 1e-6;
    double step = 1e-5;  // scaled per point by max(1, |p|)
    bool richardson = false;
    bool raw_conj = false;  // wrap the expression in raw quaternionic conjugation
    double box_lo[3] = {-2.0, -2.0, -2.0};  // x, z, u
    double box_hi[3] = {2.0, 2.0, 2.0};
    std::optional<double> exclude_radius;  // min |p|; derived from the tree when unset
    double min_b = 0.05;
    std::optional<double> branch_margin;   // derived from the tree when unset
    std::string at;              // eval point "x,y,z,u"
    std::string grid = "5x5x5";
    std::string range;           // field ranges; defaults to the box
    std::string format = "text"; // text | json | csv
    std::string output;          // report file; empty writes to stdout
};

struct CmdResult {
    int exit_code = 0;
    std::string output;
};

// Exit code contract: 0 pass, 1 usage/parse error, 2 mathematical violation
// or domain error, 3 inconclusive. Parse/config/domain errors escape as
// exceptions for the frontend to map.
CmdResult cmd_check(const RunConfig& cfg);
CmdResult cmd_derive(const RunConfig& cfg);
CmdResult cmd_eval(const RunConfig& cfg);
CmdResult cmd_props(const RunConfig& cfg);
CmdResult cmd_field(const RunConfig& cfg);

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitViolation = 2;
inline constexpr int kExitInconclusive = 3;

}  // namespace holoq
