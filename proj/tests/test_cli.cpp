#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include <json.hpp>

#include "support/cli.hpp"

using nlohmann::json;
using testsupport::run_cli;

namespace {

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s)
        if (c == '\n') ++n;
    return n;
}

int count_null_rows(const std::string& csv) {
    int n = 0;
    std::size_t pos = 0;
    while ((pos = csv.find(",,,\n", pos)) != std::string::npos) {
        ++n;
        pos += 4;
    }
    return n;
}

}  // namespace

TEST_CASE("check: exit codes for pass, violation, parse error, inconclusive") {
    CHECK(run_cli("check --expr \"p^2\" --points 40 2>/dev/null").exit_code == 0);
    CHECK(run_cli("check --expr \"p^2\" --raw-conj --points 40 2>/dev/null").exit_code == 2);
    CHECK(run_cli("check --expr \"p^(\" 2>/dev/null").exit_code == 1);
    CHECK(run_cli("check --expr \"p^2\" --box -0.01:0.01 --exclude-radius 0.5 2>/dev/null")
              .exit_code == 3);
}

TEST_CASE("check: JSON report carries the schema and per-equation residuals") {
    const auto res = run_cli("check --expr \"exp(p)\" --points 30 --format json 2>/dev/null");
    REQUIRE(res.exit_code == 0);
    const json j = json::parse(res.output);
    CHECK(j["schema"] == "holoq/1");
    CHECK(j["verdict"] == "holomorphic");
    CHECK(j["num_evaluated"] == 30);
    CHECK(j["per_equation_max_rel"].contains("eq1"));
    CHECK(j["per_equation_max_rel"].contains("eq4"));
    CHECK(j["max_rel_residual"].get<double>() <= 1e-6);
}

TEST_CASE("eval: values and the doubling split") {
    const auto res =
        run_cli("eval --expr \"p^2\" --at 1,2,3,4 --format json 2>/dev/null");
    REQUIRE(res.exit_code == 0);
    const json j = json::parse(res.output);
    CHECK(j["value"][0].get<double>() == doctest::Approx(-28).epsilon(1e-12));
    CHECK(j["value"][1].get<double>() == doctest::Approx(4).epsilon(1e-12));
    CHECK(j["value"][2].get<double>() == doctest::Approx(6).epsilon(1e-12));
    CHECK(j["value"][3].get<double>() == doctest::Approx(8).epsilon(1e-12));
    CHECK(j["phi1"][0].get<double>() == doctest::Approx(-28).epsilon(1e-12));
    CHECK(j["phi2"][1].get<double>() == doctest::Approx(8).epsilon(1e-12));

    const auto one = run_cli("eval --expr \"exp(p)\" --at 0,0,0,0 --format json 2>/dev/null");
    REQUIRE(one.exit_code == 0);
    const json je = json::parse(one.output);
    CHECK(je["value"][0].get<double>() == 1.0);
    CHECK(je["value"][1].get<double>() == 0.0);

    CHECK(run_cli("eval --expr \"ln(p)\" --at -1,0,0,0 2>/dev/null").exit_code == 2);
    CHECK(run_cli("eval --expr \"recip(p)\" --at 0,0,0,0 2>/dev/null").exit_code == 2);
}

TEST_CASE("derive: closed forms and deviation bounds") {
    const auto second =
        run_cli("derive --expr \"p^-1\" --order 2 --points 40 --format json 2>/dev/null");
    REQUIRE(second.exit_code == 0);
    const json j = json::parse(second.output);
    CHECK(j["derivative"] == "2 * p^-3");
    CHECK(j["max_rel_deviation"].get<double>() <= 1e-6);

    const auto expd =
        run_cli("derive --expr \"exp(p)\" --order 3 --points 20 --format json 2>/dev/null");
    CHECK(json::parse(expd.output)["derivative"] == "exp(p)");

    const auto lnd =
        run_cli("derive --expr \"ln(p)\" --order 1 --points 20 --format json 2>/dev/null");
    CHECK(json::parse(lnd.output)["derivative"] == "recip(p)");
}

TEST_CASE("props: commute and quotient pass, structure works single-sided") {
    CHECK(run_cli("props --left \"p^2\" --right \"exp(p)\" --check commute --points 50 "
                  "--tol 1e-10 2>/dev/null")
              .exit_code == 0);
    CHECK(run_cli("props --left \"exp(p)\" --right \"p\" --check quotient --points 50 "
                  "--tol 1e-10 2>/dev/null")
              .exit_code == 0);
    CHECK(run_cli("props --left \"p^2\" --right \"p^2\" --check commute 2>/dev/null")
              .exit_code == 0);
    const auto st = run_cli(
        "props --left \"sin(p)\" --check structure --tol 1e-9 --points 30 --format json "
        "2>/dev/null");
    REQUIRE(st.exit_code == 0);
    const json j = json::parse(st.output);
    CHECK(j["pass"] == true);
    CHECK(j["max_im_dev"].get<double>() <= 1e-9);
}

TEST_CASE("field: grid enumeration, null markers, degenerate grids") {
    const auto res =
        run_cli("field --expr \"p^-1\" --grid 5x5x5 --range -1:1 2>/dev/null");
    REQUIRE(res.exit_code == 0);
    CHECK(count_lines(res.output) == 126);  // header + 125 nodes
    CHECK(count_null_rows(res.output) == 1);  // the origin is singular

    const auto entire = run_cli("field --expr \"p^2\" 2>/dev/null");
    REQUIRE(entire.exit_code == 0);
    CHECK(count_lines(entire.output) == 126);
    CHECK(count_null_rows(entire.output) == 0);

    const auto single =
        run_cli("field --expr \"exp(p)\" --grid 1x1x1 --range \"1:1,0:0,0:0\" 2>/dev/null");
    REQUIRE(single.exit_code == 0);
    CHECK(count_lines(single.output) == 2);
    // psi' = exp at (1,0,0) is e
    CHECK(single.output.find("1,0,0,2.718281828459045") != std::string::npos);

    CHECK(run_cli("field --expr \"p^2\" --grid 5x5 2>/dev/null").exit_code == 1);
}

TEST_CASE("determinism: identical config gives byte-identical reports") {
    const std::string cmd =
        "check --expr \"ln(p)\" --points 60 --seed 11 --format json 2>/dev/null";
    const auto a = run_cli(cmd);
    const auto b = run_cli(cmd);
    REQUIRE(a.exit_code == 0);
    CHECK(a.output == b.output);

    const std::string field_cmd = "field --expr \"p^-1\" --grid 7x7x7 --range -1.5:1.5 2>/dev/null";
    CHECK(run_cli(field_cmd).output == run_cli(field_cmd).output);
}

TEST_CASE("HOLOQ_SEED sets the default seed; --seed wins") {
    const auto env_run =
        run_cli("check --expr \"p^3\" --points 25 --format json 2>/dev/null", "HOLOQ_SEED=17");
    const auto flag_run =
        run_cli("check --expr \"p^3\" --points 25 --seed 17 --format json 2>/dev/null");
    CHECK(env_run.output == flag_run.output);

    const auto default_run =
        run_cli("check --expr \"p^3\" --points 25 --format json 2>/dev/null");
    CHECK(env_run.output != default_run.output);

    const auto override_run = run_cli(
        "check --expr \"p^3\" --points 25 --seed 0 --format json 2>/dev/null",
        "HOLOQ_SEED=17");
    CHECK(override_run.output == default_run.output);
}

TEST_CASE("--output writes the same bytes as stdout") {
    const std::string path = "/tmp/holoq_cli_test_out.json";
    const auto direct =
        run_cli("check --expr \"p^2\" --points 20 --format json 2>/dev/null");
    const auto to_file = run_cli("check --expr \"p^2\" --points 20 --format json --output " +
                                 path + " 2>/dev/null && cat " + path);
    CHECK(direct.output == to_file.output);
}

TEST_CASE("config validation maps to usage errors") {
    CHECK(run_cli("check --expr \"p^2\" --tol 0 2>/dev/null").exit_code == 1);
    CHECK(run_cli("check --expr \"p^2\" --tol -1 2>/dev/null").exit_code == 1);
    CHECK(run_cli("check --expr \"p^2\" --points 0 2>/dev/null").exit_code == 1);
    CHECK(run_cli("check --expr \"p^2\" --step 0 2>/dev/null").exit_code == 1);
    CHECK(run_cli("eval --expr \"p\" --at 1,2,3 2>/dev/null").exit_code == 1);
    CHECK(run_cli("props --left \"p\" --right \"p\" --check bogus 2>/dev/null").exit_code == 1);
}

TEST_CASE("richardson flag stays deterministic and green") {
    const std::string cmd =
        "check --expr \"exp(p)\" --points 30 --richardson --format json 2>/dev/null";
    const auto a = run_cli(cmd);
    REQUIRE(a.exit_code == 0);
    CHECK(json::parse(a.output)["config"]["richardson"] == true);
    CHECK(a.output == run_cli(cmd).output);
}

TEST_CASE("props rules check runs end to end") {
    CHECK(run_cli("props --left \"p^2\" --right \"exp(p)\" --check rules --points 25 "
                  "--box -1.5:1.5 2>/dev/null")
              .exit_code == 0);
}

TEST_CASE("parse diagnostics go to stderr with a span") {
    const auto res = run_cli("check --expr \"p^(\" 2>&1");
    CHECK(res.exit_code == 1);
    CHECK(res.output.find("error:") != std::string::npos);
    CHECK(res.output.find("^") != std::string::npos);
}
