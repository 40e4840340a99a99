#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "slopecalc/checks.hpp"
#include "test_support.hpp"

using namespace slopecalc;
using cli::json;
using testsupport::fd_jacobian;

namespace {

json strip_timestamp(json report) {
    report.erase("timestamp");
    return report;
}

}  // namespace

TEST_CASE("registry entries keep their declared properties") {
    Rng rng(1234);
    std::set<std::string> seen;
    for (const auto& e : registry()) {
        CHECK(seen.insert(e.name).second);  // unique names
        // analytic Jacobians agree with central differences at interior points
        if (e.function.has_jacobian()) {
            for (int i = 0; i < 5; ++i) {
                const Vector x = e.function.domain.center() +
                                 0.4 * e.function.domain.min_margin(e.function.domain.center()) *
                                     rng.unit_vector(e.function.dim_in);
                CHECK(max_abs(e.function.jacobian(x) - fd_jacobian(e.function, x)) <= 1e-5);
            }
        }
        if (e.lipschitz && !e.has_flag("pathological")) {
            for (int i = 0; i < 20; ++i) {
                const Vector x = e.function.domain.center() +
                                 0.4 * e.function.domain.min_margin(e.function.domain.center()) *
                                     rng.unit_vector(e.function.dim_in);
                CHECK(spectral_norm(derivative_oracle(e.function, x)) <= *e.lipschitz + 1e-9);
            }
        }
    }
    CHECK_THROWS_AS(find_entry("no_such_function"), std::invalid_argument);
    CHECK_THROWS_AS(find_problem("no_such_problem"), std::invalid_argument);
}

TEST_CASE("contraction problems satisfy the declared uniform bound") {
    Rng rng(4321);
    for (const auto& np : problem_registry()) {
        const ContractionProblem& p = np.problem;
        for (int i = 0; i < 100; ++i) {
            const Vector x = rng.in_box(p.x_box), y = rng.in_box(p.x_box);
            const Vector lam = rng.in_box(p.lambda_box);
            CHECK(norm2(p.f(x, lam) - p.f(y, lam)) <=
                  p.contraction_constant * norm2(y - x) * (1.0 + 1e-9));
            CHECK(p.x_box.contains(p.f(x, lam)));  // maps the box into itself
        }
    }
}

TEST_CASE("run_checks: small config end to end") {
    const json config{
        {"schema_version", 1},
        {"checks",
         json::array(
             {json{{"name", "b_ident"}, {"type", "slope_identity"}, {"function", "quad_norm2"}, {"pairs", 20}},
              json{{"name", "a_c1"},
                   {"type", "c1_probe"},
                   {"function", "osc_square"},
                   {"x0", json::array({0.0, 0.0})},
                   {"grid_per_radius", 128},
                   {"expect", "non_converging"}},
              json{{"name", "c_lip"},
                   {"type", "lipschitz"},
                   {"function", "double1d"},
                   {"samples", 20},
                   {"expect", "fail"}}})}};
    const auto run = cli::run_checks(config, 7, "check");
    CHECK(run.exit_status == 0);
    const auto& checks = run.report.at("checks");
    REQUIRE(checks.size() == 3);
    // merged ordering by name
    CHECK(checks[0].at("name") == "a_c1");
    CHECK(checks[1].at("name") == "b_ident");
    CHECK(checks[2].at("name") == "c_lip");
    // expected-verdict matching: declared failures pass
    CHECK(checks[0].at("verdict") == "non_converging");
    CHECK(checks[0].at("passed") == true);
    CHECK(checks[2].at("verdict") == "fail");
    CHECK(checks[2].at("passed") == true);
    CHECK(run.report.at("summary").at("failed") == 0);
}

TEST_CASE("run_checks: failing expectation flips the exit status") {
    const json config{{"schema_version", 1},
                      {"checks", json::array({json{{"name", "lip"},
                                                   {"type", "lipschitz"},
                                                   {"function", "double1d"},
                                                   {"samples", 10}}})}};  // expect defaults to pass
    const auto run = cli::run_checks(config, 7, "check");
    CHECK(run.exit_status == 1);
    CHECK(run.report.at("checks")[0].at("passed") == false);
}

TEST_CASE("run_checks: config errors") {
    CHECK_THROWS_AS(cli::run_checks(json::array(), 1, "check"), cli::ConfigError);
    CHECK_THROWS_AS(cli::run_checks(json{{"checks", 5}}, 1, "check"), cli::ConfigError);
    const json unknown{{"checks", json::array({json{{"name", "x"},
                                                    {"type", "slope_identity"},
                                                    {"function", "nope"}}})}};
    CHECK_THROWS_AS(cli::run_checks(unknown, 1, "check"), cli::ConfigError);
    const json dup{{"checks", json::array({json{{"name", "x"},
                                                {"type", "slope_identity"},
                                                {"function", "sine1d"}},
                                           json{{"name", "x"},
                                                {"type", "mvi"},
                                                {"function", "sine1d"}}})}};
    CHECK_THROWS_AS(cli::run_checks(dup, 1, "check"), cli::ConfigError);
    const json badtype{{"checks", json::array({json{{"name", "x"}, {"type", "wat"}}})}};
    CHECK_THROWS_AS(cli::run_checks(badtype, 1, "check"), cli::ConfigError);
}

TEST_CASE("run_checks: empty list gives an empty passing report") {
    const auto run = cli::run_checks(json{{"checks", json::array()}}, 3, "check");
    CHECK(run.exit_status == 0);
    CHECK(run.report.at("checks").empty());
    CHECK(run.report.at("summary").at("total") == 0);
}

TEST_CASE("module errors become failed records, not crashes") {
    // x0 sits so close to the boundary that the probe ball exits the domain
    const json config{{"checks", json::array({json{{"name", "edge"},
                                                   {"type", "c1_probe"},
                                                   {"function", "quad_norm2"},
                                                   {"x0", json::array({1.95, 0.0})}}})}};
    const auto run = cli::run_checks(config, 3, "check");
    CHECK(run.exit_status == 1);
    const auto& rec = run.report.at("checks")[0];
    CHECK(rec.at("verdict") == "error");
    CHECK(rec.contains("error"));
}

TEST_CASE("reports are deterministic for a fixed config and seed") {
    const json config{
        {"checks",
         json::array({json{{"name", "ident"}, {"type", "slope_identity"}, {"function", "trig2"}, {"pairs", 30}},
                      json{{"name", "mvi"}, {"type", "mvi"}, {"function", "sine1d"}, {"instances", 5}},
                      json{{"name", "fp"}, {"type", "fixedpoint"}, {"problem", "affine_mean"}, {"lambda_grid", 5}}})}};
    const auto a = cli::run_checks(config, 99, "check");
    const auto b = cli::run_checks(config, 99, "check");
    CHECK(strip_timestamp(a.report).dump() == strip_timestamp(b.report).dump());
    // a different seed must change at least the sampled values
    const auto c = cli::run_checks(config, 100, "check");
    CHECK(strip_timestamp(a.report).dump() != strip_timestamp(c.report).dump());
}

TEST_CASE("grid CSV projection matches the report byte for byte") {
    namespace fs = std::filesystem;
    const json config{{"checks", json::array({json{{"name", "c1grid"},
                                                   {"type", "c1_probe"},
                                                   {"function", "quad_norm2"},
                                                   {"grid_per_radius", 64}},
                                              json{{"name", "swz"},
                                                   {"type", "schwarz"},
                                                   {"function", "bilinear_x1x2"},
                                                   {"tol", 1e-12}}})}};
    const auto run = cli::run_checks(config, 5, "check");
    const fs::path dir = fs::temp_directory_path() / "slopecalc_grids";
    fs::remove_all(dir);
    cli::write_grids(run.report, dir.string());
    REQUIRE(fs::exists(dir / "c1grid.csv"));
    REQUIRE(fs::exists(dir / "swz.csv"));

    std::ifstream f(dir / "c1grid.csv");
    std::string header;
    std::getline(f, header);
    CHECK(header == "radius,modulus");
    const auto& rows = run.report.at("checks")[0].at("values").at("grid").at("rows");
    std::string line;
    std::size_t i = 0;
    while (std::getline(f, line)) {
        REQUIRE(i < rows.size());
        CHECK(line == rows[i][0].dump() + "," + rows[i][1].dump());
        ++i;
    }
    CHECK(i == rows.size());
}

TEST_CASE("flat CSV projection lists one row per check") {
    const json config{{"checks", json::array({json{{"name", "swz"},
                                                   {"type", "schwarz"},
                                                   {"function", "x1sq_x2"},
                                                   {"x", json::array({1.0, 1.0})}}})}};
    const auto run = cli::run_checks(config, 5, "check");
    std::istringstream csv(cli::report_csv(run.report));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "name,type,verdict,expected,passed");
    std::getline(csv, line);
    CHECK(line == "swz,schwarz,pass,pass,true");
}

TEST_CASE("type filter restricts execution to fixed-point checks") {
    json config = cli::default_suite_config();
    const auto run = cli::run_checks(config, 11, "fixedpoint", "fixedpoint");
    CHECK(run.report.at("checks").size() == problem_registry().size());
    for (const auto& c : run.report.at("checks")) CHECK(c.at("type") == "fixedpoint");
    CHECK(run.exit_status == 0);
}

TEST_CASE("pathological entries fail only as declared") {
    // identity and witness diagnostics still pass on the oscillator (it is
    // differentiable everywhere), and the zero function with the rotating
    // slope keeps its Lipschitz claim; only the declared failures fire.
    const json config{
        {"checks",
         json::array(
             {json{{"name", "osc_ident"}, {"type", "slope_identity"}, {"function", "osc_square"}, {"pairs", 40}},
              json{{"name", "osc_mvi"}, {"type", "mvi"}, {"function", "osc_square"}, {"instances", 10}},
              json{{"name", "zp_lip"}, {"type", "lipschitz"}, {"function", "zero_perp"}, {"samples", 20}},
              json{{"name", "dbl_lip"},
                   {"type", "lipschitz"},
                   {"function", "double1d"},
                   {"samples", 20},
                   {"expect", "fail"}},
              json{{"name", "osc_c1"},
                   {"type", "c1_probe"},
                   {"function", "osc_square"},
                   {"x0", json::array({0.0, 0.0})},
                   {"expect", "non_converging"}}})}};
    const auto run = cli::run_checks(config, 21, "check");
    CHECK(run.exit_status == 0);
    for (const auto& c : run.report.at("checks")) CHECK(c.at("passed") == true);
}

TEST_CASE("default suite config is well formed") {
    const json config = cli::default_suite_config();
    CHECK(config.at("schema_version") == 1);
    std::set<std::string> names;
    for (const auto& c : config.at("checks"))
        CHECK(names.insert(c.at("name").get<std::string>()).second);
    CHECK(config.at("checks").size() >= 40);
}
