#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "slopecalc/checks.hpp"

namespace {

using slopecalc::cli::json;

json load_config(const std::string& path) {
    if (path.empty()) return slopecalc::cli::default_suite_config();
    std::ifstream f(path);
    if (!f) throw slopecalc::cli::ConfigError("cannot open config file '" + path + "'");
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw slopecalc::cli::ConfigError(std::string("config parse error: ") + e.what());
    }
}

void write_output(const std::string& out, const std::string& text) {
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot open output file '" + out + "'");
    f << text;
}

int run_suite(const std::string& config_path, std::uint64_t seed, const std::string& out,
              const std::string& format, const std::string& command,
              const std::string& type_filter) {
    const json config = load_config(config_path);
    const auto result = slopecalc::cli::run_checks(config, seed, command, type_filter);
    if (format == "csv")
        write_output(out, slopecalc::cli::report_csv(result.report));
    else
        write_output(out, result.report.dump(2) + "\n");
    for (const auto& c : result.report.at("checks"))
        std::cerr << (c.at("passed").get<bool>() ? "pass  " : "FAIL  ")
                  << c.at("name").get<std::string>() << " [" << c.at("verdict").get<std::string>()
                  << "]\n";
    return result.exit_status;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"slope-function calculus diagnostics"};
    app.require_subcommand(1);

    std::string config_path, out, format = "json";
    std::uint64_t seed = 42;

    auto add_common = [&](CLI::App* cmd, bool with_format) {
        cmd->add_option("--config", config_path, "JSON config (defaults to the built-in suite)");
        cmd->add_option("--seed", seed, "seed for randomized sampling")->capture_default_str();
        cmd->add_option("--out", out, "output path ('-' = stdout)");
        if (with_format)
            cmd->add_option("--format", format, "report format")
                ->check(CLI::IsMember({"json", "csv"}))
                ->capture_default_str();
    };

    CLI::App* check = app.add_subcommand("check", "run configured checks and emit a report");
    add_common(check, true);
    CLI::App* grid = app.add_subcommand("grid", "emit CSV grid files for grid-bearing checks");
    add_common(grid, false);
    CLI::App* fixedpoint =
        app.add_subcommand("fixedpoint", "run only the fixed-point checks of the config");
    add_common(fixedpoint, true);
    CLI::App* list = app.add_subcommand("list", "list registered functions and problems");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            std::cout << "functions:\n";
            for (const auto& e : slopecalc::registry()) {
                std::cout << "  " << e.name << "  (" << e.function.dim_in << " -> "
                          << e.function.dim_out << ")  flags:";
                for (const auto& fl : e.flags) std::cout << " " << fl;
                if (e.lipschitz) std::cout << " lipschitz(" << *e.lipschitz << ")";
                std::cout << "\n    " << e.note << "\n";
            }
            std::cout << "problems:\n";
            for (const auto& p : slopecalc::problem_registry())
                std::cout << "  " << p.name << "  " << p.note << "\n";
            return 0;
        }
        if (check->parsed()) return run_suite(config_path, seed, out, format, "check", "");
        if (fixedpoint->parsed())
            return run_suite(config_path, seed, out, format, "fixedpoint", "fixedpoint");
        if (grid->parsed()) {
            const json config = load_config(config_path);
            const auto result = slopecalc::cli::run_checks(config, seed, "grid", "");
            slopecalc::cli::write_grids(result.report, out.empty() ? "." : out);
            return result.exit_status;
        }
    } catch (const slopecalc::cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
