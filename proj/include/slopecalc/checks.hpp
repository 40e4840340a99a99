#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "slopecalc/registry.hpp"

namespace slopecalc::cli {

using json = nlohmann::ordered_json;

/// Raised for malformed configs, unknown registry names, duplicate check
/// names and the like. The CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The built-in full diagnostic suite over the whole registry; used when no
/// config file is given.
json default_suite_config();

struct RunResult {
    json report;
    int exit_status = 0;  // 0 pass, 1 at least one failed check
};

/// Validates the config, runs every check (optionally filtered by type) and
/// assembles the versioned report. Reports are deterministic for a fixed
/// (config, seed) apart from the timestamp field; records are ordered by
/// check name. Module errors inside a check become failed records.
RunResult run_checks(const json& config, std::uint64_t seed, const std::string& command,
                     const std::string& type_filter = "");

/// Flat CSV projection of the per-check records (one row per check).
std::string report_csv(const json& report);

/// Writes one <check-name>.csv per grid-bearing record (c1_probe, schwarz,
/// fixedpoint) into out_dir. Cell values are serialized with the same
/// formatter as the JSON report, so the files match it byte for byte.
void write_grids(const json& report, const std::string& out_dir);

}  // namespace slopecalc::cli
