#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "slopecalc/fixedpoint.hpp"
#include "slopecalc/slope.hpp"

namespace slopecalc {

/// Named test function with declared properties. Flags are claims checked by
/// the test suite, never trusted: smooth / c1 / c2 / pathological, plus an
/// optional declared Lipschitz constant. Pathological entries carry the
/// failure they are expected to exhibit; zero_perp additionally carries a
/// hand-built slope family of the zero function.
struct RegistryEntry {
    std::string name;
    DiffFunction function;
    std::set<std::string> flags;
    std::optional<double> lipschitz;
    std::optional<SlopeFamily> custom_slope;
    std::string note;

    bool has_flag(const std::string& f) const { return flags.count(f) > 0; }
};

const std::vector<RegistryEntry>& registry();
const RegistryEntry& find_entry(const std::string& name);  // throws on unknown name
std::vector<std::string> registry_names(const std::string& flag = "");

struct NamedProblem {
    std::string name;
    std::string note;
    ContractionProblem problem;
};

const std::vector<NamedProblem>& problem_registry();
const NamedProblem& find_problem(const std::string& name);

}  // namespace slopecalc
