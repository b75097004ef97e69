#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hamrep/builder.hpp"
#include "hamrep/hamiltonian.hpp"
#include "hamrep/report.hpp"

namespace hamrep {

// Hamiltonian from a config value: a built-in name, or an object
//   {"name", "H": expr | [{"if": cond, "then": expr}, ...], "t_range": [lo, hi],
//    "c": expr(t), "k": expr(R,t), "w": expr(R,t,r), "hlc": bool,
//    "L": expr(t,x,v) | pieces, "dom": [expr(t,x), expr(t,x)], "lambda": expr(t,x)}.
// Only "name" and "H" are required. Throws ConfigError.
HamiltonianSpec hamiltonian_from_json(const nlohmann::json& j);

struct RunConfig {
    std::string command;           // conjugate, check, represent, verify, compactness, stability, zoo-list, acceptance
    nlohmann::json hamiltonian;    // null for zoo-list and acceptance
    std::string hamiltonian_name;  // used in artifact names
    Window window;
    // Grid overrides; each command has its own defaults.
    std::optional<std::size_t> v_count;
    std::optional<std::size_t> p_count;
    std::optional<ControlPlan> a_plan;
    std::uint64_t seed = 1;
    std::string output_dir = "out";
    std::map<std::string, double> tolerances;
    nlohmann::json options = nlohmann::json::object();  // command-specific settings
};

inline const std::vector<std::string>& run_commands() {
    static const std::vector<std::string> c{"conjugate",   "check",     "represent", "verify",
                                            "compactness", "stability", "zoo-list",  "acceptance"};
    return c;
}

// Validates: known command and keys, counts >= 33, nonempty ranges. Throws ConfigError.
RunConfig parse_run_config(const nlohmann::json& j);

// Parses "name=value" into config.tolerances. Throws ConfigError.
void set_tolerance(RunConfig& config, const std::string& assignment);

struct RunResult {
    std::vector<CheckReport> checks;  // one summary line each
    std::vector<Artifact> artifacts;  // <command>_<hamiltonian>_<seed>.csv|json
    std::vector<std::string> notes;   // extra stdout lines (zoo-list)
    bool all_pass() const;
};

// Executes the command. Throws ConfigError for settings the command rejects;
// unknown tolerance names are rejected here because they depend on the command.
RunResult run(const RunConfig& config);

}  // namespace hamrep
