// Command-line front end: runs one command from a JSON config and writes its artifacts.
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hamrep/errors.hpp"
#include "hamrep/run.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCheckFailure = 2;

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw hamrep::Error(hamrep::ErrorCode::ConfigError, "cannot open config '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw hamrep::Error(hamrep::ErrorCode::ConfigError, "config '" + path + "' is not valid JSON: " + e.what());
    }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw hamrep::Error(hamrep::ErrorCode::ConfigError, "cannot write '" + path.string() + "'");
    out << content;
}

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string summary_line(const hamrep::CheckReport& r) {
    std::string line = std::string(r.pass ? "PASS " : "FAIL ") + r.check;
    if (!r.verdict.empty() && r.verdict != "pass" && r.verdict != "fail") line += ": " + r.verdict;
    line += " (worst " + hamrep::format_number(r.worst) + ", tolerance " + hamrep::format_number(r.tolerance) + ")";
    return line;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Representations of convex Hamiltonians: conjugation, condition checks, builders and stability"};
    app.set_version_flag("--version", "hamrep 1.0");
    std::string config_path, out_dir, hamiltonian;
    std::uint64_t seed = 0;
    std::vector<std::string> tols;
    bool quiet = false;
    app.add_option("--config", config_path, "JSON run config")->check(CLI::ExistingFile);
    auto* seed_opt = app.add_option("--seed", seed, "Seed (overrides the config)");
    auto* out_opt = app.add_option("--out", out_dir, "Output directory (overrides the config)");
    app.add_option("--tol", tols, "Tolerance override name=value (repeatable)")
        ->allow_extra_args(false)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    app.add_flag("--quiet", quiet, "Only report errors");
    auto* ham_opt = app.add_option("--hamiltonian", hamiltonian, "Built-in Hamiltonian name (overrides the config)");
    app.require_subcommand(0, 1);
    for (const auto& name : hamrep::run_commands())
        app.add_subcommand(name, "Run the " + name + " command")->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        json doc = config_path.empty() ? json::object() : load_config(config_path);
        if (!doc.is_object()) throw hamrep::Error(hamrep::ErrorCode::ConfigError, "config must be a JSON object");
        const auto subs = app.get_subcommands();
        if (!subs.empty()) {
            const std::string sub = subs.front()->get_name();
            if (doc.contains("command") && doc["command"] != sub)
                throw hamrep::Error(hamrep::ErrorCode::ConfigError,
                                    "command '" + sub + "' conflicts with the config command " + doc["command"].dump());
            doc["command"] = sub;
        }
        if (!doc.contains("command"))
            throw hamrep::Error(hamrep::ErrorCode::ConfigError, "no command given (subcommand or config 'command')");
        if (*ham_opt) doc["hamiltonian"] = hamiltonian;

        auto config = hamrep::parse_run_config(doc);
        if (*seed_opt) config.seed = seed;
        if (*out_opt) config.output_dir = out_dir;
        for (const auto& t : tols) hamrep::set_tolerance(config, t);

        const auto result = hamrep::run(config);

        const std::filesystem::path dir(config.output_dir);
        std::filesystem::create_directories(dir);
        json written = json::array();
        for (const auto& a : result.artifacts) {
            write_file(dir / a.name, a.content);
            written.push_back(a.name);
        }
        // Timestamps live only in this sidecar so the artifacts stay byte-identical across reruns.
        json meta{{"command", config.command},
                  {"hamiltonian", config.hamiltonian_name},
                  {"seed", config.seed},
                  {"config", config_path},
                  {"finished_utc", utc_now()},
                  {"artifacts", written}};
        write_file(dir / "run_meta.json", meta.dump(2) + "\n");

        if (!quiet) {
            for (const auto& n : result.notes) std::cout << n << '\n';
            for (const auto& r : result.checks) {
                std::cout << summary_line(r) << '\n';
                if (config.command != "acceptance")
                    for (const auto& c : r.children) std::cout << "  " << summary_line(c) << '\n';
            }
        }
        return result.all_pass() ? kExitOk : kExitCheckFailure;
    } catch (const hamrep::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        switch (e.code()) {
            case hamrep::ErrorCode::ConfigError:
            case hamrep::ErrorCode::UnknownName:
            case hamrep::ErrorCode::InvalidArgument:
                return kExitUsage;
            default:
                return kExitCheckFailure;
        }
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}
