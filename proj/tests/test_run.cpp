#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hamrep/errors.hpp"
#include "hamrep/run.hpp"
#include "hamrep/zoo.hpp"

using namespace hamrep;
using nlohmann::json;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::CheckFailure;
}

int cli(const std::string& args) {
    const std::string cmd = std::string(HAMREP_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("external hamiltonians") {
    auto s = hamiltonian_from_json(json{{"name", "h"},
                                        {"H", json::array({json{{"if", "p >= -1"}, {"then", "p - 1 - abs(x)"}},
                                                           json{{"then", "-2 * sqrt(-p) - abs(x)"}}})},
                                        {"c", "1"},
                                        {"w", "r"},
                                        {"L", "1 / v + abs(x)"},
                                        {"dom", json::array({"0", "1"})}});
    const auto ref = builtin("ex_2_3");
    for (double x : {-1.0, 0.5})
        for (double p : {-4.0, -1.0, 0.0, 2.5}) CHECK(s.eval(0.3, x, p) == doctest::Approx(ref.eval(0.3, x, p)));
    CHECK(s.oracle_L(0, 0.5, 0.25) == doctest::Approx(4.5));
    CHECK(s.oracle_L(0, 0.5, 1.5) == kInf);
    CHECK(*s.c(0.2) == 1.0);
    CHECK(s.modulus.w(1, 0, 0.3) == doctest::Approx(0.3));

    auto g = hamiltonian_from_json(json{{"name", "g"}, {"H", "p^2/2"}});
    CHECK_FALSE(g.flags.growth);
    CHECK_FALSE(g.c(0).has_value());
    CHECK(g.flags.blc == "unknown");

    CHECK(code_of([] { hamiltonian_from_json("nope"); }) == ErrorCode::ConfigError);
    CHECK(code_of([] { hamiltonian_from_json(json{{"name", "h"}}); }) == ErrorCode::ConfigError);
    CHECK(code_of([] { hamiltonian_from_json(json{{"name", "h"}, {"H", "q"}}); }) == ErrorCode::ConfigError);
    CHECK(code_of([] { hamiltonian_from_json(json{{"name", "h"}, {"H", "p"}, {"L", "v"}}); }) ==
          ErrorCode::ConfigError);
    CHECK(code_of([] { hamiltonian_from_json(json{{"name", "h"}, {"H", "p"}, {"extra", 1}}); }) ==
          ErrorCode::ConfigError);
}

TEST_CASE("config validation") {
    auto c = parse_run_config(json{{"command", "check"},
                                   {"hamiltonian", "ex_2_1"},
                                   {"window", {{"t_range", {0, 1}}, {"x_range", {-2, 2}}}},
                                   {"grids", {{"v_count", 101}}},
                                   {"seed", 7},
                                   {"tolerances", {{"hlc", 1e-6}}}});
    CHECK(c.hamiltonian_name == "ex_2_1");
    CHECK(c.window.x_lo == -2.0);
    CHECK(*c.v_count == 101);
    CHECK(c.seed == 7);
    CHECK(c.tolerances.at("hlc") == 1e-6);

    auto bad = [](json j) { return code_of([&] { parse_run_config(j); }); };
    CHECK(bad(json{{"command", "fly"}}) == ErrorCode::ConfigError);
    CHECK(bad(json{{"command", "check"}}) == ErrorCode::ConfigError);
    CHECK(bad(json{{"command", "check"}, {"hamiltonian", "ex_2_1"}, {"grids", {{"v_count", 32}}}}) ==
          ErrorCode::ConfigError);
    CHECK(bad(json{{"command", "check"}, {"hamiltonian", "ex_2_1"}, {"window", {{"x_range", {1, -1}}}}}) ==
          ErrorCode::ConfigError);
    CHECK(bad(json{{"command", "check"}, {"hamiltonian", "ex_2_1"}, {"seed", -1}}) == ErrorCode::ConfigError);
    CHECK(bad(json{{"command", "check"}, {"hamiltonian", "ex_2_1"}, {"colour", 1}}) == ErrorCode::ConfigError);

    set_tolerance(c, "llc=0.5");
    CHECK(c.tolerances.at("llc") == 0.5);
    CHECK(code_of([&] { set_tolerance(c, "llc"); }) == ErrorCode::ConfigError);
    CHECK(code_of([&] { set_tolerance(c, "llc=abc"); }) == ErrorCode::ConfigError);
    c.tolerances["image"] = 0.1;
    CHECK(code_of([&] { run(c); }) == ErrorCode::ConfigError);
}

TEST_CASE("commands produce named, deterministic artifacts") {
    auto c = parse_run_config(json{{"command", "conjugate"}, {"hamiltonian", "ex_2_2"}, {"seed", 3}});
    auto a = run(c), b = run(c);
    REQUIRE(a.artifacts.size() == 2);
    CHECK(a.artifacts[0].name == "conjugate_ex_2_2_3.csv");
    CHECK(a.artifacts[1].name == "conjugate_ex_2_2_3.json");
    CHECK(a.artifacts[0].content == b.artifacts[0].content);
    CHECK(a.artifacts[1].content == b.artifacts[1].content);
    CHECK(a.all_pass());
    auto doc = json::parse(a.artifacts[1].content);
    CHECK(doc["schema"] == 1);
    CHECK(doc["reports"][0]["check"] == "conjugate");

    auto blc = run(parse_run_config(json{{"command", "compactness"}, {"hamiltonian", "ex_2_3"}}));
    CHECK(blc.all_pass());
    CHECK(blc.checks[0].verdict == "BLC violated (diverging interior sup)");

    auto zoo = run(parse_run_config(json{{"command", "zoo-list"}}));
    CHECK(zoo.notes.size() == builtin_names().size());
    CHECK(zoo.artifacts[0].name == "zoo-list_builtins_1.json");

    auto tri = run(parse_run_config(json{{"command", "compactness"}, {"options", {{"triple", "circle_ex_2_2"}}}}));
    CHECK(tri.all_pass());
    CHECK(tri.checks.size() == 4);
}

TEST_CASE("cli exit codes and sidecar metadata") {
    const auto dir = std::filesystem::temp_directory_path() / "hamrep_cli_test";
    std::filesystem::remove_all(dir);
    const std::string out = " --out " + dir.string();
    CHECK(cli("represent --hamiltonian ex_2_2" + out) == 0);
    CHECK(std::filesystem::exists(dir / "represent_ex_2_2_1.csv"));
    CHECK(std::filesystem::exists(dir / "represent_ex_2_2_1.json"));
    CHECK(std::filesystem::exists(dir / "run_meta.json"));
    const auto first = slurp(dir / "represent_ex_2_2_1.json");
    CHECK(cli("represent --hamiltonian ex_2_2" + out) == 0);
    CHECK(slurp(dir / "represent_ex_2_2_1.json") == first);

    CHECK(cli("compactness --hamiltonian ex_2_3" + out) == 0);
    CHECK(cli("conjugate --hamiltonian nope" + out) == 1);
    CHECK(cli("check --hamiltonian ex_2_1 --tol hlc" + out) == 1);
    CHECK(cli("--bogus") == 1);
    // A mutated tolerance makes a check fail: exit 2.
    CHECK(cli("check --hamiltonian ex_2_2 --tol llc=0 --tol mlc_slack=0 --tol hlc=-0" + out) == 2);
    std::filesystem::remove_all(dir);
}
