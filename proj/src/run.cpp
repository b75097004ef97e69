#include "hamrep/run.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <set>

#include "hamrep/acceptance.hpp"
#include "hamrep/compactness.hpp"
#include "hamrep/errors.hpp"
#include "hamrep/expr.hpp"
#include "hamrep/stability.hpp"
#include "hamrep/zoo.hpp"

namespace hamrep {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) config_error(where + " must be an object");
    for (const auto& [k, v] : j.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }))
            config_error("unknown key '" + k + "' in " + where);
    }
}

std::string get_string(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) config_error(where + ": missing '" + key + "'");
    if (!j[key].is_string()) config_error(where + ": '" + key + "' must be a string");
    return j[key].get<std::string>();
}

double get_number(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) config_error(std::string("'") + key + "' must be a number");
    return j[key].get<double>();
}

int get_int(const json& j, const char* key, int fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer()) config_error(std::string("'") + key + "' must be an integer");
    return j[key].get<int>();
}

std::vector<double> get_numbers(const json& j, const char* key, std::vector<double> fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_array() || j[key].empty()) config_error(std::string("'") + key + "' must be a nonempty array");
    std::vector<double> out;
    for (const auto& v : j[key]) {
        if (!v.is_number()) config_error(std::string("'") + key + "' must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::pair<double, double> get_range(const json& j, const char* key, std::pair<double, double> fallback) {
    if (!j.contains(key)) return fallback;
    const auto v = get_numbers(j, key, {});
    if (v.size() != 2 || !std::isfinite(v[0]) || !std::isfinite(v[1]) || v[0] > v[1])
        config_error(std::string("'") + key + "' must be [lo, hi] with lo <= hi");
    return {v[0], v[1]};
}

// An expression string or a list of {"if", "then"} pieces.
PiecewiseExpr piecewise_from_json(const json& j, const std::vector<std::string>& vars, const std::string& where) {
    std::vector<PiecewiseExpr::Piece> pieces;
    if (j.is_string()) {
        pieces.push_back({"", j.get<std::string>()});
    } else if (j.is_array()) {
        for (const auto& p : j) {
            check_keys(p, where + " piece", {"if", "then"});
            pieces.push_back({p.contains("if") ? get_string(p, "if", where) : "", get_string(p, "then", where)});
        }
    } else {
        config_error(where + " must be an expression or a list of pieces");
    }
    return PiecewiseExpr(pieces, vars);
}

Expr expr_from_json(const json& j, const char* key, const std::vector<std::string>& vars) {
    if (!j[key].is_string()) config_error(std::string("'") + key + "' must be an expression string");
    return Expr::parse(j[key].get<std::string>(), vars);
}

std::string describe_piecewise(const json& j) {
    if (j.is_string()) return j.get<std::string>();
    std::string out;
    for (const auto& p : j) {
        if (!out.empty()) out += "; ";
        out += (p.contains("if") ? p["if"].get<std::string>() + ": " : std::string("otherwise: ")) +
               p["then"].get<std::string>();
    }
    return out;
}

// Selection of the tolerance map for a command; unknown names are rejected.
double tolerance(const RunConfig& c, const std::string& name, double fallback) {
    auto it = c.tolerances.find(name);
    return it == c.tolerances.end() ? fallback : it->second;
}

void allow_tolerances(const RunConfig& c, std::initializer_list<const char*> names) {
    for (const auto& [k, v] : c.tolerances)
        if (std::none_of(names.begin(), names.end(), [&](const char* n) { return k == n; }))
            config_error("tolerance '" + k + "' does not apply to command " + c.command);
}

HamiltonianSpec resolve(const RunConfig& c) {
    if (c.hamiltonian.is_null()) config_error("command " + c.command + " needs a hamiltonian");
    return hamiltonian_from_json(c.hamiltonian);
}

std::string artifact(const RunConfig& c, const std::string& ext) {
    return c.command + "_" + c.hamiltonian_name + "_" + std::to_string(c.seed) + "." + ext;
}

std::string json_doc(const RunConfig& c, const std::vector<CheckReport>& checks, json extra = json::object()) {
    json body = std::move(extra);
    body["command"] = c.command;
    body["hamiltonian"] = c.hamiltonian_name;
    body["seed"] = c.seed;
    auto arr = json::array();
    for (const auto& r : checks) arr.push_back(r.to_json());
    body["reports"] = arr;
    return dump_report(body);
}

GridPolicy policy_of(const RunConfig& c) {
    GridPolicy p;
    if (c.v_count) p.v_count = *c.v_count;
    if (c.p_count) p.conjugation.p_count = *c.p_count;
    const std::string mode = c.options.value("mode", std::string("automatic"));
    if (mode == "numeric") p.mode = LagrangianMode::numeric;
    else if (mode == "oracle") p.mode = LagrangianMode::oracle;
    else if (mode != "automatic") config_error("mode must be automatic, oracle or numeric");
    return p;
}

double mid_t(const RunConfig& c) { return 0.5 * (c.window.t_lo + c.window.t_hi); }

RunResult run_conjugate(const RunConfig& c) {
    check_keys(c.options, "options", {"t", "xs", "p_window", "margin", "mode"});
    allow_tolerances(c, {"oracle"});
    const auto spec = resolve(c);
    const double t = get_number(c.options, "t", mid_t(c));
    const auto xs = get_numbers(c.options, "xs", {c.window.x_lo, 0.5 * (c.window.x_lo + c.window.x_hi), c.window.x_hi});
    const double margin = get_number(c.options, "margin", 0.1);
    NumericConjugation nc;
    nc.p_window = get_number(c.options, "p_window", 50.0);
    if (c.p_count) nc.p_count = *c.p_count;
    GridPolicy policy = policy_of(c);

    CheckReport rep;
    rep.check = "conjugate";
    rep.tolerance = tolerance(c, "oracle", 1e-2);
    rep.worst = 0.0;
    std::string csv = spec.oracle_L ? "t,x,v,L,oracle\n" : "t,x,v,L\n";
    int compared = 0;
    for (double x : xs) {
        const auto g = slice_grid(spec, t, x, policy);
        const auto L = lagrangian_slice(spec, t, x, g, LagrangianMode::numeric, nc);
        std::optional<EffectiveDomain> dom;
        if (spec.oracle_dom) dom = spec.oracle_dom(t, x);
        for (std::size_t i = 0; i < g.count; ++i) {
            const double v = g.node(i);
            csv += format_number(t) + ',' + format_number(x) + ',' + format_number(v) + ',' + format_number(L.value(i));
            if (spec.oracle_L) {
                const double ref = spec.oracle_L(t, x, v);
                csv += ',' + format_number(ref);
                if (dom && v >= dom->lo + margin && v <= dom->hi - margin) {
                    ++compared;
                    double err = std::abs(L.value(i) - ref);
                    if (std::isnan(err)) err = kInf;
                    rep.worst = std::max(rep.worst, err);
                    if (err > rep.tolerance)
                        rep.add_witness({{"x", x}, {"v", v}, {"numeric", format_number(L.value(i))}, {"oracle", ref}});
                }
            }
            csv += '\n';
        }
    }
    rep.pass = rep.worst <= rep.tolerance;
    rep.verdict = spec.oracle_L ? (rep.pass ? "pass" : "fail") + std::string(" on ") + std::to_string(compared) +
                                      " oracle-domain interior nodes"
                                : "no closed-form Lagrangian; numeric conjugate written";
    RunResult out;
    out.checks.push_back(rep);
    out.artifacts.push_back({artifact(c, "csv"), csv});
    out.artifacts.push_back({artifact(c, "json"), json_doc(c, out.checks)});
    return out;
}

RunResult run_check(const RunConfig& c) {
    check_keys(c.options, "options", {"R", "triples", "p_values", "p_max", "mode"});
    allow_tolerances(c, {"hlc", "llc", "mlc_slack"});
    const auto spec = resolve(c);
    SamplePlan plan;
    plan.seed = c.seed;
    plan.triples = get_int(c.options, "triples", plan.triples);
    plan.p_values = get_int(c.options, "p_values", plan.p_values);
    plan.p_max = get_number(c.options, "p_max", plan.p_max);
    if (c.v_count) plan.v_count = *c.v_count;
    if (c.p_count) plan.conjugation.p_count = *c.p_count;
    plan.mode = policy_of(c).mode;
    plan.hlc_tolerance = tolerance(c, "hlc", plan.hlc_tolerance);
    plan.llc_tolerance = tolerance(c, "llc", plan.llc_tolerance);
    plan.mlc_slack = tolerance(c, "mlc_slack", plan.mlc_slack);
    const double R = get_number(c.options, "R", 2.0);
    if (!(R > 0.0)) config_error("R must be positive");
    RunResult out;
    out.checks = {check_HLC(spec, R, plan), check_LLC(spec, R, plan), check_MLC(spec, R, plan),
                  check_epigraph_modulus(spec, R, plan)};
    out.artifacts.push_back({artifact(c, "json"), json_doc(c, out.checks, {{"R", R}})});
    return out;
}

RepresentationTriple build_for(const RunConfig& c, const HamiltonianSpec& spec, const GridPolicy& policy) {
    const std::string kind = c.options.value("kind", std::string("noncompact"));
    if (kind == "noncompact") return build_noncompact(spec, policy);
    if (kind != "compact") config_error("kind must be noncompact or compact");
    LambdaBound lam;
    if (c.options.contains("lambda")) {
        auto e = std::make_shared<Expr>(expr_from_json(c.options, "lambda", {"t", "x"}));
        lam.eval = [e](double t, double x) { return (*e)({t, x}); };
    } else if (spec.lambda_bound) {
        lam.eval = spec.lambda_bound;
    } else {
        config_error("compact build needs options.lambda or a hamiltonian with a lambda bound");
    }
    return build_compact(spec, lam, policy);
}

VerifyPlan verify_plan(const RunConfig& c) {
    VerifyPlan v;
    v.seed = c.seed;
    v.points = get_int(c.options, "points", v.points);
    v.pairs = get_int(c.options, "pairs", v.pairs);
    if (c.a_plan) v.controls = *c.a_plan;
    v.image_tolerance = tolerance(c, "image", v.image_tolerance);
    return v;
}

RunResult run_represent(const RunConfig& c, bool with_trace) {
    check_keys(c.options, "options", {"kind", "lambda", "points", "pairs", "trace_points", "trace_controls", "mode"});
    allow_tolerances(c, {"image"});
    const auto spec = resolve(c);
    const auto policy = policy_of(c);
    const auto tr = build_for(c, spec, policy);
    const auto vplan = verify_plan(c);
    RunResult out;
    out.checks.push_back(verify_triple(tr, c.window, vplan, policy));
    out.checks.back().check = "verify_" + std::string(provenance_name(tr.provenance));
    if (with_trace) {
        std::mt19937_64 rng(c.seed);
        std::uniform_real_distribution<double> ut(0, 1);
        const int npts = get_int(c.options, "trace_points", 4), nctl = get_int(c.options, "trace_controls", 25);
        const auto all = tr.control.sample(c.a_plan.value_or(ControlPlan{}));
        const std::size_t stride = std::max<std::size_t>(1, all.size() / static_cast<std::size_t>(std::max(nctl, 1)));
        std::vector<TracePoint> pts;
        for (int k = 0; k < npts; ++k) {
            const double t = c.window.t_lo + (c.window.t_hi - c.window.t_lo) * ut(rng);
            const double x = c.window.x_lo + (c.window.x_hi - c.window.x_lo) * ut(rng);
            for (std::size_t j = 0; j < all.size(); j += stride) pts.push_back({t, x, all[j]});
        }
        out.artifacts.push_back({artifact(c, "csv"), trace_csv(tr, pts)});
    }
    out.artifacts.push_back({artifact(c, "json"), json_doc(c, out.checks, {{"control_set", tr.control.describe()}})});
    return out;
}

RepresentationTriple named_triple(const std::string& name) {
    auto zero = [](double) { return 0.0; };
    if (name == "p_abs_h0_k0") return family_p_abs(zero, zero);
    if (name == "p_abs_hx2_k1") return family_p_abs([](double x) { return x * x; }, [](double) { return 1.0; });
    if (name == "hat_ex_2_1") return hat_representation_ex_2_1();
    if (name == "circle_ex_2_2") return circle_representation_ex_2_2();
    if (name == "check_ex_2_2") return check_representation_ex_2_2();
    config_error("unknown triple '" + name + "' (p_abs_h0_k0, p_abs_hx2_k1, hat_ex_2_1, circle_ex_2_2, check_ex_2_2)");
}

RunResult run_compactness(const RunConfig& c) {
    check_keys(c.options, "options", {"t", "xs", "triple", "source", "per_axis", "mode"});
    allow_tolerances(c, {"threshold", "epigraph_bound"});
    RunResult out;
    if (c.options.contains("triple")) {
        if (!c.options["triple"].is_string()) config_error("'triple' must be a string");
        const auto tr = named_triple(c.options["triple"].get<std::string>());
        CompactnessPlan plan;
        plan.seed = c.seed;
        plan.t = get_number(c.options, "t", plan.t);
        plan.xs = get_numbers(c.options, "xs", plan.xs);
        plan.tolerance = tolerance(c, "epigraph_bound", plan.tolerance);
        plan.controls.per_axis = get_int(c.options, "per_axis", plan.controls.per_axis);
        const std::string src = c.options.value("source", std::string("oracle"));
        if (src == "numeric") plan.l_source = LSource::numeric;
        else if (src != "oracle") config_error("source must be oracle or numeric");
        out.checks.push_back(epigraph_bound_check(tr, plan));
        out.checks.push_back(check_domain_identity(tr, plan));
        if (tr.control.compact()) {
            const auto ct = convexify(tr);
            out.checks.push_back(check_convexification(ct, plan));
            auto est = extract_lambda(ct, plan);
            for (double x : plan.xs)
                est.certificate.add_witness({{"x", x}, {"lambda", est.bound.eval(plan.t, x)}}, 64);
            out.checks.push_back(est.certificate);
        }
    } else {
        const auto spec = resolve(c);
        BLCProbe probe;
        probe.threshold = tolerance(c, "threshold", probe.threshold);
        probe.mode = policy_of(c).mode;
        if (c.p_count) probe.conjugation.p_count = *c.p_count;
        if (c.options.contains("xs")) {
            probe.points.clear();
            const double t = get_number(c.options, "t", 0.5);
            for (double x : get_numbers(c.options, "xs", {})) probe.points.emplace_back(t, x);
        }
        out.checks.push_back(detect_blc_failure(spec, probe));
    }
    out.artifacts.push_back({artifact(c, "json"), json_doc(c, out.checks)});
    return out;
}

RunResult run_stability(const RunConfig& c) {
    check_keys(c.options, "options", {"family", "kind", "fixed_t", "indices", "points", "check"});
    allow_tolerances(c, {"decay_ratio", "bound_slack", "absolute"});
    PerturbationFamily family;
    try {
        family = standard_family(c.options.value("family", std::string()));
    } catch (const Error&) {
        config_error("options.family must be one of the standard families");
    }
    if (c.options.contains("indices")) {
        family.indices.clear();
        for (double i : get_numbers(c.options, "indices", {})) {
            if (i < 1 || i != std::floor(i)) config_error("indices must be positive integers");
            family.indices.push_back(static_cast<int>(i));
        }
    }
    const std::string check = c.options.value("check", std::string("representation"));
    RunResult out;
    if (check == "representation") {
        StabilityPlan plan;
        plan.seed = c.seed;
        plan.points = get_int(c.options, "points", plan.points);
        if (c.a_plan) plan.controls = *c.a_plan;
        if (c.v_count) plan.policy.v_count = *c.v_count;
        plan.decay_ratio = tolerance(c, "decay_ratio", plan.decay_ratio);
        plan.bound_slack = tolerance(c, "bound_slack", plan.bound_slack);
        const std::string kind = c.options.value("kind", std::string("noncompact"));
        if (kind != "noncompact" && kind != "compact") config_error("kind must be noncompact or compact");
        const auto bk = kind == "compact" ? BuilderKind::compact : BuilderKind::noncompact;
        const auto rep = c.options.contains("fixed_t")
                             ? fixed_t_convergence(family, get_number(c.options, "fixed_t", 0.5), c.window, plan, bk)
                             : representation_convergence(family, bk, c.window, plan);
        out.checks.push_back(rep.check);
        out.artifacts.push_back({artifact(c, "csv"), rep.to_csv()});
        out.artifacts.push_back({artifact(c, "json"), json_doc(c, out.checks, {{"window", rep.window}})});
        return out;
    }
    EpigraphLimitPlan plan;
    plan.seed = c.seed;
    if (c.v_count) plan.policy.v_count = *c.v_count;
    plan.decay_ratio = tolerance(c, "decay_ratio", plan.decay_ratio);
    plan.absolute = tolerance(c, "absolute", plan.absolute);
    if (check == "epigraph") out.checks.push_back(epigraph_limit_check(family, c.window, plan));
    else if (check == "normalized") out.checks.push_back(normalized_limit_check(family, c.window, plan));
    else if (check == "intersection") out.checks.push_back(intersection_limit_check(c.seed, 20, plan.decay_ratio));
    else config_error("check must be representation, epigraph, normalized or intersection");
    out.artifacts.push_back({artifact(c, "json"), json_doc(c, out.checks)});
    return out;
}

RunResult run_zoo_list(const RunConfig& c) {
    check_keys(c.options, "options", {});
    allow_tolerances(c, {});
    RunResult out;
    auto arr = json::array();
    for (const auto& name : builtin_names()) {
        const auto s = builtin(name);
        const std::string line = name + "  growth=" + (s.flags.growth ? "yes" : "no") +
                                 " hlc=" + (s.flags.hlc ? "yes" : "no") + " blc=" + s.flags.blc + "  " + s.formula;
        out.notes.push_back(line);
        arr.push_back({{"name", name},
                       {"formula", s.formula},
                       {"growth", s.flags.growth},
                       {"hlc", s.flags.hlc},
                       {"blc", s.flags.blc},
                       {"notes", s.notes}});
    }
    out.artifacts.push_back({artifact(c, "json"), dump_report({{"command", c.command}, {"builtins", arr}})});
    return out;
}

RunResult run_acceptance_cmd(const RunConfig& c) {
    check_keys(c.options, "options", {"criterion"});
    allow_tolerances(c, {});
    RunResult out;
    std::vector<CriterionResult> results;
    if (c.options.contains("criterion") && !(c.options["criterion"].is_string() && c.options["criterion"] == "all")) {
        const int id = get_int(c.options, "criterion", 0);
        if (id < 1 || id > kCriterionCount) config_error("criterion must be 1..10 or \"all\"");
        results.push_back(run_criterion(id, c.seed));
    } else {
        results = run_acceptance(c.seed);
    }
    for (auto& r : results) {
        CheckReport rep = r.report;
        rep.check = "criterion_" + std::to_string(r.id) + " " + r.title;
        out.checks.push_back(std::move(rep));
        for (auto& a : r.artifacts) out.artifacts.push_back(std::move(a));
    }
    return out;
}

}  // namespace

HamiltonianSpec hamiltonian_from_json(const json& j) {
    if (j.is_string()) {
        try {
            return builtin(j.get<std::string>());
        } catch (const Error&) {
            config_error(std::string("unknown hamiltonian: ") + j.get<std::string>());
        }
    }
    check_keys(j, "hamiltonian", {"name", "H", "t_range", "c", "k", "w", "hlc", "L", "dom", "lambda", "notes"});
    HamiltonianSpec s;
    s.name = get_string(j, "name", "hamiltonian");
    if (s.name.empty() || s.name.find_first_of("/\\ ") != std::string::npos)
        config_error("hamiltonian name must be nonempty without spaces or slashes");
    if (!j.contains("H")) config_error("hamiltonian: missing 'H'");
    auto H = std::make_shared<PiecewiseExpr>(piecewise_from_json(j["H"], {"t", "x", "p"}, "H"));
    s.eval = [H](double t, double x, double p) { return (*H)({t, x, p}); };
    s.formula = "H = " + describe_piecewise(j["H"]);
    const auto tr = get_range(j, "t_range", {0.0, 1.0});
    s.t_lo = tr.first;
    s.t_hi = tr.second;
    if (j.contains("c")) {
        auto e = std::make_shared<Expr>(expr_from_json(j, "c", {"t"}));
        s.modulus.c = [e](double t) -> std::optional<double> { return (*e)({t}); };
    } else {
        s.modulus.c = [](double) -> std::optional<double> { return std::nullopt; };
        s.flags.growth = false;
    }
    auto k = std::make_shared<Expr>(j.contains("k") ? expr_from_json(j, "k", {"R", "t"}) : Expr::parse("0", {}));
    auto w = std::make_shared<Expr>(j.contains("w") ? expr_from_json(j, "w", {"R", "t", "r"}) : Expr::parse("0", {}));
    s.modulus.k = [k](double R, double t) { return (*k)({R, t}); };
    s.modulus.w = [w](double R, double t, double r) { return (*w)({R, t, r}); };
    if (j.contains("hlc")) {
        if (!j["hlc"].is_boolean()) config_error("'hlc' must be a boolean");
        s.flags.hlc = j["hlc"].get<bool>();
    }
    if (j.contains("L")) {
        auto L = std::make_shared<PiecewiseExpr>(piecewise_from_json(j["L"], {"t", "x", "v"}, "L"));
        if (!j.contains("dom")) config_error("'L' needs 'dom'");
        if (!j["dom"].is_array() || j["dom"].size() != 2 || !j["dom"][0].is_string() || !j["dom"][1].is_string())
            config_error("'dom' must be [lo expression, hi expression]");
        auto lo = std::make_shared<Expr>(Expr::parse(j["dom"][0].get<std::string>(), {"t", "x"}));
        auto hi = std::make_shared<Expr>(Expr::parse(j["dom"][1].get<std::string>(), {"t", "x"}));
        s.oracle_dom = [lo, hi](double t, double x) { return EffectiveDomain{(*lo)({t, x}), (*hi)({t, x}), true, true}; };
        s.oracle_L = [L, lo, hi](double t, double x, double v) {
            if (v < (*lo)({t, x}) || v > (*hi)({t, x})) return kInf;
            return (*L)({t, x, v});
        };
    } else if (j.contains("dom")) {
        config_error("'dom' needs 'L'");
    }
    if (j.contains("lambda")) {
        auto e = std::make_shared<Expr>(expr_from_json(j, "lambda", {"t", "x"}));
        s.lambda_bound = [e](double t, double x) { return (*e)({t, x}); };
        s.flags.blc = "declared";
    } else {
        s.flags.blc = "unknown";
    }
    if (j.contains("notes")) s.notes = get_string(j, "notes", "hamiltonian");
    return s;
}

RunConfig parse_run_config(const json& j) {
    check_keys(j, "config",
               {"command", "hamiltonian", "window", "grids", "seed", "output_dir", "tolerances", "options", "description"});
    RunConfig c;
    c.command = get_string(j, "command", "config");
    const auto& cmds = run_commands();
    if (std::find(cmds.begin(), cmds.end(), c.command) == cmds.end()) config_error("unknown command '" + c.command + "'");
    if (j.contains("hamiltonian")) {
        c.hamiltonian = j["hamiltonian"];
        if (c.hamiltonian.is_string()) c.hamiltonian_name = c.hamiltonian.get<std::string>();
        else if (c.hamiltonian.is_object() && c.hamiltonian.contains("name") && c.hamiltonian["name"].is_string())
            c.hamiltonian_name = c.hamiltonian["name"].get<std::string>();
        else config_error("hamiltonian must be a name or an object with a name");
        hamiltonian_from_json(c.hamiltonian);  // validate early
    }
    if (j.contains("window")) {
        const auto& w = j["window"];
        check_keys(w, "window", {"t_range", "x_range", "p_range"});
        std::tie(c.window.t_lo, c.window.t_hi) = get_range(w, "t_range", {c.window.t_lo, c.window.t_hi});
        std::tie(c.window.x_lo, c.window.x_hi) = get_range(w, "x_range", {c.window.x_lo, c.window.x_hi});
        std::tie(c.window.p_lo, c.window.p_hi) = get_range(w, "p_range", {c.window.p_lo, c.window.p_hi});
    }
    if (j.contains("grids")) {
        const auto& g = j["grids"];
        check_keys(g, "grids", {"v_count", "p_count", "a_plan"});
        auto count = [&](const char* key) -> std::optional<std::size_t> {
            if (!g.contains(key)) return std::nullopt;
            const int n = get_int(g, key, 0);
            if (n < 33) config_error(std::string("'") + key + "' must be at least 33");
            return static_cast<std::size_t>(n);
        };
        c.v_count = count("v_count");
        c.p_count = count("p_count");
        if (g.contains("a_plan")) {
            const auto& a = g["a_plan"];
            check_keys(a, "a_plan", {"per_axis", "box_half", "radial", "angular", "simplex_denominator"});
            ControlPlan p;
            p.per_axis = get_int(a, "per_axis", p.per_axis);
            p.box_half = get_number(a, "box_half", p.box_half);
            p.radial = get_int(a, "radial", p.radial);
            p.angular = get_int(a, "angular", p.angular);
            p.simplex_denominator = get_int(a, "simplex_denominator", p.simplex_denominator);
            if (p.per_axis < 33) config_error("'per_axis' must be at least 33");
            if (!(p.box_half > 0) || p.radial < 1 || p.angular < 3 || p.simplex_denominator < 1)
                config_error("a_plan values out of range");
            c.a_plan = p;
        }
    }
    if (j.contains("seed")) {
        const auto& sd = j["seed"];
        if (!sd.is_number_integer() || (!sd.is_number_unsigned() && sd.get<std::int64_t>() < 0))
            config_error("'seed' must be a nonnegative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("output_dir")) c.output_dir = get_string(j, "output_dir", "config");
    if (j.contains("tolerances")) {
        check_keys(j["tolerances"], "tolerances", {"oracle", "hlc", "llc", "mlc_slack", "image", "threshold", "epigraph_bound",
                                                   "decay_ratio", "bound_slack", "absolute"});
        for (const auto& [k, v] : j["tolerances"].items()) {
            if (!v.is_number()) config_error("tolerance '" + k + "' must be a number");
            c.tolerances[k] = v.get<double>();
        }
    }
    if (j.contains("options")) {
        if (!j["options"].is_object()) config_error("'options' must be an object");
        c.options = j["options"];
    }
    if (c.hamiltonian_name.empty()) {
        if (c.command == "stability") c.hamiltonian_name = c.options.value("family", std::string("family"));
        else if (c.command == "compactness" && c.options.contains("triple") && c.options["triple"].is_string())
            c.hamiltonian_name = c.options["triple"].get<std::string>();
        else if (c.command == "acceptance") {
            const auto& cr = c.options.contains("criterion") ? c.options["criterion"] : json("all");
            if (cr.is_number_integer()) {
                const int id = cr.get<int>();
                c.hamiltonian_name = std::string("criterion") + (id < 10 ? "0" : "") + std::to_string(id);
            } else {
                c.hamiltonian_name = "all";
            }
        } else if (c.command == "zoo-list") c.hamiltonian_name = "builtins";
        else config_error("command " + c.command + " needs a hamiltonian");
    }
    return c;
}

void set_tolerance(RunConfig& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) config_error("--tol expects name=value, got '" + assignment + "'");
    const std::string name = assignment.substr(0, eq), value = assignment.substr(eq + 1);
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size() || !std::isfinite(v) || v < 0) throw std::invalid_argument(value);
        config.tolerances[name] = v;
    } catch (const std::logic_error&) {
        config_error("--tol value for '" + name + "' must be a nonnegative number");
    }
}

bool RunResult::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckReport& r) { return r.pass; });
}

RunResult run(const RunConfig& c) {
    if (c.command == "conjugate") return run_conjugate(c);
    if (c.command == "check") return run_check(c);
    if (c.command == "represent") return run_represent(c, true);
    if (c.command == "verify") return run_represent(c, false);
    if (c.command == "compactness") return run_compactness(c);
    if (c.command == "stability") return run_stability(c);
    if (c.command == "zoo-list") return run_zoo_list(c);
    if (c.command == "acceptance") return run_acceptance_cmd(c);
    config_error("unknown command '" + c.command + "'");
}

}  // namespace hamrep
