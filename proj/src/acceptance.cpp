#include "hamrep/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "hamrep/builder.hpp"
#include "hamrep/compactness.hpp"
#include "hamrep/errors.hpp"
#include "hamrep/stability.hpp"
#include "hamrep/zoo.hpp"

namespace hamrep {

namespace {

std::string tag(int id) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%02d", id);
    return buf;
}

std::string artifact_name(int id, std::uint64_t seed, const char* ext) {
    return "acceptance_criterion" + tag(id) + "_" + std::to_string(seed) + "." + ext;
}

CriterionResult finish(int id, std::string title, CheckReport report, std::uint64_t seed, std::string csv = {}) {
    report.verdict = report.pass ? "pass" : "fail";
    CriterionResult r{id, std::move(title), std::move(report), {}};
    nlohmann::json body{{"criterion", id}, {"title", r.title}, {"seed", seed}, {"report", r.report.to_json()}};
    r.artifacts.push_back({artifact_name(id, seed, "json"), dump_report(body)});
    if (!csv.empty()) r.artifacts.push_back({artifact_name(id, seed, "csv"), std::move(csv)});
    return r;
}

CheckReport group(std::string name) {
    CheckReport r;
    r.check = std::move(name);
    return r;
}

void close_max(CheckReport& r) {
    r.pass = r.worst <= r.tolerance;
    if (r.verdict.empty()) r.verdict = r.pass ? "pass" : "fail";
}

// 1. Numeric conjugate against the closed-form Lagrangians.
CriterionResult criterion1(std::uint64_t seed) {
    constexpr double kTol = 1e-2, kMargin = 0.1, kT = 0.5;
    const std::vector<double> xs{-1.0, -0.5, 0.0, 0.5, 1.0};
    const NumericConjugation nc{50.0, 10001};
    std::string csv = "hamiltonian,t,x,v,numeric,oracle,abs_err\n";
    CheckReport top = group("conjugate_oracle_suite");

    auto interior_grid = [&](const HamiltonianSpec& s, double x) -> std::optional<UniformGrid> {
        auto d = s.oracle_dom(kT, x);
        const double W = v_half_width(s, kT, x, 5.0);
        const double lo = std::max(d.lo, -W) + kMargin, hi = std::min(d.hi, W) - kMargin;
        if (!(hi > lo)) return std::nullopt;
        return UniformGrid::make(lo, hi, 101);
    };

    for (const char* name : {"ex_2_1", "ex_2_2", "ex_2_3", "ex_2_4", "ex_3_4"}) {
        const auto s = builtin(name);
        CheckReport r = group(name);
        r.tolerance = kTol;
        r.worst = 0.0;
        int points = 0, failing = 0;
        for (double x : xs) {
            auto g = interior_grid(s, x);
            if (!g) continue;
            auto L = lagrangian_slice(s, kT, x, *g, LagrangianMode::numeric, nc);
            for (std::size_t i = 0; i < g->count; ++i) {
                const double v = g->node(i), num = L.value(i), ref = s.oracle_L(kT, x, v);
                const double err = std::abs(num - ref);
                const double e = std::isnan(err) ? kInf : err;
                ++points;
                csv += std::string(name) + ',' + format_number(kT) + ',' + format_number(x) + ',' + format_number(v) +
                       ',' + format_number(num) + ',' + format_number(ref) + ',' + format_number(e) + '\n';
                if (e > r.worst) r.worst = e;
                if (e > kTol) {
                    ++failing;
                    r.add_witness({{"x", x}, {"v", v}, {"numeric", format_number(num)}, {"oracle", ref}});
                }
            }
        }
        close_max(r);
        r.verdict = (r.pass ? "pass: " : "fail: ") + std::to_string(failing) + " of " + std::to_string(points) +
                    " interior points exceed the tolerance";
        top.absorb(r);
    }

    // ex_2_5: exactly one of the alternate and the derived forms must match.
    const auto s = builtin("ex_2_5");
    double err_alternate = 0.0, err_derived = 0.0;
    for (double x : xs) {
        auto g = *interior_grid(s, x);
        auto L = lagrangian_slice(s, kT, x, g, LagrangianMode::numeric, nc);
        for (std::size_t i = 0; i < g.count; ++i) {
            const double v = g.node(i), num = L.value(i);
            const double ep = std::abs(num - s.alternate_L(kT, x, v)), ed = std::abs(num - s.oracle_L(kT, x, v));
            err_alternate = std::max(err_alternate, ep);
            err_derived = std::max(err_derived, ed);
            csv += "ex_2_5," + format_number(kT) + ',' + format_number(x) + ',' + format_number(v) + ',' +
                   format_number(num) + ',' + format_number(s.oracle_L(kT, x, v)) + ',' + format_number(ed) + '\n';
        }
    }
    CheckReport r5 = group("ex_2_5_forms");
    r5.tolerance = kTol;
    const bool alternate_ok = err_alternate <= kTol, derived_ok = err_derived <= kTol;
    r5.worst = err_derived;
    r5.pass = alternate_ok != derived_ok;
    r5.verdict = !r5.pass              ? "ambiguous: alternate and derived forms both match or both fail"
                 : derived_ok ? "matches derived form (1+t)v^2/2+|x|"
                              : "matches alternate form (1+t)v^2+|x|";
    r5.add_witness({{"alternate_error", err_alternate}, {"derived_error", err_derived}});
    top.absorb(r5);
    return finish(1, "conjugate oracle suite", std::move(top), seed, std::move(csv));
}

CheckReport expect_fail(std::string name, std::vector<CheckReport> reports) {
    CheckReport r = group(std::move(name));
    bool all_fail = true;
    for (auto& c : reports) {
        all_fail = all_fail && !c.pass;
        r.children.push_back(std::move(c));
    }
    r.pass = all_fail;
    r.verdict = all_fail ? "all three fail as expected" : "a mutated check still passes";
    return r;
}

// 2. HLC, LLC and MLC on ex_2_1 and ex_2_2 with R = 2, plus mutations.
CriterionResult criterion2(std::uint64_t seed) {
    SamplePlan plan;
    plan.seed = seed;
    constexpr double R = 2.0;
    CheckReport top = group("equivalence_suite");
    for (const char* name : {"ex_2_1", "ex_2_2"}) {
        const auto s = builtin(name);
        CheckReport g = group(name);
        g.absorb(check_HLC(s, R, plan));
        g.absorb(check_LLC(s, R, plan));
        g.absorb(check_MLC(s, R, plan));
        top.absorb(g);
    }
    auto mutated = [&](const HamiltonianSpec& m) {
        return std::vector<CheckReport>{check_HLC(m, R, plan), check_LLC(m, R, plan), check_MLC(m, R, plan)};
    };
    top.absorb(expect_fail("ex_2_1_half_k", mutated(with_scaled_modulus(builtin("ex_2_1"), 0.5, 1.0))));
    top.absorb(expect_fail("ex_2_2_half_w", mutated(with_scaled_modulus(builtin("ex_2_2"), 1.0, 0.5))));
    return finish(2, "HLC/LLC/MLC equivalence", std::move(top), seed);
}

// 3. (h1 + h2)* = h1* # h2* on the ex_2_2 slice at x = 0 with h2 = 0.5|p| + 0.1.
CriterionResult criterion3(std::uint64_t seed) {
    const auto e22 = builtin("ex_2_2");
    const auto g = UniformGrid::make(-2, 2, 801);
    const auto pg = UniformGrid::make(-50, 50, 10001);
    auto h1 = ConvexGridFunction::sample(pg, [&](double p) { return e22.eval(0, 0, p); });
    auto h2 = ConvexGridFunction::sample(pg, [](double p) { return 0.5 * std::abs(p) + 0.1; });
    auto hs = ConvexGridFunction::sample(pg, [&](double p) { return e22.eval(0, 0, p) + 0.5 * std::abs(p) + 0.1; });
    ConjugateOptions opts;
    opts.mark_escapes = true;
    const auto lhs = conjugate(hs, g, opts);
    const auto rhs = epi_sum(conjugate(h1, g, opts), conjugate(h2, g, opts));
    CheckReport r = group("conjugate_of_sum");
    r.tolerance = 2e-2;
    r.worst = 0.0;
    std::string csv = "v,conjugate_of_sum,epi_sum\n";
    int compared = 0, mismatched_domain = 0;
    for (std::size_t i = 0; i < g.count; ++i) {
        const double a = lhs.value(i), b = rhs.value(i);
        csv += format_number(g.node(i)) + ',' + format_number(a) + ',' + format_number(b) + '\n';
        if (a == kInf || b == kInf) {
            if ((a == kInf) != (b == kInf)) ++mismatched_domain;
            continue;
        }
        ++compared;
        const double e = std::abs(a - b);
        r.worst = std::max(r.worst, e);
        if (e > r.tolerance) r.add_witness({{"v", g.node(i)}, {"lhs", a}, {"rhs", b}});
    }
    close_max(r);
    r.pass = r.pass && compared > 0;
    r.add_witness({{"nodes_compared", compared}, {"domain_edge_mismatches", mismatched_domain}});
    CheckReport top = group("conjugate_sum_identity");
    top.absorb(r);
    return finish(3, "conjugate of a sum equals the epi-sum", std::move(top), seed, std::move(csv));
}

// Seeded polygon in B(0, bound).
ConvexPolygon random_polygon(std::mt19937_64& rng, double bound) {
    std::uniform_real_distribution<double> u(0, 1);
    const int k = 3 + static_cast<int>(u(rng) * 10);
    const double r = 0.2 + u(rng) * bound * 0.3;
    const Vec2 c{(u(rng) * 2 - 1) * (bound - r) * 0.7, (u(rng) * 2 - 1) * (bound - r) * 0.7};
    std::vector<Vec2> pts;
    for (int i = 0; i < k; ++i) {
        const double th = u(rng) * 2 * std::numbers::pi, rad = r * std::sqrt(u(rng));
        pts.push_back(c + Vec2{std::cos(th), std::sin(th)} * rad);
    }
    return ConvexPolygon::hull(pts);
}

Vec2 exterior_angle_steiner(const ConvexPolygon& p) {
    const auto& v = p.vertices();
    const std::size_t n = v.size();
    Vec2 s{0, 0};
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = v[i] - v[(i + n - 1) % n], b = v[(i + 1) % n] - v[i];
        s = s + v[i] * (std::atan2(cross(a, b), dot(a, b)) / (2 * std::numbers::pi));
    }
    return s;
}

// 4. Projection-map and Steiner Lipschitz bounds on 200 seeded pairs; triangle Steiner point.
CriterionResult criterion4(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    CheckReport proj = group("projection_lipschitz_5");
    CheckReport stein = group("steiner_lipschitz_2");
    proj.worst = stein.worst = -kInf;
    proj.tolerance = 1e-3;
    stein.tolerance = 0.0;
    std::string csv = "pair,hausdorff_KD,point_gap,proj_gap,steiner_gap\n";
    for (int i = 0; i < 200; ++i) {
        // Odd pairs jitter K to probe the small-distance regime.
        const auto K = random_polygon(rng, 10.0);
        const Vec2 x{u(rng) * 9, u(rng) * 9};
        ConvexPolygon D = K;
        Vec2 y;
        if (i % 2 == 0) {
            D = random_polygon(rng, 10.0);
            y = {u(rng) * 9, u(rng) * 9};
        } else {
            const double eps = 0.05 + 0.5 * std::abs(u(rng));
            std::vector<Vec2> pts;
            for (auto v : K.vertices()) pts.push_back(v + Vec2{u(rng), u(rng)} * eps);
            D = ConvexPolygon::hull(pts);
            y = x + Vec2{u(rng), u(rng)} * eps;
        }
        const double hkd = hausdorff(K, D), dxy = norm(x - y);
        const double pg = hausdorff(proj_map(x, K), proj_map(y, D));
        const double sg = norm(steiner(K) - steiner(D));
        const double mp = pg - 5.0 * (hkd + dxy), ms = sg - 2.0 * hkd * 1.05;
        proj.worst = std::max(proj.worst, mp);
        stein.worst = std::max(stein.worst, ms);
        if (mp > proj.tolerance) proj.add_witness({{"pair", i}, {"proj_gap", pg}, {"bound", 5.0 * (hkd + dxy)}});
        if (ms > stein.tolerance) stein.add_witness({{"pair", i}, {"steiner_gap", sg}, {"hausdorff", hkd}});
        csv += std::to_string(i) + ',' + format_number(hkd) + ',' + format_number(dxy) + ',' + format_number(pg) +
               ',' + format_number(sg) + '\n';
    }
    close_max(proj);
    close_max(stein);
    std::vector<Vec2> tri{{0, 0}, {1, 0}, {0, 1}};
    const auto T = ConvexPolygon::hull(tri);
    CheckReport t = group("triangle_steiner");
    t.tolerance = 2e-3;
    const Vec2 s = steiner(T), o = exterior_angle_steiner(T);
    t.worst = norm(s - o);
    t.add_witness({{"steiner", {s.x, s.y}}, {"oracle", {o.x, o.y}}});
    close_max(t);
    CheckReport top = group("geometry_suite");
    top.absorb(proj);
    top.absorb(stein);
    top.absorb(t);
    return finish(4, "geometry suite", std::move(top), seed, std::move(csv));
}

struct BuiltTriple {
    std::string name, kind;
    HamiltonianSpec spec;
    RepresentationTriple triple;
    std::vector<double> xs;
};

std::vector<BuiltTriple> representation_cases() {
    std::vector<BuiltTriple> out;
    const std::vector<std::pair<std::string, std::vector<double>>> cases{{"ex_2_1", {-1.0, -0.5, 0.0, 0.5, 1.0}},
                                                                         {"ex_2_2", {-1.0, 0.0, 1.0}}};
    for (const auto& [name, xs] : cases) {
        const auto s = builtin(name);
        out.push_back({name, "noncompact", s, build_noncompact(s), xs});
        out.push_back({name, "compact", s, build_compact(s, LambdaBound{s.lambda_bound, {}}), xs});
    }
    return out;
}

constexpr double kAcceptT = 0.5;

// 5. Reconstruction of H by both builders and inner-approximation soundness.
CriterionResult criterion5(std::uint64_t seed) {
    CheckReport top = group("reconstruction");
    std::string csv = "hamiltonian,builder,t,x,p,H,reconstruction\n";
    for (const auto& c : representation_cases()) {
        CheckReport err = group(c.name + "_" + c.kind + "_error");
        CheckReport sound = group(c.name + "_" + c.kind + "_soundness");
        err.tolerance = 5e-2;
        sound.tolerance = 2e-2;
        err.worst = sound.worst = -kInf;
        for (double x : c.xs)
            for (double p : {-3.0, -1.0, 0.0, 1.0, 3.0}) {
                const double h = c.spec.eval(kAcceptT, x, p), rec = reconstruct_H(c.triple, kAcceptT, x, p);
                csv += c.name + ',' + c.kind + ',' + format_number(kAcceptT) + ',' + format_number(x) + ',' +
                       format_number(p) + ',' + format_number(h) + ',' + format_number(rec) + '\n';
                err.worst = std::max(err.worst, std::abs(rec - h));
                sound.worst = std::max(sound.worst, rec - h);
                if (std::abs(rec - h) > err.tolerance) err.add_witness({{"x", x}, {"p", p}, {"H", h}, {"rec", rec}});
                if (rec - h > sound.tolerance) sound.add_witness({{"x", x}, {"p", p}, {"H", h}, {"rec", rec}});
            }
        close_max(err);
        close_max(sound);
        top.absorb(err);
        top.absorb(sound);
    }
    return finish(5, "representation reconstruction", std::move(top), seed, std::move(csv));
}

// 6. Closure of the sampled f-image against the closure of dom L.
CriterionResult criterion6(std::uint64_t seed) {
    CheckReport top = group("image_identity");
    std::string csv = "hamiltonian,builder,t,x,image_lo,image_hi,dom_lo,dom_hi,gap\n";
    for (const auto& c : representation_cases()) {
        CheckReport r = group(c.name + "_" + c.kind);
        r.tolerance = 0.05;
        r.worst = 0.0;
        for (double x : c.xs) {
            const auto est = image_of_controls(c.triple, kAcceptT, x);
            csv += c.name + ',' + c.kind + ',' + format_number(kAcceptT) + ',' + format_number(x) + ',' +
                   format_number(est.image.lo) + ',' + format_number(est.image.hi) + ',' + format_number(est.dom.lo) +
                   ',' + format_number(est.dom.hi) + ',' + format_number(est.gap) + '\n';
            r.worst = std::max(r.worst, est.gap);
            if (est.gap > r.tolerance) r.add_witness({{"x", x}, {"gap", est.gap}});
        }
        close_max(r);
        top.absorb(r);
    }
    return finish(6, "image identity", std::move(top), seed, std::move(csv));
}

// 7. E_{lambda,L} inside hull(e-samples) inside E_L for the compact ex_2_2 triple.
CriterionResult criterion7(std::uint64_t seed) {
    const auto s = builtin("ex_2_2");
    const LambdaBound lam{[](double, double x) { return std::abs(x); }, {}};
    const auto tr = build_compact(s, lam);
    CheckReport top = group("compact_sandwich");
    for (double x : {-1.0, 0.0, 1.0}) {
        auto r = check_sandwich(tr, lam, kAcceptT, x, 0.05);
        r.check += "_x=" + format_number(x);
        top.absorb(r);
    }
    return finish(7, "compact sandwich", std::move(top), seed);
}

// 8. Epigraph bound check, lambda extraction and BLC failure detection.
CriterionResult criterion8(std::uint64_t seed) {
    CheckReport top = group("compactness_pipeline");
    auto zero = [](double) { return 0.0; };
    CompactnessPlan plan;
    plan.seed = seed;
    CompactnessPlan hat_plan = plan;
    hat_plan.controls.per_axis = 61;
    struct Named {
        std::string name;
        RepresentationTriple triple;
        const CompactnessPlan* plan;
    };
    const std::vector<Named> triples{
        {"p_abs_h0_k0", family_p_abs(zero, zero), &plan},
        {"p_abs_hx2_k1", family_p_abs([](double x) { return x * x; }, [](double) { return 1.0; }), &plan},
        {"hat_ex_2_1", hat_representation_ex_2_1(), &hat_plan}};
    for (const auto& t : triples) {
        auto r = epigraph_bound_check(t.triple, *t.plan);
        r.check = "epigraph_bound_" + t.name;
        top.absorb(r);
    }

    auto lambda_case = [&](const std::string& name, const RepresentationTriple& tr, auto expected) {
        auto est = extract_lambda(convexify(tr), plan);
        CheckReport r = group("lambda_" + name);
        r.absorb(est.certificate);
        r.tolerance = 1e-6;
        r.worst = 0.0;
        for (double x : plan.xs) {
            const double got = est.bound.eval(plan.t, x), want = expected(x);
            r.worst = std::max(r.worst, std::abs(got - want));
            r.add_witness({{"x", x}, {"lambda", got}, {"expected", want}});
        }
        r.pass = r.pass && r.worst <= r.tolerance;
        r.verdict = r.pass ? "pass" : "fail";
        top.absorb(r);
    };
    lambda_case("hat_ex_2_1", hat_representation_ex_2_1(), [](double) { return 1.0; });
    lambda_case("circle_ex_2_2", circle_representation_ex_2_2(), [](double x) { return 1.0 + std::abs(x); });

    auto blc_case = [&](const std::string& name, const BLCProbe& probe, const char* expected) {
        auto r = detect_blc_failure(builtin(name), probe);
        CheckReport g = group("blc_" + name);
        g.pass = r.verdict == expected;
        g.verdict = r.verdict;
        g.children.push_back(std::move(r));
        top.absorb(g);
    };
    BLCProbe probe;
    blc_case("ex_2_3", probe, kBLCViolated);
    blc_case("ex_2_4", probe, kBLCViolated);
    BLCProbe probe22;
    probe22.points = {{0.5, -1.0}, {0.5, 0.0}, {0.5, 0.5}};
    blc_case("ex_2_2", probe22, kBLCBounded);
    return finish(8, "compactness pipeline", std::move(top), seed);
}

// 9. Stability of the representation under the three perturbation families.
CriterionResult criterion9(std::uint64_t seed) {
    StabilityPlan plan;
    plan.seed = seed;
    const Window w;
    CheckReport top = group("stability");
    std::string csv = "family,i,sup_e_err,sup_f_err,sup_l_err,sup_hausdorff_EL\n";
    auto add = [&](const std::string& name, StabilityReport rep) {
        std::string body = rep.to_csv();
        body.erase(0, body.find('\n') + 1);
        std::size_t pos = 0;
        while (pos < body.size()) {
            const std::size_t end = body.find('\n', pos);
            csv += name + ',' + body.substr(pos, end - pos) + '\n';
            pos = end + 1;
        }
        rep.check.check = name + "_" + rep.check.check;
        top.absorb(rep.check);
        return rep;
    };
    add("ex_2_1_sin", representation_convergence(standard_family("ex_2_1_sin"), BuilderKind::noncompact, w, plan));
    add("ex_2_2_shift", representation_convergence(standard_family("ex_2_2_shift"), BuilderKind::compact, w, plan));
    add("ex_3_4_abs", fixed_t_convergence(standard_family("ex_3_4_abs"), 0.5, w, plan));

    auto zero = representation_convergence(standard_family("ex_2_2_zero"), BuilderKind::noncompact, w, plan);
    CheckReport z = group("zero_perturbation");
    z.worst = 0.0;
    for (const auto& row : zero.rows) z.worst = std::max(z.worst, row.sup_e_err);
    z.tolerance = 0.0;
    close_max(z);
    add("ex_2_2_zero", std::move(zero));
    top.absorb(z);
    // The zero family has no decay (0 <= 0.3 * 0 holds), so its own report passes too.
    return finish(9, "stability", std::move(top), seed, std::move(csv));
}

}  // namespace

CriterionResult run_criterion(int id, std::uint64_t seed) {
    switch (id) {
        case 1: return criterion1(seed);
        case 2: return criterion2(seed);
        case 3: return criterion3(seed);
        case 4: return criterion4(seed);
        case 5: return criterion5(seed);
        case 6: return criterion6(seed);
        case 7: return criterion7(seed);
        case 8: return criterion8(seed);
        case 9: return criterion9(seed);
        case 10: {
            std::vector<CriterionResult> first;
            for (int k = 1; k < kCriterionCount; ++k) first.push_back(run_criterion(k, seed));
            return determinism_criterion(first, seed);
        }
        default: throw Error(ErrorCode::InvalidArgument, "criterion id must be in 1..10");
    }
}

CriterionResult determinism_criterion(const std::vector<CriterionResult>& first, std::uint64_t seed) {
    CheckReport top = group("determinism");
    top.tolerance = 0.0;
    int compared = 0, differing = 0;
    for (const auto& a : first) {
        const auto b = run_criterion(a.id, seed);
        const bool same_names = a.artifacts.size() == b.artifacts.size();
        for (std::size_t k = 0; k < a.artifacts.size(); ++k) {
            ++compared;
            if (!same_names || a.artifacts[k].name != b.artifacts[k].name ||
                a.artifacts[k].content != b.artifacts[k].content) {
                ++differing;
                top.add_witness({{"artifact", a.artifacts[k].name}}, 64);
            }
        }
    }
    top.worst = differing;
    top.pass = differing == 0 && compared > 0;
    top.add_witness({{"artifacts_compared", compared}});
    return finish(10, "determinism", std::move(top), seed);
}

std::vector<CriterionResult> run_acceptance(std::uint64_t seed) {
    std::vector<CriterionResult> out;
    for (int k = 1; k < kCriterionCount; ++k) out.push_back(run_criterion(k, seed));
    out.push_back(determinism_criterion(out, seed));
    return out;
}

std::string criterion_line(const CriterionResult& r) {
    return "criterion " + tag(r.id) + (r.report.pass ? " PASS " : " FAIL ") + r.title;
}

}  // namespace hamrep
