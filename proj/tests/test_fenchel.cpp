#include <doctest.h>

#include <cmath>
#include <random>

#include "hamrep/errors.hpp"
#include "hamrep/fenchel.hpp"
#include "hamrep/hamiltonian.hpp"
#include "hamrep/zoo.hpp"

using namespace hamrep;

namespace {

ConvexGridFunction sample(const UniformGrid& g, std::function<double(double)> fn) {
    return ConvexGridFunction::sample(g, fn);
}

bool inside(const ConvexPolygon& body, Vec2 y) { return distance(y, body) <= 1e-9; }

// Brute-force sup_p {v p - H(p)} over a dense p-grid, independent of conjugate().
double brute_conjugate(const std::function<double(double)>& H, double v, double P, int n) {
    double best = -kInf;
    for (int i = 0; i <= n; ++i) {
        double p = -P + 2.0 * P * i / n;
        best = std::max(best, v * p - H(p));
    }
    return best;
}

}  // namespace

TEST_CASE("grid basics and validation") {
    auto g = UniformGrid::make(-1, 1, 5);
    CHECK(g.spacing() == doctest::Approx(0.5));
    CHECK(g.node(2) == 0.0);
    CHECK_THROWS_AS(UniformGrid::make(1, 1, 5), Error);
    CHECK_THROWS_AS(UniformGrid::make(0, 1, 1), Error);
    auto a = UniformGrid::aligned(-0.3, 1.0, 0.25);
    CHECK(a.lo == doctest::Approx(-1.0));
    CHECK(a.node(a.count / 2) == 0.0);

    CHECK_THROWS_AS(ConvexGridFunction(g, {kInf, kInf, kInf, kInf, kInf}, true), Error);
    CHECK_THROWS_AS(ConvexGridFunction(g, {0, kInf, 0, 0, 0}, true), Error);
    CHECK_THROWS_AS(ConvexGridFunction(g, {0, -kInf, 0, 0, 0}, true), Error);
    CHECK_THROWS_AS(ConvexGridFunction(g, {0, NAN, 0, 0, 0}, true), Error);
    ConvexGridFunction f(g, {1e13, 1, 0, 1, 2e12}, true);
    CHECK(f.value(0) == kInf);
    CHECK(f.value(4) == kInf);
    CHECK(f.first_finite() == 1);
    CHECK(f.last_finite() == 3);
    CHECK(f.eval(0.25) == doctest::Approx(0.5));
    CHECK(f.eval(-0.75) == kInf);
}

TEST_CASE("CSV round trip writes inf") {
    auto g = UniformGrid::make(-1, 1, 5);
    ConvexGridFunction f(g, {kInf, 0.5, 0, 0.5, kInf}, true);
    std::string csv = f.to_csv();
    CHECK(csv == "v,value\n-1,inf\n-0.5,0.5\n0,0\n0.5,0.5\n1,inf\n");
    auto back = ConvexGridFunction::from_csv(csv);
    CHECK(back.values() == f.values());
    CHECK_THROWS_AS(ConvexGridFunction::from_csv("x,y\n"), Error);
}

TEST_CASE("conjugate examples") {
    auto e21 = builtin("ex_2_1");
    auto e22 = builtin("ex_2_2");
    auto H1 = hamiltonian_slice(e21, 0.0, 1.0);
    auto out = UniformGrid::make(-2, 2, 401);
    auto L1 = conjugate(H1, out);
    CHECK(std::abs(L1.eval(0.5) - 0.5) <= 1e-2);

    auto H2 = hamiltonian_slice(e22, 0.0, 0.0);
    CHECK(std::abs(conjugate(H2, out).eval(0.0) + 1.0) <= 1e-2);

    auto sq = sample(UniformGrid::make(-10, 10, 2001), [](double p) { return p * p / 2; });
    auto c = conjugate(sq, UniformGrid::make(-2, 2, 81));
    for (std::size_t i = 0; i < 81; ++i) {
        double w = c.grid().node(i);
        CHECK(std::abs(c.value(i) - w * w / 2) <= 1e-2);
    }
    CHECK(c.convexity_violation() <= 1e-9);
}

TEST_CASE("conjugate rejects improper input and marks escapes") {
    auto lin = sample(UniformGrid::make(-50, 50, 1001), [](double p) { return p; });
    ConjugateOptions opts;
    opts.mark_escapes = true;
    auto c = conjugate(lin, UniformGrid::make(-2, 2, 5), opts);
    // Only v = 1 has a bounded sup over the whole line.
    CHECK(c.value(3) == doctest::Approx(0.0));
    CHECK(c.value(0) == kInf);
    CHECK(c.value(4) == kInf);
    auto plain = conjugate(lin, UniformGrid::make(-2, 2, 5));
    CHECK(plain.value(4) == doctest::Approx(50.0));
}

TEST_CASE("biconjugate examples") {
    auto pg = UniformGrid::make(-10, 10, 201);
    auto e21 = builtin("ex_2_1");
    auto H1 = hamiltonian_slice(e21, 0.0, 1.0);
    auto b1 = biconjugate(H1, pg);
    for (std::size_t i = 0; i < pg.count; ++i) {
        double p = pg.node(i);
        CHECK(std::abs(b1.value(i) - e21.eval(0, 1, p)) <= 2e-2);
    }
    auto absf = sample(UniformGrid::make(-50, 50, 10001), [](double p) { return std::abs(p); });
    auto b2 = biconjugate(absf, pg);
    for (std::size_t i = 0; i < pg.count; ++i) CHECK(std::abs(b2.value(i) - std::abs(pg.node(i))) <= 1e-2);

    auto e22 = builtin("ex_2_2");
    auto b3 = biconjugate(hamiltonian_slice(e22, 0, 0), pg);
    for (std::size_t i = 0; i < pg.count; ++i) {
        double p = pg.node(i);
        CHECK(std::abs(b3.value(i) - std::sqrt(1 + p * p)) <= 2e-2);
    }
}

TEST_CASE("epi-sum examples and the conjugate-of-sum identity") {
    auto g = UniformGrid::make(-2, 2, 801);
    auto e22 = builtin("ex_2_2");
    auto f1 = lagrangian_slice(e22, 0, 0, g, LagrangianMode::oracle);
    auto f2 = sample(g, [](double v) { return std::abs(v) <= 0.5 + 1e-12 ? -0.1 : kInf; });
    auto s = epi_sum(f1, f2);
    CHECK(std::abs(s.eval(0.0) + 1.1) <= 1e-2);

    auto delta = sample(g, [](double v) { return v == 0.0 ? 0.0 : kInf; });
    auto id = epi_sum(f1, delta);
    for (std::size_t i = 0; i < g.count; ++i) {
        if (f1.value(i) == kInf) CHECK(id.value(i) == kInf);
        else CHECK(id.value(i) == doctest::Approx(f1.value(i)));
    }

    auto full = sample(g, [](double) { return 0.0; });
    CHECK_THROWS_AS(epi_sum(f1, full), Error);

    // (h1 + h2)* against h1* # h2*, all conjugates on the same grid.
    auto pg = UniformGrid::make(-50, 50, 10001);
    auto h1 = ConvexGridFunction::sample(pg, [&](double p) { return e22.eval(0, 0, p); });
    auto h2 = ConvexGridFunction::sample(pg, [](double p) { return 0.5 * std::abs(p) + 0.1; });
    auto hs = ConvexGridFunction::sample(pg, [&](double p) { return e22.eval(0, 0, p) + 0.5 * std::abs(p) + 0.1; });
    ConjugateOptions opts;
    opts.mark_escapes = true;
    auto lhs = conjugate(hs, g, opts);
    auto rhs = epi_sum(conjugate(h1, g, opts), conjugate(h2, g, opts));
    int compared = 0;
    for (std::size_t i = 0; i < g.count; ++i) {
        if (lhs.value(i) == kInf || rhs.value(i) == kInf) continue;
        ++compared;
        CHECK(std::abs(lhs.value(i) - rhs.value(i)) <= 2e-2);
    }
    CHECK(compared > 500);
}

TEST_CASE("effective domain and closedness heuristic") {
    auto g = UniformGrid::make(-3, 3, 601);
    auto L1 = lagrangian_slice(builtin("ex_2_1"), 0, 1, g, LagrangianMode::numeric);
    auto d1 = effective_domain(L1);
    CHECK(std::abs(d1.lo + 1) <= g.spacing() + 1e-12);
    CHECK(std::abs(d1.hi - 1) <= g.spacing() + 1e-12);
    CHECK(d1.lo_closed);
    CHECK(d1.hi_closed);

    auto L3 = lagrangian_slice(builtin("ex_2_3"), 0, 0.5, g, LagrangianMode::oracle);
    auto d3 = effective_domain(L3);
    CHECK(std::abs(d3.lo) <= g.spacing() + 1e-12);
    CHECK(std::abs(d3.hi - 1) <= g.spacing() + 1e-12);
    CHECK_FALSE(d3.lo_closed);
    CHECK(d3.hi_closed);

    auto flat = sample(g, [](double v) { return v * v; });
    auto df = effective_domain(flat);
    CHECK(df.lo == -3.0);
    CHECK(df.hi == 3.0);
    CHECK(interval_gap(d1, d1) == 0.0);
}

TEST_CASE("epigraph bodies") {
    auto g = UniformGrid::make(-2, 2, 401);
    auto L = lagrangian_slice(builtin("ex_2_2"), 0, 0, g, LagrangianMode::oracle);
    auto E = build_epigraph(L, 2.0);
    CHECK(inside(E.body, {0, -1}));
    CHECK(inside(E.body, {0, 2}));
    CHECK_FALSE(inside(E.body, {1.5, 0}));
    CHECK_THROWS_AS(build_epigraph(L, -1.0), Error);

    auto ind = sample(g, [](double v) { return std::abs(v) <= 1 + 1e-12 ? 0.0 : kInf; });
    auto sq = build_epigraph(ind, 1.0).body;
    CHECK(hausdorff(sq, ConvexPolygon::box(-1, 0, 1, 1)) <= 1e-12);

    auto E1 = build_epigraph(L, 1.0);
    CHECK(contains_body(E.body, E1.body, 1e-12));

    auto B = build_bounded_epigraph(L, 0.0);
    CHECK(inside(B.body, {0, -0.5}));
    CHECK_FALSE(inside(B.body, {0, 0.5}));
    CHECK(contains_body(build_epigraph(L, 0.0).body, B.body, 1e-9));
    CHECK(contains_body(E.body, B.body, 1e-9));
    CHECK_THROWS_AS(build_bounded_epigraph(L, -2.0), Error);
    auto deg = build_bounded_epigraph(L, L.min_value());
    CHECK(deg.body.is_point());
}

TEST_CASE("Lagrangian property report") {
    auto g = UniformGrid::make(-3, 3, 601);
    auto e21 = builtin("ex_2_1");
    std::vector<LagrangianSlice> fam;
    for (double x : {-1.0, 0.0, 1.0}) fam.push_back({0.0, x, lagrangian_slice(e21, 0, x, g)});
    LagrangianMeta meta{e21.modulus.c, 5e-2};
    auto rep = check_lagrangian_properties(fam, meta);
    CHECK(rep.pass);
    bool saw_l1 = false;
    for (const auto& c : rep.children) {
        if (c.check == "L1") {
            saw_l1 = true;
            CHECK(c.verdict == "not numerically checkable");
        }
        if (c.check == "L3" || c.check == "L5") CHECK(c.pass);
    }
    CHECK(saw_l1);

    auto e25 = builtin("ex_2_5");
    std::vector<LagrangianSlice> fam5;
    for (double x : {-1.0, 0.0, 1.0}) fam5.push_back({0.5, x, lagrangian_slice(e25, 0.5, x, g)});
    auto rep5 = check_lagrangian_properties(fam5, {e25.modulus.c, 5e-2});
    bool flagged = false;
    for (const auto& c : rep5.children)
        if (c.check == "L5") flagged = c.verdict.find("growth condition absent") != std::string::npos;
    CHECK(flagged);

    std::vector<LagrangianSlice> famc;
    for (double x : {0.0, 0.5}) famc.push_back({0.0, x, sample(g, [](double) { return 2.0; })});
    auto repc = check_lagrangian_properties(famc, {[](double) -> std::optional<double> { return 3.0; }, 5e-2});
    CHECK(repc.pass);
    for (const auto& c : repc.children) CHECK(c.pass);
}

TEST_CASE("conjugate invariants on random convex inputs") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    auto g = UniformGrid::make(-5, 5, 201);
    auto out = UniformGrid::make(-3, 3, 121);
    for (int trial = 0; trial < 20; ++trial) {
        double a = 0.2 + std::abs(u(rng)), b = u(rng), c = std::abs(u(rng));
        auto f = sample(g, [&](double p) { return a * p * p + b * p + c * std::abs(p - 1); });
        auto gfun = sample(g, [&](double p) { return a * p * p + b * p + c * std::abs(p - 1) + 0.3 + 0.1 * p * p; });
        auto cf = conjugate(f, out), cg = conjugate(gfun, out);
        for (std::size_t k = 0; k < out.count; ++k) CHECK(cf.value(k) >= cg.value(k));
        CHECK(cf.convexity_violation() <= 1e-9 * (1 + std::abs(cf.min_value())) + 1e-9);
        for (std::size_t i = 0; i < g.count; i += 5)
            for (std::size_t k = 0; k < out.count; k += 3)
                CHECK(f.value(i) + cf.value(k) >= g.node(i) * out.node(k) - 1e-9);
        auto bc = biconjugate(f, g);
        for (std::size_t i = 0; i < g.count; ++i) CHECK(bc.value(i) <= f.value(i) + 1e-9);
        // Independent brute-force sup at a few points.
        for (double v : {-1.0, 0.0, 0.7}) {
            double ref = brute_conjugate([&](double p) { return a * p * p + b * p + c * std::abs(p - 1); }, v, 5, 200);
            CHECK(cf.eval(v) == doctest::Approx(ref).epsilon(1e-9));
        }
    }
}

TEST_CASE("numeric domains respect the growth bound") {
    for (const auto& name : builtin_names()) {
        auto spec = builtin(name);
        for (double x : {-1.0, 0.0, 0.7}) {
            double t = 0.5;
            auto c = spec.c(t);
            if (!c) continue;
            auto g = UniformGrid::make(-4, 4, 801);
            auto L = lagrangian_slice(spec, t, x, g, LagrangianMode::numeric);
            auto d = effective_domain(L);
            double bound = *c * (1 + std::abs(x)) + g.spacing();
            CAPTURE(name);
            CAPTURE(x);
            CHECK(d.lo >= -bound);
            CHECK(d.hi <= bound);
        }
    }
}
