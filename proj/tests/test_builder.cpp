#include <doctest.h>

#include <cmath>

#include "hamrep/builder.hpp"
#include "hamrep/errors.hpp"
#include "hamrep/zoo.hpp"

using namespace hamrep;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::CheckFailure;
}

LambdaBound lambda_of(std::function<double(double, double)> f) { return LambdaBound{std::move(f), {}}; }

double slice_h(const HamiltonianSpec& s, double t, double x) { return slice_grid(s, t, x, {}).spacing(); }

}  // namespace

TEST_CASE("noncompact e maps into the epigraph and fixes its points") {
    auto spec = builtin("ex_2_2");
    auto tr = build_noncompact(spec);
    CHECK(tr.provenance == Provenance::noncompact);
    CHECK_FALSE(tr.control.compact());
    auto g = slice_grid(spec, 0, 0, {});
    auto L = lagrangian_slice(spec, 0, 0, g);
    auto E = build_epigraph(L, 20.0).body;

    Vec2 e = tr.e(0, 0, {0.0, -5.0});
    CHECK(distance(e, E) <= 2 * g.spacing());
    // Phi = E_L inside B((0,-5), 8); the Steiner point lies in both.
    CHECK(norm(e - Vec2{0, -5}) <= 8.0 + 1e-9);
    CHECK(e.y >= -1.0 - 1e-9);

    Vec2 in = tr.e(0, 0, {0.2, 1.5});
    CHECK(in.x == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(in.y == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("image of the grid controls fills dom L") {
    auto spec = builtin("ex_2_1");
    auto tr = build_noncompact(spec);
    ControlPlan plan;  // 41 x 41 on [-3,3]^2
    double lo = kInf, hi = -kInf;
    for (const auto& a : tr.control.sample(plan)) {
        double f = tr.f(0, 0.5, a);
        lo = std::min(lo, f);
        hi = std::max(hi, f);
    }
    CHECK(std::max(std::abs(lo + 0.5), std::abs(hi - 0.5)) <= 0.05);

    auto est = image_of_controls(tr, 0, 0.5);
    CHECK(est.gap <= 0.05);
    auto est0 = image_of_controls(tr, 0, 0.0);
    CHECK(est0.image.lo == doctest::Approx(0.0));
    CHECK(est0.image.hi == doctest::Approx(0.0));
    CHECK(est0.gap <= slice_h(spec, 0, 0));

    auto tr2 = build_noncompact(builtin("ex_2_2"));
    for (double x : {-1.0, 0.3}) CHECK(image_of_controls(tr2, 0, x).gap <= 0.05);
}

TEST_CASE("noncompact reconstruction") {
    auto tr2 = build_noncompact(builtin("ex_2_2"));
    CHECK(std::abs(reconstruct_H(tr2, 0, 0, 1.0) - std::sqrt(2.0)) <= 5e-2);
    auto tr1 = build_noncompact(builtin("ex_2_1"));
    CHECK(std::abs(reconstruct_H(tr1, 0, 1, 0.0)) <= 5e-2);

    // More controls never decrease the estimate (the coarse grid is a subset).
    ControlPlan coarse{21, 3.0, 12, 48, 8}, fine{41, 3.0, 12, 48, 8};
    for (double p : {-3.0, 1.0, 3.0}) CHECK(reconstruct_H(tr2, 0, 0.5, p, coarse) <= reconstruct_H(tr2, 0, 0.5, p, fine));
}

TEST_CASE("inner approximation soundness") {
    for (const char* name : {"ex_2_1", "ex_2_2"}) {
        auto spec = builtin(name);
        auto tr = build_noncompact(spec);
        ControlPlan plan{15, 3.0, 12, 48, 8};
        for (double x : {-1.0, 0.25})
            for (const auto& a : tr.controls(0, x, plan)) {
                Vec2 e = tr.e(0, x, a);
                for (double p : {-3.0, 0.0, 2.0}) CHECK(p * e.x - e.y <= spec.eval(0, x, p) + 2e-2);
            }
    }
}

TEST_CASE("compact builder: scaling, sandwich and errors") {
    auto spec = builtin("ex_2_2");
    auto lam = lambda_of([](double, double x) { return std::abs(x); });
    auto tr = build_compact(spec, lam);
    CHECK(tr.control.compact());
    CHECK(tr.M(0, 0) == doctest::Approx(3.0));
    for (double x : {-1.0, 0.0, 1.0}) {
        auto r = check_sandwich(tr, lam, 0, x, 0.05);
        CAPTURE(x);
        CHECK(r.pass);
    }
    CHECK(code_of([] { build_compact(builtin("ex_2_5"), lambda_of([](double, double) { return 1.0; })); }) ==
          ErrorCode::MissingC);
    CHECK(code_of([] { build_compact(builtin("ex_2_3"), lambda_of([](double, double) { return 5.0; })); }) ==
          ErrorCode::BLCViolation);

    auto tr1 = build_compact(builtin("ex_2_1"), lambda_of([](double, double x) { return 1.0 + std::abs(x); }));
    for (double x : {-1.0, 0.0, 0.5})
        for (double p : {-3.0, 0.0, 3.0})
            CHECK(std::abs(reconstruct_H(tr1, 0, x, p) - builtin("ex_2_1").eval(0, x, p)) <= 5e-2);

    auto s34 = builtin("ex_3_4");
    auto tr34 = build_compact(s34, lambda_of([](double t, double x) { return std::abs(std::log(t)) * std::abs(x); }));
    CHECK(std::abs(reconstruct_H(tr34, 0.5, 1.0, 2.0) - s34.eval(0.5, 1.0, 2.0)) <= 5e-2);
}

TEST_CASE("verify_triple on the noncompact ex_2_1 triple") {
    auto tr = build_noncompact(builtin("ex_2_1"));
    auto rep = verify_triple(tr, Window{});
    for (const auto& c : rep.children) {
        CAPTURE(c.check);
        CAPTURE(c.to_json().dump());
        CHECK(c.pass);
    }
    CHECK(rep.children.size() == 6);

    // l lower bound of ex_2_2 at x = 0 is the epigraph floor -1.
    auto tr2 = build_noncompact(builtin("ex_2_2"));
    double lmin = kInf;
    for (const auto& a : tr2.controls(0, 0, {})) lmin = std::min(lmin, tr2.l(0, 0, a));
    CHECK(std::abs(lmin + 1.0) <= 2e-2);
}

TEST_CASE("determinism and trace output") {
    auto a = build_noncompact(builtin("ex_2_2"));
    auto b = build_noncompact(builtin("ex_2_2"));
    std::vector<TracePoint> pts{{0, 0, {0.0, -5.0}}, {0, 0.5, {1.0, 2.0}}, {0.3, -1, {-2.5, 0.1}}};
    auto ca = trace_csv(a, pts), cb = trace_csv(b, pts);
    CHECK(ca == cb);
    CHECK(ca.rfind("t,x,a1,a2,f,l\n", 0) == 0);
    CHECK(std::count(ca.begin(), ca.end(), '\n') == 4);
}
