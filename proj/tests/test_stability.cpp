#include <doctest.h>

#include <cmath>

#include "hamrep/errors.hpp"
#include "hamrep/stability.hpp"
#include "hamrep/zoo.hpp"

using namespace hamrep;

namespace {

void check_decay(const StabilityReport& r) {
    CAPTURE(r.to_csv());
    CAPTURE(r.check.to_json().dump());
    REQUIRE(r.rows.size() == 3);
    CHECK(r.rows[0].sup_e_err > 0.0);
    CHECK(r.rows[2].sup_e_err <= 0.3 * r.rows[0].sup_e_err);
    CHECK(r.check.pass);
}

}  // namespace

TEST_CASE("family members") {
    auto f = standard_family("ex_2_1_sin");
    auto h4 = family_member(f, 4);
    CHECK(h4.eval(0.3, 1.0, 2.0) == doctest::Approx(f.base.eval(0.3, 1.0, 2.0) + std::sin(1.0) / 4));
    CHECK_FALSE(static_cast<bool>(h4.oracle_L));
    CHECK(static_cast<bool>(family_member(f, 0).oracle_L));
    CHECK(check_family_convexity(f, Window{}).pass);
    auto cosf = check_family_convexity(standard_family("ex_2_2_cos"), Window{});
    CHECK_FALSE(cosf.pass);
    CHECK_FALSE(cosf.witnesses.empty());
    CHECK_THROWS_AS(standard_family("nope"), Error);
}

TEST_CASE("noncompact convergence: sin(x)/i") {
    auto r = representation_convergence(standard_family("ex_2_1_sin"), BuilderKind::noncompact, Window{});
    check_decay(r);
    // The perturbation only shifts l, so f barely moves.
    CHECK(r.rows[2].sup_l_err <= 1.0 / 64 + 2e-2);
}

TEST_CASE("compact convergence: lambda_i = |x| + 1/i") {
    check_decay(representation_convergence(standard_family("ex_2_2_shift"), BuilderKind::compact, Window{}));
    auto f = standard_family("ex_2_2_shift");
    f.lambda = {};
    CHECK_THROWS_AS(representation_convergence(f, BuilderKind::compact, Window{}), Error);
}

TEST_CASE("fixed-t convergence: |x|/i at t = 0.5") {
    auto r = fixed_t_convergence(standard_family("ex_3_4_abs"), 0.5, Window{});
    check_decay(r);
    CHECK(r.check.check == "fixed_t_convergence");
    CHECK(r.window.find("t=[0.5,0.5]") == 0);
}

TEST_CASE("zero perturbation gives zero error") {
    auto f = standard_family("ex_2_2_zero");
    auto r = representation_convergence(f, BuilderKind::noncompact, Window{});
    for (const auto& row : r.rows) {
        CHECK(row.sup_e_err == 0.0);
        CHECK(row.sup_hausdorff_EL == 0.0);
    }
    CHECK(r.check.pass);
    EpigraphLimitPlan plan;
    plan.moving = false;
    auto e = epigraph_limit_check(f, Window{}, plan);
    CHECK(e.worst == 0.0);
    CHECK(e.pass);
}

TEST_CASE("cos(p)/i: flagged, rejected by the builder, epigraphs still converge") {
    auto f = standard_family("ex_2_2_cos");
    try {
        representation_convergence(f, BuilderKind::noncompact, Window{});
        FAIL("expected HypothesisViolation");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::HypothesisViolation);
    }
    auto r = epigraph_limit_check(f, Window{});
    CAPTURE(r.to_json().dump());
    CHECK(r.pass);
    REQUIRE(r.children.size() == 1);
    CHECK_FALSE(r.children[0].pass);
    CHECK(r.children[0].verdict.rfind("flagged", 0) == 0);
}

TEST_CASE("moving base points and linear growth perturbation") {
    auto r = epigraph_limit_check(standard_family("ex_2_1_sin"), Window{});
    CAPTURE(r.to_json().dump());
    CHECK(r.pass);
    auto n = normalized_limit_check(standard_family("ex_2_2_growth"), Window{});
    CAPTURE(n.to_json().dump());
    CHECK(n.pass);
}

TEST_CASE("intersection limits of polygons") {
    auto r = intersection_limit_check(1, 20, 0.3);
    CAPTURE(r.to_json().dump());
    CHECK(r.pass);
    CHECK(r.worst <= 0.3);
}

TEST_CASE("csv and determinism") {
    StabilityPlan plan;
    plan.points = 3;
    auto f = standard_family("ex_2_1_sin");
    auto a = representation_convergence(f, BuilderKind::noncompact, Window{}, plan);
    auto b = representation_convergence(f, BuilderKind::noncompact, Window{}, plan);
    CHECK(a.to_csv() == b.to_csv());
    CHECK(a.to_csv().rfind("i,sup_e_err,sup_f_err,sup_l_err,sup_hausdorff_EL\n", 0) == 0);
}

TEST_CASE("monotone refinement of the limit triple") {
    auto spec = family_member(standard_family("ex_2_1_sin"), 0);
    auto tr = build_noncompact(spec, StabilityPlan::numeric_policy());
    // The 21-node grid on [-3,3]^2 is a subset of the 41-node grid.
    ControlPlan coarse{21, 3.0, 8, 32, 8}, fine{41, 3.0, 8, 32, 8};
    for (double x : {-0.5, 0.5})
        for (double p : {-3.0, -1.0, 0.0, 2.0}) {
            const double h = spec.eval(0.5, x, p);
            CHECK(h - reconstruct_H(tr, 0.5, x, p, fine) <= h - reconstruct_H(tr, 0.5, x, p, coarse));
        }
}
