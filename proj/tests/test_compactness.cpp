#include <doctest.h>

#include <cmath>

#include "hamrep/compactness.hpp"
#include "hamrep/errors.hpp"
#include "hamrep/zoo.hpp"

using namespace hamrep;

namespace {

auto zero = [](double) { return 0.0; };

}  // namespace

TEST_CASE("epigraph bound on the listed triples") {
    for (auto src : {LSource::oracle, LSource::numeric}) {
        CompactnessPlan plan;
        plan.l_source = src;
        CAPTURE(static_cast<int>(src));
        CHECK(epigraph_bound_check(family_p_abs(zero, zero), plan).pass);
        CHECK(epigraph_bound_check(family_p_abs([](double x) { return x * x; }, [](double) { return 1.0; }), plan).pass);
        plan.controls.per_axis = 61;
        auto r = epigraph_bound_check(hat_representation_ex_2_1(), plan);
        CAPTURE(r.to_json().dump());
        CHECK(r.pass);
    }
    // At a = 0 the |p| family has f = 0 and l = k(x), above L(0) = 0.
    auto tr = family_p_abs([](double x) { return x * x; }, [](double) { return 1.0; });
    CHECK(tr.f(0, 2.0, {0.0}) == 0.0);
    CHECK(tr.l(0, 2.0, {0.0}) == 1.0);
    // A triple with l below L must fail.
    auto bad = family_p_abs(zero, [](double) { return -1.0; });
    CHECK_FALSE(epigraph_bound_check(bad).pass);
}

TEST_CASE("f-image closure equals dom L") {
    for (auto src : {LSource::oracle, LSource::numeric}) {
        CompactnessPlan plan;
        plan.l_source = src;
        CHECK(check_domain_identity(family_p_abs([](double x) { return x * x; }, zero), plan).pass);
        CHECK(check_domain_identity(check_representation_ex_2_2(), plan).pass);
        plan.controls.per_axis = 61;
        CHECK(check_domain_identity(hat_representation_ex_2_1(), plan).pass);
    }
}

TEST_CASE("convexification") {
    auto base = family_p_abs([](double x) { return x * x; }, zero);
    auto ct = convexify(base);
    CHECK(ct.triple.control.kind() == ControlKind::simplex_product);
    CHECK(ct.triple.control.dim() == 4);
    // e of the encoded control equals the convex combination of the atoms.
    Control a{0.5, -0.25, 0.25, 0.75};
    Vec2 e = ct.triple.e(0, 0.7, a);
    Vec2 ref = base.e(0, 0.7, {0.5}) * 0.25 + base.e(0, 0.7, {-0.25}) * 0.75;
    CHECK(e.x == doctest::Approx(ref.x));
    CHECK(e.y == doctest::Approx(ref.y));
    // Nine simplex weights for two atoms at denominator 8.
    ControlPlan small{3, 3.0, 1, 4, 8};
    CHECK(ct.triple.control.sample(small).size() == 3 * 3 * 9);
    CHECK(convexified_samples(ct, 0, 0.5, small).size() == 3 * 3 * 9);

    auto rep = check_convexification(ct);
    CHECK(rep.pass);
    auto twice = convexify(ct.triple);
    CompactnessPlan coarse;
    coarse.atom_controls = ControlPlan{3, 3.0, 1, 4, 2};
    CHECK(check_convexification(twice, coarse).pass);
    CHECK(check_convexification(convexify(circle_representation_ex_2_2())).pass);

    CHECK_THROWS_AS(convexify(RepresentationTriple{ControlSet::full_space(2), {}, Provenance::noncompact, {}, {}, {}}),
                    Error);
}

TEST_CASE("lambda extraction") {
    auto hat = extract_lambda(convexify(hat_representation_ex_2_1()));
    CHECK(hat.certificate.pass);
    for (double x : {-1.0, 0.0, 0.5}) CHECK(hat.bound.eval(0.5, x) == doctest::Approx(1.0));

    auto pabs = extract_lambda(convexify(family_p_abs(zero, zero)));
    CHECK(pabs.certificate.pass);
    CHECK(pabs.bound.eval(0.5, 0.3) == doctest::Approx(0.0));

    auto circ = extract_lambda(convexify(circle_representation_ex_2_2()));
    CHECK(circ.certificate.pass);
    for (double x : {-1.0, 0.0, 0.5}) CHECK(circ.bound.eval(0.5, x) == doctest::Approx(1.0 + std::abs(x)));
}

TEST_CASE("BLC failure detection") {
    BLCProbe probe;
    auto r3 = detect_blc_failure(builtin("ex_2_3"), probe);
    CHECK(r3.verdict == kBLCViolated);
    auto r4 = detect_blc_failure(builtin("ex_2_4"), probe);
    CHECK(r4.verdict == kBLCViolated);
    probe.points = {{0.5, -1.0}, {0.5, 0.0}, {0.5, 0.5}};
    auto r2 = detect_blc_failure(builtin("ex_2_2"), probe);
    CHECK(r2.verdict == kBLCBounded);
    CHECK(r2.witnesses[2]["lambda_estimate"].get<double>() == doctest::Approx(0.5).epsilon(0.1));
    CHECK(detect_blc_failure(builtin("ex_2_5"), probe).verdict == kBLCViolated);
    CHECK(detect_blc_failure(builtin("ex_2_1"), probe).verdict == kBLCBounded);
    probe.mode = LagrangianMode::numeric;
    CHECK(detect_blc_failure(builtin("ex_2_2"), probe).verdict == kBLCBounded);
}
