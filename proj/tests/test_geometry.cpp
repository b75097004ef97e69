#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hamrep/errors.hpp"
#include "hamrep/geometry.hpp"
#include "oracles.hpp"

using namespace hamrep;

namespace {

ConvexPolygon unit_square() { return ConvexPolygon::box(0, 0, 1, 1); }
ConvexPolygon triangle() {
    std::vector<Vec2> p{{0, 0}, {1, 0}, {0, 1}};
    return ConvexPolygon::hull(p);
}
ConvexPolygon disc(Vec2 c, double r, int n = 360) { return ConvexPolygon::regular({c, r}, n); }

}  // namespace

TEST_CASE("hull normalizes orientation and drops collinear points") {
    std::vector<Vec2> p{{0, 0}, {0.5, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
    auto sq = ConvexPolygon::hull(p);
    CHECK(sq.size() == 4);
    CHECK(sq.area() == doctest::Approx(1.0));
    std::vector<Vec2> seg{{0, 0}, {1, 1}, {2, 2}};
    CHECK(ConvexPolygon::hull(seg).is_segment());
    std::vector<Vec2> pt{{3, 4}, {3, 4}};
    CHECK(ConvexPolygon::hull(pt).is_point());
    std::vector<Vec2> none;
    CHECK_THROWS_AS(ConvexPolygon::hull(none), Error);
}

TEST_CASE("support selects the minimal-norm point of a maximizing edge") {
    auto r = support(unit_square(), {1, 0});
    CHECK(r.value == doctest::Approx(1.0));
    CHECK(r.point.x == doctest::Approx(1.0));
    CHECK(r.point.y == doctest::Approx(0.0));

    auto b = support(disc({0, 0}, 1), {0, 1});
    CHECK(std::abs(b.value - 1.0) <= 2e-4);
    CHECK(std::abs(b.point.x) <= 2e-2);

    auto t = support(triangle(), Vec2{1, 1} * (1 / std::sqrt(2.0)));
    CHECK(t.value == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(t.point.x == doctest::Approx(0.5));
    CHECK(t.point.y == doctest::Approx(0.5));

    // Rescaled direction gives the same point.
    auto t2 = support(triangle(), {7, 7});
    CHECK(t2.point == t.point);
}

TEST_CASE("distance and projection") {
    CHECK(std::abs(distance({2, 0}, disc({0, 0}, 1)) - 1.0) <= 2e-4);
    CHECK(distance({0.3, 0.3}, unit_square()) == 0.0);
    std::vector<Vec2> seg{{-1, 0}, {1, 0}};
    CHECK(distance({0, 2}, ConvexPolygon::hull(seg)) == doctest::Approx(2.0));
    auto pp = project_point({2, 0}, disc({0, 0}, 1));
    CHECK(std::abs(pp.x - 1.0) <= 2e-4);
    CHECK(std::abs(pp.y) <= 2e-4);
    auto corner = project_point({2, 2}, unit_square());
    CHECK(corner.x == doctest::Approx(1.0));
    CHECK(corner.y == doctest::Approx(1.0));
    Vec2 in{0.2, 0.7};
    CHECK(project_point(in, unit_square()) == in);
}

TEST_CASE("hausdorff examples and metric properties") {
    auto a = disc({0, 0}, 1), b = disc({3, 0}, 1);
    CHECK(hausdorff(a, a) == 0.0);
    CHECK(std::abs(hausdorff(a, b) - 3.0) <= 5e-4);
    CHECK(hausdorff(unit_square(), ConvexPolygon::point({0, 0})) == doctest::Approx(std::sqrt(2.0)));

    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        auto p = oracle::random_polygon(rng, 10.0);
        auto q = oracle::random_polygon(rng, 10.0);
        auto r = oracle::random_polygon(rng, 10.0);
        CHECK(hausdorff(p, q) == hausdorff(q, p));
        CHECK(hausdorff(p, r) <= hausdorff(p, q) + hausdorff(q, r) + 1e-9);
    }
}

TEST_CASE("ball Hausdorff bound on polygonized balls") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-5, 5), rr(0.1, 3);
    for (int i = 0; i < 100; ++i) {
        Vec2 x{u(rng), u(rng)}, y{u(rng), u(rng)};
        double r = rr(rng), s = rr(rng);
        double h = hausdorff(disc(x, r, 720), disc(y, s, 720));
        CHECK(h <= norm(x - y) + std::abs(r - s) + 5e-4);
    }
}

TEST_CASE("minkowski_inflate and contains_body") {
    auto sq = unit_square();
    CHECK(hausdorff(minkowski_inflate(sq, 0, 0), sq) == 0.0);
    auto rect = minkowski_inflate(sq, 1, 0);
    CHECK(hausdorff(rect, ConvexPolygon::box(-1, 0, 2, 1)) <= 1e-12);
    CHECK(contains_body(minkowski_inflate(triangle(), 0.1, 0.2), triangle(), 0.0));

    CHECK(contains_body(sq, sq, 0.0));
    std::vector<Vec2> shrunk;
    for (auto v : sq.vertices()) shrunk.push_back(Vec2{0.5, 0.5} + (v - Vec2{0.5, 0.5}) * 0.5);
    CHECK(contains_body(sq, ConvexPolygon::hull(shrunk), 0.0));
    CHECK_FALSE(contains_body(disc({0, 0}, 0.5), sq, 1e-6));
}

TEST_CASE("proj_map examples") {
    auto sq = unit_square();
    auto single = proj_map({0.5, 0.5}, sq);
    CHECK(single.is_point());
    CHECK(single.vertices()[0] == Vec2{0.5, 0.5});

    auto d = disc({0, 0}, 1);
    auto whole = proj_map({3, 0}, d);
    for (auto v : d.vertices()) CHECK(norm(v - Vec2{3, 0}) <= 4.0);
    CHECK(hausdorff(whole, d) == 0.0);

    // Brute-force membership oracle for square ∩ B((2,0),2).
    auto cut = proj_map({2, 0}, sq);
    CHECK(cut.area() > 0.0);
    CHECK(distance({1, 0}, cut) <= 1e-12);
    double max_err = 0.0;
    for (int i = 0; i <= 200; ++i) {
        for (int j = 0; j <= 200; ++j) {
            Vec2 z{i / 200.0, j / 200.0};
            bool truth = norm(z - Vec2{2, 0}) <= 2.0;
            double dc = distance(z, cut);
            if (truth) max_err = std::max(max_err, dc);
            else CHECK(norm(z - Vec2{2, 0}) - 2.0 >= -1e-12);
        }
    }
    // Chord sagitta at 0.5 degrees for radius 2.
    CHECK(max_err <= 2.0 * (1 - std::cos(0.5 * std::numbers::pi / 360)) + 1e-12);
    for (auto v : cut.vertices()) {
        CHECK(norm(v - Vec2{2, 0}) <= 2.0 + 1e-9);
        CHECK(distance(v, sq) <= 1e-9);
    }
}

TEST_CASE("proj_map on degenerate bodies") {
    std::vector<Vec2> seg{{-1, 0}, {1, 0}};
    auto s = ConvexPolygon::hull(seg);
    auto r = proj_map({0, 1}, s);
    // d = 1, radius 2 covers the whole segment
    CHECK(hausdorff(r, s) <= 1e-12);
    std::vector<Vec2> longseg{{-10, 0}, {10, 0}};
    auto r2 = proj_map({0, 1}, ConvexPolygon::hull(longseg));
    CHECK(r2.is_segment());
    CHECK(r2.vertices()[1].x - r2.vertices()[0].x == doctest::Approx(2 * std::sqrt(3.0)));
    auto p = proj_map({4, 3}, ConvexPolygon::point({0, 0}));
    CHECK(p.is_point());
}

TEST_CASE("steiner point against the exterior-angle oracle") {
    auto tri = triangle();
    Vec2 s = steiner(tri);
    Vec2 o = oracle::steiner_exterior_angles(tri);
    CHECK(o.x == doctest::Approx(0.375).epsilon(1e-12));
    CHECK(o.y == doctest::Approx(0.375).epsilon(1e-12));
    CHECK(norm(s - o) <= 2e-3);

    Vec2 c = steiner(disc({2, -1}, 3));
    CHECK(norm(c - Vec2{2, -1}) <= 1e-3);
    CHECK(steiner(ConvexPolygon::point({4, 5})) == Vec2{4, 5});

    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
        auto p = oracle::random_polygon(rng, 10.0);
        Vec2 q = steiner(p);
        CHECK(distance(q, p) <= 1e-6);
        CHECK(norm(q - oracle::steiner_exterior_angles(p)) <= 2e-2);
    }
}

TEST_CASE("steiner of a segment is its midpoint") {
    std::vector<Vec2> seg{{0, 0}, {2, 2}};
    Vec2 s = steiner(ConvexPolygon::hull(seg));
    CHECK(s.x == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(s.y == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("projection map and steiner Lipschitz properties on seeded pairs") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 200; ++i) {
        auto pr = oracle::random_pair(rng, i);
        auto PK = proj_map(pr.x, pr.K);
        auto PD = proj_map(pr.y, pr.D);
        double hkd = hausdorff(pr.K, pr.D);
        CHECK(hausdorff(PK, PD) <= 5.0 * (hkd + norm(pr.x - pr.y)) + 1e-3);
        CHECK(norm(steiner(pr.K) - steiner(pr.D)) <= 2.0 * hkd * 1.05);
    }
}

TEST_CASE("polygon intersection") {
    auto a = ConvexPolygon::box(0, 0, 2, 2), b = ConvexPolygon::box(1, 1, 3, 3);
    auto c = intersect(a, b);
    CHECK(hausdorff(c, ConvexPolygon::box(1, 1, 2, 2)) <= 1e-12);
    CHECK_THROWS_AS(intersect(a, ConvexPolygon::box(5, 5, 6, 6)), Error);
    std::vector<Vec2> seg{{-1, 1}, {3, 1}};
    auto cs = intersect(ConvexPolygon::hull(seg), a);
    CHECK(cs.is_segment());
    CHECK(hausdorff(cs, intersect(a, ConvexPolygon::hull(seg))) <= 1e-12);
}

TEST_CASE("support-sample backend in three dimensions") {
    std::vector<Vec3> cube;
    for (int i = 0; i < 8; ++i) cube.push_back({double(i & 1), double((i >> 1) & 1), double((i >> 2) & 1)});
    auto body = SupportBody3::from_points(cube, 4000, 7);
    for (std::size_t i = 0; i < body.directions().size(); ++i) {
        const auto& u = body.directions()[i];
        const auto& q = body.points()[i];
        CHECK(std::abs(u[0] * q[0] + u[1] * q[1] + u[2] * q[2] - body.values()[i]) <= 1e-9);
    }
    auto s = steiner(body);
    for (double c : s) CHECK(std::abs(c - 0.5) <= 2e-2);
    CHECK(hausdorff(body, body) == 0.0);
    CHECK(distance({0.5, 0.5, 0.5}, body) == 0.0);
    CHECK(distance({3.0, 0.5, 0.5}, body) == doctest::Approx(2.0).epsilon(1e-2));

    ConvexBody b2 = ConvexPolygon::box(0, 0, 1, 1);
    ConvexBody b3 = body;
    CHECK_THROWS_AS(hausdorff(b2, b3), Error);
    CHECK(contains_body(b3, b3, 1e-12));
}
