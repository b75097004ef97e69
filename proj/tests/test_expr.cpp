#include <doctest.h>

#include <cmath>

#include "hamrep/errors.hpp"
#include "hamrep/expr.hpp"

using namespace hamrep;

TEST_CASE("expression evaluation") {
    const std::vector<std::string> v{"t", "x", "p"};
    CHECK(Expr::parse("1 + 2 * 3", v)({0, 0, 0}) == 7.0);
    CHECK(Expr::parse("-x^2", v)({0, 3, 0}) == -9.0);
    CHECK(Expr::parse("2^-1", v)({0, 0, 0}) == 0.5);
    CHECK(Expr::parse("2^3^2", v)({0, 0, 0}) == 512.0);
    CHECK(Expr::parse("(1+t)*p^2/2 + abs(x)", v)({0.5, -2, 2}) == doctest::Approx(5.0));
    CHECK(Expr::parse("sqrt(1 + p^2) + abs(x)", v)({0, 0, 1}) == doctest::Approx(std::sqrt(2.0)));
    CHECK(Expr::parse("max(abs(p) - 1, 0, x)", v)({0, -1, 3}) == 2.0);
    CHECK(Expr::parse("min(p, x)", v)({0, -1, 3}) == -1.0);
    CHECK(Expr::parse("abs(ln(t)) * abs(x) * abs(p)", v)({0.5, 2, 1}) == doctest::Approx(2 * std::log(2.0)));
    CHECK(Expr::parse("x < 0 && p >= 1", v)({0, -1, 1}) == 1.0);
    CHECK(Expr::parse("x < 0 || p != 1", v)({0, 1, 1}) == 0.0);
    CHECK(Expr::parse("1e-3 + .5", v)({0, 0, 0}) == doctest::Approx(0.501));
    CHECK(Expr::parse("cos(pi)", v)({0, 0, 0}) == doctest::Approx(-1.0));
}

TEST_CASE("expression errors") {
    const std::vector<std::string> v{"t", "x", "p"};
    for (const char* bad : {"1 +", "y", "foo(1)", "max(1)", "abs(1, 2)", "(1", "1 2", "", "3 $ 4"}) {
        CAPTURE(bad);
        try {
            Expr::parse(bad, v);
            FAIL("accepted");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ConfigError);
        }
    }
}

TEST_CASE("piecewise definitions") {
    PiecewiseExpr f({{"x < 0", "-x"}, {"", "x^2"}}, {"x"});
    CHECK(f({-2.0}) == 2.0);
    CHECK(f({3.0}) == 9.0);
    PiecewiseExpr g({{"x < 0", "1"}}, {"x"});
    CHECK_THROWS_AS(g({1.0}), Error);
}
