// test_roots.cpp
// --------------
// Exact univariate arithmetic, square-free decomposition and certified root
// isolation.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sfreg/roots.hpp"

using namespace sfreg;

namespace {

UniPoly poly(std::initializer_list<long> ascending) {
    std::vector<Rational> c;
    for (long v : ascending) c.emplace_back(v);
    return UniPoly(std::move(c));
}

}  // namespace

TEST_CASE("divrem and deflation are exact") {
    // (t - 1)^2 (t + 2) = t^3 - 3t + 2.
    UniPoly p = poly({2, -3, 0, 1});
    auto [q, r] = p.divrem(poly({-1, 1}));  // divide by t - 1
    CHECK(r.is_zero());
    CHECK(q == poly({-2, 1, 1}));
    CHECK(p.deflated(Rational(1)) == poly({-2, 1, 1}));
    CHECK_THROWS((void)p.deflated(Rational(5)));
}

TEST_CASE("square-free decomposition separates multiplicities") {
    // (t - 1)^2 (t + 2).
    UniPoly p = poly({2, -3, 0, 1});
    auto factors = squarefree_decomposition(p);
    REQUIRE(factors.size() == 2);
    CHECK(factors[0] == poly({2, 1}).monic());   // t + 2, multiplicity 1
    CHECK(factors[1] == poly({-1, 1}).monic());  // t - 1, multiplicity 2
    CHECK_THROWS_AS(squarefree_decomposition(UniPoly{}), IdenticallyZero);
}

TEST_CASE("root isolation finds roots with multiplicities") {
    UniPoly p = poly({2, -3, 0, 1});  // roots: -2 (simple), 1 (double)
    auto roots = isolate_roots(p, Rational(-5), Rational(5), true, true);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].value == doctest::Approx(-2.0).epsilon(1e-11));
    CHECK(roots[0].multiplicity == 1);
    CHECK(roots[1].value == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(roots[1].multiplicity == 2);
}

TEST_CASE("triple roots at non-dyadic rationals") {
    // (3t - 1)^3 (2t + 1) has a triple root at 1/3 and a simple one at -1/2.
    UniPoly p = poly({-1, 3}).scaled(Rational(1, 3));  // t - 1/3
    UniPoly f = p * p * p * poly({1, 2});
    auto roots = isolate_roots(f, Rational(-1), Rational(1), false, false);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].value == doctest::Approx(-0.5).epsilon(1e-11));
    CHECK(roots[0].multiplicity == 1);
    CHECK(std::fabs(roots[1].value - 1.0 / 3.0) < 1e-12);
    CHECK(roots[1].multiplicity == 3);
    CHECK((roots[1].enclosure_hi - roots[1].enclosure_lo) <= Rational(1, 1000000000000L));
}

TEST_CASE("endpoint roots respect the inclusion flags") {
    UniPoly p = poly({0, -1, 1});  // t(t - 1)
    auto closed = isolate_roots(p, Rational(0), Rational(1), true, true);
    CHECK(closed.size() == 2);
    CHECK(closed[0].exact);
    CHECK(closed[0].rational == Rational(0));
    CHECK(closed[1].exact);
    CHECK(closed[1].rational == Rational(1));
    auto open = isolate_roots(p, Rational(0), Rational(1), false, false);
    CHECK(open.empty());
}

TEST_CASE("clustered roots are separated") {
    // Roots at 1/100, 2/100, 3/100 -- closer than the initial midpoints.
    UniPoly f = poly({-1, 100}) * poly({-2, 100}) * poly({-3, 100});
    auto roots = isolate_roots(f, Rational(-1), Rational(1), false, false);
    REQUIRE(roots.size() == 3);
    CHECK(std::fabs(roots[0].value - 0.01) < 1e-12);
    CHECK(std::fabs(roots[1].value - 0.02) < 1e-12);
    CHECK(std::fabs(roots[2].value - 0.03) < 1e-12);
}

TEST_CASE("exact dyadic roots are certified exactly") {
    // Roots at 1/8 and 3/8; bisection midpoints land on them.
    UniPoly f = poly({-1, 8}) * poly({-3, 8});
    auto roots = isolate_roots(f, Rational(-1), Rational(1), false, false);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].exact);
    CHECK(roots[0].rational == Rational(1, 8));
    CHECK(roots[1].exact);
    CHECK(roots[1].rational == Rational(3, 8));
}

TEST_CASE("no roots in the window") {
    UniPoly f = poly({1, 0, 1});  // t^2 + 1
    CHECK(isolate_roots(f, Rational(-10), Rational(10), true, true).empty());
}

TEST_CASE("constant and zero polynomials") {
    CHECK(isolate_roots(poly({5}), Rational(-1), Rational(1), true, true).empty());
    CHECK_THROWS_AS(isolate_roots(UniPoly{}, Rational(-1), Rational(1), true, true),
                    IdenticallyZero);
}
