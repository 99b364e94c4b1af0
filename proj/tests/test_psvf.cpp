// test_psvf.cpp
// -------------
// Lie-derivative witnesses, switching-line classification and the sliding
// field: closed-form checks, the sign cascade on canonical models, and the
// convex-combination invariant.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include "sfreg/psvf.hpp"

using namespace sfreg;

namespace {

// Reapplies the documented sign cascade to the stored witnesses; used to
// assert that every returned kind is recomputable from its own report.
SigmaKind reapply(const SigmaPointClass& c) {
    const double z = kSignTol;
    const bool x_zero = std::fabs(c.xf) <= z;
    const bool y_zero = std::fabs(c.yf) <= z;
    if (!x_zero && !y_zero) {
        if (c.xf * c.yf > z) return SigmaKind::sewing;
        if (c.xf < -z && c.yf > z) return SigmaKind::sliding;
        if (c.xf > z && c.yf < -z) return SigmaKind::escaping;
        return SigmaKind::degenerate;
    }
    if (x_zero && y_zero)
        return (std::fabs(c.x2f) > z && std::fabs(c.y2f) > z) ? SigmaKind::fold_fold
                                                              : SigmaKind::degenerate;
    if (x_zero) {
        if (c.x2f > z) return SigmaKind::fold_visible_X;
        if (c.x2f < -z) return SigmaKind::fold_invisible_X;
        return std::fabs(c.x3f) > z ? SigmaKind::cusp_X : SigmaKind::degenerate;
    }
    if (c.y2f < -z) return SigmaKind::fold_visible_Y;
    if (c.y2f > z) return SigmaKind::fold_invisible_Y;
    return std::fabs(c.y3f) > z ? SigmaKind::cusp_Y : SigmaKind::degenerate;
}

}  // namespace

TEST_CASE("iterated Lie derivatives against closed forms") {
    // X = (x^2 + x*y + y^3, x + 2):
    //   XF(0,y)   = y^3
    //   X2F(0,y)  = y^4 + 6y^2
    //   X3F(0,y)  = 2y^6 + 4y^5 + 10y^3 + 24y
    PSVF z = make_psvf("x^2 + x*y + y^3", "x + 2", "1", "0");
    for (double y : {-1.25, -0.5, 0.0, 0.5, 2.0}) {
        CAPTURE(y);
        CHECK(lie_derivative(z, FieldSide::X, 1, y) ==
              doctest::Approx(y * y * y).epsilon(1e-13));
        CHECK(lie_derivative(z, FieldSide::X, 2, y) ==
              doctest::Approx(std::pow(y, 4) + 6 * y * y).epsilon(1e-13));
        double l3 = 2 * std::pow(y, 6) + 4 * std::pow(y, 5) + 10 * y * y * y + 24 * y;
        CHECK(lie_derivative(z, FieldSide::X, 3, y) == doctest::Approx(l3).epsilon(1e-13));
    }
    CHECK(lie_derivative(z, FieldSide::X, 2, 0.5) == doctest::Approx(1.5625).epsilon(1e-14));
    CHECK(lie_derivative(z, FieldSide::X, 3, 0.5) == doctest::Approx(13.40625).epsilon(1e-14));
}

TEST_CASE("constant first component has constant first derivative") {
    PSVF z = make_psvf("1", "0", "2", "0");
    for (double y : {-3.0, 0.0, 0.7})
        CHECK(lie_derivative(z, FieldSide::X, 1, y) == doctest::Approx(1.0));
    CHECK(lie_derivative(z, FieldSide::Y, 1, 0.3) == doctest::Approx(2.0));
    CHECK(lie_derivative(z, FieldSide::X, 2, 0.3) == doctest::Approx(0.0));
}

TEST_CASE("cusp model witnesses") {
    // X = (-y^2, 1): XF = 0, X2F = 0, X3F = -2 at the origin.
    PSVF z = make_psvf("-y^2", "1", "1", "1");
    CHECK(lie_derivative(z, FieldSide::X, 1, 0.0) == doctest::Approx(0.0));
    CHECK(lie_derivative(z, FieldSide::X, 2, 0.0) == doctest::Approx(0.0));
    CHECK(lie_derivative(z, FieldSide::X, 3, 0.0) == doctest::Approx(-2.0).epsilon(1e-13));
    SigmaPointClass c = classify_sigma_point(z, 0.0);
    CHECK(c.kind == SigmaKind::cusp_X);
    CHECK(reapply(c) == c.kind);
}

TEST_CASE("double-tangency model witnesses and classification") {
    // X = (2y, 1), Y = (7y, 1): both first derivatives vanish at the origin,
    // X2F = 2 (visible side), Y2F = 7 (invisible side).
    PSVF z = make_psvf("2*y", "1", "7*y", "1");
    CHECK(lie_derivative(z, FieldSide::X, 1, 0.0) == doctest::Approx(0.0));
    CHECK(lie_derivative(z, FieldSide::X, 2, 0.0) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(lie_derivative(z, FieldSide::Y, 2, 0.0) == doctest::Approx(7.0).epsilon(1e-13));
    SigmaPointClass c = classify_sigma_point(z, 0.0);
    CHECK(c.kind == SigmaKind::fold_fold);
    CHECK(c.x2f == doctest::Approx(2.0));
    CHECK(c.y2f == doctest::Approx(7.0));
    // Where both first derivatives vanish the first components agree (they
    // are both zero), as the sliding-field domain boundary requires.
    CHECK(std::fabs(c.xf) <= kSignTol);
    CHECK(std::fabs(c.yf) <= kSignTol);
    CHECK(reapply(c) == c.kind);
    // Away from the origin both fields cross the line transversally.
    CHECK(classify_sigma_point(z, 0.4).kind == SigmaKind::sewing);
    CHECK(classify_sigma_point(z, -0.4).kind == SigmaKind::sewing);
}

TEST_CASE("region kinds on transversal models") {
    CHECK(classify_sigma_point(make_psvf("1", "0", "2", "0"), -1.0).kind == SigmaKind::sewing);
    CHECK(classify_sigma_point(make_psvf("1", "0", "2", "0"), 0.0).kind == SigmaKind::sewing);
    CHECK(classify_sigma_point(make_psvf("1", "0", "2", "0"), 3.0).kind == SigmaKind::sewing);
    CHECK(classify_sigma_point(make_psvf("-1", "0", "-3", "0"), 0.2).kind == SigmaKind::sewing);
    CHECK(classify_sigma_point(make_psvf("-1", "1", "1", "1"), 0.0).kind == SigmaKind::sliding);
    CHECK(classify_sigma_point(make_psvf("1", "0", "-1", "0"), 0.0).kind == SigmaKind::escaping);
}

TEST_CASE("single tangencies split by second-derivative sign") {
    CHECK(classify_sigma_point(make_psvf("y", "1", "1", "0"), 0.0).kind ==
          SigmaKind::fold_visible_X);
    CHECK(classify_sigma_point(make_psvf("-y", "1", "1", "0"), 0.0).kind ==
          SigmaKind::fold_invisible_X);
    CHECK(classify_sigma_point(make_psvf("1", "0", "-y", "1"), 0.0).kind ==
          SigmaKind::fold_visible_Y);
    CHECK(classify_sigma_point(make_psvf("1", "0", "y", "1"), 0.0).kind ==
          SigmaKind::fold_invisible_Y);
    // Cusp on the Y side: Y = (y^2, 1) has Y2F = 2y, Y3F = 2.
    CHECK(classify_sigma_point(make_psvf("1", "0", "y^2", "1"), 0.0).kind == SigmaKind::cusp_Y);
    // Beyond cusp order on the X side: X = (y^3, 1) has X3F(0,0) = 0.
    CHECK(classify_sigma_point(make_psvf("y^3", "1", "1", "1"), 0.0).kind ==
          SigmaKind::degenerate);
}

TEST_CASE("classification is recomputable from its witnesses") {
    const char* models[][4] = {
        {"1", "0", "2", "0"},     {"-1", "1", "1", "1"},   {"1", "0", "-1", "0"},
        {"y", "1", "1", "0"},     {"-y", "1", "1", "0"},   {"1", "0", "-y", "1"},
        {"-y^2", "1", "1", "1"},  {"2*y", "1", "7*y", "1"}, {"y^3", "1", "1", "1"},
        {"y^2+y", "1", "y-1", "x+1"},
    };
    for (const auto& m : models)
        for (double y : {-1.0, -0.3, 0.0, 0.5, 1.0}) {
            SigmaPointClass c = classify_sigma_point(make_psvf(m[0], m[1], m[2], m[3]), y);
            CAPTURE(m[0]);
            CAPTURE(y);
            CHECK(reapply(c) == c.kind);
        }
}

TEST_CASE("sliding field of the linear pseudo-equilibrium model is y") {
    PSVF z = make_psvf("-1", "y", "1", "y");
    SlidingField s = sliding_field(z);
    for (double y : {-0.3, 0.0, 1.7}) {
        CHECK(s.in_domain(y));
        CHECK(s.eval(y) == doctest::Approx(y).epsilon(1e-13));
    }
    auto eq = sliding_equilibria(z, -1.0, 1.0);
    REQUIRE(eq.size() == 1);
    CHECK(std::fabs(eq[0]) < 1e-10);
}

TEST_CASE("sliding field of the cusp model is identically one") {
    PSVF z = make_psvf("-y^2", "1", "1", "1");
    SlidingField s = sliding_field(z);
    CHECK(s.eval(1.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(s.eval(-0.7) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(sliding_equilibria(z, -1.0, 1.0).empty());
}

TEST_CASE("identical sides leave the sliding field undefined everywhere") {
    PSVF z = make_psvf("x+1", "y", "x+1", "y");
    SlidingField s = sliding_field(z);
    for (double y : {-2.0, 0.0, 0.9}) {
        CHECK_FALSE(s.in_domain(y));
        CHECK_THROWS_AS((void)s.eval(y), OutsideDomain);
    }
}

TEST_CASE("sliding field equals the convex-combination solve") {
    PSVF z = make_psvf("-y^2 - 1", "x + y", "y^2 + 2", "1 - y");
    SlidingField s = sliding_field(z);
    for (int i = -8; i <= 8; ++i) {
        double y = 0.25 * i;
        REQUIRE(s.in_domain(y));
        // Solve ((1+s)/2) f1 + ((1-s)/2) g1 = 0 and substitute the blend into
        // the second components.
        double f1 = -y * y - 1, g1 = y * y + 2;
        double f2 = y, g2 = 1 - y;
        double blend = (f1 + g1) / (g1 - f1);
        double combo = 0.5 * (1 + blend) * f2 + 0.5 * (1 - blend) * g2;
        double got = s.eval(y);
        CAPTURE(y);
        CHECK(std::fabs(got - combo) <= 1e-9 * std::max(1.0, std::fabs(combo)));
    }
}

TEST_CASE("equilibria outside the domain are filtered") {
    // Numerator root at y = 0 coincides with the domain boundary (g1 = f1).
    PSVF z = make_psvf("y", "1", "3*y", "1");
    CHECK(sliding_equilibria(z, -1.0, 1.0).empty());
    // Identical first components: domain empty, no equilibria at all.
    PSVF w = make_psvf("y", "1", "y", "2");
    CHECK(sliding_equilibria(w, -1.0, 1.0).empty());
}

TEST_CASE("sampled fallback finds non-polynomial equilibria") {
    // Numerator 2 - exp(y) vanishes at ln 2; the denominator is 1 there.
    PSVF z = make_psvf("exp(y) - 2", "0", "1", "1");
    auto eq = sliding_equilibria(z, 0.0, 1.0);
    REQUIRE(eq.size() == 1);
    CHECK(std::fabs(eq[0] - std::log(2.0)) < 1e-10);
}

TEST_CASE("piecewise-field JSON loading substitutes parameters") {
    PSVF z = psvf_from_json(R"({"X":["-y^2 + L","1"],"Y":["1","1"],"params":{"L":"0"}})");
    CHECK(classify_sigma_point(z, 0.0).kind == SigmaKind::cusp_X);
    CHECK(classify_sigma_point(z, 0.0).x3f == doctest::Approx(-2.0));

    PSVF zp = psvf_from_json(R"({"X":["-y^2 + L","1"],"Y":["1","1"],"params":{"L":"1/10"}})");
    SigmaPointClass c = classify_sigma_point(zp, 0.0);
    CHECK(c.xf == doctest::Approx(0.1));
    CHECK(c.kind == SigmaKind::sewing);

    PSVF zi = psvf_from_json(R"({"X":["y + L","1"],"Y":["1","1"],"params":{"L":2}})");
    CHECK(lie_derivative(zi, FieldSide::X, 1, 0.0) == doctest::Approx(2.0));
}

TEST_CASE("piecewise-field JSON rejects malformed input") {
    CHECK_THROWS_AS((void)psvf_from_json("{"), ParseError);
    CHECK_THROWS_AS((void)psvf_from_json(R"({"X":["1"],"Y":["1","1"]})"), ParseError);
    CHECK_THROWS_AS((void)psvf_from_json(R"({"X":["q","1"],"Y":["1","1"]})"), UnknownVariable);
    CHECK_THROWS_AS(
        (void)psvf_from_json(R"({"X":["1","1"],"Y":["1","1"],"params":{"x":"1"}})"), ParseError);
}
