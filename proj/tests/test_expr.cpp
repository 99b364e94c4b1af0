// test_expr.cpp
// -------------
// Expression parsing, printing, evaluation, jets and polynomial conversion.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "sfreg/expr.hpp"
#include "sfreg/jet.hpp"
#include "sfreg/polynomial.hpp"

using namespace sfreg;

namespace {

VarSetPtr xy() { return make_varset({"x", "y"}); }

Expression parse_xy(const std::string& s) { return parse_expression(s, xy()); }

double eval_at(const Expression& e, double x, double y) {
    std::array<double, 2> pt{x, y};
    return eval_double(e, pt);
}

}  // namespace

TEST_CASE("rational literals parse and print") {
    CHECK(Rational::parse("3/4").str() == "3/4");
    CHECK(Rational::parse("-6/8").str() == "-3/4");
    CHECK(Rational::parse(" 12 ").str() == "12");
    CHECK(Rational::parse("+5").str() == "5");
    CHECK(Rational(1, -2).str() == "-1/2");
    CHECK_THROWS_AS(Rational::parse("1/0"), EvaluationSingular);
    CHECK_THROWS_AS(Rational::parse("a"), ParseError);
    CHECK_THROWS_AS(Rational::parse("1/-2"), ParseError);
    CHECK_THROWS_AS(Rational::parse(""), ParseError);
}

TEST_CASE("rational arithmetic is exact") {
    Rational a(1, 3), b(1, 6);
    CHECK((a + b).str() == "1/2");
    CHECK((a - b).str() == "1/6");
    CHECK((a * b).str() == "1/18");
    CHECK((a / b).str() == "2");
    CHECK(Rational(-3, 7).abs().str() == "3/7");
    CHECK(Rational(2, 3).pow(3).str() == "8/27");
    CHECK_THROWS_AS(Rational(1) / Rational(0), EvaluationSingular);
}

TEST_CASE("parse/print round trip is structural") {
    const char* samples[] = {
        "x",
        "-x",
        "x + y",
        "x - y",
        "-x + y",
        "x*y",
        "x^2*(x - 1)^2*(3*x + 4)",
        "1/2*x + 3/4",
        "(x + y)^3",
        "x/(2*y)",
        "a_long_name0 - 7",  // needs its own variable set below
        "x*y/3 - 2*x/7 + 1/5",
        "exp(x*y) - exp(-y)",
        "-(x + y)",
        "-(x*y)",
        "x^2/(1 - x)^2",
        "2 - -3",
        "x - (y - x)",
        "x/y/2",
        "x*(3/4)*y",
        "(x + 1)/(y - 1)",
    };
    auto vars = make_varset({"x", "y", "a_long_name0"});
    for (const char* s : samples) {
        CAPTURE(s);
        Expression e = parse_expression(s, vars);
        std::string printed = to_string(e);
        CAPTURE(printed);
        Expression e2 = parse_expression(printed, vars);
        CHECK(structurally_equal(e, e2));
        // Printing must be a fixed point after one round.
        CHECK(to_string(e2) == printed);
    }
}

TEST_CASE("leading negative products survive the round trip") {
    // A leading unary minus binds to a single factor, so the printer has to
    // parenthesize compound operands after a leading '-'.
    auto vars = xy();
    Expression x = Expression::variable(0, vars);
    Expression y = Expression::variable(1, vars);
    Expression c = Expression::constant(Rational(3, 2), vars);
    Expression e = -(c * x);
    std::string printed = to_string(e);
    Expression back = parse_expression(printed, vars);
    CHECK(structurally_equal(e, back));

    Expression sum = e + y;  // negative product in leading position of a sum
    printed = to_string(sum);
    back = parse_expression(printed, vars);
    CHECK(structurally_equal(sum, back));
}

TEST_CASE("parse errors carry byte offsets") {
    try {
        parse_xy("x + @y");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 4);
    }
    try {
        parse_xy("x + zq*2");
        FAIL("expected UnknownVariable");
    } catch (const UnknownVariable& e) {
        CHECK(e.offset() == 4);
        CHECK(e.kind() == "UnknownVariable");
    }
    CHECK_THROWS_AS(parse_xy("1.5*x"), ParseError);
    CHECK_THROWS_AS(parse_xy("x +"), ParseError);
    CHECK_THROWS_AS(parse_xy("(x"), ParseError);
    CHECK_THROWS_AS(parse_xy("x y"), ParseError);
    CHECK_THROWS_AS(parse_xy(""), ParseError);
}

TEST_CASE("floating evaluation") {
    Expression e = parse_xy("(x + y)^3/(1 - x)");
    CHECK(eval_at(e, 0.5, 2.0) == doctest::Approx(31.25).epsilon(1e-14));
    CHECK_THROWS_AS(eval_at(parse_xy("1/(x - 1)"), 1.0, 0.0), EvaluationSingular);
    CHECK(eval_at(parse_xy("exp(x) - 1"), 0.0, 0.0) == doctest::Approx(0.0));
    CHECK(eval_at(parse_xy("x^-2"), 2.0, 0.0) == doctest::Approx(0.25));
}

TEST_CASE("exact rational evaluation") {
    auto vars = make_varset({"L"});
    Expression e = parse_expression("(1 + L)/(1 - L)", vars);
    std::array<Rational, 1> pt{Rational(1, 3)};
    CHECK(exact_eval(e, pt) == Rational(2));
    std::array<Rational, 1> bad{Rational(1)};
    CHECK_THROWS_AS(exact_eval(e, bad), EvaluationSingular);
    Expression ex = parse_expression("exp(L)", vars);
    CHECK_THROWS_AS(exact_eval(ex, pt), NotPolynomial);
}

TEST_CASE("substitute and remap") {
    auto v3 = make_varset({"x", "y", "e"});
    Expression f = parse_expression("x^2 + y", xy());
    Expression f3 = remap(f, v3);
    Expression ex = Expression::variable(0, v3) * Expression::variable(2, v3);
    Expression g = substitute(f3, 0, ex);  // x -> e*x
    Polynomial p = to_polynomial(g);
    Polynomial expected = to_polynomial(parse_expression("e^2*x^2 + y", v3));
    CHECK(p == expected);

    // Remap with a used variable missing from the target must fail.
    CHECK_THROWS_AS(remap(parse_expression("x + e", v3), xy()), UnknownVariable);
    // Unused variables may be dropped.
    Expression back = remap(f3, xy());
    CHECK(structurally_equal(back, f));
}

TEST_CASE("polynomial conversion and identities") {
    Expression zero = parse_xy("(x + y)^2 - x^2 - 2*x*y - y^2");
    CHECK(to_polynomial(zero).is_zero());
    CHECK_THROWS_AS(to_polynomial(parse_xy("1/x")), NotPolynomial);
    CHECK_THROWS_AS(to_polynomial(parse_xy("exp(x)")), NotPolynomial);
    Polynomial p = to_polynomial(parse_xy("x*y/3 - 2*x/7"));
    CHECK(p.degree_in(0) == 1);
    CHECK(p.total_degree() == 2);

    // Expression -> polynomial -> expression -> polynomial is the identity.
    Polynomial p2 = to_polynomial(p.to_expression());
    CHECK(p == p2);
}

TEST_CASE("polynomial substitution and embedding") {
    auto vars = xy();
    Polynomial p = to_polynomial(parse_xy("x^2*y"));
    Polynomial shifted = p.substituted(0, to_polynomial(parse_xy("x + 1")));
    CHECK(shifted == to_polynomial(parse_xy("x^2*y + 2*x*y + y")));

    auto v3 = make_varset({"x", "y", "e"});
    Polynomial q = p.embedded(v3);
    CHECK(q.degree_in(2) == 0);
    std::array<Rational, 3> pt{Rational(2), Rational(3), Rational(7)};
    CHECK(q.eval_exact(pt) == Rational(12));
}

TEST_CASE("jets reproduce exact polynomial derivatives") {
    std::mt19937_64 rng(20240817u);
    std::uniform_int_distribution<int> coeff(-4, 4);
    auto vars = xy();
    for (int trial = 0; trial < 50; ++trial) {
        // Random dense polynomial of total degree <= 3.
        Polynomial p = Polynomial::zero(vars);
        for (unsigned i = 0; i <= 3; ++i)
            for (unsigned j = 0; i + j <= 3; ++j)
                p.add_term({i, j}, Rational(coeff(rng)));
        Expression e = p.to_expression();
        std::uniform_real_distribution<double> pos(-1.5, 1.5);
        std::array<double, 2> pt{pos(rng), pos(rng)};
        std::array<int, 2> wrt{0, 1};
        Jet jet = eval_jet(e, pt, wrt, 3);
        for (int a = 0; a <= 3; ++a) {
            for (int b = 0; a + b <= 3; ++b) {
                Polynomial d = p;
                for (int k = 0; k < a; ++k) d = d.derivative(0);
                for (int k = 0; k < b; ++k) d = d.derivative(1);
                double expect = d.eval_double(pt);
                std::array<int, 2> alpha{a, b};
                double got = jet.derivative(alpha);
                CAPTURE(trial);
                CAPTURE(a);
                CAPTURE(b);
                CHECK(got == doctest::Approx(expect).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("jets of quotients and exponentials match closed forms") {
    // h(x, y) = exp(x*y)/(1 + x).
    Expression h = parse_xy("exp(x*y)/(1 + x)");
    const double x = 0.3, y = -0.7;
    std::array<double, 2> pt{x, y};
    std::array<int, 2> wrt{0, 1};
    Jet j = eval_jet(h, pt, wrt, 2);
    const double E = std::exp(x * y);
    const double u = 1.0 + x;
    CHECK(j.value() == doctest::Approx(E / u).epsilon(1e-12));
    CHECK(j.derivative({1, 0}) ==
          doctest::Approx(E * y / u - E / (u * u)).epsilon(1e-12));
    CHECK(j.derivative({0, 1}) == doctest::Approx(E * x / u).epsilon(1e-12));
    CHECK(j.derivative({0, 2}) == doctest::Approx(E * x * x / u).epsilon(1e-12));
    // d2/dxdy: E*(1 + xy)/u - E*x/u^2.
    CHECK(j.derivative({1, 1}) ==
          doctest::Approx(E * (1.0 + x * y) / u - E * x / (u * u)).epsilon(1e-12));

    CHECK_THROWS_AS(eval_jet(parse_xy("1/x"), std::array<double, 2>{0.0, 1.0}, wrt, 2),
                    EvaluationSingular);
}

TEST_CASE("jet seeds respect the wrt subset") {
    // Partial jet: differentiate in y only, x enters as a constant.
    Expression h = parse_xy("x^2*y + y^3");
    std::array<double, 2> pt{2.0, 0.5};
    std::array<int, 1> wrt{1};
    Jet j = eval_jet(h, pt, wrt, 3);
    CHECK(j.value() == doctest::Approx(2.125));
    CHECK(j.derivative({1}) == doctest::Approx(4.0 + 0.75));
    CHECK(j.derivative({2}) == doctest::Approx(3.0));
    CHECK(j.derivative({3}) == doctest::Approx(6.0));
}
