// regularize.cpp
// --------------
// Linear and family-based smoothing of piecewise fields and their exact
// directional rescaling into slow-fast systems.

#include "sfreg/regularize.hpp"

#include <cmath>
#include <utility>

#include <json.hpp>

#include "sfreg/polynomial.hpp"

namespace sfreg {

namespace {

VarSetPtr family_vars() { return make_varset({"lam", "x", "y"}); }
VarSetPtr chart_vars() { return make_varset({"x", "y", "eps"}); }

Expression half_blend(const Expression& lam, bool plus, const VarSetPtr& vars) {
    Expression one = Expression::constant(Rational(1), vars);
    Expression half = Expression::constant(Rational(1, 2), vars);
    return (plus ? (one + lam) : (one - lam)) * half;
}

}  // namespace

NonlinearFamily make_family(const std::string& z1, const std::string& z2) {
    VarSetPtr vars = family_vars();
    return NonlinearFamily{parse_expression(z1, vars), parse_expression(z2, vars), vars,
                           std::nullopt};
}

NonlinearFamily family_from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.byte, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("Ztilde") || !j.contains("vars"))
        throw ParseError(0, "family JSON must be an object with \"Ztilde\" and \"vars\"");
    if (!j["Ztilde"].is_array() || j["Ztilde"].size() != 2)
        throw ParseError(0, "\"Ztilde\" must be an array of two expression strings");
    if (!j["vars"].is_array() || j["vars"].size() != 3)
        throw ParseError(0, "\"vars\" must list the blend variable and two coordinates");

    std::vector<std::string> names;
    for (const auto& v : j["vars"]) {
        if (!v.is_string()) throw ParseError(0, "\"vars\" entries must be strings");
        names.push_back(v.get<std::string>());
    }
    VarSetPtr user = make_varset(names);
    VarSetPtr canon = family_vars();
    // Variables are positional (vars[0] = blend); rebinding the parsed tree
    // over the canonical names keeps the indices and drops the aliases.
    auto load = [&](const std::string& text) {
        Expression e = parse_expression(text, user);
        return Expression(e.root(), canon);
    };
    NonlinearFamily fam{load(j["Ztilde"][0].get<std::string>()),
                        load(j["Ztilde"][1].get<std::string>()), canon, std::nullopt};

    if (j.contains("X") || j.contains("Y")) {
        if (!j.contains("X") || !j.contains("Y"))
            throw ParseError(0, "endpoint declaration needs both \"X\" and \"Y\"");
        for (const char* side : {"X", "Y"}) {
            if (!j[side].is_array() || j[side].size() != 2)
                throw ParseError(0, std::string("\"") + side +
                                        "\" must be an array of two expression strings");
        }
        VarSetPtr plane = make_varset({names[1], names[2]});
        VarSetPtr canon_plane = make_varset({"x", "y"});
        auto side = [&](const nlohmann::json& arr, int i) {
            Expression e = parse_expression(arr[i].get<std::string>(), plane);
            return Expression(e.root(), canon_plane);
        };
        fam.endpoints = PSVF{side(j["X"], 0), side(j["X"], 1), side(j["Y"], 0), side(j["Y"], 1),
                             canon_plane};
        validate_family(fam);
    }
    return fam;
}

NonlinearFamily linear_embedding(const PSVF& z) {
    VarSetPtr vars = family_vars();
    Expression lam = Expression::variable(0, vars);
    Expression a = half_blend(lam, true, vars);
    Expression b = half_blend(lam, false, vars);
    auto lift = [&](const Expression& e) { return remap(e, vars); };
    return NonlinearFamily{a * lift(z.f1) + b * lift(z.g1), a * lift(z.f2) + b * lift(z.g2),
                           vars, z};
}

PSVF family_endpoints(const NonlinearFamily& fam) {
    VarSetPtr plane = make_varset({"x", "y"});
    auto at = [&](const Expression& e, int lam) {
        Expression fixed =
            substitute(e, 0, Expression::constant(Rational(lam), fam.vars));
        return remap(fixed, plane);
    };
    return PSVF{at(fam.z1, 1), at(fam.z2, 1), at(fam.z1, -1), at(fam.z2, -1), plane};
}

void validate_family(const NonlinearFamily& fam) {
    if (!fam.endpoints) return;
    const PSVF& ends = *fam.endpoints;
    const int n = 20;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double x = -1.0 + 2.0 * i / (n - 1);
            double y = -1.0 + 2.0 * j / (n - 1);
            const std::array<double, 2> plane = {x, y};
            const std::array<double, 3> top = {1.0, x, y};
            const std::array<double, 3> bottom = {-1.0, x, y};
            const double checks[4][2] = {
                {eval_double(fam.z1, top), eval_double(ends.f1, plane)},
                {eval_double(fam.z2, top), eval_double(ends.f2, plane)},
                {eval_double(fam.z1, bottom), eval_double(ends.g1, plane)},
                {eval_double(fam.z2, bottom), eval_double(ends.g2, plane)},
            };
            for (const auto& c : checks)
                if (std::fabs(c[0] - c[1]) > 1e-9)
                    throw FamilyEndpointMismatch(
                        "family endpoint differs from the declared side at (" +
                        std::to_string(x) + ", " + std::to_string(y) + "): " +
                        std::to_string(c[0]) + " vs " + std::to_string(c[1]));
        }
    }
}

RegularizedField::RegularizedField(Mode mode, PSVF sides, std::optional<NonlinearFamily> fam,
                                   TransitionFunction tf, double eps)
    : mode_(mode), sides_(std::move(sides)), fam_(std::move(fam)), tf_(std::move(tf)),
      eps_(eps) {}

std::array<double, 2> RegularizedField::eval(double x, double y) const {
    const std::array<double, 2> point = {x, y};
    // Exact tails: outside the layer the original sides are evaluated as-is.
    if (x >= eps_)
        return {eval_double(sides_.f1, point), eval_double(sides_.f2, point)};
    if (x <= -eps_)
        return {eval_double(sides_.g1, point), eval_double(sides_.g2, point)};

    double lam = tf_.eval(x / eps_);
    if (mode_ == Mode::nonlinear) {
        const std::array<double, 3> blend = {lam, x, y};
        return {eval_double(fam_->z1, blend), eval_double(fam_->z2, blend)};
    }
    double a = 0.5 * (1.0 + lam);
    double b = 0.5 * (1.0 - lam);
    return {a * eval_double(sides_.f1, point) + b * eval_double(sides_.g1, point),
            a * eval_double(sides_.f2, point) + b * eval_double(sides_.g2, point)};
}

RegularizedField linear_regularize(const PSVF& z, const TransitionFunction& tf, double eps) {
    if (!(eps > 0.0)) throw OutsideDomain("smoothing requires a positive layer width");
    return RegularizedField(RegularizedField::Mode::linear, z, std::nullopt, tf, eps);
}

RegularizedField nonlinear_regularize(const NonlinearFamily& fam, const TransitionFunction& tf,
                                      double eps) {
    if (!(eps > 0.0)) throw OutsideDomain("smoothing requires a positive layer width");
    validate_family(fam);
    // Tails evaluate the declared sides when present (identical bits with the
    // user's own fields), the lam = +-1 sections otherwise.
    PSVF sides = fam.endpoints ? *fam.endpoints : family_endpoints(fam);
    return RegularizedField(RegularizedField::Mode::nonlinear, std::move(sides), fam, tf, eps);
}

SlowFastSystem blowup_linear(const PSVF& z, const TransitionFunction& tf) {
    VarSetPtr v3 = chart_vars();
    const Rational half(1, 2);
    try {
        // Exact route: expand everything as polynomials over {x, y, eps}.
        Polynomial scale = Polynomial::variable(v3, 0) * Polynomial::variable(v3, 2);
        auto lift = [&](const Expression& e) {
            return to_polynomial(e).embedded(v3).substituted(0, scale);
        };
        Polynomial f1 = lift(z.f1), f2 = lift(z.f2), g1 = lift(z.g1), g2 = lift(z.g2);
        Polynomial phi = tf.interior_polynomial(v3, 0);
        Polynomial f = (f1 + g1).scaled(half) + phi * (f1 - g1).scaled(half);
        Polynomial g = (f2 + g2).scaled(half) + phi * (f2 - g2).scaled(half);
        return SlowFastSystem{f.to_expression(), g.to_expression(), v3};
    } catch (const NotPolynomial&) {
        Expression scale = Expression::variable(0, v3) * Expression::variable(2, v3);
        auto lift = [&](const Expression& e) { return substitute(remap(e, v3), 0, scale); };
        Expression f1 = lift(z.f1), f2 = lift(z.f2), g1 = lift(z.g1), g2 = lift(z.g2);
        Expression phi = tf.interior_polynomial(v3, 0).to_expression();
        Expression h = Expression::constant(half, v3);
        return SlowFastSystem{(f1 + g1) * h + phi * ((f1 - g1) * h),
                              (f2 + g2) * h + phi * ((f2 - g2) * h), v3};
    }
}

SlowFastSystem blowup_nonlinear(const NonlinearFamily& fam, const TransitionFunction& tf) {
    validate_family(fam);
    VarSetPtr v3 = chart_vars();
    VarSetPtr ext = make_varset({"lam", "x", "y", "eps"});
    try {
        auto compose = [&](const Expression& e) {
            Polynomial p = to_polynomial(e).embedded(ext);
            // First rescale the plane coordinate, then splice phi into the
            // blend slot (whose x must stay unscaled).
            p = p.substituted(1, Polynomial::variable(ext, 1) * Polynomial::variable(ext, 3));
            p = p.substituted(0, tf.interior_polynomial(ext, 1));
            return p.embedded(v3).to_expression();
        };
        return SlowFastSystem{compose(fam.z1), compose(fam.z2), v3};
    } catch (const NotPolynomial&) {
        Expression scale = Expression::variable(1, ext) * Expression::variable(3, ext);
        Expression phi = tf.interior_polynomial(ext, 1).to_expression();
        auto compose = [&](const Expression& e) {
            Expression lifted = remap(e, ext);
            lifted = substitute(lifted, 1, scale);
            lifted = substitute(lifted, 0, phi);
            return remap(lifted, v3);
        };
        return SlowFastSystem{compose(fam.z1), compose(fam.z2), v3};
    }
}

}  // namespace sfreg
