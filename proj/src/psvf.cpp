// psvf.cpp
// --------
// Lie derivatives via truncated Taylor jets, the switching-line sign cascade,
// and the convex-combination sliding field with its equilibrium search.

#include "sfreg/psvf.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <json.hpp>

#include "sfreg/jet.hpp"
#include "sfreg/polynomial.hpp"
#include "sfreg/roots.hpp"

namespace sfreg {

namespace {

VarSetPtr plane_vars() { return make_varset({"x", "y"}); }

// Bisects `value` (assumed continuous) on [a, b] with value(a), value(b) of
// opposite sign, until the interval is narrower than `tol`.
template <typename F>
double bisect_sign_change(const F& value, double a, double b, double va, double tol) {
    for (int it = 0; it < 200 && (b - a) > tol; ++it) {
        double m = 0.5 * (a + b);
        double vm = value(m);
        if (vm == 0.0) return m;
        if ((va < 0.0) != (vm < 0.0)) {
            b = m;
        } else {
            a = m;
            va = vm;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

const char* sigma_kind_name(SigmaKind kind) {
    switch (kind) {
        case SigmaKind::sewing: return "sewing";
        case SigmaKind::sliding: return "sliding";
        case SigmaKind::escaping: return "escaping";
        case SigmaKind::fold_visible_X: return "fold_visible_X";
        case SigmaKind::fold_invisible_X: return "fold_invisible_X";
        case SigmaKind::fold_visible_Y: return "fold_visible_Y";
        case SigmaKind::fold_invisible_Y: return "fold_invisible_Y";
        case SigmaKind::fold_fold: return "fold_fold";
        case SigmaKind::cusp_X: return "cusp_X";
        case SigmaKind::cusp_Y: return "cusp_Y";
        case SigmaKind::degenerate: return "degenerate";
    }
    return "degenerate";
}

PSVF make_psvf(const std::string& f1, const std::string& f2, const std::string& g1,
               const std::string& g2) {
    VarSetPtr vars = plane_vars();
    return PSVF{parse_expression(f1, vars), parse_expression(f2, vars),
                parse_expression(g1, vars), parse_expression(g2, vars), vars};
}

PSVF psvf_from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.byte, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("X") || !j.contains("Y"))
        throw ParseError(0, "piecewise-field JSON must be an object with \"X\" and \"Y\"");
    for (const char* side : {"X", "Y"}) {
        if (!j[side].is_array() || j[side].size() != 2 || !j[side][0].is_string() ||
            !j[side][1].is_string())
            throw ParseError(0, std::string("\"") + side +
                                    "\" must be an array of two expression strings");
    }

    std::vector<std::string> names = {"x", "y"};
    std::vector<Rational> param_values;
    if (j.contains("params")) {
        if (!j["params"].is_object())
            throw ParseError(0, "\"params\" must map parameter names to rational literals");
        for (const auto& [name, value] : j["params"].items()) {
            if (name == "x" || name == "y")
                throw ParseError(0, "parameter name '" + name + "' collides with a coordinate");
            names.push_back(name);
            if (value.is_string())
                param_values.push_back(Rational::parse(value.get<std::string>()));
            else if (value.is_number_integer())
                param_values.push_back(Rational(value.get<long>()));
            else
                throw ParseError(0, "parameter '" + name + "' must be a rational literal string");
        }
    }

    VarSetPtr wide = make_varset(names);
    VarSetPtr plane = plane_vars();
    auto load = [&](const std::string& text) {
        Expression e = parse_expression(text, wide);
        for (std::size_t k = 0; k < param_values.size(); ++k)
            e = substitute(e, static_cast<int>(2 + k), Expression::constant(param_values[k], wide));
        return remap(e, plane);
    };
    return PSVF{load(j["X"][0].get<std::string>()), load(j["X"][1].get<std::string>()),
                load(j["Y"][0].get<std::string>()), load(j["Y"][1].get<std::string>()), plane};
}

double lie_derivative(const PSVF& z, FieldSide which, int order, double y0) {
    if (order < 1 || order > 3)
        throw Error("Internal", "iterated Lie derivative order must be 1, 2 or 3");
    const Expression& c1 = (which == FieldSide::X) ? z.f1 : z.g1;
    const Expression& c2 = (which == FieldSide::X) ? z.f2 : z.g2;
    const std::array<double, 2> point = {0.0, y0};
    const std::array<int, 2> wrt = {0, 1};

    // With the monitor F = x, the first derivative is the first component;
    // each further application contracts the field against the gradient of
    // the previous scalar.  Every shift drops one valid jet order, so order-3
    // values are exact with order-3 jets of the components.
    Jet j1 = eval_jet(c1, point, wrt, 3);
    if (order == 1) return j1.value();
    Jet j2 = eval_jet(c2, point, wrt, 3);
    Jet level = j1;  // the scalar X^{k}F as a jet
    for (int k = 2; k <= order; ++k)
        level = j1 * level.deriv_shift(0) + j2 * level.deriv_shift(1);
    return level.value();
}

SigmaPointClass classify_sigma_point(const PSVF& z, double y0) {
    SigmaPointClass r;
    r.y0 = y0;
    r.xf = lie_derivative(z, FieldSide::X, 1, y0);
    r.yf = lie_derivative(z, FieldSide::Y, 1, y0);
    r.x2f = lie_derivative(z, FieldSide::X, 2, y0);
    r.y2f = lie_derivative(z, FieldSide::Y, 2, y0);
    r.x3f = lie_derivative(z, FieldSide::X, 3, y0);
    r.y3f = lie_derivative(z, FieldSide::Y, 3, y0);

    const bool x_zero = std::fabs(r.xf) <= kSignTol;
    const bool y_zero = std::fabs(r.yf) <= kSignTol;
    if (!x_zero && !y_zero) {
        if (r.xf * r.yf > kSignTol)
            r.kind = SigmaKind::sewing;
        else if (r.xf < -kSignTol && r.yf > kSignTol)
            r.kind = SigmaKind::sliding;
        else if (r.xf > kSignTol && r.yf < -kSignTol)
            r.kind = SigmaKind::escaping;
        else
            r.kind = SigmaKind::degenerate;
    } else if (x_zero && y_zero) {
        const bool both_definite = std::fabs(r.x2f) > kSignTol && std::fabs(r.y2f) > kSignTol;
        r.kind = both_definite ? SigmaKind::fold_fold : SigmaKind::degenerate;
    } else if (x_zero) {
        if (r.x2f > kSignTol)
            r.kind = SigmaKind::fold_visible_X;
        else if (r.x2f < -kSignTol)
            r.kind = SigmaKind::fold_invisible_X;
        else if (std::fabs(r.x3f) > kSignTol)
            r.kind = SigmaKind::cusp_X;
        else
            r.kind = SigmaKind::degenerate;
    } else {
        if (r.y2f < -kSignTol)
            r.kind = SigmaKind::fold_visible_Y;
        else if (r.y2f > kSignTol)
            r.kind = SigmaKind::fold_invisible_Y;
        else if (std::fabs(r.y3f) > kSignTol)
            r.kind = SigmaKind::cusp_Y;
        else
            r.kind = SigmaKind::degenerate;
    }
    return r;
}

SlidingField::SlidingField(Expression num, Expression den)
    : num_(std::move(num)), den_(std::move(den)) {}

bool SlidingField::in_domain(double y) const {
    const std::array<double, 2> point = {0.0, y};
    return std::fabs(eval_double(den_, point)) > kSignTol;
}

double SlidingField::eval(double y) const {
    const std::array<double, 2> point = {0.0, y};
    double den = eval_double(den_, point);
    if (std::fabs(den) <= kSignTol)
        throw OutsideDomain("sliding field undefined where the first components coincide");
    return eval_double(num_, point) / den;
}

SlidingField sliding_field(const PSVF& z) {
    return SlidingField(z.f2 * z.g1 - z.g2 * z.f1, z.g1 - z.f1);
}

std::vector<double> sliding_equilibria(const PSVF& z, double y_lo, double y_hi) {
    SlidingField s = sliding_field(z);
    std::vector<double> out;
    const double refine_tol = 1e-12;

    bool polynomial_route = true;
    try {
        Polynomial num = to_polynomial(s.numerator()).substituted(0, Rational(0));
        if (num.is_zero()) return out;  // every domain point is an equilibrium
        UniPoly u = to_unipoly(num, 1);
        if (u.degree() < 1) return out;  // nonzero constant: no roots
        std::vector<RealRoot> roots =
            isolate_roots(u, Rational::from_double(y_lo), Rational::from_double(y_hi),
                          /*include_lo=*/true, /*include_hi=*/true);
        for (const RealRoot& r : roots)
            if (s.in_domain(r.value)) out.push_back(r.value);
    } catch (const NotPolynomial&) {
        polynomial_route = false;
    }
    if (polynomial_route) return out;

    // Sampled fallback for non-polynomial numerators: sign changes of the
    // numerator between consecutive samples, refined by bisection, then
    // filtered by the domain predicate.
    const Expression& num_expr = s.numerator();
    auto value = [&](double y) {
        const std::array<double, 2> point = {0.0, y};
        return eval_double(num_expr, point);
    };
    const int n = 4096;
    double prev_y = y_lo;
    double prev_v = value(prev_y);
    for (int i = 1; i <= n; ++i) {
        double y = y_lo + (y_hi - y_lo) * static_cast<double>(i) / n;
        double v = value(y);
        if (prev_v == 0.0) {
            out.push_back(prev_y);
        } else if (v != 0.0 && (prev_v < 0.0) != (v < 0.0)) {
            out.push_back(bisect_sign_change(value, prev_y, y, prev_v, refine_tol));
        }
        prev_y = y;
        prev_v = v;
    }
    if (prev_v == 0.0) out.push_back(prev_y);

    std::erase_if(out, [&](double y) { return !s.in_domain(y); });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double a, double b) { return std::fabs(a - b) < 1e-9; }),
              out.end());
    return out;
}

}  // namespace sfreg
