// psvf.hpp
// --------
// Planar piecewise-smooth vector fields switching on the vertical line
// {x = 0}: Z = (X, Y) applies X = (f1, f2) for x > 0 and Y = (g1, g2) for
// x < 0, with the monitor function fixed to F(x, y) = x.  This module
// computes iterated Lie derivatives of the monitor, classifies points of the
// switching line (crossing, sliding, escaping, tangencies up to cusp order),
// and builds the classical convex-combination sliding field on the line.

#pragma once

#include <string>
#include <vector>

#include "sfreg/expr.hpp"

namespace sfreg {

enum class FieldSide { X, Y };

// Mutually exclusive switching-line point kinds.  Tangency visibility uses
// the second Lie derivative: an X-fold is visible when X^2F > 0 and a Y-fold
// is visible when Y^2F < 0 (the orbit of the tangent field stays on its own
// side of the line in both cases).
enum class SigmaKind {
    sewing,
    sliding,
    escaping,
    fold_visible_X,
    fold_invisible_X,
    fold_visible_Y,
    fold_invisible_Y,
    fold_fold,
    cusp_X,
    cusp_Y,
    degenerate,
};

const char* sigma_kind_name(SigmaKind kind);

// Classification of the point (0, y0) together with the Lie-derivative
// witnesses it was decided on, so callers can re-derive the verdict.
struct SigmaPointClass {
    double y0 = 0.0;
    SigmaKind kind = SigmaKind::degenerate;
    double xf = 0.0;   // XF   = f1(0, y0)
    double yf = 0.0;   // YF   = g1(0, y0)
    double x2f = 0.0;  // X^2F = (X . grad XF)(0, y0)
    double y2f = 0.0;  // Y^2F
    double x3f = 0.0;  // X^3F = (X . grad X^2F)(0, y0)
    double y3f = 0.0;  // Y^3F
};

struct PSVF {
    Expression f1, f2;  // X components (right side, x > 0)
    Expression g1, g2;  // Y components (left side, x < 0)
    VarSetPtr vars;     // shared ordered variables {x, y}
};

// Builds a PSVF by parsing the four component expressions over {x, y}.
PSVF make_psvf(const std::string& f1, const std::string& f2, const std::string& g1,
               const std::string& g2);

// Loads a PSVF from JSON of the shape
//   {"X": ["-y^2 + L", "1"], "Y": ["1", "1"], "params": {"L": "0"}}
// where parameter values are rational literals substituted at load time.
PSVF psvf_from_json(const std::string& json_text);

// Iterated Lie derivative of the monitor F(x,y) = x along one side at
// (0, y0): order 1 is the first component itself, order k applies the field
// to the gradient of the previous derivative.  Computed with truncated
// Taylor jets; `order` must be 1, 2 or 3.
double lie_derivative(const PSVF& z, FieldSide which, int order, double y0);

// Region/tangency classification of (0, y0) per the sign cascade on the
// witnesses (tolerance kSignTol; values inside the band escalate to the
// next-order condition, and failures beyond cusp order return degenerate).
SigmaPointClass classify_sigma_point(const PSVF& z, double y0);

// The convex-combination sliding field on the switching line:
//   Zs(y) = (f2*g1 - g2*f1) / (g1 - f1) evaluated at (0, y),
// defined where the denominator stays away from zero.
class SlidingField {
public:
    SlidingField(Expression num, Expression den);

    // True when |g1(0,y) - f1(0,y)| > kSignTol.
    [[nodiscard]] bool in_domain(double y) const;

    // Value at (0, y); throws OutsideDomain outside the domain predicate.
    [[nodiscard]] double eval(double y) const;

    [[nodiscard]] const Expression& numerator() const { return num_; }
    [[nodiscard]] const Expression& denominator() const { return den_; }

private:
    Expression num_, den_;  // expressions in (x, y), evaluated at x = 0
};

SlidingField sliding_field(const PSVF& z);

// Roots of the sliding field inside [y_lo, y_hi] that lie in its domain,
// refined below 1e-10.  Uses exact root isolation when the numerator is
// polynomial and sampled sign-change bisection otherwise.  An identically
// zero numerator (every domain point an equilibrium) yields an empty list,
// as there is nothing isolated to report.
std::vector<double> sliding_equilibria(const PSVF& z, double y_lo, double y_hi);

}  // namespace sfreg
