// regularize.hpp
// --------------
// Smoothing of a piecewise-smooth field across its switching line, either by
// convex combination (linear in the blend) or through a user-supplied blend
// family, plus the directional rescaling x -> eps*x that turns the smoothed
// field into an explicit slow-fast system on the layer chart |x| <= 1.

#pragma once

#include <array>
#include <optional>
#include <string>

#include "sfreg/expr.hpp"
#include "sfreg/psvf.hpp"
#include "sfreg/transition.hpp"

namespace sfreg {

// Slow-time form eps * dx/dt = f(x, y, eps), dy/dt = g(x, y, eps) over the
// ordered variables {x, y, eps}; eps stays symbolic so the eps = 0 reduction
// (critical set, classification) and eps > 0 simulation share one object.
struct SlowFastSystem {
    Expression f;  // fast right-hand side
    Expression g;  // slow right-hand side
    VarSetPtr vars;
};

// Blend family Ztilde(lam, x, y) = (z1, z2) interpolating the two sides of a
// piecewise field: lam = 1 must reproduce the x > 0 side and lam = -1 the
// x < 0 side whenever those sides are declared (`endpoints`).
struct NonlinearFamily {
    Expression z1, z2;              // over canonical variables {lam, x, y}
    VarSetPtr vars;                 // {lam, x, y}
    std::optional<PSVF> endpoints;  // declared sides, when known
};

// Parses the two components over {lam, x, y}; no endpoint declaration.
NonlinearFamily make_family(const std::string& z1, const std::string& z2);

// Loads a family from JSON of the shape
//   {"Ztilde": ["(x+L)*y + L^3", "-1"], "vars": ["L", "x", "y"]}
// where vars[0] names the blend variable and vars[1], vars[2] the plane
// coordinates.  Optional "X" and "Y" arrays declare the endpoint fields
// (expressions in the plane coordinates); when present the family is
// validated against them and FamilyEndpointMismatch is thrown on failure.
NonlinearFamily family_from_json(const std::string& json_text);

// The convex-combination family ((1+lam)/2) X + ((1-lam)/2) Y, with the
// piecewise field itself as (exact) endpoints.
NonlinearFamily linear_embedding(const PSVF& z);

// The PSVF formed by the family's own endpoint sections lam = +1 / lam = -1.
PSVF family_endpoints(const NonlinearFamily& fam);

// Checks the declared endpoints on a 20 x 20 grid over [-1,1]^2 (tolerance
// 1e-9 componentwise); no-op when the family declares none.  Throws
// FamilyEndpointMismatch with the offending corner of the grid.
void validate_family(const NonlinearFamily& fam);

// A smoothed planar field with layer half-width eps: outside |x| <= eps it
// evaluates the original sides directly (identical bits, not just close),
// inside it blends through the transition function.
class RegularizedField {
public:
    enum class Mode { linear, nonlinear };

    [[nodiscard]] std::array<double, 2> eval(double x, double y) const;
    [[nodiscard]] double epsilon() const { return eps_; }
    [[nodiscard]] Mode mode() const { return mode_; }

private:
    friend RegularizedField linear_regularize(const PSVF&, const TransitionFunction&, double);
    friend RegularizedField nonlinear_regularize(const NonlinearFamily&,
                                                 const TransitionFunction&, double);

    RegularizedField(Mode mode, PSVF sides, std::optional<NonlinearFamily> fam,
                     TransitionFunction tf, double eps);

    Mode mode_;
    PSVF sides_;                          // evaluated for the exact tails
    std::optional<NonlinearFamily> fam_;  // nonlinear blend, when applicable
    TransitionFunction tf_;
    double eps_;
};

// Convex-combination smoothing ((1+phi(x/eps))/2) X + ((1-phi(x/eps))/2) Y.
RegularizedField linear_regularize(const PSVF& z, const TransitionFunction& tf, double eps);

// Family smoothing Ztilde(phi(x/eps), x, y); validates declared endpoints.
RegularizedField nonlinear_regularize(const NonlinearFamily& fam, const TransitionFunction& tf,
                                      double eps);

// Directional rescaling of the linear smoothing:
//   f = (f1+g1)/2 + phi(x) (f1-g1)/2,  g = (f2+g2)/2 + phi(x) (f2-g2)/2,
// components evaluated at (eps*x, y) and phi composed as its interior
// polynomial (exact rational composition when the components are polynomial,
// expression composition otherwise).  Valid on the chart |x| <= 1.
SlowFastSystem blowup_linear(const PSVF& z, const TransitionFunction& tf);

// Directional rescaling of the family smoothing:
//   f = z1(phi(x), eps*x, y),  g = z2(phi(x), eps*x, y).
SlowFastSystem blowup_nonlinear(const NonlinearFamily& fam, const TransitionFunction& tf);

}  // namespace sfreg
