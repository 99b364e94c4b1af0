// transition.hpp
// --------------
// Synthesis and analysis of polynomial transition functions: odd-looking
// sigmoids phi that equal -1 left of the switching layer, +1 right of it,
// and interpolate an arbitrary finite list of interior value and slope
// constraints with the minimum-degree polynomial in between.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sfreg/polynomial.hpp"
#include "sfreg/rational.hpp"
#include "sfreg/roots.hpp"

namespace sfreg {

// Interior constraints: slopes phi'(p_i) = u_i and values phi(q_j) = v_j with
// every p_i and q_j in the open interval (-1, 1).
struct TransitionConstraints {
    std::vector<std::pair<Rational, Rational>> derivs;  // (p_i, u_i)
    std::vector<std::pair<Rational, Rational>> values;  // (q_j, v_j)

    [[nodiscard]] std::size_t count() const { return derivs.size() + values.size(); }
};

struct Overshoot {
    double max_abs = 1.0;      // max |phi| over [-1, 1]
    double argmax = 1.0;       // where it is attained
    bool exceeds_one = false;  // true when max_abs > 1 (+tolerance)
};

class TransitionFunction {
public:
    TransitionFunction(UniPoly interior, TransitionConstraints constraints);

    // Piecewise evaluation: -1 for t <= -1, +1 for t >= +1, interior between.
    [[nodiscard]] double eval(double t) const;
    [[nodiscard]] Rational eval_exact(const Rational& t) const;

    // Derivative of order 1..3 (zero outside the layer by construction).
    [[nodiscard]] double eval_deriv(double t, int order) const;
    [[nodiscard]] Rational eval_deriv_exact(const Rational& t, int order) const;

    [[nodiscard]] const UniPoly& interior() const { return interior_; }
    [[nodiscard]] int degree() const { return interior_.degree(); }
    [[nodiscard]] const TransitionConstraints& constraints() const { return constraints_; }
    [[nodiscard]] std::vector<Rational> coefficients() const { return interior_.coeffs(); }

    // Interior critical points: roots of phi' in the open interval (-1, 1),
    // with multiplicities from the square-free decomposition.
    [[nodiscard]] const std::vector<RealRoot>& critical_points() const { return critical_; }

    // Maximum of |phi| over [-1, 1]; exceeds_one uses a 1e-9 margin.
    [[nodiscard]] const Overshoot& overshoot() const { return overshoot_; }

    // Non-decreasing from -1 to +1: no interior critical point of odd
    // multiplicity (phi' cannot change sign there).
    [[nodiscard]] bool is_monotonic() const { return monotonic_; }

    // The interior polynomial as a sparse polynomial in variable `var` of the
    // given variable set (used to compose blow-ups).
    [[nodiscard]] Polynomial interior_polynomial(VarSetPtr vars, int var) const;

private:
    UniPoly interior_;
    UniPoly deriv_[3];
    TransitionConstraints constraints_;
    std::vector<RealRoot> critical_;
    Overshoot overshoot_;
    bool monotonic_ = true;
};

// Solves the exact linear system for the minimum-degree polynomial matching
// the four junction conditions phi(-1) = -1, phi'(-1) = 0, phi(1) = 1,
// phi'(1) = 0 plus the interior constraints.  The polynomial degree is
// constraints.count() + 3.  Throws OutsideDomain when a constraint point is
// not interior and SingularConstraintMatrix when the system is singular
// (e.g. duplicated constraint points).
TransitionFunction synthesize(const TransitionConstraints& constraints);

}  // namespace sfreg
