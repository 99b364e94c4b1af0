// transition.cpp
// --------------
// Exact synthesis (rational Gaussian elimination) and analysis of transition
// functions.

#include "sfreg/transition.hpp"

#include <cmath>

namespace sfreg {

namespace {

constexpr double kOvershootMargin = 1e-9;

// Row of the interpolation system: the monomial-basis evaluation of the
// polynomial (order 0) or its derivative (order 1) at t.
std::vector<Rational> basis_row(std::size_t n, const Rational& t, int order) {
    std::vector<Rational> row(n, Rational(0));
    Rational tp(1);
    if (order == 0) {
        for (std::size_t j = 0; j < n; ++j) {
            row[j] = tp;
            tp *= t;
        }
    } else {
        for (std::size_t j = 1; j < n; ++j) {
            row[j] = tp * Rational(static_cast<long>(j));
            tp *= t;
        }
    }
    return row;
}

// Exact Gaussian elimination with row pivoting; returns the solution of
// A x = rhs or throws SingularConstraintMatrix.
std::vector<Rational> solve_exact(std::vector<std::vector<Rational>> a,
                                  std::vector<Rational> rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col].is_zero()) ++pivot;
        if (pivot == n)
            throw SingularConstraintMatrix(
                "the constraint system is singular; the interpolation problem has no unique "
                "solution");
        if (pivot != col) {
            std::swap(a[pivot], a[col]);
            std::swap(rhs[pivot], rhs[col]);
        }
        Rational inv = a[col][col].reciprocal();
        for (std::size_t j = col; j < n; ++j) a[col][j] *= inv;
        rhs[col] *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero()) continue;
            Rational factor = a[r][col];
            for (std::size_t j = col; j < n; ++j) a[r][j] -= factor * a[col][j];
            rhs[r] -= factor * rhs[col];
        }
    }
    return rhs;
}

}  // namespace

TransitionFunction::TransitionFunction(UniPoly interior, TransitionConstraints constraints)
    : interior_(std::move(interior)), constraints_(std::move(constraints)) {
    deriv_[0] = interior_.derivative();
    deriv_[1] = deriv_[0].derivative();
    deriv_[2] = deriv_[1].derivative();

    // Critical points and, from them, overshoot and monotonicity.
    if (!deriv_[0].is_zero())
        critical_ = isolate_roots(deriv_[0], Rational(-1), Rational(1), false, false);
    overshoot_.max_abs = 1.0;
    overshoot_.argmax = 1.0;
    for (const auto& root : critical_) {
        // |phi| at a critical point; the enclosure is far tighter than the
        // overshoot margin, so the midpoint evaluation decides.
        double v = std::fabs(interior_.eval_double(root.value));
        if (v > overshoot_.max_abs) {
            overshoot_.max_abs = v;
            overshoot_.argmax = root.value;
        }
        if (root.multiplicity % 2 == 1) monotonic_ = false;
    }
    overshoot_.exceeds_one = overshoot_.max_abs > 1.0 + kOvershootMargin;
}

double TransitionFunction::eval(double t) const {
    if (t <= -1.0) return -1.0;
    if (t >= 1.0) return 1.0;
    return interior_.eval_double(t);
}

Rational TransitionFunction::eval_exact(const Rational& t) const {
    if (t <= Rational(-1)) return Rational(-1);
    if (t >= Rational(1)) return Rational(1);
    return interior_.eval_exact(t);
}

double TransitionFunction::eval_deriv(double t, int order) const {
    if (order < 1 || order > 3) throw Error("Internal", "derivative order out of range");
    if (t <= -1.0 || t >= 1.0) return 0.0;
    return deriv_[order - 1].eval_double(t);
}

Rational TransitionFunction::eval_deriv_exact(const Rational& t, int order) const {
    if (order < 1 || order > 3) throw Error("Internal", "derivative order out of range");
    if (t <= Rational(-1) || t >= Rational(1)) return Rational(0);
    return deriv_[order - 1].eval_exact(t);
}

Polynomial TransitionFunction::interior_polynomial(VarSetPtr vars, int var) const {
    Polynomial p(vars);
    Polynomial::Exponents alpha(vars->size(), 0);
    const auto& c = interior_.coeffs();
    for (std::size_t k = 0; k < c.size(); ++k) {
        alpha[static_cast<std::size_t>(var)] = static_cast<unsigned>(k);
        p.add_term(alpha, c[k]);
    }
    return p;
}

TransitionFunction synthesize(const TransitionConstraints& constraints) {
    for (const auto& [p, u] : constraints.derivs)
        if (!(Rational(-1) < p && p < Rational(1)))
            throw OutsideDomain("slope constraint point " + p.str() +
                                " must lie in the open interval (-1, 1)");
    for (const auto& [q, v] : constraints.values)
        if (!(Rational(-1) < q && q < Rational(1)))
            throw OutsideDomain("value constraint point " + q.str() +
                                " must lie in the open interval (-1, 1)");

    const std::size_t n = constraints.count() + 4;  // degree n-1 polynomial
    std::vector<std::vector<Rational>> a;
    std::vector<Rational> rhs;
    a.reserve(n);
    rhs.reserve(n);

    a.push_back(basis_row(n, Rational(-1), 1));
    rhs.push_back(Rational(0));
    a.push_back(basis_row(n, Rational(-1), 0));
    rhs.push_back(Rational(-1));
    a.push_back(basis_row(n, Rational(1), 1));
    rhs.push_back(Rational(0));
    a.push_back(basis_row(n, Rational(1), 0));
    rhs.push_back(Rational(1));
    for (const auto& [p, u] : constraints.derivs) {
        a.push_back(basis_row(n, p, 1));
        rhs.push_back(u);
    }
    for (const auto& [q, v] : constraints.values) {
        a.push_back(basis_row(n, q, 0));
        rhs.push_back(v);
    }

    std::vector<Rational> coeffs = solve_exact(std::move(a), std::move(rhs));
    return {UniPoly(std::move(coeffs)), constraints};
}

}  // namespace sfreg
