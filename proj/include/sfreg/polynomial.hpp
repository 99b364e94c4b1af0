// polynomial.hpp
// --------------
// Exact multivariate polynomials with rational coefficients, stored sparsely
// as exponent-vector -> coefficient.  Used wherever the library computes with
// closed forms: transition-function synthesis, blow-ups of polynomial fields,
// and exact root isolation (through the univariate view in roots.hpp).

#pragma once

#include <map>
#include <span>
#include <vector>

#include "sfreg/expr.hpp"
#include "sfreg/rational.hpp"

namespace sfreg {

class Polynomial {
public:
    using Exponents = std::vector<unsigned>;

    explicit Polynomial(VarSetPtr vars) : vars_(std::move(vars)) {}

    static Polynomial zero(VarSetPtr vars) { return Polynomial(std::move(vars)); }

    static Polynomial constant(VarSetPtr vars, const Rational& c) {
        Polynomial p(std::move(vars));
        if (!c.is_zero()) p.terms_[Exponents(p.vars_->size(), 0)] = c;
        return p;
    }

    static Polynomial variable(VarSetPtr vars, int index);

    [[nodiscard]] const VarSetPtr& vars() const { return vars_; }
    [[nodiscard]] const std::map<Exponents, Rational>& terms() const { return terms_; }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }
    [[nodiscard]] std::size_t term_count() const { return terms_.size(); }

    [[nodiscard]] int total_degree() const;
    [[nodiscard]] int degree_in(int var) const;

    // Accumulates c * x^alpha (dropping the term if it cancels to zero).
    void add_term(const Exponents& alpha, const Rational& c);

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    Polynomial operator-() const;

    [[nodiscard]] Polynomial scaled(const Rational& c) const;
    [[nodiscard]] Polynomial pow_int(unsigned n) const;
    [[nodiscard]] Polynomial derivative(int var) const;

    // Substitutes `value` for variable `var` (a polynomial over the same
    // variable set); the result no longer involves `var` unless `value` does.
    [[nodiscard]] Polynomial substituted(int var, const Polynomial& value) const;
    [[nodiscard]] Polynomial substituted(int var, const Rational& value) const;

    // Rebuilds the polynomial over `target`, matching variables by name.
    [[nodiscard]] Polynomial embedded(VarSetPtr target) const;

    [[nodiscard]] Rational eval_exact(std::span<const Rational> point) const;
    [[nodiscard]] double eval_double(std::span<const double> point) const;

    // Canonical expression form: terms in the deterministic (lexicographic
    // exponent) order of the sparse map.
    [[nodiscard]] Expression to_expression() const;

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return *a.vars_ == *b.vars_ && a.terms_ == b.terms_;
    }

private:
    VarSetPtr vars_;
    std::map<Exponents, Rational> terms_;
};

// Converts an expression to a polynomial.  Quotients are admitted only with
// constant nonzero denominators; exp() and everything else non-polynomial
// throws NotPolynomial.
Polynomial to_polynomial(const Expression& e);

}  // namespace sfreg
