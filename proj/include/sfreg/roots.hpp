// roots.hpp
// ---------
// Exact univariate polynomials over the rationals and certified real-root
// isolation: Yun square-free decomposition for multiplicities, Sturm chains
// for counting, and rational bisection for refinement.  Every returned root
// carries an enclosing interval of width below the refinement tolerance (or
// an exact rational value when bisection lands on the root).

#pragma once

#include <optional>
#include <vector>

#include "sfreg/polynomial.hpp"
#include "sfreg/rational.hpp"

namespace sfreg {

// Dense univariate polynomial, coefficients ascending; normalized so the
// leading coefficient is nonzero (empty vector = zero polynomial).
class UniPoly {
public:
    UniPoly() = default;
    explicit UniPoly(std::vector<Rational> ascending) : c_(std::move(ascending)) {
        normalize();
    }

    [[nodiscard]] const std::vector<Rational>& coeffs() const { return c_; }
    [[nodiscard]] bool is_zero() const { return c_.empty(); }
    [[nodiscard]] int degree() const { return static_cast<int>(c_.size()) - 1; }
    [[nodiscard]] const Rational& leading() const { return c_.back(); }

    [[nodiscard]] Rational eval_exact(const Rational& t) const;
    [[nodiscard]] double eval_double(double t) const;

    [[nodiscard]] UniPoly derivative() const;
    [[nodiscard]] UniPoly monic() const;
    [[nodiscard]] UniPoly scaled(const Rational& s) const;

    friend UniPoly operator+(const UniPoly& a, const UniPoly& b);
    friend UniPoly operator-(const UniPoly& a, const UniPoly& b);
    friend UniPoly operator*(const UniPoly& a, const UniPoly& b);
    UniPoly operator-() const;

    // Exact Euclidean division: *this = q * d + r with deg r < deg d.
    struct DivRem;
    [[nodiscard]] DivRem divrem(const UniPoly& d) const;

    // Deflation by an exact root: divides by (t - r); the remainder must be 0.
    [[nodiscard]] UniPoly deflated(const Rational& r) const;

    friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }

private:
    void normalize() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    std::vector<Rational> c_;
};

struct UniPoly::DivRem {
    UniPoly quotient;
    UniPoly remainder;
};

// Extracts the univariate view of a multivariate polynomial in variable
// `var`; throws NotPolynomial if any other variable occurs.
UniPoly to_unipoly(const Polynomial& p, int var);

// Monic gcd over the rationals (returns monic; gcd(0,0) = 0).
UniPoly poly_gcd(UniPoly a, UniPoly b);

// Yun square-free decomposition: p = lc * prod_i out[i-1]^i with the factors
// monic, square-free and pairwise coprime (entries may be the constant 1).
std::vector<UniPoly> squarefree_decomposition(const UniPoly& p);

struct RealRoot {
    double value = 0.0;       // midpoint of the final enclosure
    int multiplicity = 1;     // from the square-free decomposition
    bool exact = false;       // true when `rational` is exactly a root
    Rational rational;        // exact root, or midpoint of the enclosure
    Rational enclosure_lo;    // certified enclosing interval
    Rational enclosure_hi;
};

// Isolates every real root of p in the interval from lo to hi (endpoints
// included only when the corresponding flag is set), refining enclosures
// below `tol`.  Throws IdenticallyZero for the zero polynomial.
std::vector<RealRoot> isolate_roots(const UniPoly& p, const Rational& lo, const Rational& hi,
                                    bool include_lo, bool include_hi,
                                    const Rational& tol = Rational(1, 1000000000000L));

}  // namespace sfreg
