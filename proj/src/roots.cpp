// roots.cpp
// ---------
// Exact univariate arithmetic, Yun square-free decomposition, Sturm chains
// and bisection-based certified root isolation.

#include "sfreg/roots.hpp"

#include <algorithm>

namespace sfreg {

Rational UniPoly::eval_exact(const Rational& t) const {
    Rational acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
    return acc;
}

double UniPoly::eval_double(double t) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + it->to_double();
    return acc;
}

UniPoly UniPoly::derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<Rational> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i)
        d[i - 1] = c_[i] * Rational(static_cast<long>(i));
    return UniPoly(std::move(d));
}

UniPoly UniPoly::monic() const {
    if (is_zero()) return {};
    return scaled(leading().reciprocal());
}

UniPoly UniPoly::scaled(const Rational& s) const {
    if (s.is_zero()) return {};
    std::vector<Rational> d(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) d[i] = c_[i] * s;
    return UniPoly(std::move(d));
}

UniPoly operator+(const UniPoly& a, const UniPoly& b) {
    std::vector<Rational> d(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) d[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) d[i] += b.c_[i];
    return UniPoly(std::move(d));
}

UniPoly operator-(const UniPoly& a, const UniPoly& b) {
    std::vector<Rational> d(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) d[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) d[i] -= b.c_[i];
    return UniPoly(std::move(d));
}

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> d(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) d[i + j] += a.c_[i] * b.c_[j];
    return UniPoly(std::move(d));
}

UniPoly UniPoly::operator-() const {
    std::vector<Rational> d(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) d[i] = -c_[i];
    return UniPoly(std::move(d));
}

UniPoly::DivRem UniPoly::divrem(const UniPoly& d) const {
    if (d.is_zero()) throw EvaluationSingular("polynomial division by zero");
    std::vector<Rational> rem = c_;
    std::vector<Rational> quo;
    int dr = static_cast<int>(rem.size()) - 1;
    int dd = d.degree();
    if (dr < dd) return {UniPoly{}, *this};
    quo.assign(static_cast<std::size_t>(dr - dd) + 1, Rational(0));
    Rational lead_inv = d.leading().reciprocal();
    for (int k = dr; k >= dd; --k) {
        Rational coeff = rem[static_cast<std::size_t>(k)] * lead_inv;
        if (coeff.is_zero()) continue;
        quo[static_cast<std::size_t>(k - dd)] = coeff;
        for (int j = 0; j <= dd; ++j)
            rem[static_cast<std::size_t>(k - dd + j)] -= coeff * d.c_[static_cast<std::size_t>(j)];
    }
    return {UniPoly(std::move(quo)), UniPoly(std::move(rem))};
}

UniPoly UniPoly::deflated(const Rational& r) const {
    // Synthetic division by (t - r).
    if (is_zero()) return {};
    std::vector<Rational> q(c_.size() - 1, Rational(0));
    Rational carry = leading();
    for (int i = degree() - 1; i >= 0; --i) {
        q[static_cast<std::size_t>(i)] = carry;
        carry = c_[static_cast<std::size_t>(i)] + carry * r;
    }
    if (!carry.is_zero())
        throw Error("Internal", "deflation at a value that is not a root");
    return UniPoly(std::move(q));
}

UniPoly to_unipoly(const Polynomial& p, int var) {
    std::vector<Rational> c(static_cast<std::size_t>(p.degree_in(var)) + 1, Rational(0));
    for (const auto& [alpha, k] : p.terms()) {
        for (std::size_t i = 0; i < alpha.size(); ++i)
            if (static_cast<int>(i) != var && alpha[i] != 0)
                throw NotPolynomial("polynomial is not univariate in the requested variable");
        c[alpha[static_cast<std::size_t>(var)]] += k;
    }
    return UniPoly(std::move(c));
}

UniPoly poly_gcd(UniPoly a, UniPoly b) {
    while (!b.is_zero()) {
        UniPoly r = a.divrem(b).remainder;
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero()) return a;
    return a.monic();
}

std::vector<UniPoly> squarefree_decomposition(const UniPoly& p) {
    std::vector<UniPoly> factors;
    if (p.is_zero()) throw IdenticallyZero("square-free decomposition of the zero polynomial");
    if (p.degree() == 0) return factors;
    UniPoly f = p.monic();
    UniPoly fp = f.derivative();
    UniPoly g = poly_gcd(f, fp);
    if (g.degree() == 0) {
        factors.push_back(f);
        return factors;
    }
    // Yun's algorithm.
    UniPoly b = f.divrem(g).quotient;
    UniPoly c = fp.divrem(g).quotient;
    UniPoly d = c - b.derivative();
    while (true) {
        UniPoly a = poly_gcd(b, d);
        factors.push_back(a.is_zero() ? UniPoly({Rational(1)}) : a);
        b = b.divrem(a).quotient;
        if (b.degree() <= 0) break;
        c = d.divrem(a).quotient;
        d = c - b.derivative();
    }
    return factors;
}

namespace {

// Sturm chain of a square-free polynomial, remainders content-normalized
// (positive scaling keeps the sign pattern intact).
std::vector<UniPoly> sturm_chain(const UniPoly& f) {
    std::vector<UniPoly> chain;
    chain.push_back(f);
    if (f.degree() < 1) return chain;
    chain.push_back(f.derivative());
    while (chain.back().degree() >= 1) {
        const UniPoly& p0 = chain[chain.size() - 2];
        const UniPoly& p1 = chain.back();
        UniPoly r = -(p0.divrem(p1).remainder);
        if (r.is_zero()) break;
        // Scale by the reciprocal of the largest |coefficient| to tame growth.
        Rational m(0);
        for (const auto& coeff : r.coeffs()) m = std::max(m, coeff.abs());
        chain.push_back(r.scaled(m.reciprocal()));
    }
    return chain;
}

int sign_variations_at(const std::vector<UniPoly>& chain, const Rational& t) {
    int variations = 0;
    int prev = 0;
    for (const auto& p : chain) {
        int s = p.eval_exact(t).sign();
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++variations;
        prev = s;
    }
    return variations;
}

// Number of distinct roots of the (square-free) chain head in (a, b],
// assuming head(a) != 0.
int count_roots(const std::vector<UniPoly>& chain, const Rational& a, const Rational& b) {
    return sign_variations_at(chain, a) - sign_variations_at(chain, b);
}

struct Isolator {
    const UniPoly& f;  // square-free
    std::vector<UniPoly> chain;
    const Rational& tol;
    int multiplicity;
    std::vector<RealRoot>& out;

    void emit_exact(const Rational& r) {
        RealRoot root;
        root.value = r.to_double();
        root.multiplicity = multiplicity;
        root.exact = true;
        root.rational = r;
        root.enclosure_lo = r;
        root.enclosure_hi = r;
        out.push_back(std::move(root));
    }

    void refine(Rational a, Rational b) {
        // f(a) and f(b) have opposite signs; shrink to the tolerance.
        int sa = f.eval_exact(a).sign();
        while (b - a > tol) {
            Rational m = (a + b) / Rational(2);
            int sm = f.eval_exact(m).sign();
            if (sm == 0) {
                emit_exact(m);
                return;
            }
            if (sm == sa)
                a = m;
            else
                b = m;
        }
        RealRoot root;
        root.rational = (a + b) / Rational(2);
        root.value = root.rational.to_double();
        root.multiplicity = multiplicity;
        root.exact = false;
        root.enclosure_lo = a;
        root.enclosure_hi = b;
        out.push_back(std::move(root));
    }

    // Isolates in the open interval (a, b); requires f(a) != 0 and f(b) != 0.
    void isolate(const Rational& a, const Rational& b, int count) {
        if (count <= 0) return;
        if (count == 1) {
            refine(a, b);
            return;
        }
        Rational m = (a + b) / Rational(2);
        if (f.eval_exact(m).is_zero()) {
            emit_exact(m);
            // Nudge symmetric sub-endpoints off the root; the offset shrinks
            // until neither hits another root (roots are finite in number).
            Rational delta = (b - a) / Rational(1024);
            Rational ml = m - delta;
            Rational mr = m + delta;
            while (f.eval_exact(ml).is_zero() || f.eval_exact(mr).is_zero()) {
                delta = delta / Rational(2);
                ml = m - delta;
                mr = m + delta;
            }
            isolate(a, ml, count_roots(chain, a, ml));
            isolate(mr, b, count_roots(chain, mr, b));
            return;
        }
        int left = count_roots(chain, a, m);
        isolate(a, m, left);
        isolate(m, b, count - left);
    }
};

}  // namespace

std::vector<RealRoot> isolate_roots(const UniPoly& p, const Rational& lo, const Rational& hi,
                                    bool include_lo, bool include_hi, const Rational& tol) {
    if (p.is_zero()) throw IdenticallyZero("root isolation of the zero polynomial");
    std::vector<RealRoot> out;
    if (p.degree() == 0 || !(lo < hi)) return out;
    std::vector<UniPoly> factors = squarefree_decomposition(p);
    for (std::size_t idx = 0; idx < factors.size(); ++idx) {
        UniPoly f = factors[idx];
        if (f.degree() < 1) continue;
        const int multiplicity = static_cast<int>(idx) + 1;
        std::vector<RealRoot> mine;
        Isolator iso{f, {}, tol, multiplicity, mine};

        // Exact endpoint roots are peeled off first so the Sturm counts on the
        // open interval start from a nonvanishing boundary.
        if (f.eval_exact(lo).is_zero()) {
            if (include_lo) iso.emit_exact(lo);
            f = f.deflated(lo);
        }
        if (!f.is_zero() && f.degree() >= 0 && f.eval_exact(hi).is_zero()) {
            if (include_hi) iso.emit_exact(hi);
            f = f.deflated(hi);
        }
        if (f.degree() >= 1) {
            Isolator inner{f, sturm_chain(f), tol, multiplicity, mine};
            inner.isolate(lo, hi, count_roots(inner.chain, lo, hi));
        }
        out.insert(out.end(), mine.begin(), mine.end());
    }
    std::sort(out.begin(), out.end(),
              [](const RealRoot& a, const RealRoot& b) { return a.rational < b.rational; });
    return out;
}

}  // namespace sfreg
