// polynomial.cpp
// --------------
// Sparse exact polynomial arithmetic and the expression <-> polynomial
// conversions.

#include "sfreg/polynomial.hpp"

#include <algorithm>

namespace sfreg {

Polynomial Polynomial::variable(VarSetPtr vars, int index) {
    if (index < 0 || static_cast<std::size_t>(index) >= vars->size())
        throw Error("Internal", "polynomial variable index out of range");
    Polynomial p(std::move(vars));
    Exponents alpha(p.vars_->size(), 0);
    alpha[static_cast<std::size_t>(index)] = 1;
    p.terms_[alpha] = Rational(1);
    return p;
}

int Polynomial::total_degree() const {
    int deg = 0;
    for (const auto& [alpha, c] : terms_) {
        int d = 0;
        for (unsigned e : alpha) d += static_cast<int>(e);
        deg = std::max(deg, d);
    }
    return deg;
}

int Polynomial::degree_in(int var) const {
    int deg = 0;
    for (const auto& [alpha, c] : terms_)
        deg = std::max(deg, static_cast<int>(alpha[static_cast<std::size_t>(var)]));
    return deg;
}

void Polynomial::add_term(const Exponents& alpha, const Rational& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(alpha);
    if (it == terms_.end()) {
        terms_.emplace(alpha, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    Polynomial r = a;
    for (const auto& [alpha, c] : b.terms_) r.add_term(alpha, c);
    return r;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    Polynomial r = a;
    for (const auto& [alpha, c] : b.terms_) r.add_term(alpha, -c);
    return r;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r(a.vars_);
    for (const auto& [alpha, ca] : a.terms_) {
        for (const auto& [beta, cb] : b.terms_) {
            Polynomial::Exponents sum(alpha.size());
            for (std::size_t i = 0; i < alpha.size(); ++i) sum[i] = alpha[i] + beta[i];
            r.add_term(sum, ca * cb);
        }
    }
    return r;
}

Polynomial Polynomial::operator-() const {
    Polynomial r(vars_);
    for (const auto& [alpha, c] : terms_) r.terms_.emplace(alpha, -c);
    return r;
}

Polynomial Polynomial::scaled(const Rational& c) const {
    Polynomial r(vars_);
    if (c.is_zero()) return r;
    for (const auto& [alpha, k] : terms_) r.terms_.emplace(alpha, k * c);
    return r;
}

Polynomial Polynomial::pow_int(unsigned n) const {
    Polynomial acc = Polynomial::constant(vars_, Rational(1));
    Polynomial base = *this;
    unsigned k = n;
    while (k > 0) {
        if (k & 1u) acc = acc * base;
        base = base * base;
        k >>= 1u;
    }
    return acc;
}

Polynomial Polynomial::derivative(int var) const {
    Polynomial r(vars_);
    const auto v = static_cast<std::size_t>(var);
    for (const auto& [alpha, c] : terms_) {
        if (alpha[v] == 0) continue;
        Exponents beta = alpha;
        beta[v] -= 1;
        r.add_term(beta, c * Rational(static_cast<long>(alpha[v])));
    }
    return r;
}

Polynomial Polynomial::substituted(int var, const Polynomial& value) const {
    const auto v = static_cast<std::size_t>(var);
    // Cache powers of the substituted value: highest needed exponent first.
    int maxdeg = degree_in(var);
    std::vector<Polynomial> powers;
    powers.reserve(static_cast<std::size_t>(maxdeg) + 1);
    powers.push_back(Polynomial::constant(vars_, Rational(1)));
    for (int k = 1; k <= maxdeg; ++k) powers.push_back(powers.back() * value);
    Polynomial r(vars_);
    for (const auto& [alpha, c] : terms_) {
        Exponents beta = alpha;
        unsigned e = beta[v];
        beta[v] = 0;
        Polynomial term(vars_);
        term.add_term(beta, c);
        r = r + term * powers[e];
    }
    return r;
}

Polynomial Polynomial::substituted(int var, const Rational& value) const {
    return substituted(var, Polynomial::constant(vars_, value));
}

Polynomial Polynomial::embedded(VarSetPtr target) const {
    std::vector<int> map(vars_->size(), -1);
    for (std::size_t i = 0; i < vars_->size(); ++i)
        map[i] = target->index_of(vars_->name(i));
    Polynomial r(target);
    for (const auto& [alpha, c] : terms_) {
        Exponents beta(target->size(), 0);
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            if (alpha[i] == 0) continue;
            if (map[i] < 0) throw UnknownVariable(0, vars_->name(i));
            beta[static_cast<std::size_t>(map[i])] = alpha[i];
        }
        r.add_term(beta, c);
    }
    return r;
}

Rational Polynomial::eval_exact(std::span<const Rational> point) const {
    if (point.size() != vars_->size())
        throw Error("Internal", "polynomial evaluation arity mismatch");
    Rational sum(0);
    for (const auto& [alpha, c] : terms_) {
        Rational term = c;
        for (std::size_t i = 0; i < alpha.size(); ++i)
            if (alpha[i] > 0) term *= point[i].pow(alpha[i]);
        sum += term;
    }
    return sum;
}

double Polynomial::eval_double(std::span<const double> point) const {
    if (point.size() != vars_->size())
        throw Error("Internal", "polynomial evaluation arity mismatch");
    double sum = 0.0;
    for (const auto& [alpha, c] : terms_) {
        double term = c.to_double();
        for (std::size_t i = 0; i < alpha.size(); ++i)
            for (unsigned k = 0; k < alpha[i]; ++k) term *= point[i];
        sum += term;
    }
    return sum;
}

Expression Polynomial::to_expression() const {
    if (terms_.empty()) return Expression::constant(Rational(0), vars_);
    std::vector<NodePtr> summands;
    summands.reserve(terms_.size());
    for (const auto& [alpha, c] : terms_) {
        std::vector<NodePtr> factors;
        bool negative = c.sign() < 0;
        Rational mag = negative ? -c : c;
        if (!(mag == Rational(1)) ||
            std::all_of(alpha.begin(), alpha.end(), [](unsigned e) { return e == 0; }))
            factors.push_back(make_const(mag));
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            if (alpha[i] == 0) continue;
            NodePtr v = make_var(static_cast<int>(i));
            factors.push_back(alpha[i] == 1 ? v : make_pow(v, static_cast<int>(alpha[i])));
        }
        NodePtr term = factors.size() == 1 ? factors[0] : make_mul(std::move(factors));
        summands.push_back(negative ? make_neg(term) : term);
    }
    NodePtr root = summands.size() == 1 ? summands[0] : make_add(std::move(summands));
    return {root, vars_};
}

namespace {

Polynomial to_polynomial_node(const Node& n, const VarSetPtr& vars) {
    switch (n.kind) {
        case NodeKind::Const:
            return Polynomial::constant(vars, n.value);
        case NodeKind::Var:
            return Polynomial::variable(vars, n.var);
        case NodeKind::Add: {
            Polynomial s = Polynomial::zero(vars);
            for (const auto& k : n.kids) s = s + to_polynomial_node(*k, vars);
            return s;
        }
        case NodeKind::Mul: {
            Polynomial p = Polynomial::constant(vars, Rational(1));
            for (const auto& k : n.kids) p = p * to_polynomial_node(*k, vars);
            return p;
        }
        case NodeKind::Neg:
            return -to_polynomial_node(*n.kids[0], vars);
        case NodeKind::Pow:
            return to_polynomial_node(*n.kids[0], vars)
                .pow_int(static_cast<unsigned>(n.exponent));
        case NodeKind::Div: {
            Polynomial den = to_polynomial_node(*n.kids[1], vars);
            if (den.total_degree() != 0)
                throw NotPolynomial("quotient with a non-constant denominator");
            if (den.is_zero())
                throw EvaluationSingular("quotient with zero denominator");
            Rational d = den.terms().begin()->second;
            return to_polynomial_node(*n.kids[0], vars).scaled(d.reciprocal());
        }
        case NodeKind::Exp:
            throw NotPolynomial("exp() is not polynomial");
    }
    throw Error("Internal", "unreachable expression node kind");
}

}  // namespace

Polynomial to_polynomial(const Expression& e) {
    if (!e.valid()) throw Error("Internal", "converting an empty expression");
    return to_polynomial_node(*e.root(), e.vars());
}

}  // namespace sfreg
