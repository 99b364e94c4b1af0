// expr.hpp
// --------
// Symbolic expressions over a fixed, ordered set of variables: rational
// constants, variables, sums, products, integer powers, quotients and exp().
// Expressions are immutable trees behind shared pointers; smart constructors
// apply a small set of deterministic constant folds so that printing followed
// by parsing reproduces the tree exactly (structural round trip).

#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sfreg/errors.hpp"
#include "sfreg/rational.hpp"

namespace sfreg {

// Shared sign tolerance: floating-point values in [-kSignTol, kSignTol] are
// treated as zero by every classification predicate, and strict inequalities
// require magnitude above it.
inline constexpr double kSignTol = 1e-9;

// Ordered variable list shared by every expression that must interoperate.
class VarSet {
public:
    explicit VarSet(std::vector<std::string> names) : names_(std::move(names)) {}

    [[nodiscard]] std::size_t size() const { return names_.size(); }
    [[nodiscard]] const std::string& name(std::size_t i) const { return names_[i]; }
    [[nodiscard]] const std::vector<std::string>& names() const { return names_; }

    // Returns the index of `name` or -1 when absent.
    [[nodiscard]] int index_of(const std::string& name) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return static_cast<int>(i);
        return -1;
    }

    friend bool operator==(const VarSet& a, const VarSet& b) { return a.names_ == b.names_; }

private:
    std::vector<std::string> names_;
};

using VarSetPtr = std::shared_ptr<const VarSet>;

inline VarSetPtr make_varset(std::vector<std::string> names) {
    return std::make_shared<const VarSet>(std::move(names));
}

enum class NodeKind { Const, Var, Add, Mul, Neg, Pow, Div, Exp };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    NodeKind kind;
    Rational value;             // Const
    int var = -1;               // Var
    int exponent = 0;           // Pow (exponent >= 0)
    std::vector<NodePtr> kids;  // Add/Mul: >=2, Neg/Exp: 1, Div: 2, Pow: 1
};

class Expression {
public:
    Expression() = default;  // empty; only assignable

    Expression(NodePtr root, VarSetPtr vars) : root_(std::move(root)), vars_(std::move(vars)) {}

    [[nodiscard]] bool valid() const { return root_ != nullptr; }
    [[nodiscard]] const NodePtr& root() const { return root_; }
    [[nodiscard]] const VarSetPtr& vars() const { return vars_; }

    static Expression constant(const Rational& c, VarSetPtr vars);
    static Expression variable(int index, VarSetPtr vars);
    static Expression variable(const std::string& name, VarSetPtr vars);

    friend Expression operator+(const Expression& a, const Expression& b);
    friend Expression operator-(const Expression& a, const Expression& b);
    friend Expression operator*(const Expression& a, const Expression& b);
    friend Expression operator/(const Expression& a, const Expression& b);
    Expression operator-() const;

private:
    NodePtr root_;
    VarSetPtr vars_;
};

// --- construction helpers (constant-folding smart constructors) -------------

NodePtr make_const(const Rational& c);
NodePtr make_var(int index);
NodePtr make_add(std::vector<NodePtr> kids);   // flattens nested sums
NodePtr make_mul(std::vector<NodePtr> kids);   // flattens nested products
NodePtr make_neg(NodePtr kid);                 // folds Neg(Const), Neg(Neg)
NodePtr make_pow(NodePtr base, int exponent);  // exponent >= 0; folds Const^n
NodePtr make_div(NodePtr num, NodePtr den);    // folds Const/Const
NodePtr make_exp(NodePtr kid);

Expression pow_int(const Expression& base, int exponent);
Expression exp_expr(const Expression& arg);

// --- parsing / printing ------------------------------------------------------

// Parses `text` over the given variables.  Grammar: integer literals,
// variables, + - * / ^ (integer exponents), exp(), parentheses.  Throws
// ParseError (with byte offset) or UnknownVariable.
Expression parse_expression(const std::string& text, VarSetPtr vars);

// Canonical printer; parse_expression(to_string(e)) is structurally equal to e.
std::string to_string(const Expression& e);

// Structural equality of the two trees (same shape, same constants).
bool structurally_equal(const Expression& a, const Expression& b);

// --- evaluation ---------------------------------------------------------------

namespace detail {

// exp() hook; tests may specialize this for extended-precision scalar types.
template <typename T>
T exp_value(T x);

template <>
double exp_value<double>(double x);
template <>
long double exp_value<long double>(long double x);

template <typename T>
T pow_nonneg(T base, int n) {
    T acc = T(1);
    T b = base;
    int k = n;
    while (k > 0) {
        if (k & 1) acc = acc * b;
        b = b * b;
        k >>= 1;
    }
    return acc;
}

template <typename T>
T eval_node(const Node& n, std::span<const T> point) {
    switch (n.kind) {
        case NodeKind::Const:
            return T(n.value.to_double());
        case NodeKind::Var:
            return point[static_cast<std::size_t>(n.var)];
        case NodeKind::Add: {
            T s = T(0);
            for (const auto& k : n.kids) s = s + eval_node(*k, point);
            return s;
        }
        case NodeKind::Mul: {
            T p = T(1);
            for (const auto& k : n.kids) p = p * eval_node(*k, point);
            return p;
        }
        case NodeKind::Neg:
            return -eval_node(*n.kids[0], point);
        case NodeKind::Pow:
            return pow_nonneg(eval_node(*n.kids[0], point), n.exponent);
        case NodeKind::Div: {
            T den = eval_node(*n.kids[1], point);
            if (den == T(0)) throw EvaluationSingular("division by zero during evaluation");
            return eval_node(*n.kids[0], point) / den;
        }
        case NodeKind::Exp:
            return exp_value(eval_node(*n.kids[0], point));
    }
    throw Error("Internal", "unreachable expression node kind");
}

}  // namespace detail

// Floating-point evaluation at `point` (one value per variable, in order).
// Constants are rounded to T once; quotients throw EvaluationSingular when
// the denominator vanishes at the point.
template <typename T>
T eval(const Expression& e, std::span<const T> point) {
    if (!e.valid()) throw Error("Internal", "evaluating an empty expression");
    if (point.size() != e.vars()->size())
        throw Error("Internal", "evaluation point arity mismatch");
    return detail::eval_node<T>(*e.root(), point);
}

double eval_double(const Expression& e, std::span<const double> point);

// Exact rational evaluation.  Throws NotPolynomial when the expression
// contains exp() (it is not a rational function) and EvaluationSingular on a
// vanishing denominator.
Rational exact_eval(const Expression& e, std::span<const Rational> point);

// --- structural transforms ----------------------------------------------------

// Replaces every occurrence of variable `index` by `replacement` (which must
// share the expression's variable set).
Expression substitute(const Expression& e, int index, const Expression& replacement);

// Rebuilds `e` over `target`, mapping variables by name.  Every variable that
// actually occurs in `e` must exist in `target`.
Expression remap(const Expression& e, VarSetPtr target);

// True when variable `index` occurs in the expression.
bool uses_variable(const Expression& e, int index);

}  // namespace sfreg
