// expr.cpp
// --------
// Smart constructors, recursive-descent parser, canonical printer and the
// exact/structural operations on expressions.

#include "sfreg/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace sfreg {

// --- smart constructors -------------------------------------------------------

NodePtr make_const(const Rational& c) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Const;
    n->value = c;
    return n;
}

NodePtr make_var(int index) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Var;
    n->var = index;
    return n;
}

NodePtr make_add(std::vector<NodePtr> kids) {
    std::vector<NodePtr> flat;
    flat.reserve(kids.size());
    for (auto& k : kids) {
        if (k->kind == NodeKind::Add)
            flat.insert(flat.end(), k->kids.begin(), k->kids.end());
        else
            flat.push_back(std::move(k));
    }
    if (flat.size() == 1) return flat[0];
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Add;
    n->kids = std::move(flat);
    return n;
}

NodePtr make_mul(std::vector<NodePtr> kids) {
    std::vector<NodePtr> flat;
    flat.reserve(kids.size());
    for (auto& k : kids) {
        if (k->kind == NodeKind::Mul)
            flat.insert(flat.end(), k->kids.begin(), k->kids.end());
        else
            flat.push_back(std::move(k));
    }
    if (flat.size() == 1) return flat[0];
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Mul;
    n->kids = std::move(flat);
    return n;
}

NodePtr make_neg(NodePtr kid) {
    if (kid->kind == NodeKind::Const) return make_const(-kid->value);
    if (kid->kind == NodeKind::Neg) return kid->kids[0];
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Neg;
    n->kids.push_back(std::move(kid));
    return n;
}

NodePtr make_pow(NodePtr base, int exponent) {
    if (exponent < 0) throw Error("Internal", "make_pow requires a non-negative exponent");
    if (base->kind == NodeKind::Const)
        return make_const(base->value.pow(static_cast<unsigned>(exponent)));
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Pow;
    n->exponent = exponent;
    n->kids.push_back(std::move(base));
    return n;
}

NodePtr make_div(NodePtr num, NodePtr den) {
    if (num->kind == NodeKind::Const && den->kind == NodeKind::Const) {
        if (den->value.is_zero())
            throw EvaluationSingular("constant expression divides by zero");
        return make_const(num->value / den->value);
    }
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Div;
    n->kids.push_back(std::move(num));
    n->kids.push_back(std::move(den));
    return n;
}

NodePtr make_exp(NodePtr kid) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Exp;
    n->kids.push_back(std::move(kid));
    return n;
}

// --- Expression factories and operators ---------------------------------------

Expression Expression::constant(const Rational& c, VarSetPtr vars) {
    return {make_const(c), std::move(vars)};
}

Expression Expression::variable(int index, VarSetPtr vars) {
    if (index < 0 || static_cast<std::size_t>(index) >= vars->size())
        throw Error("Internal", "variable index out of range");
    return {make_var(index), std::move(vars)};
}

Expression Expression::variable(const std::string& name, VarSetPtr vars) {
    int idx = vars->index_of(name);
    if (idx < 0) throw UnknownVariable(0, name);
    return {make_var(idx), std::move(vars)};
}

namespace {

void require_same_vars(const Expression& a, const Expression& b) {
    if (!a.valid() || !b.valid())
        throw Error("Internal", "operation on an empty expression");
    if (a.vars() != b.vars() && !(*a.vars() == *b.vars()))
        throw Error("Internal", "combining expressions over different variable sets");
}

}  // namespace

Expression operator+(const Expression& a, const Expression& b) {
    require_same_vars(a, b);
    return {make_add({a.root(), b.root()}), a.vars()};
}

Expression operator-(const Expression& a, const Expression& b) {
    require_same_vars(a, b);
    return {make_add({a.root(), make_neg(b.root())}), a.vars()};
}

Expression operator*(const Expression& a, const Expression& b) {
    require_same_vars(a, b);
    return {make_mul({a.root(), b.root()}), a.vars()};
}

Expression operator/(const Expression& a, const Expression& b) {
    require_same_vars(a, b);
    return {make_div(a.root(), b.root()), a.vars()};
}

Expression Expression::operator-() const {
    if (!valid()) throw Error("Internal", "negating an empty expression");
    return {make_neg(root_), vars_};
}

Expression pow_int(const Expression& base, int exponent) {
    if (!base.valid()) throw Error("Internal", "pow of an empty expression");
    if (exponent < 0)
        return {make_div(make_const(Rational(1)), make_pow(base.root(), -exponent)),
                base.vars()};
    return {make_pow(base.root(), exponent), base.vars()};
}

Expression exp_expr(const Expression& arg) {
    if (!arg.valid()) throw Error("Internal", "exp of an empty expression");
    return {make_exp(arg.root()), arg.vars()};
}

// --- parser --------------------------------------------------------------------

namespace {

struct Parser {
    const std::string& text;
    const VarSetPtr& vars;
    std::size_t pos = 0;

    void skip_space() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' ||
                                     text[pos] == '\n' || text[pos] == '\r'))
            ++pos;
    }

    [[nodiscard]] bool at_end() {
        skip_space();
        return pos >= text.size();
    }

    [[nodiscard]] char peek() {
        skip_space();
        return pos < text.size() ? text[pos] : '\0';
    }

    bool accept(char c) {
        skip_space();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    void expect(char c) {
        skip_space();
        if (pos >= text.size() || text[pos] != c)
            throw ParseError(pos, std::string("expected '") + c + "'");
        ++pos;
    }

    NodePtr parse_sum() {
        std::vector<NodePtr> kids;
        kids.push_back(parse_term());
        while (true) {
            if (accept('+')) {
                kids.push_back(parse_term());
            } else if (accept('-')) {
                kids.push_back(make_neg(parse_term()));
            } else {
                break;
            }
        }
        return make_add(std::move(kids));
    }

    NodePtr parse_term() {
        NodePtr cur = parse_factor();
        while (true) {
            if (accept('*')) {
                cur = make_mul({cur, parse_factor()});
            } else if (accept('/')) {
                cur = make_div(cur, parse_factor());
            } else {
                break;
            }
        }
        return cur;
    }

    NodePtr parse_factor() {
        if (accept('-')) return make_neg(parse_factor());
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (accept('^')) {
            skip_space();
            bool negative = false;
            if (pos < text.size() && text[pos] == '-') {
                negative = true;
                ++pos;
            }
            std::size_t start = pos;
            long exponent = parse_integer_digits();
            if (exponent > 1'000'000)
                throw ParseError(start, "exponent too large");
            if (negative)
                return make_div(make_const(Rational(1)),
                                make_pow(base, static_cast<int>(exponent)));
            return make_pow(base, static_cast<int>(exponent));
        }
        return base;
    }

    long parse_integer_digits() {
        skip_space();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) throw ParseError(start, "expected an integer");
        if (pos - start > 7) throw ParseError(start, "integer exponent too long");
        return std::stol(text.substr(start, pos - start));
    }

    NodePtr parse_atom() {
        skip_space();
        if (pos >= text.size()) throw ParseError(pos, "unexpected end of input");
        char c = text[pos];
        if (c == '(') {
            ++pos;
            NodePtr inner = parse_sum();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        if (c == '.')
            throw ParseError(pos, "decimal literals are not supported; use a ratio like 1/2");
        throw ParseError(pos, std::string("unexpected character '") + c + "'");
    }

    NodePtr parse_number() {
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos < text.size() && text[pos] == '.')
            throw ParseError(pos, "decimal literals are not supported; use a ratio like 1/2");
        mpq_class v;
        if (v.set_str(text.substr(start, pos - start), 10) != 0)
            throw ParseError(start, "invalid integer literal");
        return make_const(Rational(v));
    }

    NodePtr parse_identifier() {
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        std::string name = text.substr(start, pos - start);
        if (name == "exp") {
            skip_space();
            if (pos < text.size() && text[pos] == '(') {
                ++pos;
                NodePtr arg = parse_sum();
                expect(')');
                return make_exp(arg);
            }
        }
        int idx = vars->index_of(name);
        if (idx < 0) throw UnknownVariable(start, name);
        return make_var(idx);
    }
};

}  // namespace

Expression parse_expression(const std::string& text, VarSetPtr vars) {
    Parser p{text, vars};
    NodePtr root = p.parse_sum();
    if (!p.at_end())
        throw ParseError(p.pos, "trailing input after expression");
    return {root, std::move(vars)};
}

// --- printer -------------------------------------------------------------------

namespace {

// Emits a node so that re-parsing reproduces the exact tree.  The flattened
// n-ary sums and products print left to right, matching the parser's
// left-associative folding.
struct Printer {
    const VarSet& vars;
    std::ostringstream out;

    void sum_child_signed(const Node& n, bool first) {
        // Inside a sum, render negatives through the minus sign so that
        // "a - b" re-parses to Add[a, Neg(b)].  A binary minus negates the
        // whole following term, but a LEADING minus is unary and binds to a
        // single factor, so the leading operand may need parentheses.
        if (n.kind == NodeKind::Neg) {
            if (first) {
                out << "-";
                neg_operand(*n.kids[0]);
            } else {
                out << " - ";
                mul_operand(*n.kids[0], /*first_position=*/true);
            }
            return;
        }
        if (n.kind == NodeKind::Const && n.value.sign() < 0) {
            out << (first ? "-" : " - ") << (-n.value).str();
            return;
        }
        if (!first) out << " + ";
        mul_level(n);
    }

    void print(const Node& n) { sum_level(n); }

    void sum_level(const Node& n) {
        if (n.kind == NodeKind::Add) {
            for (std::size_t i = 0; i < n.kids.size(); ++i)
                sum_child_signed(*n.kids[i], i == 0);
            return;
        }
        sum_child_signed(n, /*first=*/true);
    }

    void mul_level(const Node& n) {
        if (n.kind == NodeKind::Mul) {
            for (std::size_t i = 0; i < n.kids.size(); ++i) {
                if (i > 0) out << "*";
                mul_operand(*n.kids[i], i == 0);
            }
            return;
        }
        if (n.kind == NodeKind::Div) {
            mul_operand(*n.kids[0], /*first_position=*/true);
            out << "/";
            div_denominator(*n.kids[1]);
            return;
        }
        unary_level(n);
    }

    // Operand of * or the numerator of /.  In the first position a Div child
    // may print bare (left-associative re-parse rebuilds the same tree); in
    // later positions it must be parenthesized.
    void mul_operand(const Node& n, bool first_position) {
        switch (n.kind) {
            case NodeKind::Add:
            case NodeKind::Neg:
                parenthesized(n);
                return;
            case NodeKind::Const:
                // A non-integer constant after '*' would re-associate
                // ("x*3/4" parses as (x*3)/4), so parenthesize it there.
                if (n.value.sign() < 0 || (!first_position && !n.value.is_integer())) {
                    parenthesized(n);
                    return;
                }
                out << n.value.str();
                return;
            case NodeKind::Div:
                if (!first_position) {
                    parenthesized(n);
                    return;
                }
                mul_level(n);
                return;
            case NodeKind::Mul:
                // Products stay flat by construction, so a nested product only
                // reaches this spot as a Div numerator; printing it bare
                // re-parses into the same left-associated tree.
                mul_level(n);
                return;
            default:
                unary_level(n);
        }
    }

    void div_denominator(const Node& n) {
        // The denominator must bind as a single factor.
        switch (n.kind) {
            case NodeKind::Var:
            case NodeKind::Pow:
            case NodeKind::Exp:
                unary_level(n);
                return;
            case NodeKind::Const:
                if (n.value.sign() >= 0 && n.value.is_integer()) {
                    out << n.value.str();
                    return;
                }
                parenthesized(n);
                return;
            default:
                parenthesized(n);
        }
    }

    void unary_level(const Node& n) {
        switch (n.kind) {
            case NodeKind::Const:
                if (n.value.sign() < 0) {
                    out << "-" << (-n.value).str();
                    return;
                }
                out << n.value.str();
                return;
            case NodeKind::Var:
                out << vars.name(static_cast<std::size_t>(n.var));
                return;
            case NodeKind::Neg:
                out << "-";
                neg_operand(*n.kids[0]);
                return;
            case NodeKind::Pow: {
                const Node& base = *n.kids[0];
                if (base.kind == NodeKind::Var || base.kind == NodeKind::Exp)
                    unary_level(base);
                else
                    parenthesized(base);
                out << "^" << n.exponent;
                return;
            }
            case NodeKind::Exp:
                out << "exp(";
                sum_level(*n.kids[0]);
                out << ")";
                return;
            default:
                parenthesized(n);
        }
    }

    void neg_operand(const Node& n) {
        // Unary minus binds tighter than * and /, so anything except a plain
        // power/atom must be parenthesized to survive the round trip.
        if (n.kind == NodeKind::Var || n.kind == NodeKind::Pow || n.kind == NodeKind::Exp ||
            (n.kind == NodeKind::Const && n.value.sign() >= 0 && n.value.is_integer())) {
            unary_level(n);
            return;
        }
        parenthesized(n);
    }

    void parenthesized(const Node& n) {
        out << "(";
        sum_level(n);
        out << ")";
    }
};

}  // namespace

std::string to_string(const Expression& e) {
    if (!e.valid()) return "";
    Printer p{*e.vars(), {}};
    p.print(*e.root());
    return p.out.str();
}

// --- structural equality ---------------------------------------------------------

namespace {

bool node_equal(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case NodeKind::Const:
            return a.value == b.value;
        case NodeKind::Var:
            return a.var == b.var;
        case NodeKind::Pow:
            if (a.exponent != b.exponent) return false;
            break;
        default:
            break;
    }
    if (a.kids.size() != b.kids.size()) return false;
    for (std::size_t i = 0; i < a.kids.size(); ++i)
        if (!node_equal(*a.kids[i], *b.kids[i])) return false;
    return true;
}

}  // namespace

bool structurally_equal(const Expression& a, const Expression& b) {
    if (!a.valid() || !b.valid()) return a.valid() == b.valid();
    if (!(*a.vars() == *b.vars())) return false;
    return node_equal(*a.root(), *b.root());
}

// --- evaluation -------------------------------------------------------------------

namespace detail {

template <>
double exp_value<double>(double x) {
    return std::exp(x);
}

template <>
long double exp_value<long double>(long double x) {
    return std::exp(x);
}

}  // namespace detail

double eval_double(const Expression& e, std::span<const double> point) {
    return eval<double>(e, point);
}

namespace {

Rational exact_eval_node(const Node& n, std::span<const Rational> point) {
    switch (n.kind) {
        case NodeKind::Const:
            return n.value;
        case NodeKind::Var:
            return point[static_cast<std::size_t>(n.var)];
        case NodeKind::Add: {
            Rational s(0);
            for (const auto& k : n.kids) s += exact_eval_node(*k, point);
            return s;
        }
        case NodeKind::Mul: {
            Rational p(1);
            for (const auto& k : n.kids) p *= exact_eval_node(*k, point);
            return p;
        }
        case NodeKind::Neg:
            return -exact_eval_node(*n.kids[0], point);
        case NodeKind::Pow:
            return exact_eval_node(*n.kids[0], point)
                .pow(static_cast<unsigned>(n.exponent));
        case NodeKind::Div: {
            Rational den = exact_eval_node(*n.kids[1], point);
            if (den.is_zero())
                throw EvaluationSingular("division by zero during exact evaluation");
            return exact_eval_node(*n.kids[0], point) / den;
        }
        case NodeKind::Exp:
            throw NotPolynomial("exp() is not exactly evaluable over the rationals");
    }
    throw Error("Internal", "unreachable expression node kind");
}

}  // namespace

Rational exact_eval(const Expression& e, std::span<const Rational> point) {
    if (!e.valid()) throw Error("Internal", "evaluating an empty expression");
    if (point.size() != e.vars()->size())
        throw Error("Internal", "evaluation point arity mismatch");
    return exact_eval_node(*e.root(), point);
}

// --- structural transforms ----------------------------------------------------------

namespace {

NodePtr substitute_node(const NodePtr& n, int index, const NodePtr& replacement) {
    switch (n->kind) {
        case NodeKind::Const:
            return n;
        case NodeKind::Var:
            return n->var == index ? replacement : n;
        default:
            break;
    }
    std::vector<NodePtr> kids;
    kids.reserve(n->kids.size());
    bool changed = false;
    for (const auto& k : n->kids) {
        NodePtr s = substitute_node(k, index, replacement);
        changed = changed || (s != k);
        kids.push_back(std::move(s));
    }
    if (!changed) return n;
    switch (n->kind) {
        case NodeKind::Add:
            return make_add(std::move(kids));
        case NodeKind::Mul:
            return make_mul(std::move(kids));
        case NodeKind::Neg:
            return make_neg(std::move(kids[0]));
        case NodeKind::Pow:
            return make_pow(std::move(kids[0]), n->exponent);
        case NodeKind::Div:
            return make_div(std::move(kids[0]), std::move(kids[1]));
        case NodeKind::Exp:
            return make_exp(std::move(kids[0]));
        default:
            throw Error("Internal", "unreachable expression node kind");
    }
}

NodePtr remap_node(const NodePtr& n, const std::vector<int>& map) {
    switch (n->kind) {
        case NodeKind::Const:
            return n;
        case NodeKind::Var: {
            int target = map[static_cast<std::size_t>(n->var)];
            if (target < 0) throw UnknownVariable(0, "variable missing from target set");
            return n->var == target ? n : make_var(target);
        }
        default:
            break;
    }
    std::vector<NodePtr> kids;
    kids.reserve(n->kids.size());
    bool changed = false;
    for (const auto& k : n->kids) {
        NodePtr s = remap_node(k, map);
        changed = changed || (s != k);
        kids.push_back(std::move(s));
    }
    if (!changed) return n;
    switch (n->kind) {
        case NodeKind::Add:
            return make_add(std::move(kids));
        case NodeKind::Mul:
            return make_mul(std::move(kids));
        case NodeKind::Neg:
            return make_neg(std::move(kids[0]));
        case NodeKind::Pow:
            return make_pow(std::move(kids[0]), n->exponent);
        case NodeKind::Div:
            return make_div(std::move(kids[0]), std::move(kids[1]));
        case NodeKind::Exp:
            return make_exp(std::move(kids[0]));
        default:
            throw Error("Internal", "unreachable expression node kind");
    }
}

bool node_uses(const Node& n, int index) {
    if (n.kind == NodeKind::Var) return n.var == index;
    for (const auto& k : n.kids)
        if (node_uses(*k, index)) return true;
    return false;
}

}  // namespace

Expression substitute(const Expression& e, int index, const Expression& replacement) {
    if (!e.valid() || !replacement.valid())
        throw Error("Internal", "substitute on an empty expression");
    if (!(*e.vars() == *replacement.vars()))
        throw Error("Internal", "substitute replacement uses a different variable set");
    return {substitute_node(e.root(), index, replacement.root()), e.vars()};
}

Expression remap(const Expression& e, VarSetPtr target) {
    if (!e.valid()) throw Error("Internal", "remap on an empty expression");
    std::vector<int> map(e.vars()->size(), -1);
    for (std::size_t i = 0; i < e.vars()->size(); ++i)
        map[i] = target->index_of(e.vars()->name(i));
    // Unused variables may be absent from the target; used ones must map.
    for (std::size_t i = 0; i < map.size(); ++i)
        if (map[i] < 0 && node_uses(*e.root(), static_cast<int>(i)))
            throw UnknownVariable(0, e.vars()->name(i));
    return {remap_node(e.root(), map), std::move(target)};
}

bool uses_variable(const Expression& e, int index) {
    if (!e.valid()) return false;
    return node_uses(*e.root(), index);
}

}  // namespace sfreg
