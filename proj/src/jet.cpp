// jet.cpp
// -------
// Jet evaluation of expressions: a recursive walk that carries truncated
// Taylor series through the arithmetic of the tree.

#include "sfreg/jet.hpp"

namespace sfreg {

namespace {

Jet eval_jet_node(const Node& n, std::span<const double> point, std::span<const int> wrt,
                  int order) {
    const int nv = static_cast<int>(wrt.size());
    switch (n.kind) {
        case NodeKind::Const:
            return Jet::constant(nv, order, n.value.to_double());
        case NodeKind::Var: {
            for (std::size_t i = 0; i < wrt.size(); ++i)
                if (wrt[i] == n.var)
                    return Jet::seed(nv, order, static_cast<int>(i),
                                     point[static_cast<std::size_t>(n.var)]);
            return Jet::constant(nv, order, point[static_cast<std::size_t>(n.var)]);
        }
        case NodeKind::Add: {
            Jet s = eval_jet_node(*n.kids[0], point, wrt, order);
            for (std::size_t i = 1; i < n.kids.size(); ++i)
                s = s + eval_jet_node(*n.kids[i], point, wrt, order);
            return s;
        }
        case NodeKind::Mul: {
            Jet p = eval_jet_node(*n.kids[0], point, wrt, order);
            for (std::size_t i = 1; i < n.kids.size(); ++i)
                p = p * eval_jet_node(*n.kids[i], point, wrt, order);
            return p;
        }
        case NodeKind::Neg:
            return -eval_jet_node(*n.kids[0], point, wrt, order);
        case NodeKind::Pow:
            return eval_jet_node(*n.kids[0], point, wrt, order).pow_int(n.exponent);
        case NodeKind::Div: {
            Jet num = eval_jet_node(*n.kids[0], point, wrt, order);
            Jet den = eval_jet_node(*n.kids[1], point, wrt, order);
            return num / den;
        }
        case NodeKind::Exp:
            return eval_jet_node(*n.kids[0], point, wrt, order).exp_jet();
    }
    throw Error("Internal", "unreachable expression node kind");
}

}  // namespace

Jet eval_jet(const Expression& e, std::span<const double> point, std::span<const int> wrt,
             int order) {
    if (!e.valid()) throw Error("Internal", "jet evaluation of an empty expression");
    if (point.size() != e.vars()->size())
        throw Error("Internal", "jet evaluation point arity mismatch");
    if (wrt.size() > static_cast<std::size_t>(Jet::kMaxVars))
        throw Error("Internal", "too many jet seed variables");
    return eval_jet_node(*e.root(), point, wrt, order);
}

}  // namespace sfreg
