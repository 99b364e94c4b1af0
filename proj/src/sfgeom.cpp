// sfgeom.cpp
// ----------
// Critical-set extraction, jet-based singularity classification, predictive
// classification from the smoothing data, and the switching-line region
// analysis.

#include "sfreg/sfgeom.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>

#include "sfreg/errors.hpp"
#include "sfreg/jet.hpp"
#include "sfreg/polynomial.hpp"
#include "sfreg/roots.hpp"

namespace sfreg {

namespace {

constexpr const char* kReqZero = "=0";
constexpr const char* kReqNonzero = "≠0";  // ≠0
constexpr const char* kReqNegative = "<0";
constexpr const char* kReqPositive = ">0";

LedgerEntry req_zero(std::string name, double value) {
    return {std::move(name), value, kReqZero, std::fabs(value) <= kSignTol};
}
LedgerEntry req_nonzero(std::string name, double value) {
    return {std::move(name), value, kReqNonzero, std::fabs(value) > kSignTol};
}
LedgerEntry req_negative(std::string name, double value) {
    return {std::move(name), value, kReqNegative, value < -kSignTol};
}
LedgerEntry req_positive(std::string name, double value) {
    return {std::move(name), value, kReqPositive, value > kSignTol};
}

bool all_satisfied(const std::vector<LedgerEntry>& entries) {
    return std::all_of(entries.begin(), entries.end(),
                       [](const LedgerEntry& e) { return e.satisfied; });
}

// --- critical set ---------------------------------------------------------------

double fast_value(const SlowFastSystem& sfs, double x, double y) {
    const std::array<double, 3> p{x, y, 0.0};
    return eval_double(sfs.f, p);
}

double fast_dx(const SlowFastSystem& sfs, double x, double y) {
    const std::array<double, 3> p{x, y, 0.0};
    const std::array<int, 1> wrt{0};
    return eval_jet(sfs.f, p, wrt, 1).derivative({1});
}

// Bisects fn over [lo, hi] (fn(lo) and fn(hi) of opposite sign) until the
// interval is narrower than tol; returns the midpoint.
template <typename F>
double bisect(F&& fn, double lo, double hi, double flo, double tol) {
    for (int it = 0; it < 200 && (hi - lo) > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = fn(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

CriticalSetSample critical_set(const SlowFastSystem& sfs, const Window& w, int grid_n) {
    if (grid_n < 2) throw Error("InvalidArgument", "critical_set needs at least 2 grid nodes");
    const int n = grid_n;
    const double hx = (w.x_hi - w.x_lo) / (n - 1);
    const double hy = (w.y_hi - w.y_lo) / (n - 1);

    std::vector<std::vector<double>> val(static_cast<std::size_t>(n),
                                         std::vector<double>(static_cast<std::size_t>(n)));
    std::vector<double> xs(static_cast<std::size_t>(n)), ys(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = w.x_lo + i * hx;
    for (int j = 0; j < n; ++j) ys[static_cast<std::size_t>(j)] = w.y_lo + j * hy;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            val[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                fast_value(sfs, xs[static_cast<std::size_t>(i)], ys[static_cast<std::size_t>(j)]);

    std::vector<std::pair<double, double>> pts;
    auto push_point = [&pts](double x, double y) {
        for (const auto& [px, py] : pts)
            if (std::fabs(px - x) < 1e-8 && std::fabs(py - y) < 1e-8) return;
        pts.emplace_back(x, y);
    };

    const double tol = 1e-10;
    // Horizontal scans: zeros of x -> f(x, y_j).
    for (int j = 0; j < n; ++j) {
        const double y = ys[static_cast<std::size_t>(j)];
        for (int i = 0; i < n; ++i) {
            const double v = val[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (v == 0.0) push_point(xs[static_cast<std::size_t>(i)], y);
            if (i + 1 == n) continue;
            const double v2 = val[static_cast<std::size_t>(i + 1)][static_cast<std::size_t>(j)];
            if (v == 0.0 || v2 == 0.0 || (v < 0.0) == (v2 < 0.0)) continue;
            const double x = bisect([&](double t) { return fast_value(sfs, t, y); },
                                    xs[static_cast<std::size_t>(i)],
                                    xs[static_cast<std::size_t>(i + 1)], v, tol);
            push_point(x, y);
        }
    }
    // Vertical scans: zeros of y -> f(x_i, y).
    for (int i = 0; i < n; ++i) {
        const double x = xs[static_cast<std::size_t>(i)];
        for (int j = 0; j + 1 < n; ++j) {
            const double v = val[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            const double v2 = val[static_cast<std::size_t>(i)][static_cast<std::size_t>(j + 1)];
            if (v == 0.0 || v2 == 0.0 || (v < 0.0) == (v2 < 0.0)) continue;
            const double y = bisect([&](double t) { return fast_value(sfs, x, t); },
                                    ys[static_cast<std::size_t>(j)],
                                    ys[static_cast<std::size_t>(j + 1)], v, tol);
            push_point(x, y);
        }
    }

    std::sort(pts.begin(), pts.end());

    // Chain into branches: greedy nearest neighbour with step bounded by
    // twice the grid spacing, grown from both ends of each seed.
    const double max_step = 2.0 * std::max(hx, hy) + 1e-12;
    std::vector<bool> used(pts.size(), false);
    auto nearest = [&](double x, double y) -> int {
        int best = -1;
        double best_d = max_step;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            if (used[k]) continue;
            const double d = std::hypot(pts[k].first - x, pts[k].second - y);
            if (d <= best_d) {
                best_d = d;
                best = static_cast<int>(k);
            }
        }
        return best;
    };

    CriticalSetSample out;
    for (std::size_t seed = 0; seed < pts.size(); ++seed) {
        if (used[seed]) continue;
        used[seed] = true;
        std::vector<std::pair<double, double>> chain{pts[seed]};
        for (int end = 0; end < 2; ++end) {
            while (true) {
                const auto& tip = chain.back();
                const int k = nearest(tip.first, tip.second);
                if (k < 0) break;
                used[static_cast<std::size_t>(k)] = true;
                chain.push_back(pts[static_cast<std::size_t>(k)]);
            }
            std::reverse(chain.begin(), chain.end());
        }
        std::vector<CriticalPoint> branch;
        branch.reserve(chain.size());
        for (const auto& [x, y] : chain) {
            CriticalPoint cp;
            cp.x = x;
            cp.y = y;
            cp.normally_hyperbolic = std::fabs(fast_dx(sfs, x, y)) > kSignTol;
            branch.push_back(cp);
        }
        out.branches.push_back(std::move(branch));
    }
    return out;
}

// --- generic classification ------------------------------------------------------

const char* sf_verdict_name(SfVerdict v) {
    switch (v) {
        case SfVerdict::normally_hyperbolic: return "normally_hyperbolic";
        case SfVerdict::sf_fold: return "sf_fold";
        case SfVerdict::sf_transcritical: return "sf_transcritical";
        case SfVerdict::sf_pitchfork: return "sf_pitchfork";
        case SfVerdict::degenerate: return "degenerate";
        case SfVerdict::impossible_linear_pitchfork: return "impossible_linear_pitchfork";
    }
    return "degenerate";
}

SingularityReport classify_generic(const SlowFastSystem& sfs, double x0, double y0) {
    const std::array<double, 3> p{x0, y0, 0.0};
    const std::array<int, 2> wrt{0, 1};
    const Jet J = eval_jet(sfs.f, p, wrt, 3);

    const double f = J.value();
    if (std::fabs(f) > 1e-8)
        throw NotOnCriticalSet("the fast side does not vanish at the requested point (|f| = " +
                               std::to_string(std::fabs(f)) + ")");

    const double fx = J.derivative({1, 0});
    const double fy = J.derivative({0, 1});
    const double fxx = J.derivative({2, 0});
    const double fxy = J.derivative({1, 1});
    const double fyy = J.derivative({0, 2});
    const double fxxx = J.derivative({3, 0});
    const double det_hess = fxx * fyy - fxy * fxy;
    const double g = eval_double(sfs.g, p);

    SingularityReport r;
    r.x0 = x0;
    r.y0 = y0;

    // Normally hyperbolic: the fast linearization is regular transverse to
    // the critical set.
    {
        std::vector<LedgerEntry> led{req_zero("f", f), req_nonzero("f_x", fx)};
        if (all_satisfied(led)) {
            r.verdict = SfVerdict::normally_hyperbolic;
            r.ledger = std::move(led);
            return r;
        }
    }
    // Fold: quadratic tangency of the critical set with the fast fibres.
    {
        std::vector<LedgerEntry> led{req_zero("f", f), req_zero("f_x", fx),
                                     req_nonzero("f_xx", fxx), req_nonzero("f_y", fy),
                                     req_nonzero("g", g)};
        if (all_satisfied(led)) {
            r.verdict = SfVerdict::sf_fold;
            r.ledger = std::move(led);
            return r;
        }
    }
    // Transcritical: two branches crossing transversally.
    {
        std::vector<LedgerEntry> led{req_zero("f", f), req_zero("f_x", fx), req_zero("f_y", fy),
                                     req_negative("det_hessian", det_hess),
                                     req_nonzero("f_xx", fxx), req_nonzero("g", g)};
        if (all_satisfied(led)) {
            r.verdict = SfVerdict::sf_transcritical;
            r.ledger = std::move(led);
            return r;
        }
    }
    // Pitchfork: cubic branch structure.
    {
        std::vector<LedgerEntry> led{req_zero("f", f),        req_zero("f_x", fx),
                                     req_zero("f_xx", fxx),   req_zero("f_y", fy),
                                     req_nonzero("f_xxx", fxxx), req_nonzero("f_xy", fxy),
                                     req_nonzero("g", g)};
        if (all_satisfied(led)) {
            r.verdict = SfVerdict::sf_pitchfork;
            r.ledger = std::move(led);
            return r;
        }
    }
    r.verdict = SfVerdict::degenerate;
    r.ledger = {req_zero("f", f),
                req_zero("f_x", fx),
                req_nonzero("f_xx", fxx),
                req_nonzero("f_y", fy),
                req_nonzero("f_xy", fxy),
                req_negative("det_hessian", det_hess),
                req_nonzero("f_xxx", fxxx),
                req_nonzero("g", g)};
    r.note = "no generic condition set is fully satisfied";
    return r;
}

// --- predictive classification of the linear smoothing ----------------------------

namespace {

// Value of a side component at (0, y0), exact when the component is a
// rational function, rationalized from a double otherwise.
Rational side_value(const Expression& e, const Rational& y0) {
    const std::array<Rational, 2> p{Rational(0), y0};
    try {
        return exact_eval(e, p);
    } catch (const NotPolynomial&) {
        const std::array<double, 2> pd{0.0, y0.to_double()};
        return Rational::from_double(eval_double(e, pd));
    }
}

struct LayerSolve {
    bool continuum = false;        // A = B = 0: every abscissa solves the equation
    std::vector<RealRoot> roots;   // roots of A + B phi(t) in the open layer
};

// Roots of the layer equation A + B phi(t) = 0 for t in (-1, 1).  Tangent
// roots that exact isolation loses to rounding of A and B are recovered at
// the critical points of phi (where the residual is below tolerance).
LayerSolve layer_roots(const TransitionFunction& tf, const Rational& A, const Rational& B) {
    LayerSolve out;
    const double Ad = A.to_double(), Bd = B.to_double();
    if (std::fabs(Bd) <= kSignTol) {
        out.continuum = std::fabs(Ad) <= kSignTol;
        return out;
    }
    UniPoly P = tf.interior().scaled(B);
    P = P + UniPoly({A});
    if (!P.is_zero()) out.roots = isolate_roots(P, Rational(-1), Rational(1), false, false);
    const double scale = std::max({1.0, std::fabs(Ad), std::fabs(Bd)});
    for (const RealRoot& c : tf.critical_points()) {
        const Rational residual = P.eval_exact(c.rational);
        if (std::fabs(residual.to_double()) > kSignTol * scale) continue;
        // Within tolerance this is a tangency.  Rounding of A and B may have
        // split the double root into a pair of simple roots a few 1e-9
        // apart (or lifted it away entirely); replace any such neighbours
        // with the exact critical point.
        std::erase_if(out.roots,
                      [&](const RealRoot& r) { return std::fabs(r.value - c.value) < 1e-6; });
        RealRoot tangent = c;
        tangent.multiplicity = 2;
        out.roots.push_back(tangent);
    }
    std::sort(out.roots.begin(), out.roots.end(),
              [](const RealRoot& a, const RealRoot& b) { return a.value < b.value; });
    return out;
}

// Everything both linear predictors need at the solved abscissa.
struct LinearStage {
    bool degenerate_line = false;  // A = B = 0 at this height
    Rational A, B, x0, phi0, phi1, phi2, phi3;
    double f1y = 0.0, g1y = 0.0, f1yy = 0.0, g1yy = 0.0;
    double ghat = 0.0;        // slow component on the critical set
    double coupling = 0.0;    // (f1_y + g1_y) + phi0 (f1_y - g1_y)
    double residual = 0.0;    // A + B phi0 (equilibrium certificate)
};

LinearStage solve_linear_stage(const PSVF& z, const TransitionFunction& tf, const Rational& y0) {
    LinearStage s;
    const Rational f1v = side_value(z.f1, y0);
    const Rational g1v = side_value(z.g1, y0);
    s.A = f1v + g1v;
    s.B = f1v - g1v;

    const LayerSolve solve = layer_roots(tf, s.A, s.B);
    if (std::fabs(s.B.to_double()) <= kSignTol) {
        if (!solve.continuum)
            throw NoFastEquilibrium(
                "the layer equation is constant and nonzero at this height; no equilibrium "
                "abscissa exists");
        s.degenerate_line = true;
        s.x0 = Rational(0);
    } else {
        if (solve.roots.empty())
            throw NoFastEquilibrium(
                "the layer equation has no root in the open layer at this height");
        const RealRoot* best = &solve.roots.front();
        for (const RealRoot& r : solve.roots) {
            if (std::fabs(r.value) < std::fabs(best->value) - 1e-15 ||
                (std::fabs(std::fabs(r.value) - std::fabs(best->value)) <= 1e-15 &&
                 r.value < best->value))
                best = &r;
        }
        s.x0 = best->rational;
    }

    s.phi0 = tf.eval_exact(s.x0);
    s.phi1 = tf.eval_deriv_exact(s.x0, 1);
    s.phi2 = tf.eval_deriv_exact(s.x0, 2);
    s.phi3 = tf.eval_deriv_exact(s.x0, 3);
    s.residual = (s.A + s.B * s.phi0).to_double();

    const double y0d = y0.to_double();
    const std::array<double, 2> p{0.0, y0d};
    const std::array<int, 1> wrt{1};
    const Jet jf = eval_jet(z.f1, p, wrt, 2);
    const Jet jg = eval_jet(z.g1, p, wrt, 2);
    s.f1y = jf.derivative({1});
    s.g1y = jg.derivative({1});
    s.f1yy = jf.derivative({2});
    s.g1yy = jg.derivative({2});

    const double phi0d = s.phi0.to_double();
    s.coupling = (s.f1y + s.g1y) + phi0d * (s.f1y - s.g1y);
    const double f2v = eval_double(z.f2, p);
    const double g2v = eval_double(z.g2, p);
    s.ghat = 0.5 * ((f2v + g2v) + phi0d * (f2v - g2v));
    return s;
}

}  // namespace

SingularityReport predict_linear(const PSVF& z, const TransitionFunction& tf,
                                 const Rational& y0) {
    const LinearStage s = solve_linear_stage(z, tf, y0);
    SingularityReport r;
    r.x0 = s.x0.to_double();
    r.y0 = y0.to_double();

    if (s.degenerate_line) {
        r.verdict = SfVerdict::degenerate;
        r.ledger = {req_zero("f1_plus_g1", s.A.to_double()),
                    req_zero("f1_minus_g1", s.B.to_double())};
        r.note =
            "both sides vanish at this height; every abscissa solves the layer equation and "
            "the whole horizontal line lies in the critical set";
        return r;
    }

    const double Bd = s.B.to_double();
    const double phi1d = s.phi1.to_double();
    const double phi2d = s.phi2.to_double();
    const double diag_x = 0.25 * Bd * phi2d;
    const double diag_y = 0.25 * ((1.0 + s.phi0.to_double()) * s.f1yy +
                                  (1.0 - s.phi0.to_double()) * s.g1yy);

    // Normally hyperbolic: the transition slope at the equilibrium abscissa
    // is the fast eigenvalue (up to the nonzero side gap).
    {
        std::vector<LedgerEntry> led{req_zero("layer_residual", s.residual),
                                     req_nonzero("f1_minus_g1", Bd),
                                     req_nonzero("dphi_x0", phi1d)};
        if (all_satisfied(led)) {
            r.verdict = SfVerdict::normally_hyperbolic;
            r.ledger = std::move(led);
            return r;
        }
    }
    // Fold: vanishing slope, surviving curvature and slow coupling.
    {
        std::vector<LedgerEntry> led{req_zero("layer_residual", s.residual),
                                     req_nonzero("f1_minus_g1", Bd),
                                     req_zero("dphi_x0", phi1d),
                                     req_nonzero("d2phi_x0", phi2d),
                                     req_nonzero("slow_coupling", s.coupling),
                                     req_nonzero("slow_g", s.ghat)};
        if (all_satisfied(led)) {
            r.verdict = SfVerdict::sf_fold;
            r.ledger = std::move(led);
            return r;
        }
    }
    // Transcritical: the slow coupling dies and the diagonal determinant of
    // the second-order normal form is negative.
    {
        std::vector<LedgerEntry> led{req_zero("layer_residual", s.residual),
                                     req_nonzero("f1_minus_g1", Bd),
                                     req_zero("dphi_x0", phi1d),
                                     req_nonzero("d2phi_x0", phi2d),
                                     req_zero("slow_coupling", s.coupling),
                                     req_nonzero("diag_x", diag_x),
                                     req_nonzero("diag_y", diag_y),
                                     req_negative("diag_det", diag_x * diag_y),
                                     req_nonzero("slow_g", s.ghat)};
        if (all_satisfied(led)) {
            r.verdict = SfVerdict::sf_transcritical;
            r.ledger = std::move(led);
            return r;
        }
    }
    // Pitchfork stage: structurally unreachable for the linear smoothing.
    r = linear_pitchfork_attempt(z, tf, y0);
    return r;
}

SingularityReport predict_linear(const PSVF& z, const TransitionFunction& tf, double y0) {
    return predict_linear(z, tf, Rational::from_double(y0));
}

SingularityReport linear_pitchfork_attempt(const PSVF& z, const TransitionFunction& tf,
                                           const Rational& y0) {
    const LinearStage s = solve_linear_stage(z, tf, y0);
    SingularityReport r;
    r.x0 = s.x0.to_double();
    r.y0 = y0.to_double();
    r.verdict = SfVerdict::impossible_linear_pitchfork;

    const double Bd = s.B.to_double();
    const double By = s.f1y - s.g1y;
    const double phi1d = s.phi1.to_double();
    const double phi2d = s.phi2.to_double();
    const double phi3d = s.phi3.to_double();

    if (s.degenerate_line) {
        // With both sides equal on the line, the fast component does not
        // depend on the abscissa at all: its third abscissa derivative is
        // identically zero while the condition set needs it nonzero.
        r.ledger = {req_zero("f1_plus_g1", s.A.to_double()),
                    req_zero("f1_minus_g1", Bd),
                    {"fhat_xxx", 0.0, kReqNonzero, false}};
        r.note =
            "the fast component is independent of the abscissa on this line, so the cubic "
            "condition cannot hold";
        return r;
    }

    // The mixed partial of the fast component is the transition slope scaled
    // by the side gap of the y-derivatives; its nonvanishing is decided by
    // the factors, never by the rounded product.
    LedgerEntry fhat_xy{"fhat_xy", 0.5 * phi1d * By, kReqNonzero,
                        std::fabs(phi1d) > kSignTol && std::fabs(By) > kSignTol};
    r.ledger = {req_zero("layer_residual", s.residual),
                req_nonzero("f1_minus_g1", Bd),
                req_zero("dphi_x0", phi1d),
                req_zero("d2phi_x0", phi2d),
                req_nonzero("d3phi_x0", phi3d),
                std::move(fhat_xy),
                req_nonzero("slow_g", s.ghat)};
    r.note =
        "contradictory by construction: dphi_x0 must vanish for non-hyperbolicity while "
        "fhat_xy — the same slope scaled by the y-coupling gap — must not";
    return r;
}

// --- predictive classification of a blend family ---------------------------------

SingularityReport predict_nonlinear(const NonlinearFamily& fam, const TransitionFunction& tf) {
    if (!tf.is_monotonic())
        throw NonMonotonicPhi(
            "the blend predictor requires a monotonic transition function (no interior "
            "critical point of odd multiplicity)");

    const double lam0 = tf.eval(0.0);
    const std::array<double, 3> p{lam0, 0.0, 0.0};
    const std::array<int, 2> wrt{0, 2};  // blend argument and y
    const Jet J = eval_jet(fam.z1, p, wrt, 3);

    const double v = J.value();
    if (std::fabs(v) > 1e-8)
        throw NotOnCriticalSet(
            "the first family component does not vanish at (phi(0), 0, 0); the origin is not "
            "on the critical set");

    const double zl = J.derivative({1, 0});
    const double zy = J.derivative({0, 1});
    const double zll = J.derivative({2, 0});
    const double zly = J.derivative({1, 1});
    const double zyy = J.derivative({0, 2});
    const double zlll = J.derivative({3, 0});
    const double disc = zly * zly - zll * zyy;
    const double z2v = eval_double(fam.z2, p);

    SingularityReport r;
    r.x0 = 0.0;
    r.y0 = 0.0;

    {
        std::vector<LedgerEntry> led{req_zero("z1", v), req_nonzero("z1_lam", zl)};
        if (all_satisfied(led)) {
            r.verdict = SfVerdict::normally_hyperbolic;
            r.ledger = std::move(led);
            return r;
        }
    }
    {
        std::vector<LedgerEntry> led{req_zero("z1", v), req_zero("z1_lam", zl),
                                     req_nonzero("z1_lamlam", zll), req_nonzero("z1_y", zy),
                                     req_nonzero("z2", z2v)};
        if (all_satisfied(led)) {
            r.verdict = SfVerdict::sf_fold;
            r.ledger = std::move(led);
            return r;
        }
    }
    {
        std::vector<LedgerEntry> led{req_zero("z1", v),
                                     req_zero("z1_lam", zl),
                                     req_zero("z1_y", zy),
                                     req_nonzero("z1_lamlam", zll),
                                     req_positive("discriminant", disc),
                                     req_nonzero("z2", z2v)};
        if (all_satisfied(led)) {
            r.verdict = SfVerdict::sf_transcritical;
            r.ledger = std::move(led);
            return r;
        }
    }
    {
        std::vector<LedgerEntry> led{req_zero("z1", v),
                                     req_zero("z1_lam", zl),
                                     req_zero("z1_lamlam", zll),
                                     req_zero("z1_y", zy),
                                     req_nonzero("z1_lamlamlam", zlll),
                                     req_nonzero("z1_lamy", zly),
                                     req_nonzero("z2", z2v)};
        if (all_satisfied(led)) {
            r.verdict = SfVerdict::sf_pitchfork;
            r.ledger = std::move(led);
            return r;
        }
    }
    r.verdict = SfVerdict::degenerate;
    r.ledger = {req_zero("z1", v),
                req_zero("z1_lam", zl),
                req_nonzero("z1_lamlam", zll),
                req_nonzero("z1_y", zy),
                req_nonzero("z1_lamy", zly),
                req_nonzero("z1_lamlamlam", zlll),
                req_positive("discriminant", disc),
                req_nonzero("z2", z2v)};
    r.note = "no generic condition set is fully satisfied";
    return r;
}

// --- switching-line region analysis -----------------------------------------------

namespace {

// Roots of a scalar function of y over [lo, hi] by dense sampling plus
// bisection; used when the exact polynomial route is unavailable.
template <typename F>
std::vector<double> sampled_roots(F&& fn, double lo, double hi) {
    std::vector<double> out;
    const int n = 1024;
    const double h = (hi - lo) / n;
    double prev = fn(lo);
    auto push = [&out](double r) {
        for (double e : out)
            if (std::fabs(e - r) < 1e-9) return;
        out.push_back(r);
    };
    if (prev == 0.0) push(lo);
    for (int i = 1; i <= n; ++i) {
        const double y = lo + i * h;
        const double cur = fn(y);
        if (cur == 0.0) {
            push(y);
        } else if (prev != 0.0 && (prev < 0.0) != (cur < 0.0)) {
            push(bisect(fn, y - h, y, prev, 1e-12));
        }
        prev = cur;
    }
    return out;
}

// Roots of expr(0, y) + scale * other(0, y) over [lo, hi]: exact polynomial
// isolation when possible, sampled bisection otherwise.
std::vector<RealRoot> height_roots(const Expression& base, const Expression& other,
                                   const Rational& scale, double lo, double hi) {
    try {
        const Polynomial pb = to_polynomial(base);
        const Polynomial po = to_polynomial(other);
        const Polynomial h = (pb + po.scaled(scale)).substituted(0, Rational(0));
        const UniPoly hy = to_unipoly(h, 1);
        if (hy.is_zero()) return {};
        return isolate_roots(hy, Rational::from_double(lo), Rational::from_double(hi), true,
                             true);
    } catch (const NotPolynomial&) {
        const double sc = scale.to_double();
        auto fn = [&](double y) {
            const std::array<double, 2> p{0.0, y};
            return eval_double(base, p) + sc * eval_double(other, p);
        };
        std::vector<RealRoot> out;
        for (double r : sampled_roots(fn, lo, hi)) {
            RealRoot rr;
            rr.value = r;
            rr.rational = Rational::from_double(r);
            rr.enclosure_lo = rr.rational;
            rr.enclosure_hi = rr.rational;
            out.push_back(rr);
        }
        return out;
    }
}

}  // namespace

TheoremAReport theorem_a_report(const PSVF& z, const TransitionFunction& tf, double y_lo,
                                double y_hi) {
    if (!(y_lo < y_hi))
        throw Error("InvalidArgument", "the height interval must satisfy y_lo < y_hi");
    TheoremAReport rep;
    const SlowFastSystem sfs = blowup_linear(z, tf);

    auto side_pair = [&](double y) {
        const std::array<double, 2> p{0.0, y};
        const double f1v = eval_double(z.f1, p);
        const double g1v = eval_double(z.g1, p);
        return std::pair<double, double>{f1v + g1v, f1v - g1v};
    };

    // (a) heights generated by the interior critical points of phi: solve
    // (f1+g1)(0,y) + phi(x_c) (f1-g1)(0,y) = 0 and tag non-hyperbolicity.
    // The sum expression is f1 "+" g1 evaluated via the polynomial route on
    // (f1+g1) = base f1 + other g1 with scale 1, shifted by phi(x_c) on the
    // difference; algebraically: f1 (1 + phi) + g1 (1 - phi), handled as
    // base = f1 scaled by (1+phi) plus g1 scaled by (1-phi).
    for (const RealRoot& c : tf.critical_points()) {
        PhiCriticalHeights ph;
        ph.x_c = c.value;
        ph.multiplicity = c.multiplicity;
        const Rational phic = tf.eval_exact(c.rational);
        // (1+phic) f1 + (1-phic) g1 = (f1+g1) + phic (f1-g1)
        std::vector<RealRoot> hs;
        try {
            const Polynomial pf = to_polynomial(z.f1);
            const Polynomial pg = to_polynomial(z.g1);
            const Polynomial h = (pf.scaled(Rational(1) + phic) + pg.scaled(Rational(1) - phic))
                                     .substituted(0, Rational(0));
            const UniPoly hy = to_unipoly(h, 1);
            if (!hy.is_zero())
                hs = isolate_roots(hy, Rational::from_double(y_lo), Rational::from_double(y_hi),
                                   true, true);
        } catch (const NotPolynomial&) {
            const double pc = phic.to_double();
            auto fn = [&](double y) {
                const auto [A, B] = side_pair(y);
                return A + pc * B;
            };
            for (double r : sampled_roots(fn, y_lo, y_hi)) {
                RealRoot rr;
                rr.value = r;
                hs.push_back(rr);
            }
        }
        for (const RealRoot& h : hs) {
            ph.heights.push_back(h.value);
            const double fx = fast_dx(sfs, c.value, h.value);
            if (std::fabs(fx) > kSignTol) ph.all_non_nh = false;
        }
        rep.phi_critical.push_back(std::move(ph));
    }

    // (b) widened sliding: sampled heights whose layer equation has a root
    // even though both sides cross the switching line.
    const Overshoot& ov = tf.overshoot();
    rep.widened.phi_exceeds_one = ov.exceeds_one;
    rep.widened.max_abs_phi = ov.max_abs;
    rep.widened.argmax = ov.argmax;
    {
        const int m = 65;
        bool all_covered = true;
        for (int i = 0; i < m; ++i) {
            const double y = y_lo + (y_hi - y_lo) * i / (m - 1);
            const auto [Ad, Bd] = side_pair(y);
            const LayerSolve ls =
                layer_roots(tf, Rational::from_double(Ad), Rational::from_double(Bd));
            const bool has_root = ls.continuum || !ls.roots.empty();
            if (!has_root) all_covered = false;
            if (classify_sigma_point(z, y).kind == SigmaKind::sewing && has_root)
                rep.widened.crossing_heights.push_back(y);
        }
        rep.widened.all_sampled_heights_covered = all_covered;
    }

    // (c) slow dynamics on the critical set against the sliding field.
    {
        const SlidingField sf = sliding_field(z);
        const int m = 33;
        for (int i = 0; i < m; ++i) {
            const double y = y_lo + (y_hi - y_lo) * i / (m - 1);
            const auto [Ad, Bd] = side_pair(y);
            if (std::fabs(Bd) <= 1e-3 || !sf.in_domain(y)) continue;
            const LayerSolve ls =
                layer_roots(tf, Rational::from_double(Ad), Rational::from_double(Bd));
            const double slide = sf.eval(y);
            for (const RealRoot& root : ls.roots) {
                SlowSlidingSample smp;
                smp.x = root.value;
                smp.y = y;
                const std::array<double, 3> p{root.value, y, 0.0};
                smp.slow_value = eval_double(sfs.g, p);
                smp.sliding_value = slide;
                smp.rel_err = std::fabs(smp.slow_value - slide) /
                              std::max({1.0, std::fabs(smp.slow_value), std::fabs(slide)});
                rep.max_sliding_rel_err = std::max(rep.max_sliding_rel_err, smp.rel_err);
                rep.sliding_samples.push_back(smp);
            }
        }
    }

    // (d) simultaneous-tangency heights: roots of (g1-f1)(0,y) where f1 also
    // vanishes; the horizontal line through such a height lies inside the
    // critical set (certified exactly when possible).
    {
        std::vector<RealRoot> ds = height_roots(z.g1, z.f1, Rational(-1), y_lo, y_hi);
        for (const RealRoot& d : ds) {
            const std::array<double, 2> p{0.0, d.value};
            const double f1v = eval_double(z.f1, p);
            const double g1v = eval_double(z.g1, p);
            if (std::fabs(f1v) > 1e-8) continue;  // not a simultaneous tangency
            TangencyLine tl;
            tl.y0 = d.value;
            tl.f1_value = f1v;
            tl.g1_value = g1v;
            bool certified = false;
            if (d.exact) {
                try {
                    const Polynomial line =
                        to_polynomial(sfs.f).substituted(1, d.rational).substituted(2,
                                                                                    Rational(0));
                    tl.line_in_critical_set = line.is_zero();
                    tl.exact_certificate = true;
                    certified = true;
                } catch (const NotPolynomial&) {
                }
            }
            if (!certified) {
                double worst = 0.0;
                for (int i = 0; i <= 32; ++i) {
                    const double x = -1.0 + 2.0 * i / 32.0;
                    worst = std::max(worst, std::fabs(fast_value(sfs, x, d.value)));
                }
                tl.line_in_critical_set = worst <= 1e-8;
            }
            rep.tangency_lines.push_back(tl);
        }
    }
    return rep;
}

}  // namespace sfreg
