// acceptance.cpp
// --------------
// End-to-end acceptance gate for the toolkit.  Each numbered criterion is an
// independent check with a hard time budget where one applies; the binary
// prints one PASS/FAIL line per criterion and exits with the number of
// failures.  Checks recompute everything from scratch — golden values are
// inlined here rather than read back from the library's own data — so a
// regression in any layer (exact arithmetic, synthesis, blow-up,
// classification, integration, the command-line tool) surfaces as a failed
// line.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <quadmath.h>

#include <json.hpp>

#include "sfreg/errors.hpp"
#include "sfreg/expr.hpp"
#include "sfreg/jet.hpp"
#include "sfreg/polynomial.hpp"
#include "sfreg/psvf.hpp"
#include "sfreg/registry.hpp"
#include "sfreg/regularize.hpp"
#include "sfreg/roots.hpp"
#include "sfreg/sfgeom.hpp"
#include "sfreg/simulate.hpp"
#include "sfreg/transition.hpp"

// Quad-precision exp hook so eval<__float128> works; the finite-difference
// oracle below runs entirely in quad precision to keep its own error far
// below the tolerance it checks.
namespace sfreg::detail {
template <>
__float128 exp_value<__float128>(__float128 x) {
    return expq(x);
}
}  // namespace sfreg::detail

namespace {

using namespace sfreg;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Rational rat(const std::string& text) { return Rational::parse(text); }

TransitionFunction synth(const std::vector<std::pair<const char*, const char*>>& values,
                         const std::vector<std::pair<const char*, const char*>>& derivs = {}) {
    TransitionConstraints c;
    for (const auto& [t, v] : values) c.values.emplace_back(rat(t), rat(v));
    for (const auto& [t, v] : derivs) c.derivs.emplace_back(rat(t), rat(v));
    return synthesize(c);
}

Polynomial expect_poly(const std::string& text, const VarSetPtr& target) {
    return to_polynomial(parse_expression(text, target));
}

// Expected blow-up polynomial that may mention the sweep parameter: parsed
// over {x, y, eps, lam}, the parameter substituted exactly, then embedded
// into the system's own variable set.
Polynomial expect_poly_lam(const std::string& text, const Rational& lam,
                           const VarSetPtr& target) {
    const VarSetPtr four = make_varset({"x", "y", "eps", "lam"});
    return to_polynomial(parse_expression(text, four)).substituted(3, lam).embedded(target);
}

// --- criterion outcome plumbing ----------------------------------------------------

struct Outcome {
    bool pass = false;
    std::string detail;
};

int g_failed = 0;

void run(int num, const char* title, double budget_ms, const std::function<Outcome()>& body) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("unexpected exception: ") + e.what();
    }
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    bool pass = o.pass;
    if (pass && budget_ms > 0.0 && ms > budget_ms) {
        pass = false;
        o.detail = "over the " + fmt(budget_ms / 1000.0) + " s budget";
    }
    std::printf("%s %2d  %-72s [%9.1f ms]\n", pass ? "PASS" : "FAIL", num, title, ms);
    if (!pass && !o.detail.empty()) std::printf("         %s\n", o.detail.c_str());
    if (!pass) ++g_failed;
    std::fflush(stdout);
}

// --- shared fuzz corpus (criteria 5 and 6) -----------------------------------------

struct FuzzPair {
    PSVF z;
    TransitionFunction tf;
};

std::vector<FuzzPair> g_corpus;

// Piecewise fields with polynomial components of total degree <= 3 and
// transition functions of degree <= 7 synthesized from random interior
// constraints.  Fixed seed: the corpus is identical on every run.
void build_corpus(std::size_t n) {
    if (g_corpus.size() >= n) return;
    g_corpus.clear();
    g_corpus.reserve(n);
    std::mt19937_64 rng(0x5eedf00d2026ULL);
    const VarSetPtr plane = make_varset({"x", "y"});

    auto rand_rat = [&rng]() {
        const long num = static_cast<long>(rng() % 13) - 6;  // -6 .. 6
        const long den = 1 + static_cast<long>(rng() % 4);   // 1 .. 4
        return Rational(num) / Rational(den);
    };
    auto rand_field = [&]() {
        Polynomial p(plane);
        for (unsigned i = 0; i <= 3; ++i)
            for (unsigned j = 0; i + j <= 3; ++j)
                if (rng() % 100 < 45) p.add_term({i, j}, rand_rat());
        if (p.is_zero()) p.add_term({0, 0}, Rational(1));
        return p.to_expression();
    };

    const std::array<const char*, 9> abscissas = {"-4/5", "-3/5", "-2/5", "-1/5", "0",
                                                  "1/5",  "2/5",  "3/5",  "4/5"};
    auto rand_tf = [&]() {
        for (;;) {
            std::array<std::size_t, 9> idx{};
            for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
            std::shuffle(idx.begin(), idx.end(), rng);
            const std::size_t extra = rng() % 5;  // degree 3 .. 7
            TransitionConstraints c;
            for (std::size_t k = 0; k < extra; ++k) {
                const Rational t = rat(abscissas[idx[k]]);
                if (rng() % 100 < 70)
                    c.values.emplace_back(t, rand_rat());
                else
                    c.derivs.emplace_back(t, rand_rat());
            }
            try {
                return synthesize(c);
            } catch (const Error&) {
                // singular constraint matrix: redraw
            }
        }
    };

    for (std::size_t i = 0; i < n; ++i) {
        PSVF z{rand_field(), rand_field(), rand_field(), rand_field(), plane};
        g_corpus.push_back({std::move(z), rand_tf()});
    }
}

// --- catalog traversal (criteria 4 and 7) ------------------------------------------

struct CatalogPass {
    const ExampleRecord& rec;
    std::string lam_text;  // empty when the record has no sweep
    SlowFastSystem sfs;
    std::optional<PSVF> z;  // engaged for piecewise records
    TransitionFunction tf;
    const std::vector<VerdictSpec>* verdicts;
};

// Rebuilds model and transition function for every record (and every sweep
// value) of the bundled catalog, independently of the library's own
// verification path.
template <typename Fn>
void for_each_catalog_pass(const Registry& reg, Fn&& fn) {
    const VarSetPtr lamset = make_varset({"lam"});
    for (const ExampleRecord& rec : reg.list_examples()) {
        struct Slot {
            const Rational* lam;
            std::string text;
            const std::vector<VerdictSpec>* verdicts;
        };
        std::vector<Slot> slots;
        if (rec.sweep.empty()) {
            slots.push_back({nullptr, "", &rec.verdicts});
        } else {
            for (const SweepEntry& se : rec.sweep)
                slots.push_back({&se.lam, se.lam_text, &se.verdicts});
        }
        for (const Slot& slot : slots) {
            const Rational lam = slot.lam ? *slot.lam : Rational(0);
            const std::array<Rational, 1> lpt{lam};
            auto cval = [&](const std::string& text) {
                return exact_eval(parse_expression(text, lamset),
                                  std::span<const Rational>(lpt.data(), lpt.size()));
            };
            TransitionConstraints tc;
            for (const ConstraintSpec& c : rec.phi_values) tc.values.emplace_back(c.t, cval(c.value));
            for (const ConstraintSpec& c : rec.phi_derivs) tc.derivs.emplace_back(c.t, cval(c.value));
            TransitionFunction tf = synthesize(tc);

            CatalogPass pass{rec, slot.text, SlowFastSystem{}, std::nullopt, tf, slot.verdicts};
            if (rec.model_kind == "psvf") {
                json mj = json::parse(rec.model_json);
                if (slot.lam) mj["params"] = {{"lam", slot.text}};
                pass.z = psvf_from_json(mj.dump());
                pass.sfs = blowup_linear(*pass.z, tf);
            } else {
                const NonlinearFamily fam = family_from_json(rec.model_json);
                pass.sfs = blowup_nonlinear(fam, tf);
            }
            fn(pass);
        }
    }
}

// --- criteria ----------------------------------------------------------------------

// 1. Parallel same-sign sides with the quartic transition pinned to 3 at the
//    origin: the fast side of the blow-up must equal the stated quartic
//    exactly (rational coefficient comparison, no floats).
Outcome crit1() {
    const VarSetPtr plane = make_varset({"x", "y"});
    const PSVF z{parse_expression("1", plane), parse_expression("0", plane),
                 parse_expression("2", plane), parse_expression("0", plane), plane};
    const TransitionFunction tf = synth({{"0", "3"}});
    const SlowFastSystem sfs = blowup_linear(z, tf);
    const Polynomial got_f = to_polynomial(sfs.f);
    const Polynomial want_f =
        expect_poly("-3/4*x + 3*x^2 + 1/4*x^3 - 3/2*x^4", sfs.vars);
    if (!(got_f == want_f))
        return {false, "fast side came out as " + to_string(got_f.to_expression())};
    if (!to_polynomial(sfs.g).is_zero())
        return {false, "slow side is not identically zero"};
    return {true, {}};
}

// 2. Cusp unfolding X = (-y^2 + lam, 1), Y = (1, 1) with the plateau quintic
//    transition: blow-up coefficient-exact at three parameter values.
Outcome crit2() {
    const TransitionFunction tf = synth({{"0", "1"}}, {{"0", "0"}});
    const std::string expected_f =
        "1/4*(lam*(4 - x^2*(x - 1)^2*(3*x + 4)) + x^2*(x - 1)^2*(3*x + 4)*(y^2 + 1) - 4*y^2)";
    for (const char* lam_text : {"-1/10", "0", "1/10"}) {
        json mj = {{"X", {"-y^2 + lam", "1"}},
                   {"Y", {"1", "1"}},
                   {"params", {{"lam", lam_text}}}};
        const PSVF z = psvf_from_json(mj.dump());
        const SlowFastSystem sfs = blowup_linear(z, tf);
        const Rational lam = rat(lam_text);
        if (!(to_polynomial(sfs.f) == expect_poly_lam(expected_f, lam, sfs.vars)))
            return {false, std::string("fast side mismatch at lam = ") + lam_text};
        if (!(to_polynomial(sfs.g) == expect_poly("1", sfs.vars)))
            return {false, std::string("slow side mismatch at lam = ") + lam_text};
    }
    return {true, {}};
}

// 3. The seven pinned transition functions synthesize coefficient-exactly
//    from their interior constraints alone.
Outcome crit3() {
    struct Golden {
        std::vector<std::pair<const char*, const char*>> values;
        std::vector<std::pair<const char*, const char*>> derivs;
        const char* closed;
    };
    const std::vector<Golden> goldens = {
        {{{"0", "0"}}, {}, "-1/2*t^3 + 3/2*t"},
        {{{"0", "1"}}, {}, "t^4 - 1/2*t^3 - 2*t^2 + 3/2*t + 1"},
        {{{"0", "3"}}, {}, "3*t^4 - 1/2*t^3 - 6*t^2 + 3/2*t + 3"},
        {{{"0", "1"}}, {{"0", "0"}}, "-3/2*t^5 + t^4 + 5/2*t^3 - 2*t^2 + 1"},
        {{{"0", "1"}, {"1/2", "5/4"}}, {{"0", "0"}},
         "3*t^6 - 3/2*t^5 - 5*t^4 + 5/2*t^3 + t^2 + 1"},
        {{{"0", "-1"}}, {{"0", "0"}}, "-3/2*t^5 - t^4 + 5/2*t^3 + 2*t^2 - 1"},
        {{{"0", "0"}}, {{"0", "1"}}, "-1/2*t^5 + 1/2*t^3 + t"},
    };
    const VarSetPtr tset = make_varset({"t"});
    for (const Golden& g : goldens) {
        const TransitionFunction tf = synth(g.values, g.derivs);
        if (!(tf.interior_polynomial(tset, 0) == expect_poly(g.closed, tset)))
            return {false, std::string("mismatch for the family with closed form ") + g.closed};
    }
    return {true, {}};
}

// 4. Every pinned classification verdict in the bundled catalog recomputes to
//    the stored value, and the pinned set covers all the landmark cases: a
//    fold away from the origin, a transcritical point at the cusp value, a
//    blend-family pitchfork, normally hyperbolic points, and two five-value
//    parameter sweeps that stay transcritical throughout.
Outcome crit4() {
    const Registry reg;
    int checked = 0;
    std::vector<std::string> mismatches;
    bool saw_fold_offset = false, saw_pitchfork = false, saw_nh = false, saw_cusp_tc = false;
    std::map<std::string, int> persistent_hits;

    for_each_catalog_pass(reg, [&](const CatalogPass& p) {
        for (const VerdictSpec& v : *p.verdicts) {
            std::string got;
            try {
                const SingularityReport r = classify_generic(
                    p.sfs, rat(v.x).to_double(), rat(v.y).to_double());
                got = sf_verdict_name(r.verdict);
            } catch (const NotOnCriticalSet&) {
                got = "not_on_critical_set";
            }
            ++checked;
            if (got != v.expect) {
                mismatches.push_back(p.rec.id + (p.lam_text.empty() ? "" : " lam=" + p.lam_text) +
                                     " (" + v.x + ", " + v.y + "): expected " + v.expect +
                                     ", got " + got);
                continue;
            }
            if (v.expect == "sf_fold" && v.x == "3/8") saw_fold_offset = true;
            if (v.expect == "sf_pitchfork") saw_pitchfork = true;
            if (v.expect == "normally_hyperbolic") saw_nh = true;
            if (v.expect == "sf_transcritical" && p.lam_text == "0" && v.x == "0" && v.y == "0")
                saw_cusp_tc = true;
            if (p.rec.id.find("persistent") != std::string::npos &&
                v.expect == "sf_transcritical")
                ++persistent_hits[p.rec.id];
        }
    });

    if (!mismatches.empty())
        return {false, std::to_string(mismatches.size()) + " mismatches; first: " +
                           mismatches.front()};
    bool sweeps_complete = persistent_hits.size() == 2;
    for (const auto& [id, hits] : persistent_hits) sweeps_complete = sweeps_complete && hits == 5;
    if (!(saw_fold_offset && saw_pitchfork && saw_nh && saw_cusp_tc && sweeps_complete))
        return {false, "catalog no longer covers all landmark verdicts (" +
                           std::to_string(checked) + " checked)"};
    return {true, {}};
}

// 5. Over the fuzz corpus: classifying equilibria of the linear blow-up never
//    yields a pitchfork, and forcing the pitchfork condition set at sampled
//    heights always returns the impossibility verdict with at least one
//    violated ledger entry.
Outcome crit5() {
    build_corpus(1000);
    const std::array<const char*, 5> height_texts = {"-3/4", "-1/4", "0", "1/4", "3/4"};
    std::size_t classified = 0, attempts = 0;

    for (std::size_t pair_i = 0; pair_i < g_corpus.size(); ++pair_i) {
        const FuzzPair& fp = g_corpus[pair_i];
        const SlowFastSystem sfs = blowup_linear(fp.z, fp.tf);
        const Polynomial fast = to_polynomial(sfs.f);
        const int xi = sfs.vars->index_of("x");
        const int yi = sfs.vars->index_of("y");
        const int ei = sfs.vars->index_of("eps");

        for (const char* ht : height_texts) {
            const Rational y0 = rat(ht);

            // Equilibria of the layer problem at this height, found from the
            // exact fast polynomial at eps = 0.
            const Polynomial layer = fast.substituted(yi, y0).substituted(ei, Rational(0));
            if (!layer.is_zero()) {
                const UniPoly u = to_unipoly(layer, xi);
                for (const RealRoot& r :
                     isolate_roots(u, Rational(-1), Rational(1), true, true)) {
                    try {
                        const SingularityReport sr =
                            classify_generic(sfs, r.value, y0.to_double());
                        ++classified;
                        if (sr.verdict == SfVerdict::sf_pitchfork)
                            return {false, "pitchfork verdict at pair " +
                                               std::to_string(pair_i) + ", height " + ht};
                    } catch (const NotOnCriticalSet&) {
                        // root too blunt numerically; not a classification case
                    }
                }
            }

            try {
                const SingularityReport attempt = linear_pitchfork_attempt(fp.z, fp.tf, y0);
                ++attempts;
                if (attempt.verdict != SfVerdict::impossible_linear_pitchfork)
                    return {false, "forced attempt returned " +
                                       std::string(sf_verdict_name(attempt.verdict)) +
                                       " at pair " + std::to_string(pair_i)};
                bool violated = false;
                for (const LedgerEntry& e : attempt.ledger) violated = violated || !e.satisfied;
                if (!violated)
                    return {false, "forced attempt ledger fully satisfied at pair " +
                                       std::to_string(pair_i) + ", height " + ht};
            } catch (const NoFastEquilibrium&) {
                // nothing to attempt at this height
            }
        }
    }

    if (g_corpus.size() < 1000 || classified < 1000 || attempts < 1000)
        return {false, "insufficient coverage: " + std::to_string(g_corpus.size()) +
                           " pairs, " + std::to_string(classified) + " classifications, " +
                           std::to_string(attempts) + " forced attempts"};
    return {true, {}};
}

// 6. For every corpus pair with a non-monotone transition function, each
//    interior critical point of the transition whose layer equation is
//    solvable produces only non-hyperbolic points of the critical set.
Outcome crit6() {
    build_corpus(1000);
    std::size_t pairs = 0, heights = 0;
    for (std::size_t pair_i = 0; pair_i < g_corpus.size(); ++pair_i) {
        const FuzzPair& fp = g_corpus[pair_i];
        if (fp.tf.is_monotonic()) continue;
        const TheoremAReport rep = theorem_a_report(fp.z, fp.tf, -1.0, 1.0);
        for (const PhiCriticalHeights& pc : rep.phi_critical) {
            heights += pc.heights.size();
            if (!pc.all_non_nh)
                return {false, "hyperbolic point above a critical abscissa at pair " +
                                   std::to_string(pair_i) + ", x_c = " + fmt(pc.x_c)};
        }
        ++pairs;
    }
    if (pairs == 0 || heights == 0)
        return {false, "corpus produced no non-monotone cases with solvable heights"};
    return {true, {}};
}

// 7. Across the catalog's piecewise records, the slow dynamics of the
//    blow-up matches the sliding field on at least 100 sampled critical-set
//    points (sides separated by more than 1e-3) to relative error 1e-9.
Outcome crit7() {
    const Registry reg;
    std::size_t samples = 0;
    double worst = 0.0;
    std::string worst_at;
    for_each_catalog_pass(reg, [&](const CatalogPass& p) {
        if (!p.z) return;
        const TheoremAReport rep = theorem_a_report(*p.z, p.tf, -1.0, 1.0);
        for (const SlowSlidingSample& s : rep.sliding_samples) {
            ++samples;
            if (s.rel_err > worst) {
                worst = s.rel_err;
                worst_at = p.rec.id + " at (" + fmt(s.x) + ", " + fmt(s.y) + ")";
            }
        }
    });
    if (samples < 100)
        return {false, "only " + std::to_string(samples) + " sampled points"};
    if (worst > 1e-9)
        return {false, "worst relative error " + fmt(worst) + " for " + worst_at};
    return {true, {}};
}

// 8. Landing offsets behind the canonical fold scale as the 2/3 power of the
//    layer width across the default five-width ladder.
Outcome crit8() {
    const VarSetPtr vars = make_varset({"x", "y", "eps"});
    const SlowFastSystem fold{parse_expression("x^2 - y", vars),
                              parse_expression("-1", vars), vars};
    const LandingFit fit = fold_landing_fit(fold, 0.0, 0.0, 0.5, default_epsilons());
    if (std::fabs(fit.exponent - 2.0 / 3.0) > 0.1)
        return {false, "exponent " + fmt(fit.exponent) + " outside 2/3 +/- 0.1"};
    if (!(fit.r_squared > 0.98))
        return {false, "fit quality R^2 = " + fmt(fit.r_squared)};
    return {true, {}};
}

// 9. Section-map widths across the canonical fold contract exponentially:
//    eps * log(1/width) decreases strictly along the resolved prefix of the
//    descending width ladder (deeper widths sink below float resolution).
Outcome crit9() {
    const VarSetPtr vars = make_varset({"x", "y", "eps"});
    const SlowFastSystem fold{parse_expression("x^2 - y", vars),
                              parse_expression("-1", vars), vars};
    const Section din = Section::horizontal(0.09, -0.4, -0.2);
    const Section dout = Section::vertical(0.3);
    IntegrateOptions opts;
    opts.rtol = 1e-11;
    opts.atol = 1e-15;
    const std::vector<double> eps = {1e-2, std::pow(10.0, -2.25), std::pow(10.0, -2.5)};
    const ContractionReport rep = contraction_estimate(fold, eps, din, dout, 7, 2.0, opts);
    if (!rep.contracting) return {false, "not contracting: " + rep.note};
    std::size_t resolved = 0;
    while (resolved < rep.table.size() && rep.table[resolved].resolved) ++resolved;
    if (resolved < 2)
        return {false, "fewer than two resolved widths (" + std::to_string(resolved) + ")"};
    for (std::size_t i = 1; i < resolved; ++i) {
        if (!(rep.table[i].width < rep.table[i - 1].width))
            return {false, "widths not strictly decreasing at rung " + std::to_string(i)};
        if (!(rep.table[i].rate < rep.table[i - 1].rate))
            return {false, "eps*log(1/width) not strictly decreasing at rung " +
                               std::to_string(i)};
    }
    return {true, {}};
}

// --- criterion 10: jets against a quad-precision finite-difference oracle ----------

using Q = __float128;

template <typename F>
Q central(int order, const F& f, Q t, Q h) {
    switch (order) {
        case 0:
            return f(t);
        case 1:
            return (f(t + h) - f(t - h)) / (Q(2) * h);
        case 2:
            return (f(t + h) - Q(2) * f(t) + f(t - h)) / (h * h);
        default:
            return (f(t + Q(2) * h) - Q(2) * f(t + h) + Q(2) * f(t - h) - f(t - Q(2) * h)) /
                   (Q(2) * h * h * h);
    }
}

Q mixed_fd(const Expression& e, double px, double py, int ax, int ay, Q h) {
    auto outer = [&](Q xx) {
        auto inner = [&](Q yy) {
            const std::array<Q, 2> p{xx, yy};
            return eval<Q>(e, std::span<const Q>(p.data(), p.size()));
        };
        return central(ay, inner, Q(py), h);
    };
    return central(ax, outer, Q(px), h);
}

// One Richardson step over the second-order central stencils: truncation
// error O(h^4) with h = 2^-16, far below the 1e-6 tolerance, while quad
// arithmetic keeps the cancellation error negligible.
double richardson_fd(const Expression& e, double px, double py, int ax, int ay) {
    const Q h = Q(1) / Q(65536);
    const Q d1 = mixed_fd(e, px, py, ax, ay, h);
    const Q d2 = mixed_fd(e, px, py, ax, ay, h / Q(2));
    return static_cast<double>((Q(4) * d2 - d1) / Q(3));
}

NodePtr rand_node(std::mt19937_64& rng, int depth) {
    const auto pick = rng() % 100;
    if (depth <= 0 || pick < 28) {
        if (rng() % 5 < 3) return make_var(static_cast<int>(rng() % 2));
        const long num = static_cast<long>(rng() % 9) - 4;
        const long den = 1 + static_cast<long>(rng() % 4);
        return make_const(Rational(num) / Rational(den));
    }
    if (pick < 50) return make_add({rand_node(rng, depth - 1), rand_node(rng, depth - 1)});
    if (pick < 70) return make_mul({rand_node(rng, depth - 1), rand_node(rng, depth - 1)});
    if (pick < 78) return make_neg(rand_node(rng, depth - 1));
    if (pick < 86) return make_pow(rand_node(rng, depth - 1), 2 + static_cast<int>(rng() % 2));
    if (pick < 93) {
        // denominator 3/2 + s^2 is bounded away from zero on the real line
        NodePtr den = make_add(
            {make_const(Rational(3) / Rational(2)), make_pow(rand_node(rng, depth - 1), 2)});
        return make_div(rand_node(rng, depth - 1), std::move(den));
    }
    return make_exp(make_mul({make_const(Rational(1) / Rational(4)), rand_node(rng, depth - 1)}));
}

// 10. 1000 random smooth expressions at random points: every partial
//     derivative up to order 3 from the forward-mode jet agrees with the
//     quad-precision Richardson finite difference to relative error 1e-6.
Outcome crit10() {
    std::mt19937_64 rng(0x0ace9710ULL);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    const VarSetPtr plane = make_varset({"x", "y"});
    const std::array<std::array<int, 2>, 9> indices = {
        {{1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}, {3, 0}, {2, 1}, {1, 2}, {0, 3}}};
    const std::array<int, 2> wrt = {0, 1};

    std::size_t accepted = 0;
    for (std::size_t attempt = 0; attempt < 40000 && accepted < 1000; ++attempt) {
        const Expression e(rand_node(rng, 4), plane);
        if (!e.valid()) continue;
        const std::array<double, 2> p{coord(rng), coord(rng)};

        std::array<double, 9> jv{};
        bool usable = true;
        try {
            const Jet jet = eval_jet(e, std::span<const double>(p.data(), p.size()),
                                     std::span<const int>(wrt.data(), wrt.size()), 3);
            for (std::size_t k = 0; k < indices.size(); ++k) {
                jv[k] = jet.derivative({indices[k][0], indices[k][1]});
                usable = usable && std::isfinite(jv[k]) && std::fabs(jv[k]) <= 1e4;
            }
            usable = usable && std::isfinite(jet.value()) && std::fabs(jet.value()) <= 1e4;
        } catch (const EvaluationSingular&) {
            usable = false;
        }
        if (!usable) continue;  // overflow-prone draw: redraw, it exercises nothing new

        for (std::size_t k = 0; k < indices.size(); ++k) {
            const double fd = richardson_fd(e, p[0], p[1], indices[k][0], indices[k][1]);
            if (!std::isfinite(fd)) {
                usable = false;
                break;
            }
            const double rel = std::fabs(jv[k] - fd) / std::max(1.0, std::fabs(fd));
            if (rel >= 1e-6)
                return {false, "partial (" + std::to_string(indices[k][0]) + "," +
                                   std::to_string(indices[k][1]) + ") off by rel " + fmt(rel) +
                                   " for " + to_string(e) + " at (" + fmt(p[0]) + ", " +
                                   fmt(p[1]) + "): jet " + fmt(jv[k]) + ", oracle " + fmt(fd)};
        }
        if (usable) ++accepted;
    }
    if (accepted < 1000)
        return {false, "only " + std::to_string(accepted) + " usable samples out of the draw"};
    return {true, {}};
}

// 11. The command-line tool reproduces the whole bundled catalog.
Outcome crit11() {
    const std::string cmd = std::string(SFREG_CLI_PATH) + " reproduce --all > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    if (rc != 0) return {false, "exit status " + std::to_string(rc)};
    return {true, {}};
}

}  // namespace

int main() {
    std::printf("acceptance gate: 11 criteria\n\n");
    run(1, "parallel-sides model blows up to the exact quartic fast side", 1000, crit1);
    run(2, "cusp-unfolding blow-up is coefficient-exact at three parameter values", 1000, crit2);
    run(3, "seven pinned transition functions synthesize coefficient-exactly", 1000, crit3);
    run(4, "classification verdicts match every pinned point in the catalog", 5000, crit4);
    run(5, "convex smoothing never yields a pitchfork; forced attempts contradict", 60000, crit5);
    run(6, "critical transition slopes land on non-hyperbolic points (fuzz)", 0, crit6);
    run(7, "slow dynamics matches the sliding field on catalog critical sets", 0, crit7);
    run(8, "fold landing offsets scale with exponent 2/3 in the layer width", 120000, crit8);
    run(9, "section-map widths contract exponentially as the layer thins", 0, crit9);
    run(10, "forward-mode jets agree with quad-precision finite differences", 0, crit10);
    run(11, "the bundled catalog reproduces end-to-end through the CLI", 300000, crit11);
    std::printf("\n%d of 11 criteria passed\n", 11 - g_failed);
    return g_failed;
}
