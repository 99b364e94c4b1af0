// registry.cpp
// ------------
// Record parsing, recomputation-based verification, and the directory-backed
// catalog declared in registry.hpp.

#include "sfreg/registry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "sfreg/errors.hpp"
#include "sfreg/expr.hpp"
#include "sfreg/polynomial.hpp"
#include "sfreg/psvf.hpp"
#include "sfreg/regularize.hpp"
#include "sfreg/sfgeom.hpp"
#include "sfreg/transition.hpp"

#ifndef SFREG_BUNDLED_REGISTRY
#define SFREG_BUNDLED_REGISTRY "data/registry/v1"
#endif

namespace sfreg {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& message) { throw ParseError(0, message); }

const json& member(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) bad(std::string("record is missing \"") + key + "\"");
    return *it;
}

std::string string_member(const json& j, const char* key) {
    const json& v = member(j, key);
    if (!v.is_string()) bad(std::string("\"") + key + "\" must be a string");
    return v.get<std::string>();
}

// [t, value] string pairs; the key may be absent (empty list).
std::vector<ConstraintSpec> constraint_list(const json& j, const char* key) {
    std::vector<ConstraintSpec> out;
    const auto it = j.find(key);
    if (it == j.end()) return out;
    if (!it->is_array()) bad(std::string("\"") + key + "\" must be an array");
    for (const json& item : *it) {
        if (!item.is_array() || item.size() != 2 || !item[0].is_string() || !item[1].is_string())
            bad(std::string("\"") + key + "\" entries must be [t, value] string pairs");
        out.push_back(
            {Rational::parse(item[0].get<std::string>()), item[1].get<std::string>()});
    }
    return out;
}

std::vector<VerdictSpec> verdict_list(const json& j) {
    std::vector<VerdictSpec> out;
    const auto it = j.find("verdicts");
    if (it == j.end()) return out;
    if (!it->is_array()) bad("\"verdicts\" must be an array");
    for (const json& item : *it) {
        if (!item.is_object()) bad("\"verdicts\" entries must be objects");
        const json& point = member(item, "point");
        if (!point.is_array() || point.size() != 2 || !point[0].is_string() ||
            !point[1].is_string())
            bad("\"point\" must be an array of two rational strings");
        VerdictSpec v;
        v.x = point[0].get<std::string>();
        v.y = point[1].get<std::string>();
        Rational::parse(v.x);  // reject malformed coordinates at load time
        Rational::parse(v.y);
        v.expect = string_member(item, "expect");
        out.push_back(std::move(v));
    }
    return out;
}

TheoremASpec theorem_a_spec(const json& j) {
    TheoremASpec ta;
    const auto it = j.find("theorem_a");
    if (it == j.end()) return ta;
    if (!it->is_object()) bad("\"theorem_a\" must be an object");
    ta.present = true;
    const json& t = *it;
    const json& window = member(t, "window");
    if (!window.is_array() || window.size() != 2 || !window[0].is_string() ||
        !window[1].is_string())
        bad("\"window\" must be an array of two rational strings");
    ta.y_lo = Rational::parse(window[0].get<std::string>());
    ta.y_hi = Rational::parse(window[1].get<std::string>());
    const json& exceeds = member(t, "phi_exceeds_one");
    if (!exceeds.is_boolean()) bad("\"phi_exceeds_one\" must be a boolean");
    ta.phi_exceeds_one = exceeds.get<bool>();
    if (const auto h = t.find("tangency_heights"); h != t.end()) {
        if (!h->is_array()) bad("\"tangency_heights\" must be an array of rational strings");
        for (const json& item : *h) {
            if (!item.is_string()) bad("\"tangency_heights\" entries must be rational strings");
            ta.tangency_heights.push_back(item.get<std::string>());
            Rational::parse(ta.tangency_heights.back());
        }
    }
    if (const auto s = t.find("sliding_rel_err_max"); s != t.end()) {
        if (!s->is_number()) bad("\"sliding_rel_err_max\" must be a number");
        ta.sliding_rel_err_max = s->get<double>();
    }
    return ta;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string poly_text(const Polynomial& p) { return to_string(p.to_expression()); }

// Parses `text` over `names` + {"lam"}, substitutes the sweep value, and
// embeds the result into `target` for exact comparison.
Polynomial expected_polynomial(const std::string& text, const Rational& lam,
                               std::vector<std::string> names, const VarSetPtr& target) {
    names.emplace_back("lam");
    const VarSetPtr wide = make_varset(names);
    Expression e = parse_expression(text, wide);
    e = substitute(e, static_cast<int>(names.size()) - 1, Expression::constant(lam, wide));
    return to_polynomial(e).embedded(target);
}

struct PassContext {
    const ExampleRecord& rec;
    const Rational* lam;   // null when the record has no sweep
    std::string lam_text;  // "" when none
    const std::vector<VerdictSpec>& verdicts;
    const TheoremASpec& theorem_a;
};

void run_pass(const PassContext& ctx, VerifyReport& out) {
    auto diff = [&](std::string quantity, std::string expected, std::string actual) {
        out.diffs.push_back(
            {std::move(quantity), ctx.lam_text, std::move(expected), std::move(actual)});
    };
    try {
        const Rational lam = ctx.lam ? *ctx.lam : Rational(0);

        // Transition function from the stored interior constraints.
        const VarSetPtr lamset = make_varset({"lam"});
        auto constraint_value = [&](const std::string& text) {
            const Rational point[1] = {lam};
            return exact_eval(parse_expression(text, lamset),
                              std::span<const Rational>(point, 1));
        };
        TransitionConstraints tc;
        for (const ConstraintSpec& c : ctx.rec.phi_values)
            tc.values.emplace_back(c.t, constraint_value(c.value));
        for (const ConstraintSpec& c : ctx.rec.phi_derivs)
            tc.derivs.emplace_back(c.t, constraint_value(c.value));
        const TransitionFunction tf = synthesize(tc);

        ++out.checks;
        const VarSetPtr tset = make_varset({"t"});
        const Polynomial phi_got = tf.interior_polynomial(tset, 0);
        const Polynomial phi_want =
            expected_polynomial(ctx.rec.phi_closed_form, lam, {"t"}, tset);
        if (!(phi_got == phi_want))
            diff("phi.closed_form", poly_text(phi_want), poly_text(phi_got));

        // Model and blow-up.
        PSVF z;
        SlowFastSystem sfs;
        if (ctx.rec.model_kind == "psvf") {
            json mj = json::parse(ctx.rec.model_json);
            if (ctx.lam) mj["params"] = json{{"lam", ctx.lam_text}};
            z = psvf_from_json(mj.dump());
            sfs = blowup_linear(z, tf);
        } else {
            const NonlinearFamily fam = family_from_json(ctx.rec.model_json);
            sfs = blowup_nonlinear(fam, tf);
        }

        ++out.checks;
        const Polynomial f_got = to_polynomial(sfs.f);
        const Polynomial f_want =
            expected_polynomial(ctx.rec.blowup_f, lam, {"x", "y", "eps"}, sfs.vars);
        if (!(f_got == f_want)) diff("blowup.f", poly_text(f_want), poly_text(f_got));

        ++out.checks;
        const Polynomial g_got = to_polynomial(sfs.g);
        const Polynomial g_want =
            expected_polynomial(ctx.rec.blowup_g, lam, {"x", "y", "eps"}, sfs.vars);
        if (!(g_got == g_want)) diff("blowup.g", poly_text(g_want), poly_text(g_got));

        // Classification verdicts.
        for (const VerdictSpec& v : ctx.verdicts) {
            ++out.checks;
            std::string actual;
            try {
                const SingularityReport sr = classify_generic(
                    sfs, Rational::parse(v.x).to_double(), Rational::parse(v.y).to_double());
                actual = sf_verdict_name(sr.verdict);
            } catch (const NotOnCriticalSet&) {
                actual = "not_on_critical_set";
            }
            if (actual != v.expect)
                diff("verdict(" + v.x + ", " + v.y + ")", v.expect, actual);
        }

        // Switching-line region report.
        if (ctx.theorem_a.present) {
            if (ctx.rec.model_kind != "psvf") {
                ++out.checks;
                diff("theorem_a", "piecewise model", ctx.rec.model_kind + " model");
                return;
            }
            const TheoremAReport rep = theorem_a_report(
                z, tf, ctx.theorem_a.y_lo.to_double(), ctx.theorem_a.y_hi.to_double());

            ++out.checks;
            if (rep.widened.phi_exceeds_one != ctx.theorem_a.phi_exceeds_one)
                diff("theorem_a.phi_exceeds_one",
                     ctx.theorem_a.phi_exceeds_one ? "true" : "false",
                     rep.widened.phi_exceeds_one ? "true" : "false");

            ++out.checks;
            bool tangency_ok =
                rep.tangency_lines.size() == ctx.theorem_a.tangency_heights.size();
            for (const std::string& height : ctx.theorem_a.tangency_heights) {
                const double h = Rational::parse(height).to_double();
                const bool found = std::any_of(
                    rep.tangency_lines.begin(), rep.tangency_lines.end(),
                    [&](const TangencyLine& line) {
                        return std::abs(line.y0 - h) < 1e-8 && line.line_in_critical_set;
                    });
                tangency_ok = tangency_ok && found;
            }
            if (!tangency_ok) {
                std::string expected = "{";
                for (const std::string& height : ctx.theorem_a.tangency_heights)
                    expected += (expected.size() > 1 ? ", " : "") + height;
                expected += "}";
                std::string actual = "{";
                for (const TangencyLine& line : rep.tangency_lines) {
                    if (actual.size() > 1) actual += ", ";
                    actual += format_double(line.y0);
                    if (!line.line_in_critical_set) actual += " (not in critical set)";
                }
                actual += "}";
                diff("theorem_a.tangency_heights", expected, actual);
            }

            if (ctx.theorem_a.sliding_rel_err_max >= 0) {
                ++out.checks;
                if (!(rep.max_sliding_rel_err <= ctx.theorem_a.sliding_rel_err_max))
                    diff("theorem_a.max_sliding_rel_err",
                         "<= " + format_double(ctx.theorem_a.sliding_rel_err_max),
                         format_double(rep.max_sliding_rel_err));
            }
        }
    } catch (const Error& e) {
        ++out.checks;
        diff("pass", "completed without a library error",
             e.kind() + ": " + std::string(e.what()));
    }
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error("RegistryUnavailable", "cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

}  // namespace

ExampleRecord record_from_json(const std::string& json_text) {
    const json j = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) bad("record is not valid JSON");
    if (!j.is_object()) bad("record must be a JSON object");
    if (string_member(j, "schema") != "sfreg-example-record/v1")
        bad("unsupported record schema (want \"sfreg-example-record/v1\")");

    ExampleRecord rec;
    rec.id = string_member(j, "id");
    rec.description = string_member(j, "description");

    const json& model = member(j, "model");
    rec.model_kind = string_member(model, "kind");
    if (rec.model_kind != "psvf" && rec.model_kind != "family")
        bad("model kind must be \"psvf\" or \"family\"");
    rec.model_json = member(model, rec.model_kind.c_str()).dump();

    const json& transition = member(j, "transition");
    rec.phi_values = constraint_list(transition, "values");
    rec.phi_derivs = constraint_list(transition, "derivs");
    rec.phi_closed_form = string_member(transition, "closed_form");
    if (rec.phi_values.empty() && rec.phi_derivs.empty())
        bad("\"transition\" must list at least one interior constraint");

    const json& blowup = member(j, "blowup");
    rec.blowup_mode = string_member(blowup, "mode");
    const std::string want_mode = rec.model_kind == "psvf" ? "linear" : "nonlinear";
    if (rec.blowup_mode != want_mode)
        bad("blowup mode \"" + rec.blowup_mode + "\" does not match a " + rec.model_kind +
            " model (want \"" + want_mode + "\")");
    rec.blowup_f = string_member(blowup, "f");
    rec.blowup_g = string_member(blowup, "g");

    rec.verdicts = verdict_list(j);
    rec.theorem_a = theorem_a_spec(j);

    if (const auto it = j.find("sweep"); it != j.end()) {
        if (!it->is_array() || it->empty()) bad("\"sweep\" must be a non-empty array");
        if (!rec.verdicts.empty() || rec.theorem_a.present)
            bad("a swept record lists verdicts and reports inside its sweep entries");
        for (const json& entry : *it) {
            if (!entry.is_object()) bad("\"sweep\" entries must be objects");
            SweepEntry se;
            se.lam_text = string_member(entry, "lam");
            se.lam = Rational::parse(se.lam_text);
            se.verdicts = verdict_list(entry);
            se.theorem_a = theorem_a_spec(entry);
            rec.sweep.push_back(std::move(se));
        }
    }

    const bool wants_region_report =
        rec.theorem_a.present ||
        std::any_of(rec.sweep.begin(), rec.sweep.end(),
                    [](const SweepEntry& se) { return se.theorem_a.present; });
    if (wants_region_report && rec.model_kind != "psvf")
        bad("\"theorem_a\" expectations require a piecewise model");
    return rec;
}

VerifyReport verify_record(const ExampleRecord& rec) {
    VerifyReport out;
    out.id = rec.id;
    if (rec.sweep.empty()) {
        run_pass({rec, nullptr, "", rec.verdicts, rec.theorem_a}, out);
    } else {
        for (const SweepEntry& se : rec.sweep)
            run_pass({rec, &se.lam, se.lam_text, se.verdicts, se.theorem_a}, out);
    }
    out.ok = out.diffs.empty();
    return out;
}

Registry::Registry(std::string root) : root_(std::move(root)) {}

std::string Registry::default_root() {
    if (const char* env = std::getenv("SFREG_REGISTRY_DIR"); env != nullptr && *env != '\0')
        return env;
    return SFREG_BUNDLED_REGISTRY;
}

std::vector<ExampleRecord> Registry::list_examples() const {
    namespace fs = std::filesystem;
    if (!fs::is_directory(root_))
        throw Error("RegistryUnavailable", "registry directory not found: " + root_);
    std::vector<ExampleRecord> out;
    for (const fs::directory_entry& entry : fs::directory_iterator(root_)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
        ExampleRecord rec = record_from_json(read_file(entry.path()));
        if (rec.id != entry.path().stem().string())
            bad("record id \"" + rec.id + "\" does not match its file name " +
                entry.path().filename().string());
        out.push_back(std::move(rec));
    }
    std::sort(out.begin(), out.end(),
              [](const ExampleRecord& a, const ExampleRecord& b) { return a.id < b.id; });
    return out;
}

ExampleRecord Registry::load(const std::string& id) const {
    if (id.empty() || id.find('/') != std::string::npos || id.find('\\') != std::string::npos)
        throw UnknownId("no example record named \"" + id + "\"");
    const std::filesystem::path p = std::filesystem::path(root_) / (id + ".json");
    if (!std::filesystem::is_regular_file(p))
        throw UnknownId("no example record named \"" + id + "\" in " + root_);
    ExampleRecord rec = record_from_json(read_file(p));
    if (rec.id != id)
        bad("record id \"" + rec.id + "\" does not match its file name " + id + ".json");
    return rec;
}

VerifyReport Registry::verify(const std::string& id) const { return verify_record(load(id)); }

}  // namespace sfreg
