// sfreg.cpp
// ---------
// Command-line front end.  Every subcommand emits a single JSON report (to
// stdout or --out) that embeds the tool version and the fully resolved run
// configuration, so a run is reproducible from its report alone.  Optional
// CSV side files carry plot data; the tool never plots.
//
// Exit codes: 0 success, 1 domain error (the report is still written and
// carries the error detail), 2 usage error (grammar help is printed).

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sfreg/errors.hpp"
#include "sfreg/expr.hpp"
#include "sfreg/polynomial.hpp"
#include "sfreg/psvf.hpp"
#include "sfreg/registry.hpp"
#include "sfreg/regularize.hpp"
#include "sfreg/sfgeom.hpp"
#include "sfreg/simulate.hpp"
#include "sfreg/transition.hpp"

namespace {

using nlohmann::json;
using namespace sfreg;

constexpr const char* kToolVersion = "0.1.0";

// ---------------------------------------------------------------------------
// small helpers

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("FileUnavailable", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("FileUnavailable", "cannot write " + path);
    out << content;
}

// Exact rational from a literal or a constant expression ("3/8", "(1+1/4)/2").
Rational exact_rational(const std::string& text) {
    const VarSetPtr none = make_varset({});
    return exact_eval(parse_expression(text, none), {});
}

json rational_strings(const std::vector<Rational>& v) {
    json out = json::array();
    for (const Rational& r : v) out.push_back(r.str());
    return out;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Transition constraints JSON: {"values": [["t","v"], ...], "derivs": [...]}
// where every slot is a rational literal or constant expression.
TransitionFunction phi_from_file(const std::string& path) {
    const json j = json::parse(read_file(path), nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw ParseError(0, "constraints file must be a JSON object");
    TransitionConstraints tc;
    auto load = [&](const char* key, std::vector<std::pair<Rational, Rational>>& out) {
        const auto it = j.find(key);
        if (it == j.end()) return;
        if (!it->is_array())
            throw ParseError(0, std::string("\"") + key + "\" must be an array");
        for (const json& item : *it) {
            if (!item.is_array() || item.size() != 2 || !item[0].is_string() ||
                !item[1].is_string())
                throw ParseError(0, std::string("\"") + key +
                                        "\" entries must be [t, value] string pairs");
            out.emplace_back(exact_rational(item[0].get<std::string>()),
                             exact_rational(item[1].get<std::string>()));
        }
    };
    load("values", tc.values);
    load("derivs", tc.derivs);
    return synthesize(tc);
}

// A model file is either a piecewise field {"X": [...], "Y": [...]} or a
// blend family {"Ztilde": [...], "vars": [...], ...}.
struct ModelFile {
    std::string kind;  // "psvf" | "family"
    std::optional<PSVF> z;
    std::optional<NonlinearFamily> fam;
};

ModelFile load_model(const std::string& path) {
    const std::string text = read_file(path);
    const json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw ParseError(0, "model file must be a JSON object");
    ModelFile m;
    if (j.contains("Ztilde")) {
        m.kind = "family";
        m.fam = family_from_json(text);
    } else {
        m.kind = "psvf";
        m.z = psvf_from_json(text);
    }
    return m;
}

SlowFastSystem blow_up(const ModelFile& m, const TransitionFunction& tf) {
    if (m.kind == "psvf") return blowup_linear(*m.z, tf);
    return blowup_nonlinear(*m.fam, tf);
}

const PSVF& require_psvf(const ModelFile& m, const char* sub) {
    if (m.kind != "psvf")
        throw Error("NotApplicable",
                    std::string(sub) + " requires a piecewise model, got a blend family");
    return *m.z;
}

json ledger_json(const SingularityReport& sr) {
    json out = json::array();
    for (const LedgerEntry& e : sr.ledger)
        out.push_back({{"name", e.name},
                       {"value", e.value},
                       {"required", e.required},
                       {"satisfied", e.satisfied}});
    return out;
}

json phi_summary(const TransitionFunction& tf) {
    json crit = json::array();
    for (const RealRoot& r : tf.critical_points())
        crit.push_back({{"t", r.value},
                        {"multiplicity", r.multiplicity},
                        {"exact", r.exact},
                        {"rational", r.rational.str()}});
    const Overshoot& o = tf.overshoot();
    return {{"degree", tf.degree()},
            {"coefficients", rational_strings(tf.coefficients())},
            {"monotonic", tf.is_monotonic()},
            {"critical_points", crit},
            {"overshoot",
             {{"max_abs", o.max_abs}, {"argmax", o.argmax}, {"exceeds_one", o.exceeds_one}}}};
}

json threads_config() {
    const char* env = std::getenv("SFREG_THREADS");
    return env ? json(env) : json(nullptr);
}

// Envelope writer shared by every subcommand: runs `body`, wraps its report,
// and writes the result to --out or stdout.  Domain errors become the error
// block of the envelope and exit code 1; the body may also force an error
// block itself (verification failures) via the returned pair.
struct CommandResult {
    json report;
    // When set, the envelope is marked as an error with this kind/message
    // (the report is kept); the command exits 1.
    std::string error_kind, error_message;
};

int run_command(const json& config, const std::string& out_path,
                const std::function<CommandResult()>& body) {
    json envelope;
    envelope["tool"] = "sfreg";
    envelope["version"] = kToolVersion;
    envelope["config"] = config;
    int rc = 0;
    try {
        CommandResult result = body();
        envelope["report"] = std::move(result.report);
        if (result.error_kind.empty()) {
            envelope["status"] = "ok";
        } else {
            envelope["status"] = "error";
            envelope["error"] = {{"kind", result.error_kind},
                                 {"message", result.error_message}};
            rc = 1;
        }
    } catch (const Error& e) {
        envelope["status"] = "error";
        envelope["error"] = {{"kind", e.kind()}, {"message", e.what()}};
        rc = 1;
    }
    const std::string text = envelope.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        try {
            write_file(out_path, text);
        } catch (const Error& e) {
            std::cerr << "sfreg: " << e.what() << "\n";
            return 1;
        }
    }
    return rc;
}

int usage_error(const CLI::App* sub, const std::string& message) {
    std::cerr << "sfreg: " << message << "\n\n" << sub->help();
    return 2;
}

// ---------------------------------------------------------------------------
// subcommand bodies

struct PhiSynthOpts {
    std::string constraints, out, csv = "phi_samples.csv";
    int samples = 200;
};

int cmd_phi_synth(const PhiSynthOpts& o) {
    const json config = {{"subcommand", "phi-synth"},
                         {"constraints", o.constraints},
                         {"samples", o.samples},
                         {"csv", o.csv},
                         {"out", o.out}};
    return run_command(config, o.out, [&]() -> CommandResult {
        const TransitionFunction tf = phi_from_file(o.constraints);
        std::ostringstream csv;
        csv << "t,phi,dphi\n";
        for (int i = 0; i < o.samples; ++i) {
            const double t = -1.0 + 2.0 * i / (o.samples - 1);
            csv << fmt(t) << ',' << fmt(tf.eval(t)) << ',' << fmt(tf.eval_deriv(t, 1))
                << '\n';
        }
        write_file(o.csv, csv.str());
        json report = phi_summary(tf);
        report["csv"] = o.csv;
        report["csv_rows"] = o.samples;
        return {std::move(report), "", ""};
    });
}

struct PhiAnalyzeOpts {
    std::string constraints, out;
};

int cmd_phi_analyze(const PhiAnalyzeOpts& o) {
    const json config = {
        {"subcommand", "phi-analyze"}, {"constraints", o.constraints}, {"out", o.out}};
    return run_command(config, o.out, [&]() -> CommandResult {
        const TransitionFunction tf = phi_from_file(o.constraints);
        json report = phi_summary(tf);
        // Enrich the critical points with certified enclosures and the exact
        // value of phi at every exact critical abscissa.
        json crit = json::array();
        for (const RealRoot& r : tf.critical_points()) {
            json entry = {{"t", r.value},
                          {"multiplicity", r.multiplicity},
                          {"exact", r.exact},
                          {"rational", r.rational.str()},
                          {"enclosure", {r.enclosure_lo.str(), r.enclosure_hi.str()}},
                          {"phi", tf.eval(r.value)}};
            if (r.exact) entry["phi_exact"] = tf.eval_exact(r.rational).str();
            crit.push_back(std::move(entry));
        }
        report["critical_points"] = std::move(crit);
        report["junction"] = {{"phi(-1)", tf.eval_exact(Rational(-1)).str()},
                              {"phi(1)", tf.eval_exact(Rational(1)).str()},
                              {"dphi(-1)", tf.eval_deriv_exact(Rational(-1), 1).str()},
                              {"dphi(1)", tf.eval_deriv_exact(Rational(1), 1).str()}};
        return {std::move(report), "", ""};
    });
}

struct SigmaClassifyOpts {
    std::string model, out, y;
    std::vector<double> window;  // empty or {y_lo, y_hi}
    int resolution = 21;
};

int cmd_sigma_classify(const SigmaClassifyOpts& o) {
    json config = {{"subcommand", "sigma-classify"},
                   {"model", o.model},
                   {"resolution", o.resolution},
                   {"out", o.out}};
    config["y"] = o.y.empty() ? json(nullptr) : json(o.y);
    config["window"] = o.window.empty() ? json(nullptr) : json(o.window);
    return run_command(config, o.out, [&]() -> CommandResult {
        const ModelFile m = load_model(o.model);
        const PSVF& z = require_psvf(m, "sigma-classify");
        std::vector<double> heights;
        if (!o.y.empty()) {
            heights.push_back(exact_rational(o.y).to_double());
        } else {
            for (int i = 0; i < o.resolution; ++i)
                heights.push_back(o.window[0] + (o.window[1] - o.window[0]) * i /
                                                    (o.resolution - 1));
        }
        json points = json::array();
        json counts = json::object();
        for (const double y0 : heights) {
            const SigmaPointClass c = classify_sigma_point(z, y0);
            const std::string name = sigma_kind_name(c.kind);
            points.push_back({{"y", c.y0},
                              {"kind", name},
                              {"XF", c.xf},
                              {"YF", c.yf},
                              {"X2F", c.x2f},
                              {"Y2F", c.y2f},
                              {"X3F", c.x3f},
                              {"Y3F", c.y3f}});
            counts[name] = counts.value(name, 0) + 1;
        }
        json report = {{"points", std::move(points)}, {"counts", std::move(counts)}};
        if (!o.y.empty()) report["kind"] = report["points"][0]["kind"];
        return {std::move(report), "", ""};
    });
}

struct BlowupOpts {
    std::string model, phi, out;
};

int cmd_blowup(const BlowupOpts& o) {
    const json config = {
        {"subcommand", "blowup"}, {"model", o.model}, {"phi", o.phi}, {"out", o.out}};
    return run_command(config, o.out, [&]() -> CommandResult {
        const ModelFile m = load_model(o.model);
        const TransitionFunction tf = phi_from_file(o.phi);
        const SlowFastSystem sfs = blow_up(m, tf);
        json report = {{"mode", m.kind == "psvf" ? "linear" : "nonlinear"},
                       {"f", to_string(sfs.f)},
                       {"g", to_string(sfs.g)},
                       {"phi", phi_summary(tf)}};
        json names = json::array();
        for (std::size_t i = 0; i < sfs.vars->size(); ++i) names.push_back(sfs.vars->name(i));
        report["vars"] = std::move(names);
        try {
            report["f_expanded"] = to_string(to_polynomial(sfs.f).to_expression());
            report["g_expanded"] = to_string(to_polynomial(sfs.g).to_expression());
        } catch (const NotPolynomial&) {
            // non-polynomial sides are reported unexpanded only
        }
        return {std::move(report), "", ""};
    });
}

struct CriticalSetOpts {
    std::string model, phi, out, csv = "critical_set.csv";
    std::vector<double> window = {-1.0, 1.0, -1.0, 1.0};  // x_lo x_hi y_lo y_hi
    int resolution = 33;
};

int cmd_critical_set(const CriticalSetOpts& o) {
    const json config = {{"subcommand", "critical-set"}, {"model", o.model},
                         {"phi", o.phi},                 {"window", o.window},
                         {"resolution", o.resolution},   {"csv", o.csv},
                         {"out", o.out}};
    return run_command(config, o.out, [&]() -> CommandResult {
        const ModelFile m = load_model(o.model);
        const TransitionFunction tf = phi_from_file(o.phi);
        const SlowFastSystem sfs = blow_up(m, tf);
        const Window w{o.window[0], o.window[1], o.window[2], o.window[3]};
        const CriticalSetSample sample = critical_set(sfs, w, o.resolution);

        std::ostringstream csv;
        csv << "branch,x,y,normally_hyperbolic\n";
        json non_nh = json::array();
        for (std::size_t b = 0; b < sample.branches.size(); ++b) {
            for (const CriticalPoint& p : sample.branches[b]) {
                csv << b << ',' << fmt(p.x) << ',' << fmt(p.y) << ','
                    << (p.normally_hyperbolic ? 1 : 0) << '\n';
                if (!p.normally_hyperbolic) non_nh.push_back({{"x", p.x}, {"y", p.y}});
            }
        }
        write_file(o.csv, csv.str());
        const json report = {{"branches", sample.branches.size()},
                             {"points", sample.point_count()},
                             {"non_normally_hyperbolic", std::move(non_nh)},
                             {"csv", o.csv}};
        return {report, "", ""};
    });
}

struct SfClassifyOpts {
    std::string model, phi, out;
    std::vector<std::string> point;  // {x, y} rational strings
    bool predict = false;
};

int cmd_sf_classify(const SfClassifyOpts& o) {
    const json config = {{"subcommand", "sf-classify"}, {"model", o.model},
                         {"phi", o.phi},                {"point", o.point},
                         {"predict", o.predict},        {"out", o.out}};
    return run_command(config, o.out, [&]() -> CommandResult {
        const ModelFile m = load_model(o.model);
        const TransitionFunction tf = phi_from_file(o.phi);
        const SlowFastSystem sfs = blow_up(m, tf);
        const double x0 = exact_rational(o.point[0]).to_double();
        const double y0 = exact_rational(o.point[1]).to_double();
        const SingularityReport sr = classify_generic(sfs, x0, y0);
        json report = {{"point", {o.point[0], o.point[1]}},
                       {"verdict", sf_verdict_name(sr.verdict)},
                       {"note", sr.note},
                       {"ledger", ledger_json(sr)}};
        if (o.predict) {
            const SingularityReport pr =
                m.kind == "psvf" ? predict_linear(*m.z, tf, y0) : predict_nonlinear(*m.fam, tf);
            report["prediction"] = {{"x0", pr.x0},
                                    {"y0", pr.y0},
                                    {"verdict", sf_verdict_name(pr.verdict)},
                                    {"note", pr.note},
                                    {"ledger", ledger_json(pr)}};
        }
        return {std::move(report), "", ""};
    });
}

struct SimulateOpts {
    std::string model, phi, out, frame = "plane", csv_prefix = "trajectory";
    std::vector<double> eps = {1e-2};
    std::vector<double> start;  // {x, y}
    double t_end = 10.0, rtol = 1e-8, atol = 1e-10, chart_limit = 0.0;
};

int cmd_simulate(const SimulateOpts& o) {
    const json config = {{"subcommand", "simulate"},
                         {"model", o.model},
                         {"phi", o.phi},
                         {"frame", o.frame},
                         {"eps", o.eps},
                         {"start", o.start},
                         {"t_end", o.t_end},
                         {"rtol", o.rtol},
                         {"atol", o.atol},
                         {"chart_limit", o.chart_limit},
                         {"csv_prefix", o.csv_prefix},
                         {"threads", threads_config()},
                         {"out", o.out}};
    return run_command(config, o.out, [&]() -> CommandResult {
        const ModelFile m = load_model(o.model);
        const TransitionFunction tf = phi_from_file(o.phi);
        IntegrateOptions opts;
        opts.rtol = o.rtol;
        opts.atol = o.atol;
        opts.chart_limit = o.chart_limit;

        json runs = json::array();
        for (std::size_t k = 0; k < o.eps.size(); ++k) {
            const double eps = o.eps[k];
            Field field = [&] {
                if (o.frame == "blowup") return Field::slow_fast(blow_up(m, tf), eps);
                return Field::regularized(m.kind == "psvf"
                                              ? linear_regularize(*m.z, tf, eps)
                                              : nonlinear_regularize(*m.fam, tf, eps));
            }();
            const Trajectory tr = integrate(field, o.start[0], o.start[1], o.t_end, opts);
            const std::string csv_path = o.csv_prefix + "_" + std::to_string(k) + ".csv";
            std::ostringstream csv;
            write_trajectory_csv(csv, tr);
            write_file(csv_path, csv.str());
            runs.push_back({{"eps", eps},
                            {"termination", termination_name(tr.termination)},
                            {"detail", tr.detail},
                            {"stiff_fallback", tr.stiff_fallback},
                            {"points", tr.points.size()},
                            {"last",
                             {{"t", tr.last().t}, {"x", tr.last().x}, {"y", tr.last().y}}},
                            {"csv", csv_path}});
        }
        return {json{{"frame", o.frame}, {"runs", std::move(runs)}}, "", ""};
    });
}

struct FoldScalingOpts {
    std::string model, phi, out, csv = "fold_landing.csv";
    std::string fast = "x^2 - y", slow = "-1";
    std::vector<double> fold = {0.0, 0.0};
    double rho = 0.5;
    std::vector<double> eps;  // empty: default ladder
};

int cmd_fold_scaling(const FoldScalingOpts& o) {
    std::vector<double> eps = o.eps.empty() ? default_epsilons() : o.eps;
    std::sort(eps.begin(), eps.end(), std::greater<>());
    json config = {{"subcommand", "fold-scaling"},
                   {"fold", o.fold},
                   {"rho", o.rho},
                   {"eps", eps},
                   {"csv", o.csv},
                   {"threads", threads_config()},
                   {"out", o.out}};
    if (!o.model.empty()) {
        config["model"] = o.model;
        config["phi"] = o.phi;
    } else {
        config["fast"] = o.fast;
        config["slow"] = o.slow;
    }
    return run_command(config, o.out, [&]() -> CommandResult {
        SlowFastSystem sfs;
        if (!o.model.empty()) {
            sfs = blow_up(load_model(o.model), phi_from_file(o.phi));
        } else {
            const VarSetPtr vars = make_varset({"x", "y", "eps"});
            sfs = SlowFastSystem{parse_expression(o.fast, vars),
                                 parse_expression(o.slow, vars), vars};
        }
        const LandingFit fit = fold_landing_fit(sfs, o.fold[0], o.fold[1], o.rho, eps);
        std::ostringstream csv;
        write_landing_csv(csv, fit);
        write_file(o.csv, csv.str());
        json samples = json::array();
        for (const LandingSample& s : fit.samples)
            samples.push_back({{"eps", s.eps}, {"offset", s.offset}});
        const json report = {{"exponent", fit.exponent},
                             {"r_squared", fit.r_squared},
                             {"fold", {fit.fold_x, fit.fold_y}},
                             {"rho", fit.rho},
                             {"branch_side", fit.branch_side},
                             {"jump_side", fit.jump_side},
                             {"drift_sign", fit.drift_sign},
                             {"samples", std::move(samples)},
                             {"csv", o.csv}};
        return {report, "", ""};
    });
}

struct TheoremAOpts {
    std::string model, phi, out;
    std::vector<double> window = {-1.0, 1.0};
};

int cmd_theorem_a(const TheoremAOpts& o) {
    const json config = {{"subcommand", "theorem-a"},
                         {"model", o.model},
                         {"phi", o.phi},
                         {"window", o.window},
                         {"out", o.out}};
    return run_command(config, o.out, [&]() -> CommandResult {
        const ModelFile m = load_model(o.model);
        const PSVF& z = require_psvf(m, "theorem-a");
        const TransitionFunction tf = phi_from_file(o.phi);
        const TheoremAReport rep = theorem_a_report(z, tf, o.window[0], o.window[1]);

        json phi_critical = json::array();
        for (const PhiCriticalHeights& pc : rep.phi_critical)
            phi_critical.push_back({{"x_c", pc.x_c},
                                    {"multiplicity", pc.multiplicity},
                                    {"heights", pc.heights},
                                    {"all_non_nh", pc.all_non_nh}});
        json sliding = json::array();
        for (const SlowSlidingSample& s : rep.sliding_samples)
            sliding.push_back({{"x", s.x},
                               {"y", s.y},
                               {"slow", s.slow_value},
                               {"sliding", s.sliding_value},
                               {"rel_err", s.rel_err}});
        json tangency = json::array();
        for (const TangencyLine& t : rep.tangency_lines)
            tangency.push_back({{"y0", t.y0},
                                {"f1", t.f1_value},
                                {"g1", t.g1_value},
                                {"line_in_critical_set", t.line_in_critical_set},
                                {"exact_certificate", t.exact_certificate}});
        const json report = {
            {"phi_critical", std::move(phi_critical)},
            {"widened",
             {{"phi_exceeds_one", rep.widened.phi_exceeds_one},
              {"max_abs_phi", rep.widened.max_abs_phi},
              {"argmax", rep.widened.argmax},
              {"crossing_heights", rep.widened.crossing_heights},
              {"all_sampled_heights_covered", rep.widened.all_sampled_heights_covered}}},
            {"sliding",
             {{"samples", std::move(sliding)},
              {"max_rel_err", rep.max_sliding_rel_err}}},
            {"tangency_lines", std::move(tangency)}};
        return {report, "", ""};
    });
}

json record_report(const VerifyReport& rep) {
    bool pass_error = false;
    bool phi_ok = true, blowup_ok = true, verdicts_ok = true, theorem_a_ok = true;
    json diffs = json::array();
    for (const VerifyDiff& d : rep.diffs) {
        if (d.quantity == "pass") pass_error = true;
        if (d.quantity.rfind("phi.", 0) == 0) phi_ok = false;
        if (d.quantity.rfind("blowup.", 0) == 0) blowup_ok = false;
        if (d.quantity.rfind("verdict(", 0) == 0) verdicts_ok = false;
        if (d.quantity.rfind("theorem_a", 0) == 0) theorem_a_ok = false;
        diffs.push_back({{"quantity", d.quantity},
                         {"lam", d.lam},
                         {"expected", d.expected},
                         {"actual", d.actual}});
    }
    return {{"id", rep.id},
            {"ok", rep.ok},
            {"checks", rep.checks},
            {"completed", !pass_error},
            {"phi_match", phi_ok && !pass_error},
            {"blowup_match", blowup_ok && !pass_error},
            {"verdicts_match", verdicts_ok && !pass_error},
            {"theorem_a_match", theorem_a_ok && !pass_error},
            {"diffs", std::move(diffs)}};
}

struct ReproduceOpts {
    std::string id, registry, out;
    bool all = false;
};

int cmd_reproduce(const ReproduceOpts& o) {
    const std::string root = o.registry.empty() ? Registry::default_root() : o.registry;
    const json config = {{"subcommand", "reproduce"},
                         {"id", o.id.empty() ? json(nullptr) : json(o.id)},
                         {"all", o.all},
                         {"registry", root},
                         {"threads", threads_config()},
                         {"out", o.out}};
    return run_command(config, o.out, [&]() -> CommandResult {
        const Registry reg(root);
        if (!o.all) {
            const VerifyReport rep = reg.verify(o.id);
            CommandResult result{record_report(rep), "", ""};
            if (!rep.ok) {
                result.error_kind = "VerificationFailed";
                result.error_message = "record " + o.id + " failed verification";
            }
            return result;
        }
        json records = json::array();
        int passed = 0, total = 0;
        for (const ExampleRecord& rec : reg.list_examples()) {
            const VerifyReport rep = verify_record(rec);
            records.push_back(record_report(rep));
            ++total;
            passed += rep.ok ? 1 : 0;
        }
        CommandResult result{
            json{{"records", std::move(records)}, {"total", total}, {"passed", passed}},
            "", ""};
        if (passed != total) {
            result.error_kind = "VerificationFailed";
            result.error_message = std::to_string(total - passed) + " of " +
                                   std::to_string(total) + " records failed verification";
        }
        return result;
    });
}

struct ListExamplesOpts {
    std::string registry, out;
};

int cmd_list_examples(const ListExamplesOpts& o) {
    const std::string root = o.registry.empty() ? Registry::default_root() : o.registry;
    const json config = {
        {"subcommand", "list-examples"}, {"registry", root}, {"out", o.out}};
    return run_command(config, o.out, [&]() -> CommandResult {
        const Registry reg(root);
        json records = json::array();
        int count = 0;
        for (const ExampleRecord& rec : reg.list_examples()) {
            json sweep = json::array();
            for (const SweepEntry& se : rec.sweep) sweep.push_back(se.lam_text);
            const bool region_report =
                rec.theorem_a.present ||
                std::any_of(rec.sweep.begin(), rec.sweep.end(),
                            [](const SweepEntry& se) { return se.theorem_a.present; });
            records.push_back({{"id", rec.id},
                               {"description", rec.description},
                               {"model", rec.model_kind},
                               {"blowup_mode", rec.blowup_mode},
                               {"sweep", std::move(sweep)},
                               {"has_region_report", region_report}});
            ++count;
        }
        return {json{{"root", root}, {"count", count}, {"records", std::move(records)}},
                "", ""};
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"slow-fast analysis of planar piecewise-smooth vector fields: "
                 "transition-function synthesis, smoothing, blow-up, classification, "
                 "simulation, and a verified example catalog"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    int rc = 0;

    // phi-synth
    PhiSynthOpts synth;
    auto* c_synth = app.add_subcommand(
        "phi-synth", "synthesize a transition function from interior constraints");
    c_synth->add_option("--constraints", synth.constraints,
                        "constraints JSON file: {\"values\": [[t, v], ...], \"derivs\": ...}")
        ->required();
    c_synth->add_option("--samples", synth.samples, "rows of the (t, phi, dphi) CSV")
        ->check(CLI::Range(2, 1000000))
        ->capture_default_str();
    c_synth->add_option("--csv", synth.csv, "sample table path")->capture_default_str();
    c_synth->add_option("--out", synth.out, "write the JSON report here instead of stdout");
    c_synth->callback([&] { rc = cmd_phi_synth(synth); });

    // phi-analyze
    PhiAnalyzeOpts analyze;
    auto* c_analyze = app.add_subcommand(
        "phi-analyze", "monotonicity, critical points, and overshoot of a transition function");
    c_analyze->add_option("--constraints", analyze.constraints, "constraints JSON file")
        ->required();
    c_analyze->add_option("--out", analyze.out, "report path (default stdout)");
    c_analyze->callback([&] { rc = cmd_phi_analyze(analyze); });

    // sigma-classify
    SigmaClassifyOpts sigma;
    auto* c_sigma = app.add_subcommand(
        "sigma-classify", "classify switching-line points of a piecewise field");
    c_sigma->add_option("--model", sigma.model, "piecewise model JSON file")->required();
    c_sigma->add_option("--y", sigma.y, "single height (rational)");
    c_sigma->add_option("--window", sigma.window, "height range y_lo y_hi")->expected(2);
    c_sigma->add_option("--resolution", sigma.resolution, "heights sampled in the window")
        ->check(CLI::Range(2, 1000000))
        ->capture_default_str();
    c_sigma->add_option("--out", sigma.out, "report path (default stdout)");
    c_sigma->callback([&] {
        if (sigma.y.empty() == sigma.window.empty()) {
            rc = usage_error(c_sigma, "pass exactly one of --y or --window");
            return;
        }
        if (!sigma.window.empty() && sigma.window[0] >= sigma.window[1]) {
            rc = usage_error(c_sigma, "--window range is empty");
            return;
        }
        rc = cmd_sigma_classify(sigma);
    });

    // blowup
    BlowupOpts blow;
    auto* c_blow = app.add_subcommand(
        "blowup", "smooth a model through a transition function and rescale to slow-fast form");
    c_blow->add_option("--model", blow.model, "model JSON file (piecewise or family)")
        ->required();
    c_blow->add_option("--phi", blow.phi, "transition constraints JSON file")->required();
    c_blow->add_option("--out", blow.out, "report path (default stdout)");
    c_blow->callback([&] { rc = cmd_blowup(blow); });

    // critical-set
    CriticalSetOpts crit;
    auto* c_crit = app.add_subcommand(
        "critical-set", "extract the fast-equilibrium set of the blown-up system");
    c_crit->add_option("--model", crit.model, "model JSON file")->required();
    c_crit->add_option("--phi", crit.phi, "transition constraints JSON file")->required();
    c_crit->add_option("--window", crit.window, "x_lo x_hi y_lo y_hi")
        ->expected(4)
        ->capture_default_str();
    c_crit->add_option("--resolution", crit.resolution, "grid nodes per axis")
        ->check(CLI::Range(2, 100000))
        ->capture_default_str();
    c_crit->add_option("--csv", crit.csv, "polyline table path")->capture_default_str();
    c_crit->add_option("--out", crit.out, "report path (default stdout)");
    c_crit->callback([&] {
        if (crit.window[0] >= crit.window[1] || crit.window[2] >= crit.window[3]) {
            rc = usage_error(c_crit, "--window ranges are empty");
            return;
        }
        rc = cmd_critical_set(crit);
    });

    // sf-classify
    SfClassifyOpts sfc;
    auto* c_sfc = app.add_subcommand(
        "sf-classify", "classify a point of the critical set of the blown-up system");
    c_sfc->add_option("--model", sfc.model, "model JSON file")->required();
    c_sfc->add_option("--phi", sfc.phi, "transition constraints JSON file")->required();
    c_sfc->add_option("--point", sfc.point, "x y (rationals)")->expected(2)->required();
    c_sfc->add_flag("--predict", sfc.predict,
                    "also run the layer-equation prediction at the point's height");
    c_sfc->add_option("--out", sfc.out, "report path (default stdout)");
    c_sfc->callback([&] { rc = cmd_sf_classify(sfc); });

    // simulate
    SimulateOpts sim;
    auto* c_sim = app.add_subcommand("simulate", "integrate the smoothed or blown-up field "
                                                 "over a ladder of layer widths");
    c_sim->add_option("--model", sim.model, "model JSON file")->required();
    c_sim->add_option("--phi", sim.phi, "transition constraints JSON file")->required();
    c_sim->add_option("--eps", sim.eps, "layer widths")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    c_sim->add_option("--start", sim.start, "initial point x y")->expected(2)->required();
    c_sim->add_option("--t-end", sim.t_end, "integration time")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    c_sim->add_option("--frame", sim.frame, "plane (smoothed field) or blowup (chart)")
        ->check(CLI::IsMember({"plane", "blowup"}))
        ->capture_default_str();
    c_sim->add_option("--rtol", sim.rtol, "relative tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    c_sim->add_option("--atol", sim.atol, "absolute tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    c_sim->add_option("--chart-limit", sim.chart_limit,
                      "stop when |x| exceeds this bound (0: never)")
        ->capture_default_str();
    c_sim->add_option("--csv-prefix", sim.csv_prefix, "per-run trajectory CSV prefix")
        ->capture_default_str();
    c_sim->add_option("--out", sim.out, "report path (default stdout)");
    c_sim->callback([&] { rc = cmd_simulate(sim); });

    // fold-scaling
    FoldScalingOpts fold;
    auto* c_fold = app.add_subcommand(
        "fold-scaling", "fit the landing-offset power law across a fold of the critical set");
    c_fold->add_option("--model", fold.model, "model JSON file (with --phi)");
    c_fold->add_option("--phi", fold.phi, "transition constraints JSON file");
    c_fold->add_option("--fast", fold.fast, "fast side f(x, y, eps) when no model is given")
        ->capture_default_str();
    c_fold->add_option("--slow", fold.slow, "slow side g(x, y, eps) when no model is given")
        ->capture_default_str();
    c_fold->add_option("--fold", fold.fold, "fold point x y")
        ->expected(2)
        ->capture_default_str();
    c_fold->add_option("--rho", fold.rho, "entry distance along the attracting branch")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    c_fold->add_option("--eps", fold.eps,
                       "layer widths (>= 5 values; default geometric 1e-2 .. 1e-4)")
        ->check(CLI::PositiveNumber);
    c_fold->add_option("--csv", fold.csv, "landing table path")->capture_default_str();
    c_fold->add_option("--out", fold.out, "report path (default stdout)");
    c_fold->callback([&] {
        if (fold.model.empty() != fold.phi.empty()) {
            rc = usage_error(c_fold, "--model and --phi go together");
            return;
        }
        rc = cmd_fold_scaling(fold);
    });

    // theorem-a
    TheoremAOpts tha;
    auto* c_tha = app.add_subcommand(
        "theorem-a", "switching-line region report of the smoothed piecewise field");
    c_tha->add_option("--model", tha.model, "piecewise model JSON file")->required();
    c_tha->add_option("--phi", tha.phi, "transition constraints JSON file")->required();
    c_tha->add_option("--window", tha.window, "height range y_lo y_hi")
        ->expected(2)
        ->capture_default_str();
    c_tha->add_option("--out", tha.out, "report path (default stdout)");
    c_tha->callback([&] {
        if (tha.window[0] >= tha.window[1]) {
            rc = usage_error(c_tha, "--window range is empty");
            return;
        }
        rc = cmd_theorem_a(tha);
    });

    // reproduce
    ReproduceOpts repro;
    auto* c_repro = app.add_subcommand(
        "reproduce", "re-derive a catalog record from its model and check every stored fact");
    c_repro->add_option("id", repro.id, "record id (see list-examples)");
    c_repro->add_flag("--all", repro.all, "verify every record in the catalog");
    c_repro->add_option("--registry", repro.registry, "catalog directory override");
    c_repro->add_option("--out", repro.out, "report path (default stdout)");
    c_repro->callback([&] {
        if (repro.id.empty() == !repro.all) {
            rc = usage_error(c_repro, "pass a record id or --all");
            return;
        }
        rc = cmd_reproduce(repro);
    });

    // list-examples
    ListExamplesOpts list;
    auto* c_list = app.add_subcommand("list-examples", "list the bundled example catalog");
    c_list->add_option("--registry", list.registry, "catalog directory override");
    c_list->add_option("--out", list.out, "report path (default stdout)");
    c_list->callback([&] { rc = cmd_list_examples(list); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    return rc;
}
