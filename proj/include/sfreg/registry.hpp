// registry.hpp
// ------------
// Bundled catalog of worked examples.  Each record stores a model (piecewise
// field or blend family), the interior constraints defining its transition
// function together with the expected closed form, the expected blow-up
// right-hand sides, expected classification verdicts at listed points, an
// optional switching-line report expectation, and an optional parameter
// sweep.  `verify` recomputes everything from the model alone and diffs the
// results against the stored expectations, naming each offending quantity.
//
// Records are JSON files named `<id>.json` inside a versioned directory
// (see data/registry/v1/SCHEMA.md).  Expression strings holding expected
// values are exact: comparisons happen on rational polynomials, never on
// floating-point images.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sfreg/rational.hpp"

namespace sfreg {

// One interior constraint of the transition function: value or slope at
// abscissa t.  `value` is an expression string that may involve the sweep
// parameter `lam`; it must evaluate to a rational at every sweep value.
struct ConstraintSpec {
    Rational t;
    std::string value;
};

// Expected classification at one point of the blown-up system's critical
// set.  `expect` is a verdict name from sf_verdict_name, or the sentinel
// "not_on_critical_set" when classification must reject the point.
struct VerdictSpec {
    std::string x, y;  // rational strings
    std::string expect;
};

// Expected facts of the switching-line region report over [y_lo, y_hi]:
// whether |phi| exceeds 1 (widened sliding exists), the heights of
// simultaneous-tangency lines contained in the critical set, and an upper
// bound on the slow-vs-sliding relative error (skipped when negative).
struct TheoremASpec {
    bool present = false;
    Rational y_lo = Rational(-1), y_hi = Rational(1);
    bool phi_exceeds_one = false;
    std::vector<std::string> tangency_heights;  // rational strings
    double sliding_rel_err_max = -1.0;
};

// One sweep value with its expectations.  Model components, constraint
// values, and blow-up strings have `lam` substituted by this value.
struct SweepEntry {
    Rational lam;
    std::string lam_text;
    std::vector<VerdictSpec> verdicts;
    TheoremASpec theorem_a;
};

struct ExampleRecord {
    std::string id;
    std::string description;

    std::string model_kind;  // "psvf" | "family"
    std::string model_json;  // psvf_from_json / family_from_json payload

    std::vector<ConstraintSpec> phi_values;  // interior value constraints
    std::vector<ConstraintSpec> phi_derivs;  // interior slope constraints
    std::string phi_closed_form;             // expected interior polynomial in t (may use lam)

    std::string blowup_mode;       // "linear" | "nonlinear"
    std::string blowup_f, blowup_g;  // expected strings over {x, y, eps} (may use lam)

    std::vector<VerdictSpec> verdicts;  // records without a sweep
    TheoremASpec theorem_a;             // records without a sweep
    std::vector<SweepEntry> sweep;      // parametered records
};

// One mismatch: which quantity disagreed, at which sweep value (empty when
// the record has none), and the two sides of the comparison.
struct VerifyDiff {
    std::string quantity;
    std::string lam;
    std::string expected;
    std::string actual;
};

struct VerifyReport {
    std::string id;
    bool ok = false;
    int checks = 0;  // comparisons performed
    std::vector<VerifyDiff> diffs;
};

// Parses one record file's JSON text.  Throws ParseError on malformed or
// wrong-schema input.
ExampleRecord record_from_json(const std::string& json_text);

// Recomputes transition function, blow-up, verdicts, and the switching-line
// report from the record's model and diffs against its expectations.
VerifyReport verify_record(const ExampleRecord& rec);

class Registry {
public:
    // Directory resolution: explicit argument, else $SFREG_REGISTRY_DIR,
    // else the bundled directory configured at build time.
    explicit Registry(std::string root = default_root());

    [[nodiscard]] const std::string& root() const { return root_; }

    // All records in the directory, sorted by id.
    [[nodiscard]] std::vector<ExampleRecord> list_examples() const;

    // Loads `<root>/<id>.json`; throws UnknownId when absent.
    [[nodiscard]] ExampleRecord load(const std::string& id) const;

    [[nodiscard]] VerifyReport verify(const std::string& id) const;

    static std::string default_root();

private:
    std::string root_;
};

}  // namespace sfreg
