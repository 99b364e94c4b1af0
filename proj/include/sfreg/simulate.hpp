// simulate.hpp
// ------------
// Desk-scale numerical experiments on planar fields: an error-controlled
// integrator with an implicit fallback for stiff layers, section-to-section
// maps with bisected event location, and the two quantitative probes used
// throughout the example suite — the fold landing-offset power law and the
// exponential contraction of section maps across a ladder of layer widths.
//
// Everything here is deterministic: identical inputs produce bit-identical
// outputs regardless of the worker-thread count (SFREG_THREADS caps the
// pool; each sample owns its output slot and results merge in input order).

#pragma once

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sfreg/errors.hpp"
#include "sfreg/expr.hpp"
#include "sfreg/regularize.hpp"

namespace sfreg {

// Why an integration stopped.
enum class Termination {
    time_end,      // reached the requested end time
    section_hit,   // crossed the stop section inside its admissible interval
    chart_exit,    // |x| exceeded the configured chart bound
    step_failure,  // the step size collapsed or the step budget ran out
};

const char* termination_name(Termination t);

struct TrajectoryPoint {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
};

// Sampled orbit with strictly increasing times; `detail` carries a
// human-readable note for abnormal terminations.
struct Trajectory {
    std::vector<TrajectoryPoint> points;
    Termination termination = Termination::time_end;
    std::string detail;
    bool stiff_fallback = false;  // the implicit fallback was engaged

    [[nodiscard]] const TrajectoryPoint& last() const { return points.back(); }
};

// A one-dimensional transversal: a vertical line x = c or a horizontal line
// y = c, restricted to an admissible interval [lo, hi] on the coordinate that
// varies along the line.
struct Section {
    enum class Axis { vertical, horizontal };

    Axis axis = Axis::vertical;
    double c = 0.0;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    static Section vertical(double c,
                            double lo = -std::numeric_limits<double>::infinity(),
                            double hi = std::numeric_limits<double>::infinity()) {
        return Section{Axis::vertical, c, lo, hi};
    }
    static Section horizontal(double c,
                              double lo = -std::numeric_limits<double>::infinity(),
                              double hi = std::numeric_limits<double>::infinity()) {
        return Section{Axis::horizontal, c, lo, hi};
    }

    // Signed distance of (x, y) from the section line.
    [[nodiscard]] double offset(double x, double y) const {
        return (axis == Axis::vertical ? x : y) - c;
    }
    // The coordinate that varies along the section line.
    [[nodiscard]] double free_coordinate(double x, double y) const {
        return axis == Axis::vertical ? y : x;
    }
    [[nodiscard]] bool admissible(double x, double y) const {
        const double s = free_coordinate(x, y);
        return s >= lo && s <= hi;
    }
    // The point on the section with the given free coordinate.
    [[nodiscard]] TrajectoryPoint point(double free) const {
        return axis == Axis::vertical ? TrajectoryPoint{0.0, c, free}
                                      : TrajectoryPoint{0.0, free, c};
    }
};

// A concrete planar vector field the integrator can evaluate, together with
// the timescale that signals stiffness (the layer width for slow-fast and
// smoothed fields, zero when no separation is present).
class Field {
public:
    // dx/dt = f(x, y, eps)/eps, dy/dt = g(x, y, eps) at a fixed eps > 0.
    static Field slow_fast(const SlowFastSystem& sfs, double eps);
    // The smoothed field of a piecewise problem, evaluated directly.
    static Field regularized(const RegularizedField& reg);
    // An explicit planar field dx/dt, dy/dt given as expressions over {x, y}.
    static Field planar(const std::string& dx, const std::string& dy);

    void eval(double x, double y, double out[2]) const;
    // Row-major 2x2 Jacobian [d(dx)/dx, d(dx)/dy; d(dy)/dx, d(dy)/dy].
    void jacobian(double x, double y, double out[4]) const;
    [[nodiscard]] double stiffness_scale() const { return scale_; }

private:
    Field() = default;

    enum class Kind { slow_fast, regularized, planar };
    Kind kind_ = Kind::planar;
    Expression fx_, fy_;  // slow_fast / planar right-hand sides
    VarSetPtr vars_;
    double eps_ = 0.0;                        // slow_fast timescale
    std::optional<RegularizedField> reg_;     // regularized payload
    double scale_ = 0.0;
};

struct IntegrateOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    double initial_step = 0.0;     // 0: choose automatically
    double chart_limit = 0.0;      // > 0: stop with chart_exit once |x| exceeds it
    const Section* stop = nullptr; // stop with section_hit on an admissible crossing
    std::size_t max_steps = 2'000'000;
    bool store_trajectory = true;  // false: keep only the first and last points
    bool force_implicit = false;   // start directly in the implicit fallback
};

// Integrates from (x0, y0) over [0, t_end] with an embedded explicit pair
// under mixed error control err_i <= atol + rtol*|u_i|.  When the accepted
// step stays below 1e-3 times the field's stiffness scale for many steps in
// a row, the integrator switches permanently to an implicit midpoint rule
// with damped Newton iterations on the field's Jacobian.  Events (stop
// section, chart bound) are located by bisection in time until the event
// coordinate is within 1e-10 of the section line; the trajectory ends
// exactly at the located point.
Trajectory integrate(const Field& field, double x0, double y0, double t_end,
                     const IntegrateOptions& opts = {});

// One entry of a section-to-section map.
struct SectionSample {
    double entry = 0.0;      // free coordinate on the entry section
    double exit = 0.0;       // free coordinate on the exit section (when ok)
    double exit_time = 0.0;  // time of the exit crossing (when ok)
    bool ok = false;
    Termination termination = Termination::step_failure;  // how the run ended
};

// Integrates n_samples starting points placed uniformly across the entry
// section's admissible interval until each crosses the exit section (or
// fails); failed samples are reported with their termination, never dropped.
// The entry interval must be bounded and nonempty.
std::vector<SectionSample> section_map(const Field& field, const Section& din,
                                       const Section& dout, int n_samples, double t_end,
                                       const IntegrateOptions& base = {});

// The ladder of layer widths used by default: 1e-2, 10^-2.5, ..., 1e-4.
std::vector<double> default_epsilons();

struct LandingSample {
    double eps = 0.0;
    double offset = 0.0;  // |y_exit - y_fold| on the exit line x = x_fold + jump*rho
};

// Least-squares power-law fit of the landing offset against the layer width.
struct LandingFit {
    std::vector<LandingSample> samples;
    double exponent = 0.0;   // slope of log(offset) against log(eps)
    double r_squared = 0.0;
    double fold_x = 0.0, fold_y = 0.0;
    double rho = 0.0;
    int branch_side = 0;  // attracting branch lies at sign(x - fold_x) = branch_side
    int jump_side = 0;    // orbits leave the fold toward sign(x - fold_x) = jump_side
    int drift_sign = 0;   // slow drift direction in y at the branch entry
};

// Default tolerances for the landing fit (tighter than plain integration).
IntegrateOptions landing_defaults();

// Verifies that (fold_x, fold_y) is a fold of the critical set, starts on the
// attracting branch at horizontal distance rho, integrates across the fold
// for each eps, and fits log(landing offset) against log(eps).  Requires at
// least five strictly decreasing positive eps values (InsufficientSamples
// otherwise; supply a geometric ladder for a meaningful fit).  Integration
// failures propagate as step_failure errors.
LandingFit fold_landing_fit(const SlowFastSystem& sfs, double fold_x, double fold_y,
                            double rho, const std::vector<double>& eps_list,
                            const IntegrateOptions& base = landing_defaults());

struct WidthSample {
    double eps = 0.0;
    double width = 0.0;   // spread (max - min) of the exit coordinates
    int samples_ok = 0;   // how many of the starts reached the exit section
    bool resolved = true; // false once the spread falls below float resolution (1e-13)
    double rate = std::numeric_limits<double>::quiet_NaN();  // eps * log(1/width)
};

struct ContractionReport {
    std::vector<WidthSample> table;
    // True when eps * log(1/width) decreases strictly along the resolved
    // prefix of the (descending) eps ladder — the signature of an
    // exponentially contracting section map.
    bool contracting = false;
    std::string note;
};

// Measures the exit-interval width of the section map din -> dout for each
// layer width in eps_list (descending).  Widths below 1e-13 are reported as
// below float resolution rather than trusted; if even the largest eps is
// unresolvable the measurement throws UnresolvableWidth.
ContractionReport contraction_estimate(const SlowFastSystem& sfs,
                                       const std::vector<double>& eps_list,
                                       const Section& din, const Section& dout,
                                       int n_samples = 9, double t_end = 100.0,
                                       const IntegrateOptions& base = {});

// CSV writers: header row plus one data row per record, full double precision.
void write_trajectory_csv(std::ostream& os, const Trajectory& tr);
void write_section_samples_csv(std::ostream& os, const std::vector<SectionSample>& samples);
void write_landing_csv(std::ostream& os, const LandingFit& fit);
void write_contraction_csv(std::ostream& os, const ContractionReport& report);

}  // namespace sfreg
