// simulate.cpp
// ------------
// Implementation of the planar integrator and the derived experiments.
// The explicit method is the Dormand-Prince 5(4) embedded pair; the stiff
// fallback is the implicit midpoint rule with step doubling for its error
// estimate and a damped Newton solve on the field's Jacobian.

#include "sfreg/simulate.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <ostream>
#include <thread>

#include "sfreg/jet.hpp"
#include "sfreg/sfgeom.hpp"

namespace sfreg {

namespace {

// ---------------------------------------------------------------------------
// Worker pool: static partition of [0, n) over at most SFREG_THREADS workers
// (hardware concurrency by default).  Each index owns its output slot, so the
// result is identical to the serial loop regardless of the thread count.

std::size_t worker_count(std::size_t jobs) {
    if (jobs <= 1) return 1;
    std::size_t n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("SFREG_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) n = static_cast<std::size_t>(v);
    }
    return std::min(jobs, n);
}

template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const std::size_t workers = worker_count(n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = n * w / workers;
        const std::size_t hi = n * (w + 1) / workers;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4) coefficients.

constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                 kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                 kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0,
                 kB5 = -2187.0 / 6784.0, kB6 = 11.0 / 84.0;
// Fifth-order minus fourth-order weights (error estimator).
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0,
                 kE5 = -17253.0 / 339200.0, kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;

struct Vec2 {
    double x = 0.0, y = 0.0;
};

inline Vec2 axpy(const Vec2& u, double h, const Vec2& k) { return {u.x + h * k.x, u.y + h * k.y}; }

// One explicit step of size h from u with derivative k1 already evaluated.
// Returns the fifth-order result, the error estimate, and k7 = f(result)
// (reusable as the next step's k1).
struct ExplicitStep {
    Vec2 u5;
    Vec2 err;
    Vec2 k7;
};

ExplicitStep dp_step(const Field& f, const Vec2& u, const Vec2& k1, double h) {
    double d[2];
    auto eval = [&](const Vec2& p) {
        f.eval(p.x, p.y, d);
        return Vec2{d[0], d[1]};
    };
    const Vec2 k2 = eval({u.x + h * kA21 * k1.x, u.y + h * kA21 * k1.y});
    const Vec2 k3 = eval({u.x + h * (kA31 * k1.x + kA32 * k2.x),
                          u.y + h * (kA31 * k1.y + kA32 * k2.y)});
    const Vec2 k4 = eval({u.x + h * (kA41 * k1.x + kA42 * k2.x + kA43 * k3.x),
                          u.y + h * (kA41 * k1.y + kA42 * k2.y + kA43 * k3.y)});
    const Vec2 k5 = eval({u.x + h * (kA51 * k1.x + kA52 * k2.x + kA53 * k3.x + kA54 * k4.x),
                          u.y + h * (kA51 * k1.y + kA52 * k2.y + kA53 * k3.y + kA54 * k4.y)});
    const Vec2 k6 = eval(
        {u.x + h * (kA61 * k1.x + kA62 * k2.x + kA63 * k3.x + kA64 * k4.x + kA65 * k5.x),
         u.y + h * (kA61 * k1.y + kA62 * k2.y + kA63 * k3.y + kA64 * k4.y + kA65 * k5.y)});
    ExplicitStep out;
    out.u5 = {u.x + h * (kB1 * k1.x + kB3 * k3.x + kB4 * k4.x + kB5 * k5.x + kB6 * k6.x),
              u.y + h * (kB1 * k1.y + kB3 * k3.y + kB4 * k4.y + kB5 * k5.y + kB6 * k6.y)};
    out.k7 = eval(out.u5);
    out.err = {h * (kE1 * k1.x + kE3 * k3.x + kE4 * k4.x + kE5 * k5.x + kE6 * k6.x +
                    kE7 * out.k7.x),
               h * (kE1 * k1.y + kE3 * k3.y + kE4 * k4.y + kE5 * k5.y + kE6 * k6.y +
                    kE7 * out.k7.y)};
    return out;
}

// Damped Newton solve of the implicit midpoint stage k = f(u + (h/2) k).
// Returns false when the iteration fails to converge.
bool midpoint_stage(const Field& f, const Vec2& u, double h, Vec2& k) {
    double d[2], jac[4];
    f.eval(u.x, u.y, d);
    k = {d[0], d[1]};
    auto residual = [&](const Vec2& kk) {
        const Vec2 p = axpy(u, 0.5 * h, kk);
        f.eval(p.x, p.y, d);
        return Vec2{kk.x - d[0], kk.y - d[1]};
    };
    Vec2 r = residual(k);
    double rn = std::hypot(r.x, r.y);
    for (int iter = 0; iter < 30; ++iter) {
        const double tol = 1e-13 * (1.0 + std::hypot(k.x, k.y));
        if (rn <= tol) return true;
        const Vec2 p = axpy(u, 0.5 * h, k);
        f.jacobian(p.x, p.y, jac);
        // J = I - (h/2) df/du
        const double j11 = 1.0 - 0.5 * h * jac[0], j12 = -0.5 * h * jac[1];
        const double j21 = -0.5 * h * jac[2], j22 = 1.0 - 0.5 * h * jac[3];
        const double det = j11 * j22 - j12 * j21;
        if (!std::isfinite(det) || std::fabs(det) < 1e-300) return false;
        const Vec2 delta = {(r.x * j22 - r.y * j12) / det, (r.y * j11 - r.x * j21) / det};
        double alpha = 1.0;
        bool improved = false;
        for (int back = 0; back < 8; ++back) {
            const Vec2 trial = {k.x - alpha * delta.x, k.y - alpha * delta.y};
            const Vec2 rt = residual(trial);
            const double rtn = std::hypot(rt.x, rt.y);
            if (rtn < rn * (1.0 - 0.25 * alpha) || rtn <= tol) {
                k = trial;
                r = rt;
                rn = rtn;
                improved = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!improved) return false;
    }
    return rn <= 1e-10 * (1.0 + std::hypot(k.x, k.y));
}

// One implicit midpoint step u -> u + h*k.  False on Newton failure.
bool midpoint_step(const Field& f, const Vec2& u, double h, Vec2& out) {
    Vec2 k;
    if (!midpoint_stage(f, u, h, k)) return false;
    out = axpy(u, h, k);
    return true;
}

double error_norm(const Vec2& err, const Vec2& u0, const Vec2& u1, double rtol, double atol) {
    const double sx = atol + rtol * std::max(std::fabs(u0.x), std::fabs(u1.x));
    const double sy = atol + rtol * std::max(std::fabs(u0.y), std::fabs(u1.y));
    const double ex = err.x / sx, ey = err.y / sy;
    return std::sqrt(0.5 * (ex * ex + ey * ey));
}

// Integration engine state shared by the main loop and the event locator.
struct Engine {
    const Field& field;
    bool implicit = false;

    // Advances one uncontrolled step of the current method (used by the
    // event bisection); returns false on an implicit solve failure.
    bool advance(const Vec2& u, double h, Vec2& out) const {
        if (implicit) return midpoint_step(field, u, h, out);
        double d[2];
        field.eval(u.x, u.y, d);
        out = dp_step(field, u, {d[0], d[1]}, h).u5;
        return true;
    }
};

// Bisects the step [0, h] from u0 until |measure(state)| < 1e-10, assuming
// measure(u0) and measure(u1) have opposite signs (or measure(u1) == 0).
// Returns the located time offset and state through `tau` and `hit`.
bool locate_event(const Engine& eng, const Vec2& u0, double h, const Vec2& u1,
                  double s0, double s1, double& tau, Vec2& hit,
                  const std::function<double(const Vec2&)>& measure) {
    double lo = 0.0, hi = h;
    Vec2 uhi = u1;
    double shi = s1;
    if (std::fabs(shi) < 1e-10) {
        tau = hi;
        hit = uhi;
        return true;
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        Vec2 umid;
        if (!eng.advance(u0, mid, umid)) return false;
        const double smid = measure(umid);
        if (std::fabs(smid) < 1e-10) {
            tau = mid;
            hit = umid;
            return true;
        }
        if ((smid > 0.0) == (s0 > 0.0)) {
            lo = mid;
        } else {
            hi = mid;
            uhi = umid;
            shi = smid;
        }
        if (hi - lo <= 1e-16 * std::max(1.0, h)) break;
    }
    tau = hi;
    hit = uhi;
    return true;
}

double resolve_initial_step(const Field& f, const Vec2& u, double t_end,
                            const IntegrateOptions& opts) {
    if (opts.initial_step > 0.0) return std::min(opts.initial_step, t_end);
    double d[2];
    f.eval(u.x, u.y, d);
    const double speed = std::hypot(d[0], d[1]);
    double h = 0.01 * (1.0 + std::hypot(u.x, u.y)) / (1.0 + speed);
    if (f.stiffness_scale() > 0.0) h = std::min(h, 0.1 * f.stiffness_scale());
    return std::min(h, t_end);
}

double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys,
                           double& r_squared) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    const double slope = sxy / sxx;
    r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return slope;
}

void csv_row(std::ostream& os, std::initializer_list<double> cells) {
    char buf[64];
    bool first = true;
    for (const double v : cells) {
        if (!first) os << ',';
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf;
        first = false;
    }
    os << '\n';
}

}  // namespace

// ---------------------------------------------------------------------------
// Field

const char* termination_name(Termination t) {
    switch (t) {
        case Termination::time_end: return "time_end";
        case Termination::section_hit: return "section_hit";
        case Termination::chart_exit: return "chart_exit";
        case Termination::step_failure: return "step_failure";
    }
    return "unknown";
}

Field Field::slow_fast(const SlowFastSystem& sfs, double eps) {
    if (!(eps > 0.0)) throw Error("InvalidArgument", "slow_fast field needs eps > 0");
    Field f;
    f.kind_ = Kind::slow_fast;
    f.fx_ = sfs.f;
    f.fy_ = sfs.g;
    f.vars_ = sfs.vars;
    f.eps_ = eps;
    f.scale_ = eps;
    return f;
}

Field Field::regularized(const RegularizedField& reg) {
    Field f;
    f.kind_ = Kind::regularized;
    f.reg_ = reg;
    f.scale_ = reg.epsilon();
    return f;
}

Field Field::planar(const std::string& dx, const std::string& dy) {
    Field f;
    f.kind_ = Kind::planar;
    f.vars_ = make_varset({"x", "y"});
    f.fx_ = parse_expression(dx, f.vars_);
    f.fy_ = parse_expression(dy, f.vars_);
    f.scale_ = 0.0;
    return f;
}

void Field::eval(double x, double y, double out[2]) const {
    switch (kind_) {
        case Kind::slow_fast: {
            const double p[3] = {x, y, eps_};
            out[0] = eval_double(fx_, p) / eps_;
            out[1] = eval_double(fy_, p);
            return;
        }
        case Kind::regularized: {
            const auto v = reg_->eval(x, y);
            out[0] = v[0];
            out[1] = v[1];
            return;
        }
        case Kind::planar: {
            const double p[2] = {x, y};
            out[0] = eval_double(fx_, p);
            out[1] = eval_double(fy_, p);
            return;
        }
    }
}

void Field::jacobian(double x, double y, double out[4]) const {
    static const std::vector<int> wrt = {0, 1};
    switch (kind_) {
        case Kind::slow_fast: {
            const std::vector<double> p = {x, y, eps_};
            const Jet jf = eval_jet(fx_, p, wrt, 1);
            const Jet jg = eval_jet(fy_, p, wrt, 1);
            out[0] = jf.derivative({1, 0}) / eps_;
            out[1] = jf.derivative({0, 1}) / eps_;
            out[2] = jg.derivative({1, 0});
            out[3] = jg.derivative({0, 1});
            return;
        }
        case Kind::regularized: {
            const double hx = 1e-6 * (1.0 + std::fabs(x));
            const double hy = 1e-6 * (1.0 + std::fabs(y));
            const auto fp = reg_->eval(x + hx, y), fm = reg_->eval(x - hx, y);
            const auto gp = reg_->eval(x, y + hy), gm = reg_->eval(x, y - hy);
            out[0] = (fp[0] - fm[0]) / (2.0 * hx);
            out[1] = (gp[0] - gm[0]) / (2.0 * hy);
            out[2] = (fp[1] - fm[1]) / (2.0 * hx);
            out[3] = (gp[1] - gm[1]) / (2.0 * hy);
            return;
        }
        case Kind::planar: {
            const std::vector<double> p = {x, y};
            const Jet jf = eval_jet(fx_, p, wrt, 1);
            const Jet jg = eval_jet(fy_, p, wrt, 1);
            out[0] = jf.derivative({1, 0});
            out[1] = jf.derivative({0, 1});
            out[2] = jg.derivative({1, 0});
            out[3] = jg.derivative({0, 1});
            return;
        }
    }
}

// ---------------------------------------------------------------------------
// integrate

Trajectory integrate(const Field& field, double x0, double y0, double t_end,
                     const IntegrateOptions& opts) {
    if (!(t_end > 0.0)) throw Error("InvalidArgument", "integrate needs t_end > 0");
    Trajectory tr;
    Vec2 u = {x0, y0};
    double t = 0.0;
    tr.points.push_back({t, u.x, u.y});

    Engine eng{field, opts.force_implicit};
    const double scale = field.stiffness_scale();
    int small_streak = 0;

    double h = resolve_initial_step(field, u, t_end, opts);
    const double hmin = 1e-14 * std::max(1.0, t_end);

    double d[2];
    field.eval(u.x, u.y, d);
    Vec2 k1 = {d[0], d[1]};
    bool k1_valid = true;

    auto push_point = [&](double tt, const Vec2& uu) {
        if (opts.store_trajectory || tr.points.size() < 2) {
            tr.points.push_back({tt, uu.x, uu.y});
        } else {
            tr.points.back() = {tt, uu.x, uu.y};
        }
    };

    auto finish = [&](Termination why, std::string detail = {}) {
        tr.termination = why;
        tr.detail = std::move(detail);
        tr.stiff_fallback = eng.implicit;
        return tr;
    };

    for (std::size_t step = 0; step < opts.max_steps; ++step) {
        if (t >= t_end) return finish(Termination::time_end);
        bool clamped = false;
        if (t + h >= t_end) {
            h = t_end - t;
            clamped = true;
        }
        if (h < hmin)
            return finish(Termination::step_failure, "step size collapsed below resolution");

        Vec2 u1;
        double err = 0.0;
        bool solver_ok = true;
        if (!eng.implicit) {
            if (!k1_valid) {
                field.eval(u.x, u.y, d);
                k1 = {d[0], d[1]};
                k1_valid = true;
            }
            const ExplicitStep st = dp_step(field, u, k1, h);
            u1 = st.u5;
            err = error_norm(st.err, u, u1, opts.rtol, opts.atol);
            if (err <= 1.0) k1 = st.k7;  // first-same-as-last reuse
        } else {
            Vec2 full, half1, half2;
            solver_ok = midpoint_step(field, u, h, full) &&
                        midpoint_step(field, u, 0.5 * h, half1) &&
                        midpoint_step(field, half1, 0.5 * h, half2);
            if (solver_ok) {
                u1 = half2;
                const Vec2 diff = {(full.x - half2.x) / 3.0, (full.y - half2.y) / 3.0};
                err = error_norm(diff, u, u1, opts.rtol, opts.atol);
            }
        }

        if (!solver_ok || !std::isfinite(err) || !std::isfinite(u1.x) || !std::isfinite(u1.y)) {
            h *= 0.25;
            k1_valid = !eng.implicit && k1_valid;
            continue;
        }

        if (err > 1.0) {  // rejected
            const double fac = eng.implicit ? std::pow(err, -1.0 / 3.0) : std::pow(err, -0.2);
            h *= std::clamp(0.9 * fac, 0.1, 0.7);
            if (scale > 0.0 && h < 1e-3 * scale && !eng.implicit) {
                if (++small_streak >= 10) {
                    eng.implicit = true;
                    small_streak = 0;
                }
            }
            continue;
        }

        // Accepted: check for chart exit and section crossings inside the step.
        double best_tau = std::numeric_limits<double>::infinity();
        Vec2 best_u{};
        Termination best_why = Termination::time_end;

        if (opts.chart_limit > 0.0 && std::fabs(u1.x) > opts.chart_limit) {
            const auto measure = [&](const Vec2& p) {
                return std::fabs(p.x) - opts.chart_limit;
            };
            const double s0 = measure(u), s1 = measure(u1);
            double tau;
            Vec2 hit;
            if (s0 < 0.0 &&
                locate_event(eng, u, h, u1, s0, s1, tau, hit,
                             std::function<double(const Vec2&)>(measure))) {
                best_tau = tau;
                best_u = hit;
                best_why = Termination::chart_exit;
            } else {
                best_tau = h;
                best_u = u1;
                best_why = Termination::chart_exit;
            }
        }

        if (opts.stop != nullptr) {
            const Section& sec = *opts.stop;
            const double s0 = sec.offset(u.x, u.y);
            const double s1 = sec.offset(u1.x, u1.y);
            if (s0 != 0.0 && (s0 > 0.0) != (s1 > 0.0)) {
                const auto measure = [&sec](const Vec2& p) { return sec.offset(p.x, p.y); };
                double tau;
                Vec2 hit;
                if (locate_event(eng, u, h, u1, s0, s1, tau, hit,
                                 std::function<double(const Vec2&)>(measure)) &&
                    sec.admissible(hit.x, hit.y) && tau < best_tau) {
                    best_tau = tau;
                    best_u = hit;
                    best_why = Termination::section_hit;
                }
            }
        }

        if (best_why != Termination::time_end) {
            push_point(t + best_tau, best_u);
            return finish(best_why);
        }

        t = clamped ? t_end : t + h;
        u = u1;
        push_point(t, u);
        if (t >= t_end) return finish(Termination::time_end);

        const double fac = eng.implicit ? std::pow(std::max(err, 1e-16), -1.0 / 3.0)
                                        : std::pow(std::max(err, 1e-16), -0.2);
        h *= std::clamp(0.9 * fac, 0.2, 5.0);
        if (scale > 0.0 && h < 1e-3 * scale && !eng.implicit) {
            if (++small_streak >= 10) eng.implicit = true;
        } else {
            small_streak = 0;
        }
    }
    return finish(Termination::step_failure, "step budget exhausted");
}

// ---------------------------------------------------------------------------
// section_map

std::vector<SectionSample> section_map(const Field& field, const Section& din,
                                       const Section& dout, int n_samples, double t_end,
                                       const IntegrateOptions& base) {
    if (n_samples < 1) throw Error("InvalidArgument", "section_map needs n_samples >= 1");
    if (!std::isfinite(din.lo) || !std::isfinite(din.hi) || !(din.lo <= din.hi))
        throw Error("InvalidArgument", "entry section needs a bounded nonempty interval");

    std::vector<SectionSample> out(static_cast<std::size_t>(n_samples));
    parallel_for(out.size(), [&](std::size_t i) {
        const double s =
            n_samples == 1
                ? 0.5 * (din.lo + din.hi)
                : din.lo + (din.hi - din.lo) * static_cast<double>(i) /
                               static_cast<double>(n_samples - 1);
        const TrajectoryPoint start = din.point(s);
        IntegrateOptions opts = base;
        opts.stop = &dout;
        opts.store_trajectory = false;
        SectionSample sample;
        sample.entry = s;
        const Trajectory tr = integrate(field, start.x, start.y, t_end, opts);
        sample.termination = tr.termination;
        if (tr.termination == Termination::section_hit) {
            sample.ok = true;
            sample.exit = dout.free_coordinate(tr.last().x, tr.last().y);
            sample.exit_time = tr.last().t;
        }
        out[i] = sample;
    });
    return out;
}

// ---------------------------------------------------------------------------
// fold landing fit

std::vector<double> default_epsilons() {
    return {1e-2, std::pow(10.0, -2.5), 1e-3, std::pow(10.0, -3.5), 1e-4};
}

IntegrateOptions landing_defaults() {
    IntegrateOptions o;
    o.rtol = 1e-10;
    o.atol = 1e-13;
    return o;
}

namespace {

void require_descending_epsilons(const std::vector<double>& eps_list, std::size_t minimum) {
    if (eps_list.size() < minimum)
        throw InsufficientSamples("need at least " + std::to_string(minimum) +
                                  " eps values, got " + std::to_string(eps_list.size()));
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        if (!(eps_list[i] > 0.0))
            throw Error("InvalidArgument", "eps values must be positive");
        if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
            throw Error("InvalidArgument", "eps values must be strictly decreasing");
    }
}

}  // namespace

LandingFit fold_landing_fit(const SlowFastSystem& sfs, double fold_x, double fold_y,
                            double rho, const std::vector<double>& eps_list,
                            const IntegrateOptions& base) {
    require_descending_epsilons(eps_list, 5);
    if (!(rho > 0.0)) throw Error("InvalidArgument", "fold landing fit needs rho > 0");

    const SingularityReport rep = classify_generic(sfs, fold_x, fold_y);
    if (rep.verdict != SfVerdict::sf_fold)
        throw Error("NotAFold", "landing fit requires a fold point of the critical set, got " +
                                    std::string(sf_verdict_name(rep.verdict)));

    // Quadratic data at the fold: f ~ (fxx/2)(x-x0)^2 + fy (y-y0).
    const std::vector<double> p0 = {fold_x, fold_y, 0.0};
    static const std::vector<int> wrt = {0, 1};
    const Jet jf = eval_jet(sfs.f, p0, wrt, 2);
    const double fxx = jf.derivative({2, 0});
    const double fy = jf.derivative({0, 1});

    LandingFit fit;
    fit.fold_x = fold_x;
    fit.fold_y = fold_y;
    fit.rho = rho;
    fit.branch_side = fxx > 0.0 ? -1 : 1;  // where d(fast)/dx is negative

    // Entry point on the attracting branch at horizontal distance rho:
    // Newton in y on f(x_in, y, 0) = 0 seeded by the quadratic model.
    const double x_in = fold_x + fit.branch_side * rho;
    double y_in = fold_y - 0.5 * fxx / fy * rho * rho;
    for (int iter = 0; iter < 60; ++iter) {
        const std::vector<double> p = {x_in, y_in, 0.0};
        const Jet j = eval_jet(sfs.f, p, wrt, 1);
        const double v = j.value();
        const double dv = j.derivative({0, 1});
        if (std::fabs(dv) < 1e-300) break;
        const double step = v / dv;
        y_in -= step;
        if (std::fabs(step) < 1e-14 * (1.0 + std::fabs(y_in))) break;
    }

    const double p_in[3] = {x_in, y_in, 0.0};
    const double g_in = eval_double(sfs.g, p_in);
    fit.drift_sign = g_in < 0.0 ? -1 : 1;
    if (std::fabs(g_in) < 1e-12)
        throw Error("NoFoldApproach", "slow drift vanishes at the branch entry point");
    if (fit.drift_sign * (fold_y - y_in) <= 0.0)
        throw Error("NoFoldApproach", "slow drift moves away from the fold ordinate");
    fit.jump_side = (fy * fit.drift_sign) > 0.0 ? 1 : -1;

    const Section dout = Section::vertical(fold_x + fit.jump_side * rho);
    const double t_total = 3.0 * std::fabs(y_in - fold_y) / std::fabs(g_in) + 1.0;

    fit.samples.resize(eps_list.size());
    std::vector<std::string> failures(eps_list.size());
    parallel_for(eps_list.size(), [&](std::size_t i) {
        const double eps = eps_list[i];
        IntegrateOptions opts = base;
        opts.stop = &dout;
        opts.store_trajectory = false;
        const Field f = Field::slow_fast(sfs, eps);
        const Trajectory tr = integrate(f, x_in, y_in, t_total, opts);
        if (tr.termination != Termination::section_hit) {
            failures[i] = "eps=" + std::to_string(eps) + ": " +
                          termination_name(tr.termination) +
                          (tr.detail.empty() ? "" : " (" + tr.detail + ")");
            return;
        }
        fit.samples[i] = {eps, std::fabs(tr.last().y - fold_y)};
    });
    for (const auto& msg : failures)
        if (!msg.empty()) throw Error("StepFailure", "landing integration failed: " + msg);

    std::vector<double> lx, ly;
    lx.reserve(fit.samples.size());
    ly.reserve(fit.samples.size());
    for (const auto& s : fit.samples) {
        if (!(s.offset > 0.0))
            throw Error("StepFailure", "landing offset is not positive; cannot fit a power law");
        lx.push_back(std::log(s.eps));
        ly.push_back(std::log(s.offset));
    }
    fit.exponent = least_squares_slope(lx, ly, fit.r_squared);
    return fit;
}

// ---------------------------------------------------------------------------
// contraction estimate

ContractionReport contraction_estimate(const SlowFastSystem& sfs,
                                       const std::vector<double>& eps_list,
                                       const Section& din, const Section& dout,
                                       int n_samples, double t_end,
                                       const IntegrateOptions& base) {
    require_descending_epsilons(eps_list, 2);
    if (n_samples < 2)
        throw Error("InvalidArgument", "contraction estimate needs n_samples >= 2");

    ContractionReport report;
    report.table.reserve(eps_list.size());
    for (const double eps : eps_list) {
        const Field f = Field::slow_fast(sfs, eps);
        const auto samples = section_map(f, din, dout, n_samples, t_end, base);
        WidthSample w;
        w.eps = eps;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (const auto& s : samples) {
            if (!s.ok) continue;
            ++w.samples_ok;
            lo = std::min(lo, s.exit);
            hi = std::max(hi, s.exit);
        }
        if (w.samples_ok < 2) {
            w.width = std::numeric_limits<double>::quiet_NaN();
            w.resolved = false;
        } else {
            w.width = hi - lo;
            w.resolved = w.width >= 1e-13;
            if (w.resolved) w.rate = eps * std::log(1.0 / w.width);
        }
        report.table.push_back(w);
    }

    if (!report.table.front().resolved)
        throw UnresolvableWidth(
            "exit width at the largest eps is already below float resolution (1e-13)");

    // Strict decrease of eps*log(1/width) along the resolved prefix.
    std::size_t resolved = 0;
    while (resolved < report.table.size() && report.table[resolved].resolved) ++resolved;
    report.contracting = resolved >= 2;
    for (std::size_t i = 1; i < resolved; ++i) {
        if (!(report.table[i].rate < report.table[i - 1].rate)) {
            report.contracting = false;
            break;
        }
    }
    if (resolved < report.table.size())
        report.note = "the last " + std::to_string(report.table.size() - resolved) +
                      " eps values have exit widths below float resolution (1e-13)";
    return report;
}

// ---------------------------------------------------------------------------
// CSV writers

void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
    os << "t,x,y\n";
    for (const auto& p : tr.points) csv_row(os, {p.t, p.x, p.y});
}

void write_section_samples_csv(std::ostream& os, const std::vector<SectionSample>& samples) {
    os << "entry,exit,exit_time,ok,termination\n";
    char buf[64];
    for (const auto& s : samples) {
        std::snprintf(buf, sizeof buf, "%.17g", s.entry);
        os << buf << ',';
        if (s.ok) {
            std::snprintf(buf, sizeof buf, "%.17g", s.exit);
            os << buf << ',';
            std::snprintf(buf, sizeof buf, "%.17g", s.exit_time);
            os << buf;
        } else {
            os << ",";
        }
        os << ',' << (s.ok ? 1 : 0) << ',' << termination_name(s.termination) << '\n';
    }
}

void write_landing_csv(std::ostream& os, const LandingFit& fit) {
    os << "eps,landing_offset\n";
    for (const auto& s : fit.samples) csv_row(os, {s.eps, s.offset});
}

void write_contraction_csv(std::ostream& os, const ContractionReport& report) {
    os << "eps,width,samples_ok,resolved,rate\n";
    char buf[64];
    for (const auto& w : report.table) {
        std::snprintf(buf, sizeof buf, "%.17g", w.eps);
        os << buf << ',';
        std::snprintf(buf, sizeof buf, "%.17g", w.width);
        os << buf << ',' << w.samples_ok << ',' << (w.resolved ? 1 : 0) << ',';
        std::snprintf(buf, sizeof buf, "%.17g", w.rate);
        os << buf << '\n';
    }
}

}  // namespace sfreg
