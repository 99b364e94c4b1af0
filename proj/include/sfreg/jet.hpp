// jet.hpp
// -------
// Truncated multivariate Taylor arithmetic ("jets") used to read partial
// derivatives of expressions off automatically, without symbolic
// differentiation.  A Jet stores the Taylor coefficients c_alpha of a scalar
// quantity with respect to up to four seed variables, up to total order 3;
// the partial derivative of multi-index alpha equals c_alpha * alpha!.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "sfreg/errors.hpp"
#include "sfreg/expr.hpp"

namespace sfreg {

class Jet {
public:
    static constexpr int kMaxVars = 4;
    static constexpr int kMaxOrder = 3;

    Jet(int nvars, int order) : nvars_(nvars), order_(order) {
        if (nvars < 0 || nvars > kMaxVars)
            throw Error("Internal", "jet variable count out of range");
        if (order < 0 || order > kMaxOrder)
            throw Error("Internal", "jet order out of range");
        build_basis();
        coeff_.assign(basis_.size(), 0.0);
    }

    static Jet constant(int nvars, int order, double v) {
        Jet j(nvars, order);
        j.coeff_[0] = v;
        return j;
    }

    static Jet seed(int nvars, int order, int which, double v) {
        Jet j(nvars, order);
        j.coeff_[0] = v;
        if (order >= 1) {
            std::array<std::uint8_t, kMaxVars> a{};
            a[static_cast<std::size_t>(which)] = 1;
            j.coeff_[static_cast<std::size_t>(j.index_of(a))] = 1.0;
        }
        return j;
    }

    [[nodiscard]] int nvars() const { return nvars_; }
    [[nodiscard]] int order() const { return order_; }
    [[nodiscard]] double value() const { return coeff_[0]; }

    // Taylor coefficient for the given exponent tuple (missing entries zero).
    [[nodiscard]] double coefficient(std::span<const int> alpha) const {
        std::array<std::uint8_t, kMaxVars> a{};
        int total = 0;
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            a[i] = static_cast<std::uint8_t>(alpha[i]);
            total += alpha[i];
        }
        if (total > order_) throw Error("Internal", "jet coefficient beyond truncation order");
        return coeff_[static_cast<std::size_t>(index_of(a))];
    }

    // Partial derivative d^alpha / dx^alpha = coefficient * alpha!.
    [[nodiscard]] double derivative(std::span<const int> alpha) const {
        double fact = 1.0;
        for (std::size_t i = 0; i < alpha.size(); ++i)
            for (int k = 2; k <= alpha[i]; ++k) fact *= k;
        return coefficient(alpha) * fact;
    }

    [[nodiscard]] double derivative(std::initializer_list<int> alpha) const {
        return derivative(std::span<const int>(alpha.begin(), alpha.size()));
    }

    friend Jet operator+(const Jet& a, const Jet& b) {
        Jet r(a.nvars_, std::min(a.order_, b.order_));
        for (std::size_t i = 0; i < r.coeff_.size(); ++i)
            r.coeff_[i] = a.coeff_of(r.basis_[i]) + b.coeff_of(r.basis_[i]);
        return r;
    }

    friend Jet operator-(const Jet& a, const Jet& b) {
        Jet r(a.nvars_, std::min(a.order_, b.order_));
        for (std::size_t i = 0; i < r.coeff_.size(); ++i)
            r.coeff_[i] = a.coeff_of(r.basis_[i]) - b.coeff_of(r.basis_[i]);
        return r;
    }

    Jet operator-() const {
        Jet r = *this;
        for (auto& c : r.coeff_) c = -c;
        return r;
    }

    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r(a.nvars_, std::min(a.order_, b.order_));
        for (std::size_t i = 0; i < a.basis_.size(); ++i) {
            if (a.total_of(a.basis_[i]) > r.order_) continue;
            if (a.coeff_[i] == 0.0) continue;
            for (std::size_t j = 0; j < b.basis_.size(); ++j) {
                if (b.coeff_[j] == 0.0) continue;
                std::array<std::uint8_t, kMaxVars> sum{};
                int total = 0;
                for (int v = 0; v < a.nvars_; ++v) {
                    sum[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(
                        a.basis_[i][static_cast<std::size_t>(v)] +
                        b.basis_[j][static_cast<std::size_t>(v)]);
                    total += sum[static_cast<std::size_t>(v)];
                }
                if (total > r.order_) continue;
                r.coeff_[static_cast<std::size_t>(r.index_of(sum))] += a.coeff_[i] * b.coeff_[j];
            }
        }
        return r;
    }

    [[nodiscard]] Jet scaled(double s) const {
        Jet r = *this;
        for (auto& c : r.coeff_) c *= s;
        return r;
    }

    // Truncated series quotient; requires the divisor's value to be nonzero.
    friend Jet operator/(const Jet& u, const Jet& v) {
        if (v.value() == 0.0 || !std::isfinite(v.value()))
            throw EvaluationSingular("jet division by a quantity that vanishes at the point");
        Jet r(u.nvars_, std::min(u.order_, v.order_));
        // Graded basis order lets each coefficient be solved from earlier ones:
        // u = v * r  =>  r_a = (u_a - sum_{0<b<=a} v_b r_{a-b}) / v_0.
        for (std::size_t i = 0; i < r.basis_.size(); ++i) {
            double acc = u.coeff_of(r.basis_[i]);
            for (std::size_t j = 1; j < r.basis_.size(); ++j) {
                std::array<std::uint8_t, kMaxVars> diff{};
                if (!subtract_exponents(r.basis_[i], r.basis_[j], diff)) continue;
                acc -= v.coeff_of(r.basis_[j]) * r.coeff_[static_cast<std::size_t>(r.index_of(diff))];
            }
            r.coeff_[i] = acc / v.value();
        }
        return r;
    }

    [[nodiscard]] Jet pow_int(int n) const {
        if (n < 0) {
            Jet one = constant(nvars_, order_, 1.0);
            return one / this->pow_int(-n);
        }
        Jet acc = constant(nvars_, order_, 1.0);
        Jet base = *this;
        int k = n;
        while (k > 0) {
            if (k & 1) acc = acc * base;
            base = base * base;
            k >>= 1;
        }
        return acc;
    }

    [[nodiscard]] Jet exp_jet() const {
        // exp(u) = exp(u0) * sum_k (u - u0)^k / k!  truncated at the order.
        Jet hat = *this;
        hat.coeff_[0] = 0.0;
        Jet sum = constant(nvars_, order_, 1.0);
        Jet term = constant(nvars_, order_, 1.0);
        double fact = 1.0;
        for (int k = 1; k <= order_; ++k) {
            term = term * hat;
            fact *= k;
            sum = sum + term.scaled(1.0 / fact);
        }
        return sum.scaled(std::exp(value()));
    }

    // The jet of the partial derivative with respect to seed variable `which`;
    // one order lower than this jet.
    [[nodiscard]] Jet deriv_shift(int which) const {
        if (order_ < 1) throw Error("Internal", "cannot differentiate an order-0 jet");
        Jet r(nvars_, order_ - 1);
        for (std::size_t i = 0; i < r.basis_.size(); ++i) {
            std::array<std::uint8_t, kMaxVars> up = r.basis_[i];
            up[static_cast<std::size_t>(which)] =
                static_cast<std::uint8_t>(up[static_cast<std::size_t>(which)] + 1);
            r.coeff_[i] = coeff_of(up) * (up[static_cast<std::size_t>(which)]);
        }
        return r;
    }

private:
    using Exponents = std::array<std::uint8_t, kMaxVars>;

    void build_basis() {
        // Graded (total degree, then lexicographic) enumeration of exponents.
        for (int total = 0; total <= order_; ++total) {
            Exponents a{};
            enumerate(total, 0, a);
        }
    }

    void enumerate(int remaining, int var, Exponents a) {
        if (var == nvars_ - 1 || nvars_ == 0) {
            if (nvars_ > 0) a[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(remaining);
            if (nvars_ > 0 || remaining == 0) basis_.push_back(a);
            return;
        }
        for (int k = remaining; k >= 0; --k) {
            Exponents b = a;
            b[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(k);
            enumerate(remaining - k, var + 1, b);
        }
    }

    [[nodiscard]] int index_of(const Exponents& a) const {
        for (std::size_t i = 0; i < basis_.size(); ++i)
            if (basis_[i] == a) return static_cast<int>(i);
        throw Error("Internal", "jet exponent tuple outside the basis");
    }

    [[nodiscard]] double coeff_of(const Exponents& a) const {
        int total = 0;
        for (int v = 0; v < nvars_; ++v) total += a[static_cast<std::size_t>(v)];
        if (total > order_) return 0.0;
        return coeff_[static_cast<std::size_t>(index_of(a))];
    }

    [[nodiscard]] int total_of(const Exponents& a) const {
        int total = 0;
        for (int v = 0; v < nvars_; ++v) total += a[static_cast<std::size_t>(v)];
        return total;
    }

    static bool subtract_exponents(const Exponents& a, const Exponents& b, Exponents& out) {
        bool nonzero = false;
        for (std::size_t v = 0; v < static_cast<std::size_t>(kMaxVars); ++v) {
            if (b[v] > a[v]) return false;
            out[v] = static_cast<std::uint8_t>(a[v] - b[v]);
            if (b[v] > 0) nonzero = true;
        }
        return nonzero;  // only proper (nonzero) subtractions participate
    }

    int nvars_;
    int order_;
    std::vector<Exponents> basis_;
    std::vector<double> coeff_;
};

// Evaluates `e` as a jet at `point` (one coordinate per expression variable),
// seeding first-order perturbations for the variables listed in `wrt`.  The
// result is a jet in wrt.size() seed variables of the given order.
Jet eval_jet(const Expression& e, std::span<const double> point, std::span<const int> wrt,
             int order);

}  // namespace sfreg
