// rational.hpp
// ------------
// Thin value wrapper around GMP's mpq_class giving the library a single
// arbitrary-precision rational type with parsing, printing and the few
// numeric helpers the rest of the code needs.  All arithmetic is exact and
// results are kept in canonical form (reduced, positive denominator).

#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>

#include "sfreg/errors.hpp"

namespace sfreg {

class Rational {
public:
    Rational() : v_(0) {}
    Rational(int n) : v_(n) {}                      // NOLINT(google-explicit-constructor)
    Rational(long n) : v_(static_cast<long>(n)) {}  // NOLINT(google-explicit-constructor)
    Rational(long num, long den) : v_(num, den) {
        if (den == 0) throw EvaluationSingular("rational with zero denominator");
        v_.canonicalize();
    }
    explicit Rational(const mpq_class& v) : v_(v) { v_.canonicalize(); }

    // Parses "123", "-4/7", "+9" (optionally with surrounding spaces).
    static Rational parse(const std::string& text) {
        std::size_t a = text.find_first_not_of(" \t");
        std::size_t b = text.find_last_not_of(" \t");
        if (a == std::string::npos)
            throw ParseError(0, "empty rational literal");
        std::string core = text.substr(a, b - a + 1);
        if (!core.empty() && core.front() == '+') core = core.substr(1);
        validate_literal(core);
        mpq_class v;
        if (v.set_str(core, 10) != 0)
            throw ParseError(0, "invalid rational literal '" + text + "'");
        if (v.get_den() == 0)
            throw EvaluationSingular("rational literal '" + text + "' has zero denominator");
        v.canonicalize();
        return Rational(v);
    }

    // Exact binary value of a finite double (every finite double is p/2^k).
    static Rational from_double(double x) {
        if (!std::isfinite(x))
            throw EvaluationSingular("cannot convert a non-finite double to a rational");
        mpq_class v(x);
        return Rational(v);
    }

    [[nodiscard]] std::string str() const { return v_.get_str(); }
    [[nodiscard]] double to_double() const { return v_.get_d(); }

    [[nodiscard]] int sign() const { return sgn(v_); }
    [[nodiscard]] bool is_zero() const { return sgn(v_) == 0; }
    [[nodiscard]] bool is_integer() const { return v_.get_den() == 1; }

    [[nodiscard]] Rational abs() const {
        mpq_class r = ::abs(v_);
        return Rational(r);
    }

    [[nodiscard]] Rational pow(unsigned n) const {
        mpq_class acc(1);
        mpq_class base = v_;
        unsigned k = n;
        while (k > 0) {
            if (k & 1u) acc = acc * base;
            base = base * base;
            k >>= 1u;
        }
        return Rational(acc);
    }

    [[nodiscard]] Rational reciprocal() const {
        if (is_zero()) throw EvaluationSingular("reciprocal of zero");
        mpq_class r = 1 / v_;
        return Rational(r);
    }

    [[nodiscard]] const mpq_class& raw() const { return v_; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        mpq_class r = a.v_ + b.v_;
        return Rational(r);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        mpq_class r = a.v_ - b.v_;
        return Rational(r);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        mpq_class r = a.v_ * b.v_;
        return Rational(r);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) throw EvaluationSingular("rational division by zero");
        mpq_class r = a.v_ / b.v_;
        return Rational(r);
    }
    Rational operator-() const {
        mpq_class r = -v_;
        return Rational(r);
    }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw EvaluationSingular("rational division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) == 0; }
    friend bool operator!=(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) != 0; }
    friend bool operator<(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) < 0; }
    friend bool operator<=(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) <= 0; }
    friend bool operator>(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) > 0; }
    friend bool operator>=(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) >= 0; }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
        return os << r.v_.get_str();
    }

private:
    static void validate_literal(const std::string& s) {
        // mpq set_str is lenient about things like "1/-2"; restrict to the
        // canonical shapes "[-]digits" and "[-]digits/digits".
        std::size_t i = 0;
        auto digits = [&](std::size_t from) {
            std::size_t j = from;
            while (j < s.size() && s[j] >= '0' && s[j] <= '9') ++j;
            return j;
        };
        if (i < s.size() && s[i] == '-') ++i;
        std::size_t after_num = digits(i);
        if (after_num == i) throw ParseError(i, "invalid rational literal '" + s + "'");
        if (after_num == s.size()) return;
        if (s[after_num] != '/')
            throw ParseError(after_num, "invalid rational literal '" + s + "'");
        std::size_t den_start = after_num + 1;
        std::size_t after_den = digits(den_start);
        if (after_den == den_start || after_den != s.size())
            throw ParseError(den_start, "invalid rational literal '" + s + "'");
    }

    mpq_class v_;
};

}  // namespace sfreg
