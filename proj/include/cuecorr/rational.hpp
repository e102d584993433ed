#pragma once

#include <cstdint>
#include <string>

#include "cuecorr/errors.hpp"

namespace cuecorr {

// Exact rational arithmetic on reduced 64-bit fractions. All products and
// cross terms are formed in 128-bit and reduced before narrowing, so the
// type is safe as long as the *reduced* numerator and denominator fit in
// int64; it throws consistency_error instead of overflowing silently.
//
// The combinatorial weights handled here (factorials up to 12!, alternating
// composition sums, integer lattice eliminations on systems of size <= 13)
// stay far below that bound.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(long long n) : num_(n), den_(1) {}
    Rational(long long n, long long d) { *this = make(n, d); }

    long long num() const { return num_; }
    long long den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }

    long long as_integer() const {
        if (den_ != 1) throw consistency_error("Rational::as_integer on non-integer value");
        return num_;
    }

    double as_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    Rational operator-() const {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return make128(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return make128(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return make128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw consistency_error("Rational division by zero");
        return make128(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    using i128 = __int128;

    static Rational make(long long n, long long d) { return make128(i128(n), i128(d)); }

    static i128 abs128(i128 v) { return v < 0 ? -v : v; }

    static i128 gcd128(i128 a, i128 b) {
        a = abs128(a);
        b = abs128(b);
        while (b != 0) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    static Rational make128(i128 n, i128 d) {
        if (d == 0) throw consistency_error("Rational with zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        if (n == 0) return Rational{};
        i128 g = gcd128(n, d);
        n /= g;
        d /= g;
        constexpr i128 lo = i128(INT64_MIN), hi = i128(INT64_MAX);
        if (n < lo || n > hi || d > hi)
            throw consistency_error("Rational overflow after reduction");
        Rational r;
        r.num_ = static_cast<long long>(n);
        r.den_ = static_cast<long long>(d);
        return r;
    }

    long long num_ = 0;
    long long den_ = 1;
};

}  // namespace cuecorr
