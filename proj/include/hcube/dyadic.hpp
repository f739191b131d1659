#pragma once

#include <cmath>
#include <compare>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace hcube {

/// Exact value numerator / 2^exponent, kept with an odd numerator (or zero).
class Dyadic {
public:
    using Int = boost::multiprecision::cpp_int;

    Dyadic() = default;
    Dyadic(long long n) : num_(n) {}  // NOLINT: implicit from integers is intended
    Dyadic(Int numerator, unsigned exponent) : num_(std::move(numerator)), exp_(exponent) { normalize(); }

    /// 2^e for any integer e.
    static Dyadic pow2(long long e) {
        if (e >= 0) return Dyadic(Int(1) << static_cast<unsigned>(e), 0);
        return Dyadic(Int(1), static_cast<unsigned>(-e));
    }

    const Int& numerator() const { return num_; }
    unsigned exponent() const { return exp_; }
    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return exp_ == 0; }

    Dyadic& operator+=(const Dyadic& o) {
        if (exp_ >= o.exp_) {
            num_ += o.num_ << (exp_ - o.exp_);
        } else {
            num_ = (num_ << (o.exp_ - exp_)) + o.num_;
            exp_ = o.exp_;
        }
        normalize();
        return *this;
    }
    Dyadic& operator-=(const Dyadic& o) { return *this += -o; }
    Dyadic& operator*=(const Dyadic& o) {
        num_ *= o.num_;
        exp_ += o.exp_;
        normalize();
        return *this;
    }
    Dyadic operator-() const {
        Dyadic r = *this;
        r.num_ = -r.num_;
        return r;
    }
    friend Dyadic operator+(Dyadic a, const Dyadic& b) { return a += b; }
    friend Dyadic operator-(Dyadic a, const Dyadic& b) { return a -= b; }
    friend Dyadic operator*(Dyadic a, const Dyadic& b) { return a *= b; }

    Dyadic pow(unsigned n) const {
        Dyadic r(1), base = *this;
        while (n) {
            if (n & 1u) r *= base;
            base *= base;
            n >>= 1;
        }
        return r;
    }

    friend bool operator==(const Dyadic& a, const Dyadic& b) { return a.num_ == b.num_ && a.exp_ == b.exp_; }
    friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
        unsigned e = std::max(a.exp_, b.exp_);
        Int x = a.num_ << (e - a.exp_);
        Int y = b.num_ << (e - b.exp_);
        if (x < y) return std::strong_ordering::less;
        if (x > y) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    /// "m/2^k"
    std::string to_string() const { return num_.str() + "/2^" + std::to_string(exp_); }

    double to_double() const {
        // Scale down very large numerators before the conversion to keep precision.
        const unsigned bits = num_ == 0 ? 0 : static_cast<unsigned>(boost::multiprecision::msb(abs(num_))) + 1;
        const unsigned shift = bits > 60 ? bits - 60 : 0;
        const double head = static_cast<double>((num_ >> shift).convert_to<long long>());
        return std::ldexp(head, static_cast<int>(shift) - static_cast<int>(exp_));
    }

private:
    void normalize() {
        if (num_ == 0) {
            exp_ = 0;
            return;
        }
        while (exp_ > 0 && !bit_test(num_, 0)) {
            num_ >>= 1;
            --exp_;
        }
    }

    Int num_ = 0;
    unsigned exp_ = 0;
};

} // namespace hcube
