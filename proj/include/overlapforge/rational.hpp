#pragma once

#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "bigint.hpp"

namespace overlapforge {

// Exact rational, always stored reduced with positive denominator.
// Comparisons are by cross-multiplication; nothing here touches floating point.
class BigRational {
public:
    BigRational() : num_(0), den_(1) {}
    BigRational(BigInt n) : num_(std::move(n)), den_(1) {}
    BigRational(long long n) : num_(n), den_(1) {}
    BigRational(int n) : num_(n), den_(1) {}
    BigRational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }
    BigRational(long long n, long long d) : num_(n), den_(d) { normalize(); }

    static BigRational from_string(std::string_view s) {
        auto slash = s.find('/');
        if (slash == std::string_view::npos) return BigRational(BigInt::from_string(s));
        return BigRational(BigInt::from_string(s.substr(0, slash)),
                           BigInt::from_string(s.substr(slash + 1)));
    }

    // 2^e for any integer e
    static BigRational pow2(long long e) {
        if (e >= 0) return BigRational(BigInt::pow2(static_cast<std::uint64_t>(e)));
        return BigRational(BigInt(1), BigInt::pow2(static_cast<std::uint64_t>(-e)));
    }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    int sign() const { return num_.sign(); }
    bool is_integer() const { return den_ == BigInt(1); }

    BigRational abs() const {
        BigRational r = *this;
        r.num_ = r.num_.abs();
        return r;
    }

    friend BigRational operator+(const BigRational& a, const BigRational& b) {
        return BigRational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend BigRational operator-(const BigRational& a, const BigRational& b) {
        return BigRational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend BigRational operator*(const BigRational& a, const BigRational& b) {
        return BigRational(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend BigRational operator/(const BigRational& a, const BigRational& b) {
        if (b.is_zero()) throw std::domain_error("BigRational: division by zero");
        return BigRational(a.num_ * b.den_, a.den_ * b.num_);
    }
    BigRational operator-() const {
        BigRational r = *this;
        r.num_ = -r.num_;
        return r;
    }
    BigRational& operator+=(const BigRational& o) { return *this = *this + o; }
    BigRational& operator-=(const BigRational& o) { return *this = *this - o; }
    BigRational& operator*=(const BigRational& o) { return *this = *this * o; }

    friend bool operator==(const BigRational& a, const BigRational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const BigRational& a, const BigRational& b) {
        return a.num_ * b.den_ <=> b.num_ * a.den_;
    }

    BigInt floor() const { return BigInt::floor_div(num_, den_); }
    BigInt ceil() const { return BigInt::ceil_div(num_, den_); }

    // "num/den", e.g. "-3/7"; integers render as "n/1"
    std::string to_string() const { return num_.to_string() + "/" + den_.to_string(); }

    double to_double_approx() const {
        std::size_t bn = num_.bit_length(), bd = den_.bit_length();
        // shift both operands into double range, track the exponent
        long long sn = bn > 512 ? static_cast<long long>(bn) - 512 : 0;
        long long sd = bd > 512 ? static_cast<long long>(bd) - 512 : 0;
        double n = (num_ >> static_cast<std::uint64_t>(sn)).to_double_approx();
        double d = (den_ >> static_cast<std::uint64_t>(sd)).to_double_approx();
        return std::ldexp(n / d, static_cast<int>(sn - sd));
    }

private:
    BigInt num_, den_;

    void normalize() {
        if (den_.is_zero()) throw std::domain_error("BigRational: zero denominator");
        if (den_.is_negative()) {
            num_ = -num_;
            den_ = -den_;
        }
        if (num_.is_zero()) {
            den_ = BigInt(1);
            return;
        }
        BigInt g = BigInt::gcd(num_, den_);
        if (g != BigInt(1)) {
            num_ = num_ / g;
            den_ = den_ / g;
        }
    }
};

inline BigRational abs(const BigRational& x) { return x.abs(); }

} // namespace overlapforge
