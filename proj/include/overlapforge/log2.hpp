#pragma once

#include <cstdint>
#include <stdexcept>

#include "rational.hpp"

namespace overlapforge {

// Two-sided bounds on log2 of a positive quantity. The bounds themselves are
// exact rationals; 2^lo <= x <= 2^hi holds by construction.
struct Log2Bounds {
    BigRational lo, hi;

    BigRational width() const { return hi - lo; }
    bool contains(const BigRational& v) const { return lo <= v && v <= hi; }
};

// exact e with 2^e <= x < 2^{e+1}
inline long long floor_log2(const BigRational& x) {
    if (x.sign() <= 0) throw std::domain_error("floor_log2: input must be positive");
    long long e = static_cast<long long>(x.num().bit_length()) -
                  static_cast<long long>(x.den().bit_length());
    // x >= 2^e iff num >= den << e (shift whichever side keeps exponents non-negative)
    auto at_least_pow2 = [&x](long long k) {
        if (k >= 0) return x.num() >= (x.den() << static_cast<std::uint64_t>(k));
        return (x.num() << static_cast<std::uint64_t>(-k)) >= x.den();
    };
    if (!at_least_pow2(e)) --e;
    return e;
}

namespace detail {

// Emits p bits of the binary expansion of log2(v0 / 2^K) for v0 in [2^K, 2^{K+1}]
// by repeated squaring on a fixed-point mantissa. With round_up=false every
// operation rounds down and the emitted value never exceeds the true expansion;
// with round_up=true the mirror holds. (Once a rounding decision diverges from
// the exact run, the emitted prefix is already on the correct side.)
inline BigInt log2_fixed_run(BigInt v, std::uint64_t k, unsigned p, bool round_up) {
    const BigInt threshold = BigInt::pow2(k + 1);
    const BigInt one(1);
    BigInt bits;
    auto shr = [&](const BigInt& x, std::uint64_t s) {
        if (!round_up) return x >> s;
        BigInt r = x >> s;
        if ((r << s) != x) r += one;
        return r;
    };
    for (unsigned i = 0; i < p; ++i) {
        v = shr(v * v, k);
        bool bit = v >= threshold;
        if (bit) v = shr(v, 1);
        bits = (bits << 1) + (bit ? one : BigInt(0));
    }
    return bits;
}

} // namespace detail

// Certified log2 bracketing: returns [lo, hi] with 2^lo <= x <= 2^hi and
// hi - lo <= 2^(-precision_bits + 2). Powers of two short-circuit to a point.
inline Log2Bounds log2_bounds(const BigRational& x, unsigned precision_bits) {
    if (x.sign() <= 0) throw std::domain_error("log2_bounds: input must be positive");
    if (x.num().is_power_of_two() && x.den().is_power_of_two()) {
        long long e = static_cast<long long>(x.num().bit_length()) -
                      static_cast<long long>(x.den().bit_length());
        BigRational exact{BigInt(e)};
        return {exact, exact};
    }

    const long long e = floor_log2(x);
    const unsigned p = precision_bits + 2;
    std::uint64_t k = precision_bits + 32;
    while (true) {
        // fixed-point mantissa of y = x / 2^e in [1, 2): A/2^k <= y <= B/2^k
        long long shift = static_cast<long long>(k) - e;
        BigInt n = x.num(), d = x.den();
        if (shift >= 0)
            n = n << static_cast<std::uint64_t>(shift);
        else
            d = d << static_cast<std::uint64_t>(-shift);
        auto [a, rem] = BigInt::divmod(n, d);
        BigInt b = rem.is_zero() ? a : a + BigInt(1);

        BigInt lo_bits = detail::log2_fixed_run(a, k, p, false);
        BigInt hi_bits = detail::log2_fixed_run(b, k, p, true) + BigInt(1);
        if (hi_bits - lo_bits <= BigInt(16)) {
            BigRational scale = BigRational(BigInt(1), BigInt::pow2(p));
            BigRational base{BigInt(e)};
            return {base + BigRational(lo_bits) * scale, base + BigRational(hi_bits) * scale};
        }
        k *= 2; // mantissa too coarse for this x; retry sharper
    }
}

} // namespace overlapforge
