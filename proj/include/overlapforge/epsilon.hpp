#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "log2.hpp"
#include "rational.hpp"

namespace overlapforge {

// Closed integer bracket [lo, hi]; the shadow construction tracks every
// quantity it cannot afford to materialize through one of these.
struct IntBracket {
    BigInt lo, hi;

    bool contains(const BigInt& v) const { return lo <= v && v <= hi; }
    bool is_point() const { return lo == hi; }
};

enum class EpsKind { pow8, superexp, table };

inline const char* to_string(EpsKind k) {
    switch (k) {
    case EpsKind::pow8: return "pow8";
    case EpsKind::superexp: return "superexp";
    case EpsKind::table: return "table";
    }
    return "?";
}

// Target sequence (eps_n). Closed forms:
//   pow8      eps_n = 8^-n
//   superexp  eps_n = 8^-(n^2)
//   table     explicit head of exact rationals, optional closed-form tail
// The effective sequence is always clamped to min(eps_n, 8^-n).
class EpsilonSpec {
public:
    static EpsilonSpec pow8() { return EpsilonSpec(EpsKind::pow8, {}, std::nullopt); }
    static EpsilonSpec superexp() { return EpsilonSpec(EpsKind::superexp, {}, std::nullopt); }
    static EpsilonSpec table(std::vector<BigRational> values,
                             std::optional<EpsKind> tail = std::nullopt) {
        if (values.empty()) throw std::domain_error("EpsilonSpec: empty table");
        for (const auto& v : values)
            if (v.sign() <= 0) throw std::domain_error("EpsilonSpec: eps_n must be positive");
        if (tail && *tail == EpsKind::table)
            throw std::domain_error("EpsilonSpec: tail must be a closed form");
        return EpsilonSpec(EpsKind::table, std::move(values), tail);
    }

    EpsKind kind() const { return kind_; }
    const std::vector<BigRational>& table_values() const { return values_; }
    std::optional<EpsKind> table_tail() const { return tail_; }

    bool operator==(const EpsilonSpec&) const = default;

    // effective (clamped) eps_n, exact
    BigRational at(std::uint64_t n) const {
        check_depth(n);
        BigRational clamp = pow8_inv(n);
        if (kind_ == EpsKind::pow8) return clamp;
        if (kind_ == EpsKind::superexp) return pow8_inv(n * n);
        if (n <= values_.size()) {
            const BigRational& raw = values_[n - 1];
            return raw < clamp ? raw : clamp;
        }
        if (!tail_) throw incomplete_spec_error("EpsilonSpec: table has no tail rule at n=" +
                                                std::to_string(n));
        return *tail_ == EpsKind::pow8 ? clamp : pow8_inv(n * n);
    }

    // exact min over n in [a, b]; the closed-form tails are non-increasing,
    // so only the table head is ever scanned
    BigRational range_min(std::uint64_t a, std::uint64_t b) const {
        if (a < 1 || a > b) throw std::domain_error("EpsilonSpec: bad range");
        if (kind_ != EpsKind::table) return at(b);
        BigRational best;
        bool have = false;
        for (std::uint64_t n = a; n <= b && n <= values_.size(); ++n) {
            BigRational v = at(n);
            if (!have || v < best) {
                best = std::move(v);
                have = true;
            }
        }
        if (b > values_.size()) {
            BigRational v = at(b); // tail is non-increasing: min of the tail part
            if (!have || v < best) {
                best = std::move(v);
                have = true;
            }
        }
        return best;
    }

    // ceil(1 / range_min), the construction's digit choice; with round_up_pow8
    // the result is lifted to the next power of 8 (the Remark-1 variant)
    BigInt ceil_inv_range_min(std::uint64_t a, std::uint64_t b, bool round_up_pow8) const {
        BigInt z;
        if (kind_ == EpsKind::pow8) {
            if (b > (1ull << 26))
                throw resource_limit_error("EpsilonSpec: digit beyond materializable size");
            z = BigInt::pow8(b);
        } else if (kind_ == EpsKind::superexp) {
            if (b > (1ull << 13))
                throw resource_limit_error("EpsilonSpec: digit beyond materializable size");
            z = BigInt::pow8(b * b);
        } else {
            BigRational m = range_min(a, b);
            z = BigInt::ceil_div(m.den(), m.num());
        }
        return round_up_pow8 ? next_pow8(z) : z;
    }

    // exact log2 of the effective eps_n (a point for the pure power forms)
    Log2Bounds log2_at(std::uint64_t n, unsigned precision = 48) const {
        if (kind_ == EpsKind::pow8 || (kind_ == EpsKind::table && n > values_.size() &&
                                       tail_ && *tail_ == EpsKind::pow8)) {
            BigRational e{-(BigInt(3) * BigInt(static_cast<long long>(n)))};
            return {e, e};
        }
        if (kind_ == EpsKind::superexp || (kind_ == EpsKind::table && n > values_.size())) {
            check_depth(n);
            BigRational e{-(BigInt(3) * BigInt(static_cast<long long>(n)) *
                            BigInt(static_cast<long long>(n)))};
            if (kind_ == EpsKind::superexp || (tail_ && *tail_ == EpsKind::superexp))
                return {e, e};
        }
        return log2_bounds(at(n), precision);
    }

    // Integer log2 bracket of ceil(1/min eps over [a,b]) when the range
    // endpoints are themselves only known as brackets. Larger a / smaller b
    // can only raise the min, which orients the two evaluations.
    IntBracket shadow_zeta_log2(const IntBracket& a, const IntBracket& b,
                                bool round_up_pow8) const {
        BigInt lo_b = b.lo >= a.hi ? b.lo : a.hi;
        IntBracket narrow = zeta_log2_point(a.hi, lo_b);
        IntBracket wide = zeta_log2_point(a.lo, b.hi);
        IntBracket out{narrow.lo, wide.hi};
        if (round_up_pow8) {
            out.lo = BigInt(3) * BigInt::ceil_div(out.lo, BigInt(3));
            out.hi = BigInt(3) * BigInt::ceil_div(out.hi, BigInt(3));
        }
        return out;
    }

private:
    EpsKind kind_;
    std::vector<BigRational> values_;
    std::optional<EpsKind> tail_;

    EpsilonSpec(EpsKind k, std::vector<BigRational> v, std::optional<EpsKind> t)
        : kind_(k), values_(std::move(v)), tail_(t) {}

    static void check_depth(std::uint64_t n) {
        if (n < 1) throw std::domain_error("EpsilonSpec: n must be >= 1");
    }

    static BigRational pow8_inv(std::uint64_t e) {
        if (e > (1ull << 26))
            throw resource_limit_error("EpsilonSpec: exact evaluation beyond materializable depth");
        return BigRational(BigInt(1), BigInt::pow8(e));
    }

    static BigInt next_pow8(const BigInt& z) {
        if (z <= BigInt(1)) return BigInt(1);
        std::uint64_t f = (z.bit_length() - 1) / 3;
        BigInt cand = BigInt::pow8(f);
        return cand >= z ? cand : BigInt::pow8(f + 1);
    }

    // log2 bracket of ceil(1/min eps over the concrete range [a, b]);
    // exponents stay symbolic, nothing here materializes 8^b
    IntBracket zeta_log2_point(const BigInt& a, const BigInt& b) const {
        if (kind_ == EpsKind::pow8) return {BigInt(3) * b, BigInt(3) * b};
        if (kind_ == EpsKind::superexp) return {BigInt(3) * b * b, BigInt(3) * b * b};

        BigInt len(static_cast<long long>(values_.size()));
        std::optional<IntBracket> head, tail;
        if (a <= len) {
            std::uint64_t ha = a.to_u64();
            std::uint64_t hb = (b <= len ? b : len).to_u64();
            BigRational m = range_min(ha, hb);
            BigInt z = BigInt::ceil_div(m.den(), m.num());
            long long bl = static_cast<long long>(z.bit_length());
            head = z.is_power_of_two() ? IntBracket{BigInt(bl - 1), BigInt(bl - 1)}
                                       : IntBracket{BigInt(bl - 1), BigInt(bl)};
        }
        if (b > len) {
            if (!tail_) throw incomplete_spec_error("EpsilonSpec: table has no tail rule");
            BigInt e = *tail_ == EpsKind::pow8 ? BigInt(3) * b : BigInt(3) * b * b;
            // clamp keeps the tail at least 8^-b steep
            BigInt c = BigInt(3) * b;
            tail = IntBracket{e >= c ? e : c, e >= c ? e : c};
        }
        if (head && tail)
            return {head->lo >= tail->lo ? head->lo : tail->lo,
                    head->hi >= tail->hi ? head->hi : tail->hi};
        return head ? *head : *tail;
    }
};

} // namespace overlapforge
