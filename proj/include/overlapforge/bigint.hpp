#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace overlapforge {

// Arbitrary-precision signed integer on 64-bit limbs (little-endian,
// normalized: no high zero limbs, zero has no limbs and positive sign).
class BigInt {
public:
    using limb = std::uint64_t;

    BigInt() = default;
    BigInt(int v) : BigInt(static_cast<long long>(v)) {}
    BigInt(long v) : BigInt(static_cast<long long>(v)) {}
    BigInt(long long v) {
        if (v == 0) return;
        neg_ = v < 0;
        // avoid UB on LLONG_MIN
        limb mag = neg_ ? ~static_cast<limb>(v) + 1 : static_cast<limb>(v);
        limbs_.push_back(mag);
    }
    explicit BigInt(unsigned long long v) {
        if (v != 0) limbs_.push_back(v);
    }

    static BigInt from_string(std::string_view s) {
        if (s.empty()) throw std::invalid_argument("BigInt: empty string");
        bool neg = false;
        std::size_t i = 0;
        if (s[0] == '-' || s[0] == '+') {
            neg = s[0] == '-';
            i = 1;
        }
        if (i == s.size()) throw std::invalid_argument("BigInt: no digits");
        BigInt r;
        // consume in chunks of 19 decimal digits (10^19 fits a limb)
        while (i < s.size()) {
            std::size_t take = std::min<std::size_t>(19, s.size() - i);
            limb chunk = 0, scale = 1;
            for (std::size_t j = 0; j < take; ++j) {
                char c = s[i + j];
                if (c < '0' || c > '9') throw std::invalid_argument("BigInt: bad digit");
                chunk = chunk * 10 + static_cast<limb>(c - '0');
                scale *= 10;
            }
            r = r * BigInt(static_cast<unsigned long long>(scale)) +
                BigInt(static_cast<unsigned long long>(chunk));
            i += take;
        }
        r.neg_ = neg && !r.is_zero();
        return r;
    }

    static BigInt pow2(std::uint64_t e) {
        BigInt r;
        r.limbs_.assign(e / 64 + 1, 0);
        r.limbs_.back() = limb{1} << (e % 64);
        return r;
    }
    static BigInt pow8(std::uint64_t e) { return pow2(3 * e); }

    static BigInt pow(BigInt base, std::uint64_t e) {
        BigInt r(1);
        while (e) {
            if (e & 1) r = r * base;
            e >>= 1;
            if (e) base = base * base;
        }
        return r;
    }

    bool is_zero() const { return limbs_.empty(); }
    int sign() const { return is_zero() ? 0 : (neg_ ? -1 : 1); }
    bool is_negative() const { return neg_; }
    bool odd() const { return !limbs_.empty() && (limbs_[0] & 1); }

    BigInt abs() const {
        BigInt r = *this;
        r.neg_ = false;
        return r;
    }

    // number of bits of |x|; 0 for x == 0
    std::size_t bit_length() const {
        if (is_zero()) return 0;
        return (limbs_.size() - 1) * 64 + (64 - std::countl_zero(limbs_.back()));
    }

    bool test_bit(std::uint64_t i) const {
        std::size_t w = i / 64;
        if (w >= limbs_.size()) return false;
        return (limbs_[w] >> (i % 64)) & 1;
    }

    std::uint64_t trailing_zero_bits() const {
        if (is_zero()) return 0;
        std::size_t w = 0;
        while (limbs_[w] == 0) ++w;
        return w * 64 + std::countr_zero(limbs_[w]);
    }

    bool is_power_of_two() const {
        return !is_zero() && !neg_ && trailing_zero_bits() == bit_length() - 1;
    }

    // e such that *this == 8^e, if any
    std::optional<std::uint64_t> pow8_exponent() const {
        if (!is_power_of_two()) return std::nullopt;
        std::size_t b = bit_length() - 1;
        if (b % 3 != 0) return std::nullopt;
        return b / 3;
    }

    // base-8 digit count of |x|; 0 for x == 0
    std::size_t oct_digit_count() const {
        if (is_zero()) return 0;
        return (bit_length() - 1) / 3 + 1;
    }

    unsigned oct_digit(std::uint64_t i) const {
        std::uint64_t b = 3 * i;
        return static_cast<unsigned>(test_bit(b)) | static_cast<unsigned>(test_bit(b + 1)) << 1 |
               static_cast<unsigned>(test_bit(b + 2)) << 2;
    }

    // true iff every base-8 digit of |x| is 0 or 1
    bool base8_zero_one() const {
        std::size_t k = oct_digit_count();
        for (std::size_t i = 0; i < k; ++i)
            if (oct_digit(i) > 1) return false;
        return true;
    }

    friend bool operator==(const BigInt& a, const BigInt& b) {
        return a.neg_ == b.neg_ && a.limbs_ == b.limbs_;
    }
    friend std::strong_ordering operator<=>(const BigInt& a, const BigInt& b) {
        if (a.neg_ != b.neg_) return a.neg_ ? std::strong_ordering::less : std::strong_ordering::greater;
        int c = cmp_mag(a.limbs_, b.limbs_);
        if (a.neg_) c = -c;
        return c <=> 0;
    }

    BigInt operator-() const {
        BigInt r = *this;
        if (!r.is_zero()) r.neg_ = !r.neg_;
        return r;
    }

    friend BigInt operator+(const BigInt& a, const BigInt& b) {
        if (a.neg_ == b.neg_) {
            BigInt r;
            r.limbs_ = add_mag(a.limbs_, b.limbs_);
            r.neg_ = a.neg_ && !r.limbs_.empty();
            return r;
        }
        int c = cmp_mag(a.limbs_, b.limbs_);
        if (c == 0) return BigInt();
        BigInt r;
        if (c > 0) {
            r.limbs_ = sub_mag(a.limbs_, b.limbs_);
            r.neg_ = a.neg_;
        } else {
            r.limbs_ = sub_mag(b.limbs_, a.limbs_);
            r.neg_ = b.neg_;
        }
        r.neg_ = r.neg_ && !r.limbs_.empty();
        return r;
    }
    friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

    friend BigInt operator*(const BigInt& a, const BigInt& b) {
        if (a.is_zero() || b.is_zero()) return BigInt();
        BigInt r;
        r.limbs_ = mul_mag(a.limbs_, b.limbs_);
        r.neg_ = a.neg_ != b.neg_;
        return r;
    }

    BigInt& operator+=(const BigInt& o) { return *this = *this + o; }
    BigInt& operator-=(const BigInt& o) { return *this = *this - o; }
    BigInt& operator*=(const BigInt& o) { return *this = *this * o; }

    // truncated division: quotient rounds toward zero, remainder has dividend's sign
    static std::pair<BigInt, BigInt> divmod(const BigInt& a, const BigInt& b) {
        if (b.is_zero()) throw std::domain_error("BigInt: division by zero");
        std::pair<BigInt, BigInt> out;
        divmod_mag(a.limbs_, b.limbs_, out.first.limbs_, out.second.limbs_);
        out.first.neg_ = (a.neg_ != b.neg_) && !out.first.limbs_.empty();
        out.second.neg_ = a.neg_ && !out.second.limbs_.empty();
        return out;
    }
    friend BigInt operator/(const BigInt& a, const BigInt& b) { return divmod(a, b).first; }
    friend BigInt operator%(const BigInt& a, const BigInt& b) { return divmod(a, b).second; }

    // floor(a / b) for b > 0
    static BigInt floor_div(const BigInt& a, const BigInt& b) {
        auto [q, r] = divmod(a, b);
        if (!r.is_zero() && (a.neg_ != b.neg_)) q -= BigInt(1);
        return q;
    }
    // ceil(a / b) for b > 0
    static BigInt ceil_div(const BigInt& a, const BigInt& b) {
        auto [q, r] = divmod(a, b);
        if (!r.is_zero() && (a.neg_ == b.neg_)) q += BigInt(1);
        return q;
    }

    BigInt operator<<(std::uint64_t n) const {
        if (is_zero() || n == 0) return *this;
        std::size_t words = n / 64, bits = n % 64;
        BigInt r;
        r.neg_ = neg_;
        r.limbs_.assign(limbs_.size() + words + 1, 0);
        for (std::size_t i = 0; i < limbs_.size(); ++i) {
            r.limbs_[i + words] |= bits ? (limbs_[i] << bits) : limbs_[i];
            if (bits) r.limbs_[i + words + 1] = limbs_[i] >> (64 - bits);
        }
        r.trim();
        return r;
    }

    // arithmetic shift of the magnitude (use on non-negative values)
    BigInt operator>>(std::uint64_t n) const {
        if (is_zero()) return *this;
        std::size_t words = n / 64, bits = n % 64;
        if (words >= limbs_.size()) return BigInt();
        BigInt r;
        r.neg_ = neg_;
        r.limbs_.assign(limbs_.begin() + static_cast<std::ptrdiff_t>(words), limbs_.end());
        if (bits) {
            for (std::size_t i = 0; i + 1 < r.limbs_.size(); ++i)
                r.limbs_[i] = (r.limbs_[i] >> bits) | (r.limbs_[i + 1] << (64 - bits));
            r.limbs_.back() >>= bits;
        }
        r.trim();
        r.neg_ = r.neg_ && !r.limbs_.empty();
        return r;
    }

    static BigInt gcd(BigInt a, BigInt b) {
        a.neg_ = b.neg_ = false;
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        std::uint64_t za = a.trailing_zero_bits(), zb = b.trailing_zero_bits();
        std::uint64_t k = std::min(za, zb);
        a = a >> za;
        b = b >> zb;
        while (true) {
            if (cmp_mag(a.limbs_, b.limbs_) > 0) std::swap(a, b);
            b = b - a; // both odd, b >= a
            if (b.is_zero()) break;
            b = b >> b.trailing_zero_bits();
        }
        return a << k;
    }

    bool fits_u64() const { return !neg_ && limbs_.size() <= 1; }
    std::uint64_t to_u64() const {
        if (!fits_u64()) throw std::overflow_error("BigInt: does not fit u64");
        return limbs_.empty() ? 0 : limbs_[0];
    }
    bool fits_i64() const {
        if (limbs_.size() > 1) return false;
        if (limbs_.empty()) return true;
        return neg_ ? limbs_[0] <= (std::uint64_t{1} << 63)
                    : limbs_[0] < (std::uint64_t{1} << 63);
    }
    long long to_i64() const {
        if (!fits_i64()) throw std::overflow_error("BigInt: does not fit i64");
        if (limbs_.empty()) return 0;
        return neg_ ? -static_cast<long long>(limbs_[0] - 1) - 1 : static_cast<long long>(limbs_[0]);
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::vector<limb> chunks;
        std::vector<limb> cur = limbs_;
        const limb base = 10000000000000000000ULL; // 10^19
        while (!cur.empty()) {
            limb rem = 0;
            for (std::size_t i = cur.size(); i-- > 0;) {
                unsigned __int128 acc = (static_cast<unsigned __int128>(rem) << 64) | cur[i];
                cur[i] = static_cast<limb>(acc / base);
                rem = static_cast<limb>(acc % base);
            }
            while (!cur.empty() && cur.back() == 0) cur.pop_back();
            chunks.push_back(rem);
        }
        std::string s = neg_ ? "-" : "";
        s += std::to_string(chunks.back());
        for (std::size_t i = chunks.size() - 1; i-- > 0;) {
            std::string part = std::to_string(chunks[i]);
            s += std::string(19 - part.size(), '0') + part;
        }
        return s;
    }

    // rounded, for display only; certified paths never use this
    double to_double_approx() const {
        if (is_zero()) return 0.0;
        std::size_t bl = bit_length();
        double m;
        if (bl <= 64) {
            m = static_cast<double>(limbs_[0]);
        } else {
            BigInt top = *this >> (bl - 64);
            m = std::ldexp(static_cast<double>(top.limbs_[0]), static_cast<int>(bl) - 64);
        }
        return neg_ ? -m : m;
    }

private:
    std::vector<limb> limbs_;
    bool neg_ = false;

    void trim() {
        while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
        if (limbs_.empty()) neg_ = false;
    }

    static int cmp_mag(const std::vector<limb>& a, const std::vector<limb>& b) {
        if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
        for (std::size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
        return 0;
    }

    static std::vector<limb> add_mag(const std::vector<limb>& a, const std::vector<limb>& b) {
        const auto& big = a.size() >= b.size() ? a : b;
        const auto& small = a.size() >= b.size() ? b : a;
        std::vector<limb> r(big.size() + 1, 0);
        unsigned __int128 carry = 0;
        for (std::size_t i = 0; i < big.size(); ++i) {
            unsigned __int128 cur = carry + big[i] + (i < small.size() ? small[i] : 0);
            r[i] = static_cast<limb>(cur);
            carry = cur >> 64;
        }
        r[big.size()] = static_cast<limb>(carry);
        while (!r.empty() && r.back() == 0) r.pop_back();
        return r;
    }

    // requires |a| >= |b|
    static std::vector<limb> sub_mag(const std::vector<limb>& a, const std::vector<limb>& b) {
        std::vector<limb> r(a.size(), 0);
        std::int64_t borrow = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            unsigned __int128 sub = static_cast<unsigned __int128>(i < b.size() ? b[i] : 0) +
                                    static_cast<unsigned __int128>(borrow);
            if (a[i] >= sub) {
                r[i] = a[i] - static_cast<limb>(sub);
                borrow = 0;
            } else {
                r[i] = static_cast<limb>((static_cast<unsigned __int128>(1) << 64) + a[i] - sub);
                borrow = 1;
            }
        }
        while (!r.empty() && r.back() == 0) r.pop_back();
        return r;
    }

    static std::vector<limb> mul_mag(const std::vector<limb>& a, const std::vector<limb>& b) {
        std::vector<limb> r(a.size() + b.size(), 0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            limb carry = 0;
            unsigned __int128 ai = a[i];
            for (std::size_t j = 0; j < b.size(); ++j) {
                unsigned __int128 cur = ai * b[j] + r[i + j] + carry;
                r[i + j] = static_cast<limb>(cur);
                carry = static_cast<limb>(cur >> 64);
            }
            r[i + b.size()] = carry;
        }
        while (!r.empty() && r.back() == 0) r.pop_back();
        return r;
    }

    // Knuth algorithm D on magnitudes; u = q*v + r with 0 <= r < v
    static void divmod_mag(const std::vector<limb>& u, const std::vector<limb>& v,
                           std::vector<limb>& q, std::vector<limb>& r) {
        q.clear();
        r.clear();
        if (cmp_mag(u, v) < 0) {
            r = u;
            return;
        }
        if (v.size() == 1) {
            q.assign(u.size(), 0);
            limb rem = 0;
            for (std::size_t i = u.size(); i-- > 0;) {
                unsigned __int128 acc = (static_cast<unsigned __int128>(rem) << 64) | u[i];
                q[i] = static_cast<limb>(acc / v[0]);
                rem = static_cast<limb>(acc % v[0]);
            }
            while (!q.empty() && q.back() == 0) q.pop_back();
            if (rem) r.push_back(rem);
            return;
        }

        const int s = std::countl_zero(v.back());
        const std::size_t n = v.size(), m = u.size() - v.size();
        // normalized copies
        std::vector<limb> vn(n), un(u.size() + 1, 0);
        for (std::size_t i = n; i-- > 0;)
            vn[i] = (v[i] << s) | (s && i ? (v[i - 1] >> (64 - s)) : 0);
        un[u.size()] = s ? (u.back() >> (64 - s)) : 0;
        for (std::size_t i = u.size(); i-- > 0;)
            un[i] = (u[i] << s) | (s && i ? (u[i - 1] >> (64 - s)) : 0);

        q.assign(m + 1, 0);
        for (std::size_t j = m + 1; j-- > 0;) {
            unsigned __int128 num =
                (static_cast<unsigned __int128>(un[j + n]) << 64) | un[j + n - 1];
            unsigned __int128 qhat = num / vn[n - 1];
            unsigned __int128 rhat = num % vn[n - 1];
            while (qhat >> 64 ||
                   qhat * vn[n - 2] > ((rhat << 64) | un[j + n - 2])) {
                --qhat;
                rhat += vn[n - 1];
                if (rhat >> 64) break;
            }
            // multiply-subtract
            unsigned __int128 borrow = 0, carry = 0;
            for (std::size_t i = 0; i < n; ++i) {
                unsigned __int128 p = qhat * vn[i] + carry;
                carry = p >> 64;
                unsigned __int128 sub = static_cast<limb>(p) + borrow;
                if (un[i + j] >= sub) {
                    un[i + j] = un[i + j] - static_cast<limb>(sub);
                    borrow = 0;
                } else {
                    un[i + j] = static_cast<limb>((static_cast<unsigned __int128>(1) << 64) +
                                                  un[i + j] - sub);
                    borrow = 1;
                }
            }
            unsigned __int128 subtop = carry + borrow;
            if (un[j + n] >= subtop) {
                un[j + n] = un[j + n] - static_cast<limb>(subtop);
                q[j] = static_cast<limb>(qhat);
            } else {
                // rare add-back correction
                un[j + n] = static_cast<limb>((static_cast<unsigned __int128>(1) << 64) +
                                              un[j + n] - subtop);
                q[j] = static_cast<limb>(qhat) - 1;
                unsigned __int128 c2 = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    unsigned __int128 cur = c2 + un[i + j] + vn[i];
                    un[i + j] = static_cast<limb>(cur);
                    c2 = cur >> 64;
                }
                un[j + n] += static_cast<limb>(c2);
            }
        }
        while (!q.empty() && q.back() == 0) q.pop_back();
        // denormalize remainder
        r.assign(un.begin(), un.begin() + static_cast<std::ptrdiff_t>(n));
        if (s) {
            for (std::size_t i = 0; i + 1 < n; ++i)
                r[i] = (r[i] >> s) | (r[i + 1] << (64 - s));
            r[n - 1] >>= s;
        }
        while (!r.empty() && r.back() == 0) r.pop_back();
    }
};

inline BigInt abs(const BigInt& x) { return x.abs(); }

// true iff every base-8 digit of |n| is 0 or 1
inline bool base8_zero_one_check(const BigInt& n) {
    if (n.is_negative()) throw std::domain_error("base8_zero_one_check: negative input");
    return n.base8_zero_one();
}

} // namespace overlapforge
