#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "interval.hpp"
#include "rational.hpp"

namespace overlapforge {

// A finite block of continued-fraction partial quotients (zeta_1, ..., zeta_k).
// With variant_pow8 set, every digit from index 2 on must be a power of 8 with
// exponent >= 1; that keeps all convergent numerators/denominators zero-one in
// base 8.
struct PartialQuotients {
    std::vector<BigInt> digits;
    bool variant_pow8 = false;

    std::size_t size() const { return digits.size(); }

    void validate() const {
        if (digits.empty()) throw std::domain_error("PartialQuotients: empty digit block");
        for (std::size_t i = 0; i < digits.size(); ++i) {
            if (digits[i] < BigInt(1))
                throw std::domain_error("PartialQuotients: digit < 1 at index " +
                                        std::to_string(i + 1));
            if (variant_pow8 && i >= 1) {
                auto e = digits[i].pow8_exponent();
                if (!e || *e < 1)
                    throw std::domain_error(
                        "PartialQuotients: variant digit is not a power of 8 at index " +
                        std::to_string(i + 1));
            }
        }
    }
};

// Convergent table p_m/q_m for m = -1, 0, 1, ..., k with the seeds
// p_{-1}=1, q_{-1}=0, p_0=0, q_0=1 and the standard recurrence
// p_m = zeta_m p_{m-1} + p_{m-2}, q_m = zeta_m q_{m-1} + q_{m-2}.
struct ConvergentTable {
    std::vector<BigInt> p, q; // index i holds m = i - 1

    std::size_t depth() const { return p.size() - 2; } // largest m available

    const BigInt& p_at(std::ptrdiff_t m) const { return p[static_cast<std::size_t>(m + 1)]; }
    const BigInt& q_at(std::ptrdiff_t m) const { return q[static_cast<std::size_t>(m + 1)]; }
};

inline ConvergentTable convergents(const PartialQuotients& pq) {
    pq.validate();
    ConvergentTable t;
    t.p = {BigInt(1), BigInt(0)};
    t.q = {BigInt(0), BigInt(1)};
    for (const BigInt& z : pq.digits) {
        // powers of 8 multiply by shift-and-add; q_m bit length roughly
        // triples each round, so this dominates construction cost
        auto mul = [&z](const BigInt& a) {
            if (auto e = z.pow8_exponent()) return a << (3 * *e);
            return z * a;
        };
        std::size_t n = t.p.size();
        t.p.push_back(mul(t.p[n - 1]) + t.p[n - 2]);
        t.q.push_back(mul(t.q[n - 1]) + t.q[n - 2]);
    }
    return t;
}

// Enclosure of |s - p_m/q_m| valid for every s whose expansion extends the
// digit block by at least one more term:
//   1/(q_m (q_{m+1}+q_m)) <= |s - p_m/q_m| <= 1/(q_m q_{m+1})
inline RationalInterval approx_error_bounds(const ConvergentTable& t, std::size_t m) {
    if (m < 1 || m + 1 > t.depth())
        throw std::out_of_range("approx_error_bounds: need 1 <= m <= k-1");
    const BigInt& qm = t.q_at(static_cast<std::ptrdiff_t>(m));
    const BigInt& qn = t.q_at(static_cast<std::ptrdiff_t>(m + 1));
    return {BigRational(BigInt(1), qm * (qn + qm)), BigRational(BigInt(1), qm * qn)};
}

// Closed hull of the cylinder set C_{zeta_1..zeta_k}: endpoints are the last
// convergent p_k/q_k and the mediant (p_k+p_{k-1})/(q_k+q_{k-1}); the hull has
// width 1/(q_k(q_k+q_{k-1})) and nests as digits are appended.
inline RationalInterval cylinder_interval(const PartialQuotients& pq) {
    ConvergentTable t = convergents(pq);
    auto k = static_cast<std::ptrdiff_t>(t.depth());
    BigRational last(t.p_at(k), t.q_at(k));
    BigRational mediant(t.p_at(k) + t.p_at(k - 1), t.q_at(k) + t.q_at(k - 1));
    return RationalInterval::hull(last, mediant);
}

struct BestApprox {
    std::size_t m;          // largest index with q_m <= Q
    RationalInterval bound; // enclosure of |q_m s - p_m| = [1/(q_{m+1}+q_m), 1/q_{m+1}]
};

// Best-approximation query: for any s in the cylinder of the table's digits,
// min over 1 <= q <= Q, p integer, of |q s - p| equals |q_m s - p_m| for the
// returned m, and that quantity lies in the returned enclosure.
inline BestApprox best_approx_min(const ConvergentTable& t, const BigInt& Q) {
    if (Q < BigInt(1)) throw std::domain_error("best_approx_min: Q must be >= 1");
    if (t.q_at(1) > Q) throw std::domain_error("best_approx_min: Q below q_1");
    std::size_t m = 1;
    while (m + 1 <= t.depth() && t.q_at(static_cast<std::ptrdiff_t>(m + 1)) <= Q) ++m;
    if (m + 1 > t.depth())
        throw needs_more_digits_error("best_approx_min: table too shallow for Q");
    const BigInt& qm = t.q_at(static_cast<std::ptrdiff_t>(m));
    const BigInt& qn = t.q_at(static_cast<std::ptrdiff_t>(m + 1));
    return {m, {BigRational(BigInt(1), qn + qm), BigRational(BigInt(1), qn)}};
}

} // namespace overlapforge
