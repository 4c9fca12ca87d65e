#pragma once

#include <cstdint>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "contfrac.hpp"
#include "epsilon.hpp"
#include "errors.hpp"
#include "ifs.hpp"

namespace overlapforge {

enum class ConstructionMode { exact, shadow };

inline const char* to_string(ConstructionMode m) {
    return m == ConstructionMode::exact ? "exact" : "shadow";
}

struct ConstructionLimits {
    std::uint64_t bit_budget = 1ull << 24; // exact-mode cap on any single integer
};

// dyadic scale marker: the unique L with 2^(L-1) - 1 <= q < 2^L - 1
inline BigInt scale_marker(const BigInt& q) {
    if (q.sign() <= 0) throw std::domain_error("scale_marker: q must be positive");
    std::size_t bl = q.bit_length();
    bool at_top = q == BigInt::pow2(bl) - BigInt(1);
    return BigInt(static_cast<long long>(bl + (at_top ? 1 : 0)));
}

// Full trace of the digit-selection algorithm. Exact mode materializes the
// digits and convergents; shadow mode tracks log2 brackets only, which keeps
// a round's cost polynomial in the round number instead of in q_m's size.
struct ConstructionState {
    IfsFamily family = IfsFamily::half6;
    EpsilonSpec eps = EpsilonSpec::pow8();
    unsigned N = 2;
    ConstructionMode mode = ConstructionMode::exact;
    unsigned rounds = 0; // digits built: zeta_1..zeta_rounds (always >= 2)

    // exact mode
    PartialQuotients s_digits, t_digits;
    ConvergentTable s_table, t_table;
    std::vector<BigInt> L, M; // entry i holds the marker for m = i + 2

    // shadow mode: log2 brackets; q brackets are indexed by m (entry m), seeded
    // with q_0 = q_1 = 1; zeta brackets indexed from m = 1 (entry m - 1)
    std::vector<IntBracket> sh_L, sh_M;
    std::vector<IntBracket> sh_zeta_s, sh_zeta_t;
    std::vector<IntBracket> sh_q_s, sh_q_t;

    bool variant() const { return family == IfsFamily::eighth6; }
    unsigned weight_bits() const { return traits_of(family).base == 2 ? 1 : 3; }

    const BigInt& L_at(std::size_t m) const { return L.at(m - 2); }
    const BigInt& M_at(std::size_t m) const { return M.at(m - 2); }
    const IntBracket& sh_L_at(std::size_t m) const { return sh_L.at(m - 2); }
    const IntBracket& sh_M_at(std::size_t m) const { return sh_M.at(m - 2); }
};

namespace detail {

// log2 bracket of q_m = zeta_m q_{m-1} + q_{m-2} from the operand brackets
inline IntBracket shadow_q_step(const IntBracket& zeta, const IntBracket& q1,
                                const IntBracket& q2) {
    BigInt lo = zeta.lo + q1.lo;
    BigInt hi_mul = zeta.hi + q1.hi;
    BigInt hi = (hi_mul >= q2.hi ? hi_mul : q2.hi) + BigInt(1);
    return {std::move(lo), std::move(hi)};
}

inline IntBracket shadow_marker(const IntBracket& qlog2) {
    return {qlog2.lo + BigInt(1), qlog2.hi + BigInt(1)};
}

inline void budget_check(const BigInt& predicted_log2, const ConstructionLimits& lim) {
    if (predicted_log2 > BigInt(static_cast<long long>(lim.bit_budget)))
        throw resource_limit_error(
            "construction: exact-mode integer would exceed the bit budget; use shadow mode");
}

} // namespace detail

inline ConstructionState initial_step(const EpsilonSpec& eps, unsigned N, IfsFamily family,
                                      ConstructionMode mode = ConstructionMode::exact,
                                      const ConstructionLimits& lim = {}) {
    if (N < 1) throw std::domain_error("initial_step: N must be >= 1");
    ConstructionState st;
    st.family = family;
    st.eps = eps;
    st.N = N;
    st.mode = mode;
    st.rounds = 2;
    const bool var = st.variant();

    if (mode == ConstructionMode::exact) {
        IntBracket pz = eps.shadow_zeta_log2({BigInt(1), BigInt(1)},
                                             {BigInt(static_cast<long long>(N)),
                                              BigInt(static_cast<long long>(N))},
                                             var);
        detail::budget_check(pz.hi, lim);
        BigInt zeta2 = eps.ceil_inv_range_min(1, N, var);
        st.s_digits.variant_pow8 = var;
        st.t_digits.variant_pow8 = var;
        st.s_digits.digits = {BigInt(1), zeta2};
        st.s_table = convergents(st.s_digits);
        BigInt L2 = scale_marker(st.s_table.q_at(2));

        IntBracket pz2 = eps.shadow_zeta_log2({BigInt(1), BigInt(1)}, {L2, L2}, var);
        detail::budget_check(pz2.hi, lim);
        BigInt zeta2t = eps.ceil_inv_range_min(1, L2.to_u64(), var);
        st.t_digits.digits = {BigInt(1), zeta2t};
        st.t_table = convergents(st.t_digits);
        BigInt M2 = scale_marker(st.t_table.q_at(2));

        if (!(BigInt(2) * L2 < M2))
            throw invariant_error("initial_step: 2*L_2 < M_2 failed (eps clamp violated?)");
        st.L = {std::move(L2)};
        st.M = {std::move(M2)};
        if (var) {
            for (std::ptrdiff_t m = 1; m <= 2; ++m) {
                if (!st.s_table.p_at(m).base8_zero_one() || !st.s_table.q_at(m).base8_zero_one() ||
                    !st.t_table.p_at(m).base8_zero_one() || !st.t_table.q_at(m).base8_zero_one())
                    throw invariant_error("initial_step: variant convergent not base-8 zero-one");
            }
        }
        return st;
    }

    // shadow: same choices, tracked as log2 brackets
    IntBracket one{BigInt(0), BigInt(0)};
    st.sh_q_s = {one, one}; // q_0 = q_1 = 1
    st.sh_q_t = {one, one};
    st.sh_zeta_s = {one};   // zeta_1 = 1
    st.sh_zeta_t = {one};

    IntBracket z2 = eps.shadow_zeta_log2({BigInt(1), BigInt(1)},
                                         {BigInt(static_cast<long long>(N)),
                                          BigInt(static_cast<long long>(N))},
                                         var);
    st.sh_zeta_s.push_back(z2);
    st.sh_q_s.push_back(detail::shadow_q_step(z2, st.sh_q_s[1], st.sh_q_s[0]));
    IntBracket L2 = detail::shadow_marker(st.sh_q_s[2]);

    IntBracket z2t = eps.shadow_zeta_log2({BigInt(1), BigInt(1)}, L2, var);
    st.sh_zeta_t.push_back(z2t);
    st.sh_q_t.push_back(detail::shadow_q_step(z2t, st.sh_q_t[1], st.sh_q_t[0]));
    IntBracket M2 = detail::shadow_marker(st.sh_q_t[2]);

    if (!(BigInt(2) * L2.hi < M2.lo))
        throw invariant_error("initial_step: conservative 2*L_2 < M_2 failed in shadow mode");
    st.sh_L = {std::move(L2)};
    st.sh_M = {std::move(M2)};
    return st;
}

inline ConstructionState iterate_step(ConstructionState st, const ConstructionLimits& lim = {}) {
    if (st.rounds < 2) throw std::domain_error("iterate_step: state incomplete");
    const bool var = st.variant();
    const std::size_t k = st.rounds;

    if (st.mode == ConstructionMode::exact) {
        const BigInt& Lk = st.L_at(k);
        const BigInt& Mk = st.M_at(k);
        IntBracket pz = st.eps.shadow_zeta_log2({Lk, Lk}, {Mk, Mk}, var);
        detail::budget_check(pz.hi + BigInt(static_cast<long long>(
                                          st.s_table.q_at(static_cast<std::ptrdiff_t>(k))
                                              .bit_length())) +
                                 BigInt(2),
                             lim);
        BigInt zeta = st.eps.ceil_inv_range_min(Lk.to_u64(), Mk.to_u64(), var);
        st.s_digits.digits.push_back(std::move(zeta));
        st.s_table = convergents(st.s_digits);
        BigInt Lnext = scale_marker(st.s_table.q_at(static_cast<std::ptrdiff_t>(k + 1)));

        IntBracket pz2 = st.eps.shadow_zeta_log2({Mk, Mk}, {Lnext, Lnext}, var);
        detail::budget_check(pz2.hi + BigInt(static_cast<long long>(
                                           st.t_table.q_at(static_cast<std::ptrdiff_t>(k))
                                               .bit_length())) +
                                 BigInt(2),
                             lim);
        BigInt zetat = st.eps.ceil_inv_range_min(Mk.to_u64(), Lnext.to_u64(), var);
        st.t_digits.digits.push_back(std::move(zetat));
        st.t_table = convergents(st.t_digits);
        BigInt Mnext = scale_marker(st.t_table.q_at(static_cast<std::ptrdiff_t>(k + 1)));

        if (!(BigInt(2) * Lnext < Mnext))
            throw invariant_error("iterate_step: 2*L < M failed");
        if (var) {
            auto idx = static_cast<std::ptrdiff_t>(k + 1);
            if (!st.s_table.p_at(idx).base8_zero_one() || !st.s_table.q_at(idx).base8_zero_one() ||
                !st.t_table.p_at(idx).base8_zero_one() || !st.t_table.q_at(idx).base8_zero_one())
                throw invariant_error("iterate_step: variant convergent not base-8 zero-one");
        }
        st.L.push_back(std::move(Lnext));
        st.M.push_back(std::move(Mnext));
        st.rounds = static_cast<unsigned>(k + 1);
        return st;
    }

    const IntBracket& Lk = st.sh_L_at(k);
    const IntBracket& Mk = st.sh_M_at(k);
    IntBracket z = st.eps.shadow_zeta_log2(Lk, Mk, var);
    st.sh_zeta_s.push_back(z);
    st.sh_q_s.push_back(detail::shadow_q_step(z, st.sh_q_s[k], st.sh_q_s[k - 1]));
    IntBracket Lnext = detail::shadow_marker(st.sh_q_s[k + 1]);

    IntBracket zt = st.eps.shadow_zeta_log2(Mk, Lnext, var);
    st.sh_zeta_t.push_back(zt);
    st.sh_q_t.push_back(detail::shadow_q_step(zt, st.sh_q_t[k], st.sh_q_t[k - 1]));
    IntBracket Mnext = detail::shadow_marker(st.sh_q_t[k + 1]);

    if (!(BigInt(2) * Lnext.hi < Mnext.lo))
        throw invariant_error("iterate_step: conservative 2*L < M failed in shadow mode");
    st.sh_L.push_back(std::move(Lnext));
    st.sh_M.push_back(std::move(Mnext));
    st.rounds = static_cast<unsigned>(k + 1);
    return st;
}

// rounds counts continued-fraction digits; the initial step always builds two
inline ConstructionState run(const EpsilonSpec& eps, unsigned rounds, ConstructionMode mode,
                             IfsFamily family, unsigned N = 2, const ConstructionLimits& lim = {}) {
    if (rounds < 1) throw std::domain_error("run: rounds must be >= 1");
    ConstructionState st = initial_step(eps, N, family, mode, lim);
    while (st.rounds < rounds) st = iterate_step(std::move(st), lim);
    return st;
}

// Certificate that Delta_n <= eps_n, with the full inequality trace: the
// covering picks (side, m) such that p_m, q_m are admissible coefficients at
// depth n and |q_m s - p_m| <= 1/q_{m+1}, so
//   Delta_n <= base^-n * |q_m s - p_m| <= base^-n / q_{m+1} <= eps_n.
struct DeltaCertificate {
    std::uint64_t n = 0;
    char side = 's';     // which parameter's convergents produced the bound
    std::size_t m = 0;   // convergent index
    BigRational bound;   // base^-n / q_{m+1}
    BigRational epsilon; // effective eps_n
    BigInt p_m, q_m, q_next;
    unsigned weight_bits = 1; // log2(1/ratio): 1 for half6/half8, 3 for eighth6
    bool variant = false;     // base-8 zero-one admissibility applies
};

inline DeltaCertificate certify_delta(const ConstructionState& st, std::uint64_t n) {
    if (st.mode != ConstructionMode::exact)
        throw std::domain_error("certify_delta: per-n certificates need an exact-mode state");
    if (n < 1) throw std::domain_error("certify_delta: n must be >= 1");
    const BigInt nn(static_cast<long long>(n));

    // covering intervals in left-endpoint order; each needs q_{m+1} on its side
    char side = 0;
    std::size_t m = 0;
    if (n <= st.N) {
        side = 's';
        m = 1;
    } else if (nn <= st.L_at(2)) {
        side = 't';
        m = 1;
    } else {
        for (std::size_t j = 2; j <= st.rounds && side == 0; ++j) {
            if (nn >= st.L_at(j) && nn <= st.M_at(j) && j + 1 <= st.rounds) {
                side = 's';
                m = j;
            } else if (j + 1 <= st.rounds && nn >= st.M_at(j) && nn <= st.L_at(j + 1)) {
                side = 't';
                m = j;
            }
        }
        if (side == 0)
            throw needs_more_rounds_error("certify_delta: n beyond certified range [1, L_k]");
    }

    const ConvergentTable& table = side == 's' ? st.s_table : st.t_table;
    BigInt Q = BigInt::pow2(n) - BigInt(1);
    BestApprox ba = best_approx_min(table, Q);
    if (ba.m != m)
        throw invariant_error("certify_delta: covering index disagrees with best approximation");

    DeltaCertificate cert;
    cert.n = n;
    cert.side = side;
    cert.m = m;
    cert.p_m = table.p_at(static_cast<std::ptrdiff_t>(m));
    cert.q_m = table.q_at(static_cast<std::ptrdiff_t>(m));
    cert.q_next = table.q_at(static_cast<std::ptrdiff_t>(m + 1));
    cert.weight_bits = st.weight_bits();
    cert.variant = st.variant();

    // admissibility of (p_m, q_m) as depth-n coefficients
    if (cert.variant) {
        if (!cert.p_m.base8_zero_one() || !cert.q_m.base8_zero_one() ||
            cert.p_m.oct_digit_count() > n || cert.q_m.oct_digit_count() > n)
            throw invariant_error("certify_delta: convergent not admissible at this depth");
    } else {
        if (cert.p_m > Q || cert.q_m > Q)
            throw invariant_error("certify_delta: convergent not admissible at this depth");
    }

    cert.bound = BigRational(BigInt(1), cert.q_next << (cert.weight_bits * n));
    cert.epsilon = st.eps.at(n);
    if (!(cert.bound <= cert.epsilon))
        throw invariant_error("certify_delta: bound exceeds eps_n");
    return cert;
}

inline std::vector<DeltaCertificate> certify_range(const ConstructionState& st, std::uint64_t a,
                                                   std::uint64_t b, unsigned threads = 0) {
    if (a < 1 || a > b) throw std::domain_error("certify_range: bad range");
    std::vector<DeltaCertificate> out(b - a + 1);
    std::exception_ptr err;
    std::mutex err_mu;
    detail::parallel_chunks(b - a + 1, threads, [&](unsigned, std::uint64_t lo, std::uint64_t hi) {
        try {
            for (std::uint64_t i = lo; i < hi; ++i) out[i] = certify_delta(st, a + i);
        } catch (...) {
            std::lock_guard<std::mutex> g(err_mu);
            if (!err) err = std::current_exception();
        }
    });
    if (err) std::rethrow_exception(err);
    return out;
}

// Certificate that no relation t = (a/b) s + (c/d) with |a|,|b|,|d| <= B holds,
// hence no exact overlap whose reduced coefficient triple stays within B:
//   check 1:  B^2 q_m < q'_m   (so every b q_m d stays below q'_m)
//   check 2:  2B <= 2^{M_m}    (so (a/b) 8^-{M_m} <= 2^-(2 M_m + 1))
// c never enters: the contradiction bounds are independent of it.
struct NoOverlapCertificate {
    BigInt coeff_bound;
    std::size_t witness_m = 0;
    bool shadow = false;
    // recorded exactly as compared; in shadow mode these are log2 values
    BigInt check1_lhs, check1_rhs;
    BigInt check2_lhs, check2_rhs;
};

inline NoOverlapCertificate no_overlap_certificate(const ConstructionState& st, const BigInt& B) {
    if (B < BigInt(1)) throw std::domain_error("no_overlap_certificate: B must be >= 1");
    NoOverlapCertificate cert;
    cert.coeff_bound = B;
    cert.shadow = st.mode == ConstructionMode::shadow;
    for (std::size_t m = 2; m <= st.rounds; ++m) {
        if (st.mode == ConstructionMode::exact) {
            BigInt lhs1 = B * B * st.s_table.q_at(static_cast<std::ptrdiff_t>(m));
            const BigInt& rhs1 = st.t_table.q_at(static_cast<std::ptrdiff_t>(m));
            BigInt lhs2 = BigInt(2) * B;
            if (st.M_at(m) > BigInt(1ll << 32))
                throw resource_limit_error("no_overlap_certificate: marker too large to replay");
            BigInt rhs2 = BigInt::pow2(st.M_at(m).to_u64());
            if (lhs1 < rhs1 && lhs2 <= rhs2) {
                cert.witness_m = m;
                cert.check1_lhs = std::move(lhs1);
                cert.check1_rhs = rhs1;
                cert.check2_lhs = std::move(lhs2);
                cert.check2_rhs = std::move(rhs2);
                return cert;
            }
        } else {
            // sufficient log2 comparison: 2 bl(B) + hi(log2 q_m) < lo(log2 q'_m)
            BigInt lhs1 = BigInt(2) * BigInt(static_cast<long long>(B.bit_length())) +
                          st.sh_q_s[m].hi;
            const BigInt& rhs1 = st.sh_q_t[m].lo;
            BigInt lhs2 = BigInt(static_cast<long long>((BigInt(2) * B).bit_length()));
            const BigInt& rhs2 = st.sh_M_at(m).lo;
            if (lhs1 < rhs1 && lhs2 <= rhs2) {
                cert.witness_m = m;
                cert.check1_lhs = std::move(lhs1);
                cert.check1_rhs = rhs1;
                cert.check2_lhs = std::move(lhs2);
                cert.check2_rhs = rhs2;
                return cert;
            }
        }
    }
    throw needs_more_rounds_error("no_overlap_certificate: no witness within available rounds");
}

// Bookkeeping check that the covering intervals
//   s:[1,N], t:[1,L_2], s:[L_2,M_2], t:[M_2,L_3], s:[L_3,M_3], ...
// tile [1, L_k] without gaps; returns the certified upper end.
inline BigInt certified_upper_bound(const ConstructionState& st) {
    const bool exact = st.mode == ConstructionMode::exact;
    auto L_of = [&](std::size_t m) { return exact ? st.L_at(m) : st.sh_L_at(m).lo; };
    auto M_of = [&](std::size_t m) { return exact ? st.M_at(m) : st.sh_M_at(m).lo; };
    BigInt covered(static_cast<long long>(st.N));
    if (L_of(2) > covered) covered = L_of(2); // [1, L_2] attaches at 1
    for (std::size_t m = 2; m + 1 <= st.rounds; ++m) {
        if (L_of(m) > covered) throw invariant_error("covering: gap before [L_m, M_m]");
        if (M_of(m) > covered) covered = M_of(m);
        // [M_m, L_{m+1}] attaches at M_m <= covered
        if (L_of(m + 1) > covered) covered = L_of(m + 1);
    }
    return covered;
}

} // namespace overlapforge
