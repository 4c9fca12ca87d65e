#include <doctest.h>

#include "oracles.hpp"

using namespace overlapforge;

namespace {

ConstructionState pow8_state(unsigned rounds, IfsFamily fam = IfsFamily::half6,
                             ConstructionMode mode = ConstructionMode::exact) {
    return run(EpsilonSpec::pow8(), rounds, mode, fam, 2);
}

} // namespace

TEST_CASE("scale marker replays its defining inequality") {
    CHECK(scale_marker(BigInt(65)) == BigInt(7));   // 63 <= 65 < 127
    CHECK(scale_marker(BigInt(63)) == BigInt(7));   // boundary: 63 = 2^6 - 1
    CHECK(scale_marker(BigInt(62)) == BigInt(6));
    CHECK(scale_marker(BigInt(1)) == BigInt(2));    // 1 = 2^1 - 1
    CHECK(scale_marker(BigInt(2097153)) == BigInt(22));
    oracle::Rng rng(21);
    for (int i = 0; i < 200; ++i) {
        BigInt q = rng.big(2, false) + BigInt(1);
        BigInt L = scale_marker(q);
        std::uint64_t l = L.to_u64();
        CHECK(BigInt::pow2(l - 1) - BigInt(1) <= q);
        CHECK(q < BigInt::pow2(l) - BigInt(1));
    }
}

TEST_CASE("initial step, pow8, N=2") {
    auto st = initial_step(EpsilonSpec::pow8(), 2, IfsFamily::half6);
    CHECK(st.s_digits.digits == std::vector<BigInt>{BigInt(1), BigInt(64)});
    CHECK(st.s_table.q_at(2) == BigInt(65));
    CHECK(st.L_at(2) == BigInt(7));
    CHECK(st.t_digits.digits == std::vector<BigInt>{BigInt(1), BigInt::pow8(7)});
    CHECK(st.t_table.q_at(2) == BigInt(2097153));
    CHECK(st.M_at(2) == BigInt(22));
    CHECK(BigInt(2) * st.L_at(2) < st.M_at(2));
    CHECK(st.rounds == 2);
}

TEST_CASE("initial step, pow8, N=1") {
    auto st = initial_step(EpsilonSpec::pow8(), 1, IfsFamily::half6);
    CHECK(st.s_digits.digits[1] == BigInt(8));
    CHECK(st.s_table.q_at(2) == BigInt(9));
    CHECK(st.L_at(2) == BigInt(4)); // 7 <= 9 < 15
}

TEST_CASE("iterative steps reproduce the recurrence exactly") {
    auto st = pow8_state(3);
    CHECK(st.s_digits.digits[2] == BigInt::pow8(22));
    CHECK(st.s_table.q_at(3) == BigInt(65) * BigInt::pow2(66) + BigInt(1));
    CHECK(st.L_at(3) == BigInt(73));
    CHECK(st.t_digits.digits[2] == BigInt::pow8(73));
    CHECK(st.t_table.q_at(3) == BigInt::pow2(240) + BigInt::pow2(219) + BigInt(1));
    CHECK(st.M_at(3) == BigInt(241));
    CHECK(BigInt(146) < st.M_at(3));

    // one more round; q_4 = 8^241 q_3 + q_2 has exactly 796 bits
    auto st4 = iterate_step(st);
    CHECK(st4.s_digits.digits[3] == BigInt::pow8(241));
    CHECK(st4.s_table.q_at(4) ==
          BigInt::pow8(241) * st.s_table.q_at(3) + BigInt(65));
    CHECK(st4.L_at(4) == BigInt(796));
    CHECK(st4.M_at(4) == BigInt(2629));
    for (std::size_t m = 2; m <= 4; ++m) CHECK(BigInt(2) * st4.L_at(m) < st4.M_at(m));
    CHECK(certified_upper_bound(st4) == BigInt(796));
}

TEST_CASE("defining inequalities replay for every round") {
    auto st = pow8_state(4);
    for (std::size_t m = 2; m <= st.rounds; ++m) {
        for (auto [marker, q] : {std::pair{st.L_at(m), st.s_table.q_at((std::ptrdiff_t)m)},
                                 std::pair{st.M_at(m), st.t_table.q_at((std::ptrdiff_t)m)}}) {
            std::uint64_t l = marker.to_u64();
            CHECK(BigInt::pow2(l - 1) - BigInt(1) <= q);
            CHECK(q < BigInt::pow2(l) - BigInt(1));
        }
    }
}

TEST_CASE("variant construction keeps base-8 zero-one convergents") {
    auto st = pow8_state(4, IfsFamily::eighth6);
    // pow8 digits are already powers of 8: same digits as half6
    CHECK(st.s_digits.digits == pow8_state(4).s_digits.digits);
    CHECK(st.s_digits.variant_pow8);
    for (std::size_t m = 1; m <= st.rounds; ++m) {
        auto mm = static_cast<std::ptrdiff_t>(m);
        CHECK(st.s_table.p_at(mm).base8_zero_one());
        CHECK(st.s_table.q_at(mm).base8_zero_one());
        CHECK(st.t_table.p_at(mm).base8_zero_one());
        CHECK(st.t_table.q_at(mm).base8_zero_one());
    }
    // a table eps whose raw digit is not a power of 8 gets rounded up
    auto tbl = EpsilonSpec::table({BigRational(1, 2), BigRational(1, 100)}, EpsKind::pow8);
    auto stv = initial_step(tbl, 2, IfsFamily::eighth6);
    CHECK(stv.s_digits.digits[1] == BigInt(512));
    CHECK(stv.s_table.q_at(2).base8_zero_one());
}

TEST_CASE("certify_delta picks the covering side and verifies exactly") {
    auto st = pow8_state(4);

    auto c1 = certify_delta(st, 1);
    CHECK(c1.side == 's');
    CHECK(c1.m == 1);
    CHECK(c1.bound == BigRational(1, 130)); // (1/2) * (1/q_2)
    CHECK(c1.bound <= BigRational(1, 8));

    auto c22 = certify_delta(st, 22); // n = M_2 belongs to the s-side window
    CHECK(c22.side == 's');
    CHECK(c22.m == 2);
    CHECK(c22.q_next == st.s_table.q_at(3));
    CHECK(c22.bound == BigRational(BigInt(1), st.s_table.q_at(3) << 22));
    CHECK(c22.bound <= BigRational(BigInt(1), BigInt::pow8(22)));

    auto c7 = certify_delta(st, 7); // n = L_2: t side still covers it
    CHECK(c7.side == 't');
    CHECK(c7.m == 1);

    auto c796 = certify_delta(st, 796);
    CHECK(c796.side == 't');
    CHECK(c796.m == 3);
    CHECK_THROWS_AS(certify_delta(st, 797), needs_more_rounds_error);

    auto st2 = pow8_state(2);
    CHECK_NOTHROW(certify_delta(st2, 7));
    CHECK_THROWS_AS(certify_delta(st2, 23), needs_more_rounds_error);
    CHECK_THROWS_AS(certify_delta(st2, 8), needs_more_rounds_error); // (L_2, M_2] needs round 3
    CHECK_THROWS_AS(certify_delta(st, 0), std::domain_error);
}

TEST_CASE("certify_range covers [1, L_k] and is deterministic") {
    auto st = pow8_state(3);
    auto certs = certify_range(st, 1, 73);
    CHECK(certs.size() == 73);
    for (const auto& c : certs) {
        CHECK(c.bound <= c.epsilon);
        CHECK(c.epsilon == EpsilonSpec::pow8().at(c.n));
    }
    auto again = certify_range(st, 1, 73, 4);
    for (std::size_t i = 0; i < certs.size(); ++i) {
        CHECK(certs[i].bound == again[i].bound);
        CHECK(certs[i].side == again[i].side);
    }
}

TEST_CASE("variant certificates use base-8 weights") {
    auto st = pow8_state(4, IfsFamily::eighth6);
    auto c = certify_delta(st, 700);
    CHECK(c.weight_bits == 3);
    CHECK(c.variant);
    CHECK(c.bound == BigRational(BigInt(1), c.q_next << (3 * 700)));
    CHECK(c.bound <= c.epsilon);
    // admissibility at shallow depths too
    auto c1 = certify_delta(st, 1);
    CHECK(c1.q_m.oct_digit_count() <= 1);
}

TEST_CASE("brute-force oracle stays below the certificate bound") {
    auto st = pow8_state(3);
    auto s_enc = cylinder_interval(st.s_digits);
    auto t_enc = cylinder_interval(st.t_digits);
    for (unsigned n = 1; n <= 5; ++n) {
        auto rep = delta_brute(st.family, n, s_enc, t_enc);
        auto cert = certify_delta(st, n);
        CHECK_FALSE(rep.inconclusive);
        CHECK(rep.min_gap.lo <= cert.bound);
        CHECK(rep.min_gap.hi <= cert.epsilon);
    }
}

TEST_CASE("no-overlap certificates") {
    auto st = pow8_state(4);
    auto c = no_overlap_certificate(st, BigInt::pow2(10));
    CHECK(c.witness_m == 3);
    CHECK(c.check1_lhs == BigInt::pow2(20) * st.s_table.q_at(3));
    CHECK(c.check1_rhs == st.t_table.q_at(3));
    CHECK(c.check1_lhs < c.check1_rhs);
    CHECK(c.check2_lhs == BigInt(2048));
    CHECK(c.check2_lhs <= c.check2_rhs);

    auto c1 = no_overlap_certificate(st, BigInt(1));
    CHECK(c1.witness_m == 2); // 65 < 2097153 and 2 <= 2^22

    auto st2 = pow8_state(2);
    CHECK_THROWS_AS(no_overlap_certificate(st2, BigInt::pow2(40)), needs_more_rounds_error);
    CHECK_THROWS_AS(no_overlap_certificate(st, BigInt(0)), std::domain_error);
}

TEST_CASE("shadow run brackets the exact values") {
    auto sh = pow8_state(50, IfsFamily::half6, ConstructionMode::shadow);
    CHECK(sh.rounds == 50);
    auto ex = pow8_state(4);
    for (std::size_t m = 2; m <= 4; ++m) {
        CHECK(sh.sh_L_at(m).contains(ex.L_at(m)));
        CHECK(sh.sh_M_at(m).contains(ex.M_at(m)));
        // q log2 brackets hold the true bit lengths
        BigInt bits_s(static_cast<long long>(ex.s_table.q_at((std::ptrdiff_t)m).bit_length()));
        CHECK(sh.sh_q_s[m].lo < bits_s);
        CHECK(bits_s <= sh.sh_q_s[m].hi + BigInt(1));
    }
    for (std::size_t m = 2; m <= 50; ++m)
        CHECK(BigInt(2) * sh.sh_L_at(m).hi < sh.sh_M_at(m).lo);
    CHECK(certified_upper_bound(sh) == sh.sh_L_at(50).lo);
    // deep markers are astronomically large yet cheap to carry
    CHECK(sh.sh_L_at(50).lo.to_string().size() > 40);
}

TEST_CASE("shadow certificates for relations") {
    auto sh = pow8_state(10, IfsFamily::half6, ConstructionMode::shadow);
    auto c = no_overlap_certificate(sh, BigInt::pow2(10));
    CHECK(c.shadow);
    CHECK(c.witness_m <= 4);
    CHECK(c.check1_lhs < c.check1_rhs);
    // per-n certificates require exact mode
    CHECK_THROWS_AS(certify_delta(sh, 1), std::domain_error);
}

TEST_CASE("superexp and table epsilon runs") {
    // superexp digits outgrow exact materialization after the initial step;
    // the shadow ledger keeps going
    auto st = run(EpsilonSpec::superexp(), 2, ConstructionMode::exact, IfsFamily::half6, 2);
    CHECK(st.s_digits.digits[1] == BigInt::pow8(4));
    CHECK(BigInt(2) * st.L_at(2) < st.M_at(2));
    for (std::uint64_t n = 1; n <= 10; ++n) CHECK(certify_delta(st, n).bound <= st.eps.at(n));
    CHECK_THROWS_AS(run(EpsilonSpec::superexp(), 3, ConstructionMode::exact, IfsFamily::half6, 2),
                    resource_limit_error);
    // superexp markers explode like L ~ 27 L^4 per round; the shadow ledger
    // carries round 10 as a ~100k-digit exponent in well under a second
    auto sh = run(EpsilonSpec::superexp(), 10, ConstructionMode::shadow, IfsFamily::half6, 2);
    CHECK(sh.sh_L_at(2).contains(st.L_at(2)));
    CHECK(sh.sh_M_at(2).contains(st.M_at(2)));
    for (std::size_t m = 2; m <= 10; ++m)
        CHECK(BigInt(2) * sh.sh_L_at(m).hi < sh.sh_M_at(m).lo);
    CHECK(sh.sh_L_at(10).lo.to_string().size() > 100000);

    auto tbl = EpsilonSpec::table({BigRational(1, 2), BigRational(1, 100)}, EpsKind::pow8);
    auto st2 = run(tbl, 3, ConstructionMode::exact, IfsFamily::half6, 2);
    CHECK(st2.s_digits.digits[1] == BigInt(100)); // ceil(1 / min(1/8, 1/100))
    for (std::uint64_t n = 1; n <= 12; ++n) CHECK(certify_delta(st2, n).bound <= tbl.at(n));

    // pre-clamped table produces the identical construction
    auto clamped = EpsilonSpec::table({BigRational(1, 8), BigRational(1, 100)}, EpsKind::pow8);
    auto st3 = run(clamped, 3, ConstructionMode::exact, IfsFamily::half6, 2);
    CHECK(st3.s_digits.digits == st2.s_digits.digits);
    CHECK(st3.t_digits.digits == st2.t_digits.digits);
    CHECK(st3.L == st2.L);
    CHECK(st3.M == st2.M);
}

TEST_CASE("bit budget pushes deep runs to shadow mode") {
    ConstructionLimits tiny;
    tiny.bit_budget = 3000;
    CHECK_NOTHROW(run(EpsilonSpec::pow8(), 4, ConstructionMode::exact, IfsFamily::half6, 2, tiny));
    CHECK_THROWS_AS(run(EpsilonSpec::pow8(), 5, ConstructionMode::exact, IfsFamily::half6, 2, tiny),
                    resource_limit_error);
    // shadow mode sails past the same budget
    CHECK_NOTHROW(run(EpsilonSpec::pow8(), 30, ConstructionMode::shadow, IfsFamily::half6, 2, tiny));
}

TEST_CASE("half8 family runs through the same machinery") {
    auto st = run(EpsilonSpec::pow8(), 3, ConstructionMode::exact, IfsFamily::half8, 2);
    // the parameter construction only depends on eps, so markers agree with half6
    CHECK(st.L == pow8_state(3).L);
    CHECK_FALSE(st.variant());
    auto c = certify_delta(st, 10);
    CHECK(c.weight_bits == 1);
    CHECK(c.bound <= c.epsilon);
    auto s_enc = cylinder_interval(st.s_digits);
    auto t_enc = cylinder_interval(st.t_digits);
    auto rep = delta_brute(IfsFamily::half8, 2, s_enc, t_enc);
    CHECK(rep.point_count == 64);
    CHECK_FALSE(rep.inconclusive);
    CHECK(rep.min_gap.hi <= st.eps.at(2));
    auto scan = overlap_exclusion_search(IfsFamily::half8, 2, s_enc, t_enc);
    CHECK(scan.certified);
    // half8 admits the extra (0,1,1)/(1,1,1) codes, so s = t collapses pairs
    auto bad = overlap_exclusion_search(IfsFamily::half8, 1, RationalInterval(BigRational(1, 3)),
                                        RationalInterval(BigRational(1, 3)));
    CHECK_FALSE(bad.certified);
}

TEST_CASE("run with rounds below 2 stops after the initial step") {
    auto st = run(EpsilonSpec::pow8(), 1, ConstructionMode::exact, IfsFamily::half6, 2);
    CHECK(st.rounds == 2);
    CHECK(st.s_digits.digits.size() == 2);
    CHECK_THROWS_AS(run(EpsilonSpec::pow8(), 0, ConstructionMode::exact, IfsFamily::half6, 2),
                    std::domain_error);
}
