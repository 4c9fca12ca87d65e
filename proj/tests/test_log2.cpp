#include <doctest.h>

#include "oracles.hpp"

using namespace overlapforge;

namespace {

// exact check 2^floor(lo) <= x <= 2^ceil(hi)
void check_dyadic_soundness(const BigRational& x, const Log2Bounds& b) {
    long long lo_floor = b.lo.floor().to_i64();
    long long hi_ceil = b.hi.ceil().to_i64();
    CHECK(BigRational::pow2(lo_floor) <= x);
    CHECK(x <= BigRational::pow2(hi_ceil));
}

} // namespace

TEST_CASE("powers of two are exact points") {
    for (unsigned p : {4u, 20u}) {
        auto b = log2_bounds(BigRational(8), p);
        CHECK(b.lo == BigRational(3));
        CHECK(b.hi == BigRational(3));
        auto h = log2_bounds(BigRational(1, 2), p);
        CHECK(h.contains(BigRational(-1)));
        CHECK(h.width() == BigRational(0));
    }
}

TEST_CASE("log2(65) bracket at 20 bits") {
    auto b = log2_bounds(BigRational(65), 20);
    CHECK(b.width() <= BigRational(BigInt(1), BigInt::pow2(18)));
    // log2(65) = 6.022367813028454...
    CHECK(b.lo.to_double_approx() <= 6.0223679);
    CHECK(b.hi.to_double_approx() >= 6.0223677);
    check_dyadic_soundness(BigRational(65), b);
    // the powering oracle brackets the same irrational
    auto ob = oracle::pow_log2_oracle(BigRational(65), 10);
    CHECK(ob.lo <= b.hi);
    CHECK(b.lo <= ob.hi);
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(log2_bounds(BigRational(0), 8), std::domain_error);
    CHECK_THROWS_AS(log2_bounds(BigRational(-3, 7), 8), std::domain_error);
    CHECK_THROWS_AS(floor_log2(BigRational(0)), std::domain_error);
}

TEST_CASE("floor_log2 matches bit lengths") {
    CHECK(floor_log2(BigRational(1)) == 0);
    CHECK(floor_log2(BigRational(65)) == 6);
    CHECK(floor_log2(BigRational(64)) == 6);
    CHECK(floor_log2(BigRational(63)) == 5);
    CHECK(floor_log2(BigRational(1, 3)) == -2);
    CHECK(floor_log2(BigRational(2, 3)) == -1);
}

TEST_CASE("soundness and width over pseudo-random rationals") {
    oracle::Rng rng(0x109);
    for (int i = 0; i < 60; ++i) {
        BigRational x = rng.rational(2).abs();
        if (x.is_zero()) continue;
        for (unsigned p : {6u, 16u, 30u}) {
            auto b = log2_bounds(x, p);
            CHECK(b.lo <= b.hi);
            CHECK(b.width() <= BigRational(BigInt(1), BigInt::pow2(p - 2)));
            check_dyadic_soundness(x, b);
        }
        // cross-check against the powering oracle at coarse precision
        auto mine = log2_bounds(x, 12);
        auto ob = oracle::pow_log2_oracle(x, 9);
        CHECK(mine.lo <= ob.hi);
        CHECK(ob.lo <= mine.hi);
    }
}

TEST_CASE("tight soundness via scaled powering") {
    // 2^floor(lo * 2^12) <= 65^(2^12) verifies the fractional bits exactly
    auto b = log2_bounds(BigRational(65), 16);
    BigInt m = BigInt::pow2(12);
    BigInt lo_scaled = (b.lo * BigRational(m)).floor();
    BigInt hi_scaled = (b.hi * BigRational(m)).ceil();
    BigInt x_pow = BigInt::pow(BigInt(65), 4096);
    CHECK(BigInt::pow2(lo_scaled.to_u64()) <= x_pow);
    CHECK(x_pow <= BigInt::pow2(hi_scaled.to_u64()));
}

TEST_CASE("brackets at different precisions agree with the powering oracle") {
    oracle::Rng rng(0x70c);
    for (int i = 0; i < 100; ++i) {
        BigRational x = rng.rational(2).abs();
        if (x.is_zero()) continue;
        auto coarse = log2_bounds(x, 8);
        auto fine = log2_bounds(x, 24);
        // both contain log2(x), so they must intersect and nest in width
        CHECK(fine.lo <= coarse.hi);
        CHECK(coarse.lo <= fine.hi);
        CHECK(fine.width() <= coarse.width() + BigRational(BigInt(1), BigInt::pow2(6)));
        auto pow = oracle::pow_log2_oracle(x, 10); // m = 256, exact by construction
        CHECK(pow.lo <= fine.hi);
        CHECK(fine.lo <= pow.hi);
    }
}

TEST_CASE("big inputs stay cheap") {
    BigInt q3 = BigInt(65) * BigInt::pow2(66) + BigInt(1);
    auto b = log2_bounds(BigRational(BigInt(1), q3 << 22), 40);
    CHECK(b.width() <= BigRational(BigInt(1), BigInt::pow2(38)));
    check_dyadic_soundness(BigRational(BigInt(1), q3 << 22), b);
}
