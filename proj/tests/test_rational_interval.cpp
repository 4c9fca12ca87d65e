#include <doctest.h>

#include "oracles.hpp"

using namespace overlapforge;

TEST_CASE("rationals stay reduced with positive denominators") {
    BigRational r(BigInt(6), BigInt(-4));
    CHECK(r.num() == BigInt(-3));
    CHECK(r.den() == BigInt(2));
    CHECK(BigRational(0, 7).den() == BigInt(1));
    CHECK(BigRational::from_string("12/30") == BigRational(2, 5));
    CHECK(BigRational::from_string("-7") == BigRational(-7));
    CHECK_THROWS_AS(BigRational(1, 0), std::domain_error);
    // reduction is idempotent: re-normalizing the stored pair changes nothing
    oracle::Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        BigRational x = rng.rational(3);
        CHECK(BigRational(x.num(), x.den()) == x);
        CHECK(BigInt::gcd(x.num(), x.den()) == BigInt(1));
    }
}

TEST_CASE("field identities over pseudo-random rationals") {
    oracle::Rng rng(0xfeed);
    for (int i = 0; i < 150; ++i) {
        BigRational a = rng.rational(), b = rng.rational();
        CHECK((a + b) - b == a);
        CHECK(a * b == b * a);
        if (!b.is_zero()) CHECK((a / b) * b == a);
    }
}

TEST_CASE("ordering is total and consistent with subtraction") {
    oracle::Rng rng(5);
    for (int i = 0; i < 150; ++i) {
        BigRational a = rng.rational(), b = rng.rational();
        CHECK((a < b) == ((a - b).sign() < 0));
        CHECK((a == b) == ((a - b).is_zero()));
    }
    CHECK(BigRational(1, 3) < BigRational(34, 100));
    CHECK(BigRational(-1, 2) < BigRational(1, 1000000));
}

TEST_CASE("floor and ceil") {
    CHECK(BigRational(7, 2).floor() == BigInt(3));
    CHECK(BigRational(7, 2).ceil() == BigInt(4));
    CHECK(BigRational(-7, 2).floor() == BigInt(-4));
    CHECK(BigRational(-7, 2).ceil() == BigInt(-3));
    CHECK(BigRational(6, 3).floor() == BigInt(2));
    CHECK(BigRational(6, 3).ceil() == BigInt(2));
}

TEST_CASE("interval_combine endpoint arithmetic") {
    RationalInterval a(BigRational(1), BigRational(2));
    RationalInterval b(BigRational(3), BigRational(4));
    auto sum = interval_combine(a, b, IntervalOp::add);
    CHECK(sum.lo == BigRational(4));
    CHECK(sum.hi == BigRational(6));

    auto scaled = interval_combine(RationalInterval(BigRational(0)),
                                   RationalInterval(BigRational(5)), IntervalOp::sub, BigInt(-2));
    CHECK(scaled.lo == BigRational(10));
    CHECK(scaled.hi == BigRational(10));

    // all four endpoint pairs plus the touching-overlap zero case
    auto ad = interval_combine(RationalInterval(BigRational(1, 3), BigRational(1, 2)),
                               RationalInterval(BigRational(1, 2), BigRational(2, 3)),
                               IntervalOp::abs_diff);
    CHECK(ad.lo == BigRational(0));
    CHECK(ad.hi == BigRational(1, 3));

    auto gap = interval_combine(RationalInterval(BigRational(0), BigRational(1, 4)),
                                RationalInterval(BigRational(1, 2), BigRational(3, 4)),
                                IntervalOp::abs_diff);
    CHECK(gap.lo == BigRational(1, 4));
    CHECK(gap.hi == BigRational(3, 4));
}

TEST_CASE("interval_combine contains every sampled pointwise result") {
    oracle::Rng rng(0xcafe);
    for (int rep = 0; rep < 10; ++rep) {
        BigRational a1 = rng.rational(), a2 = rng.rational();
        BigRational b1 = rng.rational(), b2 = rng.rational();
        RationalInterval A = RationalInterval::hull(a1, a2);
        RationalInterval B = RationalInterval::hull(b1, b2);
        long long scale = static_cast<long long>(rng.u64(0, 6)) - 3;
        for (IntervalOp op : {IntervalOp::add, IntervalOp::sub, IntervalOp::abs_diff}) {
            RationalInterval out = interval_combine(A, B, op, BigInt(scale));
            for (int k = 0; k < 100; ++k) { // 3 ops x 10 reps x 100 samples
                BigRational u = A.lo + (A.hi - A.lo) * BigRational(static_cast<long long>(k), 99);
                BigRational v = B.lo + (B.hi - B.lo) * BigRational(static_cast<long long>(99 - k), 99);
                BigRational w;
                switch (op) {
                case IntervalOp::add: w = u + v; break;
                case IntervalOp::sub: w = u - v; break;
                case IntervalOp::abs_diff: w = (u - v).abs(); break;
                }
                CHECK(out.contains(w * BigRational(scale)));
            }
        }
    }
}

TEST_CASE("interval validation") {
    CHECK_THROWS_AS(RationalInterval(BigRational(1), BigRational(0)), std::invalid_argument);
    CHECK(RationalInterval(BigRational(2, 4)).is_point());
    CHECK(RationalInterval(BigRational(0), BigRational(1)).width() == BigRational(1));
}
