#pragma once

#include <stdexcept>
#include <utility>

#include "rational.hpp"

namespace overlapforge {

// Closed interval with exact rational endpoints. Degenerate (point) intervals
// represent exactly known rationals; constructed irrational parameters only
// ever appear through an enclosing interval.
struct RationalInterval {
    BigRational lo, hi;

    RationalInterval() : lo(0), hi(0) {}
    explicit RationalInterval(BigRational point) : lo(point), hi(std::move(point)) {}
    RationalInterval(BigRational l, BigRational h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo > hi) throw std::invalid_argument("RationalInterval: lo > hi");
    }

    static RationalInterval hull(const BigRational& a, const BigRational& b) {
        return a <= b ? RationalInterval(a, b) : RationalInterval(b, a);
    }

    bool is_point() const { return lo == hi; }
    BigRational width() const { return hi - lo; }
    bool contains(const BigRational& x) const { return lo <= x && x <= hi; }
    bool contains_zero() const { return lo.sign() <= 0 && hi.sign() >= 0; }
    bool intersects(const RationalInterval& o) const { return lo <= o.hi && o.lo <= hi; }
    bool subset_of(const RationalInterval& o) const { return o.lo <= lo && hi <= o.hi; }
};

enum class IntervalOp { add, sub, abs_diff };

// Exact interval arithmetic: the result contains scale*(x op y) for every
// x in a, y in b. Endpoints are exact rationals, so no outward rounding is
// ever needed; "outward" degenerates to equality.
inline RationalInterval interval_combine(const RationalInterval& a, const RationalInterval& b,
                                         IntervalOp op, const BigInt& scale = BigInt(1)) {
    BigRational lo, hi;
    switch (op) {
    case IntervalOp::add:
        lo = a.lo + b.lo;
        hi = a.hi + b.hi;
        break;
    case IntervalOp::sub:
        lo = a.lo - b.hi;
        hi = a.hi - b.lo;
        break;
    case IntervalOp::abs_diff: {
        if (a.intersects(b)) {
            lo = BigRational(0);
        } else {
            lo = a.hi < b.lo ? b.lo - a.hi : a.lo - b.hi;
        }
        BigRational up = a.hi - b.lo;
        BigRational down = b.hi - a.lo;
        hi = up >= down ? up : down;
        break;
    }
    }
    BigRational s{scale};
    lo = lo * s;
    hi = hi * s;
    return scale.is_negative() ? RationalInterval(std::move(hi), std::move(lo))
                               : RationalInterval(std::move(lo), std::move(hi));
}

} // namespace overlapforge
