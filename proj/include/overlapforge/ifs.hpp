#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "interval.hpp"
#include "log2.hpp"

namespace overlapforge {

// The three concrete families. All maps in a family share one contraction
// ratio, so every depth-n pair has equal composed ratios and the distance
// d(alpha, beta) = |phi_alpha(0) - phi_beta(0)| is always finite.
//   half6    ratio 1/2, translations {0, 1, s, 1+s, t, 1+t}
//   eighth6  ratio 1/8, same translations
//   half8    ratio 1/2, adds {s+t, 1+s+t} (no zero-product constraint)
enum class IfsFamily { half6, eighth6, half8 };

struct FamilyTraits {
    unsigned map_count;  // similarities per level
    unsigned base;       // 1/ratio: digit weight per depth
    bool constrained;    // delta_i * delta'_i = 0 enforced per position
};

inline FamilyTraits traits_of(IfsFamily f) {
    switch (f) {
    case IfsFamily::half6: return {6, 2, true};
    case IfsFamily::eighth6: return {6, 8, true};
    case IfsFamily::half8: return {8, 2, false};
    }
    throw std::logic_error("traits_of: bad family");
}

inline const char* to_string(IfsFamily f) {
    switch (f) {
    case IfsFamily::half6: return "half6";
    case IfsFamily::eighth6: return "eighth6";
    case IfsFamily::half8: return "half8";
    }
    return "?";
}

inline IfsFamily family_from_string(const std::string& s) {
    if (s == "half6") return IfsFamily::half6;
    if (s == "eighth6") return IfsFamily::eighth6;
    if (s == "half8") return IfsFamily::half8;
    throw parse_error("unknown family: " + s);
}

// phi_alpha(0) = (A + B s + C t) / base^n, canonicalized to the integer
// coefficient triple. Depths are capped well below 64/3 bits so the packed
// coefficients always fit.
struct CodedPoint {
    std::uint64_t a = 0, b = 0, c = 0;

    friend bool operator==(const CodedPoint&, const CodedPoint&) = default;
    friend auto operator<=>(const CodedPoint&, const CodedPoint&) = default;
};

struct EnumLimits {
    unsigned max_depth = 10;
    std::uint64_t max_points = 60466176; // 6^10
    unsigned max_overlap_depth = 6;
    unsigned threads = 0; // 0 = hardware default
};

// All coded points at depth n, in a fixed order: position digits vary
// most-significant-first, and per position the map order matches the family
// display (omega minor, (delta, delta') major).
inline std::vector<CodedPoint> enumerate_coded_points(IfsFamily family, unsigned n,
                                                      const EnumLimits& lim = {}) {
    if (n == 0) throw std::domain_error("enumerate_coded_points: depth must be >= 1");
    const FamilyTraits ft = traits_of(family);
    if (n > lim.max_depth)
        throw resource_limit_error("enumerate_coded_points: depth above cap");
    if (n > (ft.base == 8 ? 20u : 60u)) // coded coefficients must fit 64 bits
        throw resource_limit_error("enumerate_coded_points: depth above coding width");
    double est = std::pow(static_cast<double>(ft.map_count), static_cast<double>(n));
    if (est > static_cast<double>(lim.max_points))
        throw resource_limit_error("enumerate_coded_points: point count above cap");

    // per-position (omega, delta, delta') choices in family display order:
    // phi_1..phi_6 give (0,0,0),(1,0,0),(0,1,0),(1,1,0),(0,0,1),(1,0,1);
    // half8 appends phi_7, phi_8 as (0,1,1),(1,1,1)
    struct Choice {
        unsigned w, d, dp;
    };
    std::vector<Choice> choices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0},
                                   {1, 1, 0}, {0, 0, 1}, {1, 0, 1}};
    if (!ft.constrained) {
        choices.push_back({0, 1, 1});
        choices.push_back({1, 1, 1});
    }

    const std::uint64_t total = [&] {
        std::uint64_t t = 1;
        for (unsigned i = 0; i < n; ++i) t *= ft.map_count;
        return t;
    }();
    std::vector<CodedPoint> out(total);
    std::vector<unsigned> digit(n, 0);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        CodedPoint p;
        for (unsigned pos = 0; pos < n; ++pos) {
            const Choice& ch = choices[digit[pos]];
            p.a = p.a * ft.base + ch.w;
            p.b = p.b * ft.base + ch.d;
            p.c = p.c * ft.base + ch.dp;
        }
        out[idx] = p;
        for (unsigned pos = n; pos-- > 0;) {
            if (++digit[pos] < ft.map_count) break;
            digit[pos] = 0;
        }
    }
    return out;
}

struct DeltaReport {
    unsigned n = 0;
    RationalInterval min_gap;
    std::pair<CodedPoint, CodedPoint> attained_pair;
    std::uint64_t point_count = 0;
    bool inconclusive = false;
};

namespace detail {

// common-denominator fixed representation for fast exact comparisons
struct ScaledEnclosures {
    BigInt den;              // shared positive denominator
    BigInt s_lo, s_hi, t_lo, t_hi; // numerators over den
};

inline ScaledEnclosures scale_enclosures(const RationalInterval& s, const RationalInterval& t) {
    BigInt den = s.lo.den();
    for (const BigInt* d : {&s.hi.den(), &t.lo.den(), &t.hi.den()}) {
        BigInt g = BigInt::gcd(den, *d);
        den = den / g * *d;
    }
    auto scale = [&den](const BigRational& r) { return r.num() * (den / r.den()); };
    return {den, scale(s.lo), scale(s.hi), scale(t.lo), scale(t.hi)};
}

inline void check_unit_enclosure(const RationalInterval& e, const char* name) {
    if (e.lo.sign() < 0 || e.hi > BigRational(1))
        throw std::domain_error(std::string(name) + " enclosure must lie within [0,1]");
}

template <typename Fn>
inline void parallel_chunks(std::uint64_t count, unsigned threads, Fn&& fn) {
    unsigned hw = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    if (hw <= 1 || count < 4096) {
        fn(0, 0, count);
        return;
    }
    std::uint64_t chunk = (count + hw - 1) / hw;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < hw; ++w) {
        std::uint64_t lo = w * chunk, hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&fn, w, lo, hi] { fn(w, lo, hi); });
    }
    for (auto& th : pool) th.join();
}

} // namespace detail

// Certified enclosure of Delta_n = min over distinct coded triples of
// |DA + DB s + DC t| / base^n, uniform over the parameter enclosures.
// Point enclosures give the exact value for those rationals. The result is
// independent of the worker count: candidates come from adjacent pairs in the
// exact midpoint order and merge by (value, triple-lex) minimum.
inline DeltaReport delta_brute(IfsFamily family, unsigned n, const RationalInterval& s_enc,
                               const RationalInterval& t_enc, const EnumLimits& lim = {}) {
    detail::check_unit_enclosure(s_enc, "s");
    detail::check_unit_enclosure(t_enc, "t");
    const FamilyTraits ft = traits_of(family);
    std::vector<CodedPoint> pts = enumerate_coded_points(family, n, lim);

    const auto sc = detail::scale_enclosures(s_enc, t_enc);
    struct Val {
        BigInt lo, hi, mid2; // mid2 = lo + hi
        std::uint32_t idx;
    };
    std::vector<Val> vals(pts.size());
    detail::parallel_chunks(pts.size(), lim.threads, [&](unsigned, std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t i = lo; i < hi; ++i) {
            const CodedPoint& p = pts[i];
            BigInt a = BigInt(static_cast<long long>(p.a)) * sc.den;
            BigInt vlo = a + BigInt(static_cast<long long>(p.b)) * sc.s_lo +
                         BigInt(static_cast<long long>(p.c)) * sc.t_lo;
            BigInt vhi = a + BigInt(static_cast<long long>(p.b)) * sc.s_hi +
                         BigInt(static_cast<long long>(p.c)) * sc.t_hi;
            vals[i] = {std::move(vlo), std::move(vhi), BigInt(), static_cast<std::uint32_t>(i)};
            vals[i].mid2 = vals[i].lo + vals[i].hi;
        }
    });
    std::sort(vals.begin(), vals.end(), [&pts](const Val& x, const Val& y) {
        auto c = x.mid2 <=> y.mid2;
        if (c != 0) return c < 0;
        return pts[x.idx] < pts[y.idx];
    });

    // adjacent pairs in midpoint order carry both the least upper distance and
    // the least gap; any interval overlap at all shows up between neighbours
    struct Best {
        bool has = false;
        bool overlap = false;    // a pair of intervals meets, at least one of width > 0
        bool exact_zero = false; // two point intervals coincide: genuine Delta = 0
        bool has_gap = false;
        BigInt gap_lo, gap_hi; // minima over scanned pairs
        std::uint32_t hi_i = 0, hi_j = 0;
    };
    const std::uint64_t pairs = vals.size() - 1;
    unsigned hw = lim.threads ? lim.threads : std::max(1u, std::thread::hardware_concurrency());
    std::vector<Best> parts(std::max<std::uint64_t>(1, std::min<std::uint64_t>(hw, pairs)));
    detail::parallel_chunks(pairs, static_cast<unsigned>(parts.size()),
                            [&](unsigned w, std::uint64_t lo, std::uint64_t hi) {
        Best b;
        for (std::uint64_t k = lo; k < hi; ++k) {
            const Val& x = vals[k];
            const Val& y = vals[k + 1];
            BigInt up = y.hi - x.lo; // sup of |difference| for this pair
            if (!b.has || up < b.gap_hi ||
                (up == b.gap_hi &&
                 std::pair(pts[x.idx], pts[y.idx]) < std::pair(pts[b.hi_i], pts[b.hi_j]))) {
                b.gap_hi = up;
                b.hi_i = x.idx;
                b.hi_j = y.idx;
            }
            if (y.lo <= x.hi) { // intervals meet
                if (x.lo == x.hi && y.lo == y.hi)
                    b.exact_zero = true;
                else
                    b.overlap = true;
            } else {
                BigInt g = y.lo - x.hi;
                if (!b.has_gap || g < b.gap_lo) {
                    b.gap_lo = std::move(g);
                    b.has_gap = true;
                }
            }
            b.has = true;
        }
        parts[w] = std::move(b);
    });

    Best agg;
    for (Best& b : parts) {
        if (!b.has) continue;
        if (!agg.has) {
            agg = std::move(b);
            continue;
        }
        if (b.gap_hi < agg.gap_hi ||
            (b.gap_hi == agg.gap_hi &&
             std::pair(pts[b.hi_i], pts[b.hi_j]) < std::pair(pts[agg.hi_i], pts[agg.hi_j]))) {
            agg.gap_hi = std::move(b.gap_hi);
            agg.hi_i = b.hi_i;
            agg.hi_j = b.hi_j;
        }
        agg.overlap = agg.overlap || b.overlap;
        agg.exact_zero = agg.exact_zero || b.exact_zero;
        if (b.has_gap && (!agg.has_gap || b.gap_lo < agg.gap_lo)) {
            agg.gap_lo = std::move(b.gap_lo);
            agg.has_gap = true;
        }
    }
    if (agg.overlap || agg.exact_zero || !agg.has_gap) agg.gap_lo = BigInt(0);

    DeltaReport rep;
    rep.n = n;
    rep.point_count = pts.size();
    rep.inconclusive = agg.overlap && !agg.exact_zero;
    BigInt scale_den = sc.den;
    for (unsigned i = 0; i < n; ++i) scale_den = scale_den * BigInt(static_cast<int>(ft.base));
    rep.min_gap = RationalInterval(BigRational(agg.gap_lo, scale_den),
                                   BigRational(agg.gap_hi, scale_den));
    rep.attained_pair = {pts[agg.hi_i], pts[agg.hi_j]};
    if (pts[agg.hi_j] < pts[agg.hi_i]) std::swap(rep.attained_pair.first, rep.attained_pair.second);
    return rep;
}

// Difference triple witnessing that two depth-n cylinder images could meet.
struct OverlapWitness {
    BigInt da, db, dc;
};

struct OverlapScan {
    unsigned n = 0;
    bool certified = false;
    std::uint64_t triples_checked = 0;
    std::vector<OverlapWitness> witnesses; // triples whose interval contains 0
};

namespace detail {

// integers representable as sum_{i<n} c_i base^i with c_i in {-1,0,1}
inline bool balanced_digits_representable(BigInt x, unsigned base, unsigned n) {
    x = x.abs();
    unsigned used = 0;
    BigInt b(static_cast<int>(base));
    while (!x.is_zero()) {
        if (used == n) return false;
        auto [q, r] = BigInt::divmod(x, b);
        if (r.is_zero()) {
            x = std::move(q);
        } else if (r == BigInt(1)) {
            x = std::move(q);
        } else if (r == BigInt(static_cast<int>(base) - 1)) {
            x = q + BigInt(1); // digit -1
        } else {
            return false;
        }
        ++used;
    }
    return true;
}

} // namespace detail

// Exhaustive exclusion over the realizable difference triples at depth n:
// certified when every nonzero (DA, DB, DC) keeps DA + DB s + DC t away from
// zero across the whole enclosure. DA is free over its digit range, so each
// (DB, DC) reduces to an integer-membership test against one interval.
inline OverlapScan overlap_exclusion_search(IfsFamily family, unsigned n,
                                            const RationalInterval& s_enc,
                                            const RationalInterval& t_enc,
                                            const EnumLimits& lim = {}) {
    if (n == 0) throw std::domain_error("overlap_exclusion_search: depth must be >= 1");
    if (n > lim.max_overlap_depth || n > (traits_of(family).base == 8 ? 20u : 60u))
        throw resource_limit_error("overlap_exclusion_search: depth above cap");
    detail::check_unit_enclosure(s_enc, "s");
    detail::check_unit_enclosure(t_enc, "t");
    const FamilyTraits ft = traits_of(family);

    // realizable (DB, DC): per position, differences of admissible
    // (delta, delta') pairs; unconstrained families factor into full ranges
    std::vector<std::pair<long long, long long>> bc;
    if (ft.constrained) {
        static constexpr std::array<std::pair<int, int>, 7> diffs = {
            {{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}}};
        std::vector<unsigned> digit(n, 0);
        std::uint64_t total = 1;
        for (unsigned i = 0; i < n; ++i) total *= diffs.size();
        bc.reserve(total);
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            long long db = 0, dc = 0;
            for (unsigned pos = 0; pos < n; ++pos) {
                db = db * ft.base + diffs[digit[pos]].first;
                dc = dc * ft.base + diffs[digit[pos]].second;
            }
            bc.emplace_back(db, dc);
            for (unsigned pos = n; pos-- > 0;) {
                if (++digit[pos] < diffs.size()) break;
                digit[pos] = 0;
            }
        }
        std::sort(bc.begin(), bc.end());
        bc.erase(std::unique(bc.begin(), bc.end()), bc.end());
    } else {
        long long top = 0;
        for (unsigned i = 0; i < n; ++i) top = top * ft.base + 1;
        for (long long db = -top; db <= top; ++db)
            for (long long dc = -top; dc <= top; ++dc) bc.emplace_back(db, dc);
    }

    const auto sc = detail::scale_enclosures(s_enc, t_enc);
    // largest realizable |DA|: all-ones digit string of length n
    BigInt top(0);
    for (unsigned i = 0; i < n; ++i) top = top * BigInt(static_cast<int>(ft.base)) + BigInt(1);

    OverlapScan scan;
    scan.n = n;
    std::set<std::array<std::string, 3>> seen; // dedupe witness triples for reporting
    for (auto [db, dc] : bc) {
        ++scan.triples_checked;
        // I = DB*s + DC*t over the enclosure, as numerators over sc.den
        BigInt ilo = BigInt(db) * (db >= 0 ? sc.s_lo : sc.s_hi) +
                     BigInt(dc) * (dc >= 0 ? sc.t_lo : sc.t_hi);
        BigInt ihi = BigInt(db) * (db >= 0 ? sc.s_hi : sc.s_lo) +
                     BigInt(dc) * (dc >= 0 ? sc.t_hi : sc.t_lo);
        // bad DA are the realizable integers in [-ihi/den, -ilo/den]
        BigInt a_from = BigInt::ceil_div(-ihi, sc.den);
        BigInt a_to = BigInt::floor_div(-ilo, sc.den);
        if (a_from < -top) a_from = -top;
        if (a_to > top) a_to = top;
        for (BigInt a = a_from; a <= a_to; a += BigInt(1)) {
            if (a.is_zero() && db == 0 && dc == 0) continue; // identical codes
            bool representable = ft.base == 2
                                     ? true // every |DA| <= 2^n - 1 is a digit difference
                                     : detail::balanced_digits_representable(a, ft.base, n);
            if (!representable) continue;
            std::array<std::string, 3> key = {a.to_string(), BigInt(db).to_string(),
                                              BigInt(dc).to_string()};
            if (seen.insert(key).second)
                scan.witnesses.push_back({a, BigInt(db), BigInt(dc)});
        }
    }
    scan.certified = scan.witnesses.empty();
    return scan;
}

struct SimilarityDimension {
    double value = 0;        // midpoint of the certified bracket
    BigRational lo, hi;      // exact rational bracket, width <= 1e-13
    int versus_one = 0;      // sign of (dim - 1), decided exactly
};

// dim_S = log(map_count) / log(1/ratio); the bracket comes from certified
// log2 bounds, the comparison against 1 from exact rational arithmetic.
inline SimilarityDimension similarity_dimension(IfsFamily family) {
    const FamilyTraits ft = traits_of(family);
    Log2Bounds count = log2_bounds(BigRational(static_cast<int>(ft.map_count)), 48);
    long long denom_log2 = ft.base == 2 ? 1 : 3;
    SimilarityDimension d;
    d.lo = count.lo / BigRational(denom_log2);
    d.hi = count.hi / BigRational(denom_log2);
    d.value = ((d.lo + d.hi) / BigRational(2)).to_double_approx();
    BigRational one(1);
    if (d.lo > one)
        d.versus_one = 1;
    else if (d.hi < one)
        d.versus_one = -1;
    else if (d.lo == d.hi && d.lo == one)
        d.versus_one = 0;
    else
        throw invariant_error("similarity_dimension: bracket straddles 1");
    return d;
}

} // namespace overlapforge
