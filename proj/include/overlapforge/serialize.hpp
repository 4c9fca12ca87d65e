#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "construction.hpp"
#include "errors.hpp"

namespace overlapforge {

using json = nlohmann::ordered_json;

// ---- integers / rationals ----------------------------------------------
// Integers serialize as decimal strings; large powers of 8 use the compact
// {"pow8": "e"} form. Both are accepted on input.

inline json int_to_json(const BigInt& v) {
    if (auto e = v.pow8_exponent(); e && *e >= 16)
        return json{{"pow8", std::to_string(*e)}};
    return v.to_string();
}

inline BigInt int_from_json(const json& j) {
    if (j.is_string()) return BigInt::from_string(j.get<std::string>());
    if (j.is_object() && j.contains("pow8")) {
        BigInt e = BigInt::from_string(j.at("pow8").get<std::string>());
        if (e.is_negative() || !e.fits_u64() || e.to_u64() > (1ull << 32))
            throw parse_error("pow8 exponent out of range");
        return BigInt::pow8(e.to_u64());
    }
    if (j.is_number_integer()) return BigInt(j.get<long long>());
    throw parse_error("expected integer encoding");
}

inline json rat_to_json(const BigRational& v) { return v.to_string(); }

inline BigRational rat_from_json(const json& j) {
    if (!j.is_string()) throw parse_error("expected rational as \"num/den\" string");
    return BigRational::from_string(j.get<std::string>());
}

inline json bracket_to_json(const IntBracket& b) {
    return json::array({int_to_json(b.lo), int_to_json(b.hi)});
}

inline IntBracket bracket_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw parse_error("expected [lo, hi] bracket");
    return {int_from_json(j[0]), int_from_json(j[1])};
}

// ---- epsilon spec --------------------------------------------------------

inline json eps_to_json(const EpsilonSpec& e) {
    json j{{"kind", to_string(e.kind())}};
    if (e.kind() == EpsKind::table) {
        json vals = json::array();
        for (const auto& v : e.table_values()) vals.push_back(rat_to_json(v));
        j["values"] = std::move(vals);
        j["tail"] = e.table_tail() ? json(to_string(*e.table_tail())) : json(nullptr);
    }
    return j;
}

inline EpsKind eps_kind_from_string(const std::string& s) {
    if (s == "pow8") return EpsKind::pow8;
    if (s == "superexp") return EpsKind::superexp;
    if (s == "table") return EpsKind::table;
    throw parse_error("unknown eps kind: " + s);
}

inline EpsilonSpec eps_from_json(const json& j) {
    EpsKind kind = eps_kind_from_string(j.at("kind").get<std::string>());
    if (kind == EpsKind::pow8) return EpsilonSpec::pow8();
    if (kind == EpsKind::superexp) return EpsilonSpec::superexp();
    std::vector<BigRational> vals;
    for (const auto& v : j.at("values")) vals.push_back(rat_from_json(v));
    std::optional<EpsKind> tail;
    if (j.contains("tail") && !j.at("tail").is_null())
        tail = eps_kind_from_string(j.at("tail").get<std::string>());
    return EpsilonSpec::table(std::move(vals), tail);
}

// ---- construction state --------------------------------------------------

inline constexpr const char* kStateFormat = "overlapforge-state/1";

inline json state_to_json(const ConstructionState& st) {
    json j;
    j["format"] = kStateFormat;
    j["family"] = to_string(st.family);
    j["mode"] = to_string(st.mode);
    j["eps"] = eps_to_json(st.eps);
    j["N"] = st.N;
    j["rounds"] = st.rounds;
    auto int_array = [](const std::vector<BigInt>& v) {
        json a = json::array();
        for (const auto& x : v) a.push_back(int_to_json(x));
        return a;
    };
    auto bracket_array = [](const std::vector<IntBracket>& v) {
        json a = json::array();
        for (const auto& x : v) a.push_back(bracket_to_json(x));
        return a;
    };
    if (st.mode == ConstructionMode::exact) {
        j["s_digits"] = int_array(st.s_digits.digits);
        j["t_digits"] = int_array(st.t_digits.digits);
        j["L"] = int_array(st.L);
        j["M"] = int_array(st.M);
        j["convergents"] = json{{"s_p", int_array(st.s_table.p)},
                                {"s_q", int_array(st.s_table.q)},
                                {"t_p", int_array(st.t_table.p)},
                                {"t_q", int_array(st.t_table.q)}};
    } else {
        j["shadow"] = json{{"L", bracket_array(st.sh_L)},
                           {"M", bracket_array(st.sh_M)},
                           {"zeta_s_log2", bracket_array(st.sh_zeta_s)},
                           {"zeta_t_log2", bracket_array(st.sh_zeta_t)},
                           {"q_s_log2", bracket_array(st.sh_q_s)},
                           {"q_t_log2", bracket_array(st.sh_q_t)}};
    }
    return j;
}

inline ConstructionState state_from_json(const json& j) {
    try {
        if (j.at("format").get<std::string>() != kStateFormat)
            throw parse_error("not an overlapforge state file");
        ConstructionState st;
        st.family = family_from_string(j.at("family").get<std::string>());
        std::string mode = j.at("mode").get<std::string>();
        if (mode != "exact" && mode != "shadow") throw parse_error("bad mode: " + mode);
        st.mode = mode == "exact" ? ConstructionMode::exact : ConstructionMode::shadow;
        st.eps = eps_from_json(j.at("eps"));
        st.N = j.at("N").get<unsigned>();
        st.rounds = j.at("rounds").get<unsigned>();
        auto int_vec = [](const json& a) {
            std::vector<BigInt> v;
            for (const auto& x : a) v.push_back(int_from_json(x));
            return v;
        };
        auto bracket_vec = [](const json& a) {
            std::vector<IntBracket> v;
            for (const auto& x : a) v.push_back(bracket_from_json(x));
            return v;
        };
        if (st.mode == ConstructionMode::exact) {
            st.s_digits.variant_pow8 = st.variant();
            st.t_digits.variant_pow8 = st.variant();
            st.s_digits.digits = int_vec(j.at("s_digits"));
            st.t_digits.digits = int_vec(j.at("t_digits"));
            st.L = int_vec(j.at("L"));
            st.M = int_vec(j.at("M"));
            const json& c = j.at("convergents");
            st.s_table.p = int_vec(c.at("s_p"));
            st.s_table.q = int_vec(c.at("s_q"));
            st.t_table.p = int_vec(c.at("t_p"));
            st.t_table.q = int_vec(c.at("t_q"));
        } else {
            const json& s = j.at("shadow");
            st.sh_L = bracket_vec(s.at("L"));
            st.sh_M = bracket_vec(s.at("M"));
            st.sh_zeta_s = bracket_vec(s.at("zeta_s_log2"));
            st.sh_zeta_t = bracket_vec(s.at("zeta_t_log2"));
            st.sh_q_s = bracket_vec(s.at("q_s_log2"));
            st.sh_q_t = bracket_vec(s.at("q_t_log2"));
        }
        return st;
    } catch (const json::exception& e) {
        throw parse_error(std::string("state: ") + e.what());
    }
}

// Exact replay: rebuild the state from its own parameters and require every
// serialized field to agree. Any single mutated integer shows up as a
// mismatch (or as a failed defining inequality during the rebuild).
inline void integrity_replay(const ConstructionState& st) {
    ConstructionLimits lim;
    if (st.mode == ConstructionMode::exact) {
        std::size_t maxbits = 0;
        for (const auto& q : st.s_table.q) maxbits = std::max(maxbits, q.bit_length());
        for (const auto& q : st.t_table.q) maxbits = std::max(maxbits, q.bit_length());
        lim.bit_budget = std::max<std::uint64_t>(lim.bit_budget, 4 * maxbits + 64);
    }
    ConstructionState rebuilt;
    try {
        rebuilt = run(st.eps, st.rounds, st.mode, st.family, st.N, lim);
    } catch (const integrity_error&) {
        throw;
    } catch (const std::exception& e) {
        // a state that cannot even be rebuilt from its own parameters is
        // not a state this tool produced
        throw integrity_error(std::string("replay failed: ") + e.what());
    }
    if (state_to_json(rebuilt) != state_to_json(st))
        throw integrity_error("state does not match its exact replay");
    // defining inequalities, replayed directly from the stored integers
    if (st.mode == ConstructionMode::exact) {
        for (std::size_t m = 2; m <= st.rounds; ++m) {
            for (auto [marker, q] :
                 {std::pair{st.L_at(m), st.s_table.q_at(static_cast<std::ptrdiff_t>(m))},
                  std::pair{st.M_at(m), st.t_table.q_at(static_cast<std::ptrdiff_t>(m))}}) {
                if (!marker.fits_u64()) throw integrity_error("marker out of range");
                BigInt low = BigInt::pow2(marker.to_u64() - 1) - BigInt(1);
                BigInt high = BigInt::pow2(marker.to_u64()) - BigInt(1);
                if (!(low <= q && q < high))
                    throw integrity_error("defining inequality 2^(L-1)-1 <= q < 2^L-1 fails at m=" +
                                          std::to_string(m));
            }
            if (!(BigInt(2) * st.L_at(m) < st.M_at(m)))
                throw integrity_error("2L < M fails at m=" + std::to_string(m));
        }
    }
}

// ---- delta certificates ----------------------------------------------------

inline constexpr const char* kDeltaCertFormat = "overlapforge-delta-certs/1";

inline json delta_certs_to_json(const ConstructionState& st,
                                const std::vector<DeltaCertificate>& certs) {
    json arr = json::array();
    for (const auto& c : certs) {
        arr.push_back(json{{"n", c.n},
                           {"side", std::string(1, c.side)},
                           {"m", c.m},
                           {"p_m", int_to_json(c.p_m)},
                           {"q_m", int_to_json(c.q_m)},
                           {"q_next", int_to_json(c.q_next)},
                           {"bound", rat_to_json(c.bound)},
                           {"epsilon", rat_to_json(c.epsilon)}});
    }
    return json{{"format", kDeltaCertFormat},
                {"family", to_string(st.family)},
                {"eps", eps_to_json(st.eps)},
                {"N", st.N},
                {"rounds", st.rounds},
                {"weight_bits", st.weight_bits()},
                {"variant", st.variant()},
                {"certs", std::move(arr)}};
}

// Re-verifies every inequality a delta certificate asserts, from the file
// alone. Returns the number of certificates checked.
inline std::size_t replay_delta_certs(const json& j) {
    try {
        if (j.at("format").get<std::string>() != kDeltaCertFormat)
            throw parse_error("not a delta certificate file");
        EpsilonSpec eps = eps_from_json(j.at("eps"));
        unsigned wb = j.at("weight_bits").get<unsigned>();
        bool variant = j.at("variant").get<bool>();
        IfsFamily fam = family_from_string(j.at("family").get<std::string>());
        if (wb != (traits_of(fam).base == 2 ? 1u : 3u) ||
            variant != (fam == IfsFamily::eighth6))
            throw integrity_error("weight/variant flags inconsistent with the declared family");
        std::size_t count = 0;
        for (const auto& cj : j.at("certs")) {
            std::uint64_t n = cj.at("n").get<std::uint64_t>();
            BigInt p = int_from_json(cj.at("p_m"));
            BigInt q = int_from_json(cj.at("q_m"));
            BigInt qn = int_from_json(cj.at("q_next"));
            BigRational bound = rat_from_json(cj.at("bound"));
            BigRational epsn = rat_from_json(cj.at("epsilon"));
            if (n < 1 || q < BigInt(1) || qn <= q)
                throw integrity_error("certificate n=" + std::to_string(n) + ": bad convergents");
            if (BigInt::gcd(p, q) != BigInt(1))
                throw integrity_error("certificate n=" + std::to_string(n) +
                                      ": p_m/q_m not reduced");
            if (variant) {
                if (!p.base8_zero_one() || !q.base8_zero_one() || p.oct_digit_count() > n ||
                    q.oct_digit_count() > n)
                    throw integrity_error("certificate n=" + std::to_string(n) +
                                          ": coefficients not base-8 admissible");
            } else {
                BigInt Q = BigInt::pow2(n) - BigInt(1);
                if (p > Q || q > Q)
                    throw integrity_error("certificate n=" + std::to_string(n) +
                                          ": coefficients exceed 2^n - 1");
            }
            if (bound != BigRational(BigInt(1), qn << (wb * n)))
                throw integrity_error("certificate n=" + std::to_string(n) +
                                      ": bound is not base^-n / q_next");
            if (epsn != eps.at(n))
                throw integrity_error("certificate n=" + std::to_string(n) +
                                      ": epsilon does not match the spec");
            if (!(bound <= epsn))
                throw integrity_error("certificate n=" + std::to_string(n) + ": bound > eps_n");
            ++count;
        }
        return count;
    } catch (const json::exception& e) {
        throw parse_error(std::string("delta certs: ") + e.what());
    }
}

// ---- no-overlap certificate ------------------------------------------------

inline constexpr const char* kOverlapCertFormat = "overlapforge-overlap-cert/1";

inline json overlap_cert_to_json(const ConstructionState& st, const NoOverlapCertificate& c) {
    json j{{"format", kOverlapCertFormat},
           {"family", to_string(st.family)},
           {"mode", c.shadow ? "shadow" : "exact"},
           {"B", int_to_json(c.coeff_bound)},
           {"witness_m", c.witness_m}};
    if (!c.shadow) {
        j["q_m"] = int_to_json(st.s_table.q_at(static_cast<std::ptrdiff_t>(c.witness_m)));
        j["qp_m"] = int_to_json(st.t_table.q_at(static_cast<std::ptrdiff_t>(c.witness_m)));
        j["M_m"] = int_to_json(st.M_at(c.witness_m));
    }
    j["check1"] = json{{"lhs", int_to_json(c.check1_lhs)}, {"rhs", int_to_json(c.check1_rhs)}};
    j["check2"] = json{{"lhs", int_to_json(c.check2_lhs)}, {"rhs", int_to_json(c.check2_rhs)}};
    return j;
}

inline void replay_overlap_cert(const json& j) {
    try {
        if (j.at("format").get<std::string>() != kOverlapCertFormat)
            throw parse_error("not a no-overlap certificate file");
        BigInt B = int_from_json(j.at("B"));
        BigInt c1l = int_from_json(j.at("check1").at("lhs"));
        BigInt c1r = int_from_json(j.at("check1").at("rhs"));
        BigInt c2l = int_from_json(j.at("check2").at("lhs"));
        BigInt c2r = int_from_json(j.at("check2").at("rhs"));
        if (!(c1l < c1r)) throw integrity_error("overlap certificate: check 1 fails");
        if (!(c2l <= c2r)) throw integrity_error("overlap certificate: check 2 fails");
        if (j.at("mode").get<std::string>() == "exact") {
            BigInt qm = int_from_json(j.at("q_m"));
            BigInt qpm = int_from_json(j.at("qp_m"));
            BigInt Mm = int_from_json(j.at("M_m"));
            if (c1l != B * B * qm || c1r != qpm)
                throw integrity_error("overlap certificate: check 1 operands do not replay");
            if (!Mm.fits_u64() || Mm.to_u64() > (1ull << 32))
                throw integrity_error("overlap certificate: marker out of range");
            if (c2l != BigInt(2) * B || c2r != BigInt::pow2(Mm.to_u64()))
                throw integrity_error("overlap certificate: check 2 operands do not replay");
        }
    } catch (const json::exception& e) {
        throw parse_error(std::string("overlap cert: ") + e.what());
    }
}

// ---- delta reports / overlap scans ------------------------------------------

inline json delta_report_to_json(IfsFamily family, const DeltaReport& r) {
    auto point = [](const CodedPoint& p) {
        return json{{"A", std::to_string(p.a)}, {"B", std::to_string(p.b)},
                    {"C", std::to_string(p.c)}};
    };
    return json{{"format", "overlapforge-delta/1"},
                {"family", to_string(family)},
                {"n", r.n},
                {"point_count", r.point_count},
                {"min_gap_lo", rat_to_json(r.min_gap.lo)},
                {"min_gap_hi", rat_to_json(r.min_gap.hi)},
                {"inconclusive", r.inconclusive},
                {"attained_pair", json::array({point(r.attained_pair.first),
                                               point(r.attained_pair.second)})}};
}

inline json overlap_scan_to_json(IfsFamily family, const OverlapScan& s) {
    json w = json::array();
    std::size_t cap = 1000;
    for (const auto& t : s.witnesses) {
        if (w.size() == cap) break;
        w.push_back(json::array({t.da.to_string(), t.db.to_string(), t.dc.to_string()}));
    }
    return json{{"format", "overlapforge-overlap-scan/1"},
                {"family", to_string(family)},
                {"n", s.n},
                {"certified", s.certified},
                {"triples_checked", s.triples_checked},
                {"witness_count", s.witnesses.size()},
                {"witnesses", std::move(w)}};
}

// ---- CSV ---------------------------------------------------------------------

namespace detail {

inline double approx_log2_int(const BigInt& v) {
    std::size_t bl = v.bit_length();
    if (bl == 0) return 0;
    std::uint64_t shift = bl > 52 ? bl - 52 : 0;
    double top = (v >> shift).to_double_approx();
    return std::log2(top) + static_cast<double>(shift);
}

inline std::string fmt15(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

} // namespace detail

// Fixed schema; the log2 columns are decimal conveniences for plotting, every
// verdict rests on the exact rational columns.
inline std::string delta_certs_to_csv(const std::vector<DeltaCertificate>& certs) {
    std::ostringstream out;
    out << "n,eps_num,eps_den,bound_num,bound_den,log2_eps,log2_bound,side,round\n";
    for (const auto& c : certs) {
        double log2_eps = detail::approx_log2_int(c.epsilon.num()) -
                          detail::approx_log2_int(c.epsilon.den());
        double log2_bound = detail::approx_log2_int(c.bound.num()) -
                            detail::approx_log2_int(c.bound.den());
        out << c.n << ',' << c.epsilon.num().to_string() << ',' << c.epsilon.den().to_string()
            << ',' << c.bound.num().to_string() << ',' << c.bound.den().to_string() << ','
            << detail::fmt15(log2_eps) << ',' << detail::fmt15(log2_bound) << ',' << c.side << ','
            << c.m << '\n';
    }
    return out.str();
}

// growth of the scale markers, for plotting construction behaviour
inline std::string growth_csv(const ConstructionState& st) {
    std::ostringstream out;
    out << "m,L_lo,L_hi,M_lo,M_hi\n";
    for (std::size_t m = 2; m <= st.rounds; ++m) {
        if (st.mode == ConstructionMode::exact) {
            out << m << ',' << st.L_at(m).to_string() << ',' << st.L_at(m).to_string() << ','
                << st.M_at(m).to_string() << ',' << st.M_at(m).to_string() << '\n';
        } else {
            out << m << ',' << st.sh_L_at(m).lo.to_string() << ',' << st.sh_L_at(m).hi.to_string()
                << ',' << st.sh_M_at(m).lo.to_string() << ',' << st.sh_M_at(m).hi.to_string()
                << '\n';
        }
    }
    return out.str();
}

// ---- file helpers ---------------------------------------------------------------

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << text;
    if (!f) throw std::runtime_error("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw parse_error("cannot open: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline json parse_json_file(const std::string& path) {
    try {
        return json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw parse_error(path + ": " + e.what());
    }
}

inline void write_json_file(const std::string& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

} // namespace overlapforge
