// overlapforge command-line front-end: drive constructions, emit and replay
// certificates, run the brute-force oracle, and export plot data.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <overlapforge/overlapforge.hpp>

namespace ofg = overlapforge;

namespace {

enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_invariant = 2,
    exit_needs_more = 3,
    exit_resource = 4,
    exit_parse = 5,
    exit_integrity = 6,
};

ofg::ConstructionLimits limits_from_env() {
    ofg::ConstructionLimits lim;
    if (const char* env = std::getenv("OVERLAPFORGE_BIT_BUDGET")) {
        try {
            lim.bit_budget = std::stoull(env);
        } catch (...) {
            throw ofg::parse_error("OVERLAPFORGE_BIT_BUDGET is not a number");
        }
    }
    return lim;
}

std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& s) {
    auto dots = s.find("..");
    try {
        if (dots == std::string::npos) {
            std::uint64_t v = std::stoull(s);
            return {v, v};
        }
        return {std::stoull(s.substr(0, dots)), std::stoull(s.substr(dots + 2))};
    } catch (...) {
        throw ofg::parse_error("bad range (want a..b): " + s);
    }
}

ofg::EpsilonSpec eps_from_flags(const std::string& kind, const std::string& values,
                                const std::string& tail) {
    if (kind == "pow8") return ofg::EpsilonSpec::pow8();
    if (kind == "superexp") return ofg::EpsilonSpec::superexp();
    if (kind != "table") throw ofg::parse_error("unknown eps kind: " + kind);
    std::vector<ofg::BigRational> vals;
    std::size_t pos = 0;
    while (pos < values.size()) {
        std::size_t comma = values.find(',', pos);
        if (comma == std::string::npos) comma = values.size();
        vals.push_back(ofg::BigRational::from_string(values.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    if (vals.empty()) throw ofg::parse_error("--eps table needs --eps-values");
    std::optional<ofg::EpsKind> tl;
    if (!tail.empty() && tail != "none") tl = ofg::eps_kind_from_string(tail);
    return ofg::EpsilonSpec::table(std::move(vals), tl);
}

ofg::ConstructionState load_state(const std::string& path) {
    ofg::ConstructionState st = ofg::state_from_json(ofg::parse_json_file(path));
    ofg::integrity_replay(st);
    return st;
}

void emit(const ofg::json& j, const std::string& out_path) {
    if (out_path.empty())
        std::cout << j.dump(2) << "\n";
    else
        ofg::write_json_file(out_path, j);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact-arithmetic IFS constructions with certified cylinder "
                 "distances and no exact overlaps"};
    app.require_subcommand(1);

    // construct
    std::string c_eps = "pow8", c_eps_values, c_eps_tail, c_family = "half6", c_mode = "exact",
                c_out;
    unsigned c_rounds = 4, c_N = 2;
    auto* construct = app.add_subcommand("construct", "run the digit-selection algorithm");
    construct->add_option("--eps", c_eps, "epsilon kind: pow8 | superexp | table");
    construct->add_option("--eps-values", c_eps_values, "table entries, comma-separated rationals");
    construct->add_option("--eps-tail", c_eps_tail, "table tail rule: pow8 | superexp | none");
    construct->add_option("--rounds", c_rounds, "continued-fraction digits to build (>= 1)");
    construct->add_option("--N", c_N, "initial-step depth target N");
    construct->add_option("--family", c_family, "half6 | eighth6 | half8");
    construct->add_option("--mode", c_mode, "exact | shadow");
    construct->add_option("--out", c_out, "state JSON output path");

    // certify
    std::string y_state, y_range, y_csv, y_certs, y_replay;
    unsigned y_threads = 0;
    auto* certify = app.add_subcommand("certify", "emit or replay Delta_n <= eps_n certificates");
    certify->add_option("--state", y_state, "state JSON input");
    certify->add_option("--n", y_range, "depth or inclusive range a..b");
    certify->add_option("--csv", y_csv, "write the certificate table as CSV");
    certify->add_option("--certs", y_certs, "write full certificates as JSON");
    certify->add_option("--replay", y_replay, "re-verify a certificate file and exit");
    certify->add_option("--threads", y_threads, "worker threads (0 = hardware)");

    // delta
    std::string d_state, d_s, d_t, d_out, d_family = "half6";
    unsigned d_n = 1, d_threads = 0, d_max_depth = 10;
    auto* delta = app.add_subcommand("delta", "brute-force certified minimum cylinder distance");
    delta->add_option("--state", d_state, "state JSON input (cylinder enclosures)");
    delta->add_option("--s", d_s, "degenerate rational s (overrides state)");
    delta->add_option("--t", d_t, "degenerate rational t (overrides state)");
    delta->add_option("--n", d_n, "depth")->required();
    delta->add_option("--family", d_family, "family when no state is given");
    delta->add_option("--out", d_out, "report JSON output path");
    delta->add_option("--threads", d_threads, "worker threads");
    delta->add_option("--max-depth", d_max_depth, "enumeration depth cap");

    // overlap
    std::string o_state, o_scan_out, o_cert_out, o_bound;
    unsigned o_depth = 0, o_max_depth = 6;
    auto* overlap = app.add_subcommand("overlap", "exclusion search and no-overlap certificate");
    overlap->add_option("--state", o_state, "state JSON input")->required();
    overlap->add_option("--depth", o_depth, "exclusion search depth");
    overlap->add_option("--relation-bound", o_bound, "coefficient bound B for the certificate");
    overlap->add_option("--scan-out", o_scan_out, "exclusion scan JSON output");
    overlap->add_option("--cert-out", o_cert_out, "certificate JSON output");
    overlap->add_option("--max-depth", o_max_depth, "exclusion search depth cap");

    // dimension
    std::string m_family = "half6";
    auto* dimension = app.add_subcommand("dimension", "similarity dimension of a family");
    dimension->add_option("--family", m_family, "half6 | eighth6 | half8");

    // export
    std::string e_state, e_out, e_growth;
    auto* exportc = app.add_subcommand("export", "re-emit a verified state / growth data");
    exportc->add_option("--state", e_state, "state JSON input")->required();
    exportc->add_option("--out", e_out, "canonical state JSON output");
    exportc->add_option("--growth-csv", e_growth, "scale-marker growth CSV output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*construct) {
            ofg::EpsilonSpec eps = eps_from_flags(c_eps, c_eps_values, c_eps_tail);
            ofg::ConstructionMode mode =
                c_mode == "shadow" ? ofg::ConstructionMode::shadow : ofg::ConstructionMode::exact;
            if (c_mode != "shadow" && c_mode != "exact")
                throw ofg::parse_error("bad --mode: " + c_mode);
            ofg::ConstructionState st =
                ofg::run(eps, c_rounds, mode, ofg::family_from_string(c_family), c_N,
                         limits_from_env());
            ofg::json j = ofg::state_to_json(st);
            emit(j, c_out);
            std::cerr << "constructed " << st.rounds << " rounds, certified range [1, "
                      << ofg::certified_upper_bound(st).to_string() << "]\n";
        } else if (*certify) {
            if (!y_replay.empty()) {
                ofg::json j = ofg::parse_json_file(y_replay);
                std::string fmt = j.contains("format") ? j["format"].get<std::string>() : "";
                if (fmt == ofg::kDeltaCertFormat) {
                    std::size_t n = ofg::replay_delta_certs(j);
                    std::cout << "replayed " << n << " delta certificates: all inequalities hold\n";
                } else if (fmt == ofg::kOverlapCertFormat) {
                    ofg::replay_overlap_cert(j);
                    std::cout << "replayed no-overlap certificate: all inequalities hold\n";
                } else {
                    throw ofg::parse_error("unrecognized certificate format: " + fmt);
                }
            } else {
                if (y_state.empty() || y_range.empty())
                    throw ofg::parse_error("certify needs --state and --n (or --replay)");
                ofg::ConstructionState st = load_state(y_state);
                auto [a, b] = parse_range(y_range);
                auto certs = ofg::certify_range(st, a, b, y_threads);
                if (!y_csv.empty()) ofg::write_text_file(y_csv, ofg::delta_certs_to_csv(certs));
                if (!y_certs.empty())
                    ofg::write_json_file(y_certs, ofg::delta_certs_to_json(st, certs));
                std::cout << "certified Delta_n <= eps_n for n in [" << a << ", " << b << "] ("
                          << certs.size() << " certificates)\n";
            }
        } else if (*delta) {
            ofg::EnumLimits lim;
            lim.threads = d_threads;
            lim.max_depth = d_max_depth;
            ofg::IfsFamily family;
            ofg::RationalInterval s_enc, t_enc;
            if (!d_state.empty()) {
                ofg::ConstructionState st = load_state(d_state);
                if (st.mode != ofg::ConstructionMode::exact)
                    throw std::domain_error("delta needs an exact-mode state");
                family = st.family;
                s_enc = ofg::cylinder_interval(st.s_digits);
                t_enc = ofg::cylinder_interval(st.t_digits);
            } else {
                family = ofg::family_from_string(d_family);
            }
            if (!d_s.empty()) s_enc = ofg::RationalInterval(ofg::BigRational::from_string(d_s));
            if (!d_t.empty()) t_enc = ofg::RationalInterval(ofg::BigRational::from_string(d_t));
            ofg::DeltaReport rep = ofg::delta_brute(family, d_n, s_enc, t_enc, lim);
            emit(ofg::delta_report_to_json(family, rep), d_out);
        } else if (*overlap) {
            ofg::ConstructionState st = load_state(o_state);
            if (st.mode != ofg::ConstructionMode::exact && o_depth > 0)
                throw std::domain_error("overlap --depth needs an exact-mode state");
            bool did = false;
            if (o_depth > 0) {
                ofg::EnumLimits lim;
                lim.max_overlap_depth = o_max_depth;
                ofg::OverlapScan scan = ofg::overlap_exclusion_search(
                    st.family, o_depth, ofg::cylinder_interval(st.s_digits),
                    ofg::cylinder_interval(st.t_digits), lim);
                emit(ofg::overlap_scan_to_json(st.family, scan), o_scan_out);
                did = true;
                if (!scan.certified) {
                    std::cerr << "inconclusive: " << scan.witnesses.size()
                              << " difference triples meet zero; refine enclosures and retry\n";
                    return exit_needs_more;
                }
            }
            if (!o_bound.empty()) {
                ofg::NoOverlapCertificate cert =
                    ofg::no_overlap_certificate(st, ofg::BigInt::from_string(o_bound));
                emit(ofg::overlap_cert_to_json(st, cert), o_cert_out);
                did = true;
            }
            if (!did) throw ofg::parse_error("overlap needs --depth and/or --relation-bound");
        } else if (*dimension) {
            ofg::SimilarityDimension d =
                ofg::similarity_dimension(ofg::family_from_string(m_family));
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.15f", d.value);
            std::cout << m_family << " similarity dimension = " << buf << " ("
                      << (d.versus_one > 0 ? "> 1" : d.versus_one < 0 ? "< 1" : "= 1") << ")\n"
                      << "certified bracket: [" << d.lo.to_string() << ", " << d.hi.to_string()
                      << "]\n";
        } else if (*exportc) {
            ofg::ConstructionState st = load_state(e_state);
            if (!e_out.empty()) ofg::write_json_file(e_out, ofg::state_to_json(st));
            if (!e_growth.empty()) ofg::write_text_file(e_growth, ofg::growth_csv(st));
            if (e_out.empty() && e_growth.empty()) emit(ofg::state_to_json(st), "");
        }
        return exit_ok;
    } catch (const ofg::integrity_error& e) {
        std::cerr << "integrity error: " << e.what() << "\n";
        return exit_integrity;
    } catch (const ofg::parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return exit_parse;
    } catch (const ofg::needs_more_rounds_error& e) {
        std::cerr << "needs more rounds: " << e.what() << "\n";
        return exit_needs_more;
    } catch (const ofg::needs_more_digits_error& e) {
        std::cerr << "needs more digits: " << e.what() << "\n";
        return exit_needs_more;
    } catch (const ofg::resource_limit_error& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return exit_resource;
    } catch (const ofg::incomplete_spec_error& e) {
        std::cerr << "incomplete epsilon spec: " << e.what() << "\n";
        return exit_parse;
    } catch (const ofg::invariant_error& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return exit_invariant;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_invariant;
    }
}
