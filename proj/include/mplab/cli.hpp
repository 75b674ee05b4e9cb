#pragma once

#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mplab/arith.hpp"
#include "mplab/bounds.hpp"
#include "mplab/factorial_abc.hpp"
#include "mplab/records.hpp"
#include "mplab/repdigit.hpp"
#include "mplab/search.hpp"

namespace mplab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string format_double(double x) {
    std::ostringstream s;
    s << std::setprecision(12) << x;
    return s.str();
}

/// Tabular output: TSV with a header row, or one JSON object per line.
class Table {
public:
    Table(std::ostream& out, bool json, std::vector<std::string> columns)
        : out_(out), json_(json), columns_(std::move(columns)) {
        if (!json_) print_row(columns_);
    }

    void row(const std::vector<std::string>& values) {
        if (!json_) {
            print_row(values);
            return;
        }
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < columns_.size(); ++i) obj[columns_[i]] = values.at(i);
        out_ << obj.dump() << '\n';
    }

private:
    void print_row(const std::vector<std::string>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "\t" : "") << values[i];
        out_ << '\n';
    }

    std::ostream& out_;
    bool json_;
    std::vector<std::string> columns_;
};

/// A single value: plain text, or {"key": value} under --json.
inline void scalar(std::ostream& out, bool json, const std::string& key, const std::string& value) {
    if (json) {
        nlohmann::ordered_json obj;
        obj[key] = value;
        out << obj.dump() << '\n';
    } else {
        out << value << '\n';
    }
}

/// Counterexample summary shared by every lemma-check.
inline void summary(std::ostream& out, bool json, std::size_t count) {
    if (json) {
        nlohmann::ordered_json obj;
        obj["counterexamples"] = count;
        out << obj.dump() << '\n';
    } else {
        out << count << " counterexamples\n";
    }
}

inline std::vector<mpz_class> parse_integer_list(const std::string& text, bool allow_negative) {
    std::vector<mpz_class> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        auto t = std::string(detail::trim(item));
        bool negative = false;
        if (allow_negative && !t.empty() && (t[0] == '-' || t[0] == '+')) {
            negative = t[0] == '-';
            t.erase(0, 1);
        }
        mpz_class v = parse_decimal(t);
        out.push_back(negative ? mpz_class(-v) : v);
    }
    if (out.empty()) throw DomainError("empty integer list");
    return out;
}

inline std::pair<std::int64_t, std::int64_t> parse_range(const std::string& text) {
    const auto colon = text.find(':', 1);
    if (colon == std::string::npos) throw UsageError("range must look like lo:hi");
    try {
        std::size_t used_lo = 0, used_hi = 0;
        const std::string lo_text = text.substr(0, colon), hi_text = text.substr(colon + 1);
        const auto lo = std::stoll(lo_text, &used_lo);
        const auto hi = std::stoll(hi_text, &used_hi);
        if (used_lo != lo_text.size() || used_hi != hi_text.size()) throw UsageError("bad range " + text);
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw UsageError("bad range " + text);
    }
}

inline std::uint64_t to_u64(const mpz_class& v, const char* what) {
    if (v < 0 || !mpz_fits_ulong_p(v.get_mpz_t())) throw DomainError(std::string(what) + " out of range");
    return v.get_ui();
}

/// Runs one command line. argv excludes the program name.
inline int run(const std::vector<std::string>& argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"mplab: exact divisor-sum arithmetic and empirical checks of radical bounds for multiperfect numbers"};
    app.name("mplab");
    app.require_subcommand(1);
    app.fallthrough();

    unsigned workers = 0;
    bool json = false;
    std::optional<double> effort_seconds;
    app.add_option("--workers", workers, "Maximum worker threads (default: all cores)");
    app.add_flag("--json", json, "Line-delimited JSON records instead of TSV");
    app.add_option("--effort-seconds", effort_seconds,
                   "Rho factoring budget per number; overrides MPLAB_EFFORT_CAP_SECONDS");

    std::string number;
    auto* cmd_factor = app.add_subcommand("factor", "Canonical prime factorization of n");
    cmd_factor->add_option("n", number, "Positive decimal integer")->required();
    auto* cmd_sigma = app.add_subcommand("sigma", "Sum of divisors sigma(n)");
    cmd_sigma->add_option("n", number, "Positive decimal integer")->required();
    auto* cmd_abundancy = app.add_subcommand("abundancy", "Abundancy sigma(n)/n as a reduced fraction");
    cmd_abundancy->add_option("n", number, "Positive decimal integer")->required();
    auto* cmd_rad = app.add_subcommand("rad", "Radical (squarefree kernel) of n");
    cmd_rad->add_option("n", number, "Positive decimal integer")->required();

    std::string limit_text;
    std::optional<std::uint64_t> k_filter;
    std::uint64_t segment_size = SieveConfig{}.segment_size;
    std::string persist_path;
    auto* cmd_search = app.add_subcommand(
        "search", "Exhaustive sieve for every m <= limit with sigma(m) = k*m, k >= 2 (k = 2: perfect numbers)");
    cmd_search->add_option("--limit", limit_text, "Upper bound on m")->required();
    cmd_search->add_option("--k", k_filter, "Keep only this abundancy");
    cmd_search->add_option("--segment-size", segment_size, "Sieve segment length in entries");
    cmd_search->add_option("--persist", persist_path, "Append hits to this database file");

    std::string db_path;
    std::string min_m_text = "0";
    auto* cmd_verify = app.add_subcommand(
        "verify-bound",
        "Checks rad(m) < m^beta for every database record: beta = (2n+2a+1)/(2n+2a+2) for even m with "
        "2^a || m, 2^n || k; for odd m beta = 1/2 (non-strict, k odd), 9/14 (k = 2 mod 4) or (4n+1)/(4n+4)");
    cmd_verify->add_option("--db", db_path, "Database file in record grammar")->required();
    cmd_verify->add_option("--min-m", min_m_text, "Failures with m below this count as boundary cases");

    auto* cmd_lemma = app.add_subcommand("lemma-check", "Exhaustive or randomized checks of the supporting lemmas");
    cmd_lemma->require_subcommand(1);

    std::uint64_t p_max = 1000, e_max_val = 15;
    auto* lemma_valuation = cmd_lemma->add_subcommand(
        "valuation", "nu_2(sigma(p^e)) = nu_2(e+1) + nu_2(p+1) - 1 for odd primes p < p-max and odd e <= e-max");
    lemma_valuation->add_option("--p-max", p_max, "Exclusive prime bound");
    lemma_valuation->add_option("--e-max", e_max_val, "Largest odd exponent");

    std::size_t prime_count = 4, samples = 1000;
    std::uint64_t seed = 1, sample_p_max = 10'000;
    std::string tuple_text;
    auto* lemma_mixed = cmd_lemma->add_subcommand(
        "mixed-square",
        "Abundancy of p1 p2 p3^2 p4^2 (p5^2) for distinct odd primes lies below (4/3)(6/5)(31/25)(57/49)(133/121) "
        "< 4, so such numbers are never k-perfect with 4 | k");
    lemma_mixed->add_option("--primes", prime_count, "4 or 5");
    lemma_mixed->add_option("--samples", samples, "Random prime tuples to test");
    lemma_mixed->add_option("--seed", seed, "RNG seed");
    lemma_mixed->add_option("--p-max", sample_p_max, "Sample primes below this bound");
    lemma_mixed->add_option("--tuple", tuple_text, "Check one tuple instead, e.g. 3,5,7,11");

    std::size_t r_min = 4, r_max = 8;
    std::uint32_t max_exponent = 9;
    auto* lemma_odd = cmd_lemma->add_subcommand(
        "odd-chain",
        "For odd m with r >= 4 distinct primes: sigma(m)/m < (5/4)^(r-3)(3/2)(7/6)(11/10) < (5/4)^r, "
        "giving nu_2(k) < r/3 for odd k-perfect m");
    lemma_odd->add_option("--samples", samples, "Random odd factorizations to test");
    lemma_odd->add_option("--seed", seed, "RNG seed");
    lemma_odd->add_option("--r-min", r_min, "Fewest distinct primes");
    lemma_odd->add_option("--r-max", r_max, "Most distinct primes");
    lemma_odd->add_option("--max-exponent", max_exponent, "Largest exponent per prime");
    lemma_odd->add_option("--p-max", sample_p_max, "Sample primes below this bound");

    std::uint64_t chain_e_max = 3, chain_k_max = 4, margin = 200;
    std::string variant_text = "both";
    bool show_gap = false;
    auto* lemma_loopy = cmd_lemma->add_subcommand(
        "loopy",
        "With A = k_e...k_1, B from the k_i, k_i >= 2: A p - B never divides p^2 + p + 1 once p >= 3*2^e");
    lemma_loopy->add_option("--e-max", chain_e_max, "Longest chain length e (<= 5)");
    lemma_loopy->add_option("--k-max", chain_k_max, "Largest k_i (<= 6)");
    lemma_loopy->add_option("--margin", margin, "Scan p from 3*2^e to 3*2^e + margin");
    lemma_loopy->add_option("--variant", variant_text, "B expansion: proof, statement or both")
        ->check(CLI::IsMember({"proof", "statement", "both"}));
    lemma_loopy->add_flag("--gap", show_gap, "Also report p = 3*2^e - 2 and 3*2^e - 1 (to stderr)");

    std::size_t euler_primes = 6;
    std::uint32_t exponent_cap = 12;
    auto* lemma_euler = cmd_lemma->add_subcommand(
        "euler-log",
        "sum over P-smooth d of log(d)/d equals (sum log p/(p-1)) * prod (1-1/p)^-1, truncated with certified tail");
    lemma_euler->add_option("--primes", euler_primes, "Size of the prime set (first primes, <= 8)");
    lemma_euler->add_option("--exponent-cap", exponent_cap, "Largest exponent enumerated");

    std::uint64_t base = 10, d_max = 100, s_max = 3, m_max = 40;
    bool instrument = false, chain = false, pow2_only = false;
    auto* cmd_repdigit = app.add_subcommand(
        "repdigit",
        "Multiperfect multirepdigits D*U_{2^s}, U_n = (g^n-1)/(g-1); finitely many when the abundancy is a power of 2");
    cmd_repdigit->add_option("--base", base, "Base g >= 2");
    cmd_repdigit->add_option("--d-max", d_max, "Largest multiplier D");
    cmd_repdigit->add_option("--s-max", s_max, "Largest s (length 2^s)");
    cmd_repdigit->add_flag("--pow2-only", pow2_only, "Keep only hits whose abundancy is a power of 2");
    cmd_repdigit->add_flag("--chain", chain, "Print sigma(U_{2^s})/U_{2^s} for s = 0..s-max instead");
    cmd_repdigit->add_flag("--instrument", instrument,
                           "Print log(sigma(U_m)/U_m) against (log(e*omega(m)))^2 for m = 2..m-max instead");
    cmd_repdigit->add_option("--m-max", m_max, "Largest m for --instrument");

    std::optional<std::uint64_t> fact_scan, fact_mono, fact_rad, fact_plus, fact_abundancy;
    auto* cmd_factorial = app.add_subcommand(
        "factorial",
        "n! and n!+1: only 3! is perfect; sigma(n!)/n! strictly increases, so at most one n! per abundancy; "
        "log rad(n!)/log n! tends to 0; status of n!+1");
    auto* scan_opt = cmd_factorial->add_option("--scan", fact_scan, "List n <= N with n! perfect");
    auto* mono_opt = cmd_factorial->add_option("--monotonicity", fact_mono, "Is sigma(n!)/n! increasing on 2..N");
    auto* rad_opt = cmd_factorial->add_option("--rad-ratio", fact_rad, "log rad(n!)/log n! for n = 2..N");
    auto* plus_opt = cmd_factorial->add_option("--plus-one", fact_plus, "Classify n!+1 for n = 1..N (N <= 25)");
    auto* ab_opt = cmd_factorial->add_option("--abundancy", fact_abundancy, "sigma(n!)/n! for one n");
    for (auto* o : {scan_opt, mono_opt, rad_opt, plus_opt, ab_opt})
        for (auto* other : {scan_opt, mono_opt, rad_opt, plus_opt, ab_opt})
            if (o != other) o->excludes(other);

    std::string a_text, b_text, x_text, y_text, poly_text, form_text, range_text;
    std::int64_t form_max = 50;
    auto* cmd_abc = app.add_subcommand(
        "abc-quality",
        "ABC quality log c / log rad(abc) for coprime a + b = c; radicals of polynomial and binary-form values "
        "against the degree");
    auto* a_opt = cmd_abc->add_option("--a", a_text, "a");
    auto* b_opt = cmd_abc->add_option("--b", b_text, "b");
    auto* x_opt = cmd_abc->add_option("--x", x_text, "Gap triple (y, x-y, x): larger number");
    auto* y_opt = cmd_abc->add_option("--y", y_text, "Gap triple: smaller number");
    auto* poly_opt = cmd_abc->add_option("--poly", poly_text, "Coefficients c_d,...,c_0");
    auto* form_opt = cmd_abc->add_option("--form", form_text, "Binary form coefficients c_d,...,c_0 of x^d..y^d");
    cmd_abc->add_option("--range", range_text, "x range lo:hi for --poly");
    cmd_abc->add_option("--max", form_max, "Largest coordinate for --form");
    a_opt->needs(b_opt);
    b_opt->needs(a_opt);
    x_opt->needs(y_opt);
    y_opt->needs(x_opt);
    poly_opt->excludes(a_opt)->excludes(x_opt)->excludes(form_opt);
    form_opt->excludes(a_opt)->excludes(x_opt);
    a_opt->excludes(x_opt);

    auto* cmd_ingest = app.add_subcommand("ingest", "Validate a database file (every record must satisfy sigma(m) = k*m)");
    cmd_ingest->add_option("--db", db_path, "Database file")->required();

    std::vector<std::string> args{"mplab"};
    args.insert(args.end(), argv.begin(), argv.end());
    std::vector<const char*> cargs;
    for (const auto& a : args) cargs.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    FactorEffort effort = FactorEffort::from_environment();
    if (effort_seconds) effort.max_seconds = *effort_seconds;

    try {
        if (cmd_factor->parsed()) {
            auto r = factorize_with_effort(parse_decimal(number), effort);
            if (!r.complete()) {
                std::string rest;
                for (const auto& c : r.cofactors) rest += " " + c.get_str();
                err << "incomplete factorization; composite cofactor(s):" << rest << '\n';
                scalar(out, json, "factorization", to_string(r.factors));
                return kExitDomain;
            }
            scalar(out, json, "factorization", to_string(r.factors));
        } else if (cmd_sigma->parsed()) {
            scalar(out, json, "sigma", sigma(factorize(parse_decimal(number), effort)).get_str());
        } else if (cmd_abundancy->parsed()) {
            scalar(out, json, "abundancy", abundancy(factorize(parse_decimal(number), effort)).to_string());
        } else if (cmd_rad->parsed()) {
            scalar(out, json, "rad", radical(factorize(parse_decimal(number), effort)).get_str());
        } else if (cmd_search->parsed()) {
            SearchOptions opts;
            opts.workers = workers;
            opts.sieve.segment_size = segment_size;
            const auto hits = search_multiperfect(to_u64(parse_decimal(limit_text), "limit"), k_filter, opts);
            Table t(out, json, {"k", "m"});
            for (const auto& h : hits) t.row({std::to_string(h.k), std::to_string(h.m)});
            if (!persist_path.empty()) {
                const auto report = persist_hits(hits, persist_path);
                for (const auto& n : report.notices) err << n << '\n';
                err << report.appended << " record(s) appended to " << persist_path << '\n';
            }
        } else if (cmd_verify->parsed()) {
            const auto db = load_database(db_path);
            for (const auto& w : db.warnings) err << "warning: " << w << '\n';
            BoundOptions opts{parse_decimal(min_m_text)};
            Table t(out, json, {"k", "m", "beta", "rad", "verdict"});
            bool violated = false;
            for (const auto& rec : db.records) {
                const auto r = check_bound(rec, opts);
                t.row({rec.k.get_str(), rec.m.value().get_str(), r.beta.to_string(), r.rad_m.get_str(),
                       to_string(r.verdict)});
                violated |= r.verdict == BoundVerdict::violated;
            }
            return violated ? kExitDomain : kExitOk;
        } else if (lemma_valuation->parsed()) {
            if (e_max_val > 64) throw DomainError("e-max must be <= 64");
            const auto bad = valuation_identity_scan(p_max, static_cast<std::uint32_t>(e_max_val));
            if (!bad.empty()) {
                Table t(out, json, {"p", "e", "lhs", "rhs"});
                for (const auto& c : bad)
                    t.row({c.p.get_str(), std::to_string(c.e), std::to_string(c.values.lhs),
                           std::to_string(c.values.rhs)});
            }
            summary(out, json, bad.size());
        } else if (lemma_mixed->parsed()) {
            std::vector<std::vector<mpz_class>> tuples;
            if (!tuple_text.empty()) {
                tuples.push_back(parse_integer_list(tuple_text, false));
            } else {
                if (prime_count != 4 && prime_count != 5) throw DomainError("--primes must be 4 or 5");
                std::vector<std::uint32_t> pool;
                for (auto p : small_primes()) {
                    if (p >= sample_p_max) break;
                    if (p > 2) pool.push_back(p);
                }
                if (pool.size() < prime_count) throw DomainError("--p-max too small");
                std::mt19937_64 rng(seed);
                for (std::size_t i = 0; i < samples; ++i) {
                    std::vector<std::uint32_t> pick;
                    std::sample(pool.begin(), pool.end(), std::back_inserter(pick), prime_count, rng);
                    std::shuffle(pick.begin(), pick.end(), rng);
                    std::vector<mpz_class> t;
                    for (auto p : pick) t.emplace_back(static_cast<unsigned long>(p));
                    tuples.push_back(std::move(t));
                }
            }
            std::size_t bad = 0;
            std::optional<Table> table;
            for (const auto& t : tuples) {
                const auto ratio = mixed_square_abundancy(t);
                const auto constant = mixed_square_chain_constant(t.size());
                if (ratio < constant && constant < ExactRatio(4, 1)) continue;
                if (!table) table.emplace(out, json, std::vector<std::string>{"primes", "abundancy"});
                std::string primes;
                for (const auto& p : t) primes += (primes.empty() ? "" : ",") + p.get_str();
                table->row({primes, ratio.to_string()});
                ++bad;
            }
            summary(out, json, bad);
        } else if (lemma_odd->parsed()) {
            if (r_min < 4 || r_max < r_min) throw DomainError("need 4 <= r-min <= r-max");
            if (max_exponent < 1) throw DomainError("max-exponent must be >= 1");
            std::vector<std::uint32_t> pool;
            for (auto p : small_primes()) {
                if (p >= sample_p_max) break;
                if (p > 2) pool.push_back(p);
            }
            if (pool.size() < r_max) throw DomainError("--p-max too small");
            std::mt19937_64 rng(seed);
            std::size_t bad = 0;
            std::optional<Table> table;
            for (std::size_t i = 0; i < samples; ++i) {
                const std::size_t r = std::uniform_int_distribution<std::size_t>(r_min, r_max)(rng);
                std::vector<std::uint32_t> pick;
                std::sample(pool.begin(), pool.end(), std::back_inserter(pick), r, rng);
                std::vector<PrimePower> entries;
                for (auto p : pick)
                    entries.push_back({static_cast<unsigned long>(p),
                                       std::uniform_int_distribution<std::uint32_t>(1, max_exponent)(rng)});
                const auto f = Factorization::from_unordered(std::move(entries));
                if (odd_abundancy_below_cap(f) && odd_abundancy_chain_cap(r) < five_quarters_power(r)) continue;
                if (!table) table.emplace(out, json, std::vector<std::string>{"m", "abundancy"});
                table->row({to_string(f), abundancy(f).to_string()});
                ++bad;
            }
            summary(out, json, bad);
        } else if (lemma_loopy->parsed()) {
            std::vector<BExpansion> variants;
            if (variant_text != "statement") variants.push_back(BExpansion::proof);
            if (variant_text != "proof") variants.push_back(BExpansion::statement);
            std::size_t bad = 0;
            std::optional<Table> table;
            for (auto v : variants) {
                for (const auto& inst : chain_divisibility_scan(chain_e_max, chain_k_max, margin, v, workers)) {
                    if (!table) table.emplace(out, json, std::vector<std::string>{"variant", "ks", "p_y"});
                    std::string ks;
                    for (auto k : inst.ks) ks += (ks.empty() ? "" : ",") + std::to_string(k);
                    table->row({to_string(v), ks, inst.p_y.get_str()});
                    ++bad;
                }
                if (show_gap) {
                    for (const auto& inst : chain_gap_scan(chain_e_max, chain_k_max, v, workers)) {
                        std::string ks;
                        for (auto k : inst.ks) ks += (ks.empty() ? "" : ",") + std::to_string(k);
                        err << "gap\t" << to_string(v) << '\t' << ks << '\t' << inst.p_y.get_str() << '\n';
                    }
                }
            }
            summary(out, json, bad);
        } else if (lemma_euler->parsed()) {
            const auto c = euler_log_identity(euler_primes, exponent_cap);
            const double slack = 1e-9 * c.rhs;
            const bool ok = c.truncated_lhs <= c.rhs + slack && c.rhs - c.truncated_lhs <= c.tail_bound + slack;
            Table t(out, json, {"truncated_lhs", "rhs", "tail_bound"});
            t.row({format_double(c.truncated_lhs), format_double(c.rhs), format_double(c.tail_bound)});
            summary(out, json, ok ? 0 : 1);
        } else if (cmd_repdigit->parsed()) {
            if (instrument) {
                Table t(out, json, {"m", "log_ratio", "bound_term", "quotient"});
                for (std::uint64_t m = 2; m <= m_max; ++m) {
                    try {
                        const auto row = repunit_abundancy_instrument(base, m, effort);
                        t.row({std::to_string(m), format_double(row.log_ratio), format_double(row.bound_term),
                               format_double(row.quotient)});
                    } catch (const IncompleteFactorization&) {
                        t.row({std::to_string(m), "undetermined", "undetermined", "undetermined"});
                    }
                }
            } else if (chain) {
                const auto c = sigma_ratio_chain(base, s_max, effort);
                Table t(out, json, {"s", "U", "ratio"});
                for (std::size_t s = 0; s < c.ratios.size(); ++s)
                    t.row({std::to_string(s), lucas_u(base, std::uint64_t{1} << s).get_str(), c.ratios[s].to_string()});
                if (c.truncated) err << "chain truncated at s = " << c.ratios.size() << " (factoring budget)\n";
            } else {
                const auto hits = scan_multirepdigit_multiperfect(base, d_max, s_max, effort, workers);
                Table t(out, json, {"D", "s", "k", "status"});
                for (const auto& h : hits) {
                    if (h.status == CandidateStatus::undetermined) {
                        t.row({h.digit.get_str(), std::to_string(h.s), "", "undetermined"});
                        continue;
                    }
                    if (pow2_only && mpz_popcount(h.k.get_mpz_t()) != 1) continue;
                    t.row({h.digit.get_str(), std::to_string(h.s), h.k.get_str(), "multiperfect"});
                }
            }
        } else if (cmd_factorial->parsed()) {
            if (fact_scan) {
                Table t(out, json, {"n"});
                for (auto n : perfect_factorial_scan(*fact_scan)) t.row({std::to_string(n)});
            } else if (fact_mono) {
                scalar(out, json, "increasing", factorial_abundancy_increasing(*fact_mono) ? "true" : "false");
            } else if (fact_rad) {
                Table t(out, json, {"n", "ratio"});
                for (std::uint64_t n = 2; n <= *fact_rad; ++n)
                    t.row({std::to_string(n), format_double(factorial_radical_ratio(n))});
            } else if (fact_plus) {
                Table t(out, json, {"n", "value", "status", "k"});
                for (const auto& row : factorial_plus_one_scan(*fact_plus, effort, workers))
                    t.row({std::to_string(row.n), row.value.get_str(), to_string(row.status),
                           row.status == ShiftedStatus::multiperfect ? row.k.get_str() : ""});
            } else if (fact_abundancy) {
                scalar(out, json, "abundancy", factorial_abundancy(*fact_abundancy).to_string());
            } else {
                throw UsageError("factorial needs one of --scan, --monotonicity, --rad-ratio, --plus-one, --abundancy");
            }
        } else if (cmd_abc->parsed()) {
            auto triple_row = [&](const AbcTriple& t) {
                Table table(out, json, {"a", "b", "c", "rad", "quality"});
                table.row({t.a.get_str(), t.b.get_str(), t.c.get_str(), t.rad_abc.get_str(), format_double(t.quality)});
            };
            if (!a_text.empty()) {
                triple_row(abc_quality(parse_decimal(a_text), parse_decimal(b_text), effort));
            } else if (!x_text.empty()) {
                triple_row(gap_triple_quality(parse_decimal(x_text), parse_decimal(y_text), effort));
            } else if (!poly_text.empty()) {
                if (range_text.empty()) throw UsageError("--poly needs --range lo:hi");
                const auto [lo, hi] = parse_range(range_text);
                PolyScanOptions opts;
                opts.workers = workers;
                opts.effort = effort;
                const auto rows = poly_radical_scan(IntPolynomial(parse_integer_list(poly_text, true)), lo, hi, opts);
                Table t(out, json, {"x", "f", "rad", "exponent"});
                for (const auto& r : rows)
                    t.row({r.x.get_str(), r.value.get_str(),
                           r.skipped ? "skipped" : (r.rad ? r.rad->get_str() : "undetermined"),
                           r.exponent ? format_double(*r.exponent) : ""});
            } else if (!form_text.empty()) {
                const auto rows = form_radical_scan(parse_integer_list(form_text, true), form_max, effort);
                Table t(out, json, {"m", "n", "f", "rad", "exponent"});
                for (const auto& r : rows)
                    t.row({std::to_string(r.m), std::to_string(r.n), r.value.get_str(),
                           r.skipped ? "skipped" : (r.rad ? r.rad->get_str() : "undetermined"),
                           r.exponent ? format_double(*r.exponent) : ""});
            } else {
                throw UsageError("abc-quality needs --a/--b, --x/--y, --poly or --form");
            }
        } else if (cmd_ingest->parsed()) {
            const auto db = load_database(db_path);
            for (const auto& w : db.warnings) err << "warning: " << w << '\n';
            Table t(out, json, {"line", "k", "m", "factorization", "src"});
            for (const auto& rec : db.records)
                t.row({std::to_string(rec.line), rec.k.get_str(), rec.m.value().get_str(), to_string(rec.m),
                       rec.source});
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n' << app.help();
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    }
    return kExitOk;
}

}  // namespace mplab::cli
