#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mplab/arith.hpp"
#include "mplab/error.hpp"
#include "mplab/parallel.hpp"
#include "mplab/records.hpp"

namespace mplab {

// ---------------------------------------------------------------------------
// Radical bounds for multiperfect numbers
// ---------------------------------------------------------------------------

enum class Parity { odd, even };

/// Case data for sigma(m) = k*m: k = 2^n * t with t odd, m = 2^alpha * h.
struct BoundClass {
    Parity parity_of_m = Parity::odd;
    std::uint64_t n = 0;
    std::uint64_t alpha = 0;
    mpz_class t = 1;
};

inline BoundClass classify(const mpz_class& m, const mpz_class& k) {
    if (m < 1 || k < 1) throw DomainError("classify: m and k must be positive");
    BoundClass c;
    c.n = valuation(k, 2);
    c.alpha = valuation(m, 2);
    c.parity_of_m = c.alpha >= 1 ? Parity::even : Parity::odd;
    mpz_fdiv_q_2exp(c.t.get_mpz_t(), k.get_mpz_t(), c.n);
    return c;
}

inline BoundClass classify(const MultiperfectRecord& record) { return classify(record.m.value(), record.k); }

/// Exponent beta with rad(m) < m^beta (or <= for odd m with odd k).
///   odd m:  n = 0 -> 1/2, n = 1 -> 9/14, n >= 2 -> (4n+1)/(4n+4)
///   even m: (2n + 2 alpha + 1) / (2n + 2 alpha + 2)
inline ExactRatio bound_exponent(const BoundClass& c) {
    if (c.parity_of_m == Parity::odd) {
        if (c.n == 0) return ExactRatio(1, 2);
        if (c.n == 1) return ExactRatio(9, 14);
        return ExactRatio(mpz_class(std::to_string(4 * c.n + 1)), mpz_class(std::to_string(4 * c.n + 4)));
    }
    const std::uint64_t s = 2 * c.n + 2 * c.alpha;
    return ExactRatio(mpz_class(std::to_string(s + 1)), mpz_class(std::to_string(s + 2)));
}

/// Only the odd-m, odd-k bound is non-strict.
inline bool bound_is_strict(const BoundClass& c) { return !(c.parity_of_m == Parity::odd && c.n == 0); }

enum class BoundVerdict { holds, boundary, violated };

inline const char* to_string(BoundVerdict v) {
    switch (v) {
        case BoundVerdict::holds: return "holds";
        case BoundVerdict::boundary: return "boundary";
        case BoundVerdict::violated: return "violated";
    }
    return "?";
}

struct BoundOptions {
    /// Failures with m below this are reported as boundary cases.
    mpz_class min_m = 0;
};

struct BoundReport {
    MultiperfectRecord record;
    BoundClass bound_class;
    ExactRatio beta;
    mpz_class rad_m;
    bool holds = false;
    bool strict = true;
    BoundVerdict verdict = BoundVerdict::violated;
};

/// Exact check of rad(m)^q < m^p (<= when non-strict) with beta = p/q.
/// A failing squarefree m (rad(m) = m, no beta < 1 can hold) or one below
/// options.min_m is a boundary case rather than a violation.
inline BoundReport check_bound(const MultiperfectRecord& record, const BoundOptions& options = {}) {
    BoundReport r;
    r.record = record;
    r.bound_class = classify(record);
    r.beta = bound_exponent(r.bound_class);
    r.strict = bound_is_strict(r.bound_class);
    r.rad_m = radical(record.m);
    const mpz_class m = record.m.value();

    mpz_class lhs, rhs;
    mpz_pow_ui(lhs.get_mpz_t(), r.rad_m.get_mpz_t(), r.beta.denominator().get_ui());
    mpz_pow_ui(rhs.get_mpz_t(), m.get_mpz_t(), r.beta.numerator().get_ui());
    r.holds = r.strict ? lhs < rhs : lhs <= rhs;
    if (r.holds)
        r.verdict = BoundVerdict::holds;
    else if (r.rad_m == m || m < options.min_m)
        r.verdict = BoundVerdict::boundary;
    else
        r.verdict = BoundVerdict::violated;
    return r;
}

// ---------------------------------------------------------------------------
// 2-adic valuation of sigma(p^e) for odd e
// ---------------------------------------------------------------------------

struct ValuationIdentity {
    std::uint64_t lhs;  // nu_2(sigma(p^e))
    std::int64_t rhs;   // nu_2(e+1) + nu_2(p+1) - 1
    bool holds() const { return static_cast<std::int64_t>(lhs) == rhs; }
};

inline ValuationIdentity sigma_prime_power_valuation(const mpz_class& p, std::uint32_t e) {
    if (p < 3 || !is_prime(p)) throw DomainError("p must be an odd prime");
    if (e % 2 == 0) throw DomainError("e must be odd");
    const Factorization pe = Factorization::from_entries({{p, e}});
    ValuationIdentity v;
    v.lhs = valuation(sigma(pe), 2);
    v.rhs = static_cast<std::int64_t>(valuation(mpz_class(e + 1), 2)) +
            static_cast<std::int64_t>(valuation(mpz_class(p + 1), 2)) - 1;
    return v;
}

struct ValuationCounterexample {
    mpz_class p;
    std::uint32_t e;
    ValuationIdentity values;
};

/// Checks the identity for every odd prime p < p_bound and odd e <= e_max.
inline std::vector<ValuationCounterexample> valuation_identity_scan(std::uint64_t p_bound, std::uint32_t e_max) {
    std::vector<ValuationCounterexample> out;
    for (std::uint64_t p = 3; p < p_bound; p += 2) {
        if (!is_prime_u64(p)) continue;
        for (std::uint32_t e = 1; e <= e_max; e += 2) {
            const mpz_class prime = static_cast<unsigned long>(p);
            auto v = sigma_prime_power_valuation(prime, e);
            if (!v.holds()) out.push_back({prime, e, v});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Product bounds on the abundancy of odd numbers
// ---------------------------------------------------------------------------

/// Abundancy of p1 * p2 * p3^2 * p4^2 [* p5^2] for distinct odd primes, given
/// in that order.
inline ExactRatio mixed_square_abundancy(std::span<const mpz_class> primes) {
    if (primes.size() != 4 && primes.size() != 5) throw DomainError("expected 4 or 5 primes");
    std::vector<PrimePower> entries;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        if (primes[i] < 3 || !is_prime(primes[i])) throw DomainError(primes[i].get_str() + " is not an odd prime");
        for (std::size_t j = 0; j < i; ++j)
            if (primes[j] == primes[i]) throw DomainError("repeated prime " + primes[i].get_str());
        entries.push_back({primes[i], i < 2 ? 1u : 2u});
    }
    return abundancy(Factorization::from_unordered(std::move(entries)));
}

/// (4/3)(6/5)(31/25)(57/49), and with the extra factor 133/121 for five primes.
inline ExactRatio mixed_square_chain_constant(std::size_t prime_count) {
    if (prime_count != 4 && prime_count != 5) throw DomainError("expected 4 or 5 primes");
    mpq_class c = mpq_class(4, 3) * mpq_class(6, 5) * mpq_class(31, 25) * mpq_class(57, 49);
    if (prime_count == 5) c *= mpq_class(133, 121);
    return ExactRatio(c);
}

/// (5/4)^(r-3) * (3/2) * (7/6) * (11/10): the product of p/(p-1) over the
/// first r odd primes, with every prime past 11 replaced by 5/4.
inline ExactRatio odd_abundancy_chain_cap(std::size_t r) {
    if (r < 4) throw DomainError("r must be >= 4");
    mpq_class cap = mpq_class(3, 2) * mpq_class(7, 6) * mpq_class(11, 10);
    for (std::size_t i = 0; i + 3 < r; ++i) cap *= mpq_class(5, 4);
    return ExactRatio(cap);
}

/// (5/4)^r
inline ExactRatio five_quarters_power(std::size_t r) {
    mpq_class v = 1;
    for (std::size_t i = 0; i < r; ++i) v *= mpq_class(5, 4);
    return ExactRatio(v);
}

/// True iff abundancy(f) < odd_abundancy_chain_cap(omega(f)) for odd f with at least 4 primes.
inline bool odd_abundancy_below_cap(const Factorization& f) {
    if (f.size() < 4) throw DomainError("need at least 4 distinct primes, got " + std::to_string(f.size()));
    if (f.entries().front().prime == 2) throw DomainError("value must be odd");
    return abundancy(f) < odd_abundancy_chain_cap(f.size());
}

// ---------------------------------------------------------------------------
// The A*p - B | p^2 + p + 1 impossibility
// ---------------------------------------------------------------------------

/// How B is expanded from k_1..k_e.
///   proof:     B = sum_{i=1..e} k_{i+1}...k_e   (last term the empty product 1),
///              so that B/A = sum_{i=1..e} 1/(k_1...k_i)
///   statement: the same sum without the trailing 1
enum class BExpansion { proof, statement };

inline const char* to_string(BExpansion v) { return v == BExpansion::proof ? "proof" : "statement"; }

struct ChainInstance {
    std::vector<std::uint64_t> ks;  // k_1 .. k_e, each >= 2
    mpz_class p_y;
};

inline mpz_class chain_a(std::span<const std::uint64_t> ks) {
    mpz_class a = 1;
    for (auto k : ks) a *= static_cast<unsigned long>(k);
    return a;
}

inline mpz_class chain_b(std::span<const std::uint64_t> ks, BExpansion variant) {
    mpz_class b = 0, suffix = 1;
    for (std::size_t i = ks.size(); i-- > 0;) {
        b += suffix;  // k_{i+2} ... k_e in 1-based terms
        suffix *= static_cast<unsigned long>(ks[i]);
    }
    if (variant == BExpansion::statement) b -= 1;
    return b;
}

/// True iff (A p_y - B) divides p_y^2 + p_y + 1.
inline bool chain_divides(const ChainInstance& inst, BExpansion variant = BExpansion::proof) {
    if (inst.ks.empty()) throw DomainError("chain_divides: need e >= 1");
    for (auto k : inst.ks)
        if (k < 2) throw DomainError("chain_divides: every k_i must be >= 2");
    const mpz_class a = chain_a(inst.ks);
    const mpz_class b = chain_b(inst.ks, variant);
    const mpz_class divisor = a * inst.p_y - b;
    if (divisor <= 0) throw DomainError("chain_divides: A*p_y - B must be positive");
    const mpz_class target = inst.p_y * inst.p_y + inst.p_y + 1;
    return mpz_divisible_p(target.get_mpz_t(), divisor.get_mpz_t()) != 0;
}

namespace detail {

inline std::vector<std::vector<std::uint64_t>> k_tuples(std::uint64_t e_max, std::uint64_t k_max) {
    std::vector<std::vector<std::uint64_t>> out;
    for (std::uint64_t e = 1; e <= e_max; ++e) {
        std::vector<std::uint64_t> ks(e, 2);
        for (;;) {
            out.push_back(ks);
            std::size_t i = 0;
            while (i < e && ks[i] == k_max) ks[i++] = 2;
            if (i == e) break;
            ++ks[i];
        }
    }
    return out;
}

template <class PRange>
std::vector<ChainInstance> chain_grid(std::uint64_t e_max, std::uint64_t k_max, unsigned workers, BExpansion variant,
                                      PRange p_range) {
    const auto tuples = k_tuples(e_max, k_max);
    auto found = parallel_map(tuples.size(), workers, [&](std::size_t i) {
        std::vector<ChainInstance> hits;
        const auto& ks = tuples[i];
        const auto [p_lo, p_hi] = p_range(ks.size());
        for (std::uint64_t p = p_lo; p <= p_hi; ++p) {
            ChainInstance inst{ks, static_cast<unsigned long>(p)};
            const mpz_class divisor = chain_a(ks) * inst.p_y - chain_b(ks, variant);
            if (divisor <= 0) continue;
            if (chain_divides(inst, variant)) hits.push_back(std::move(inst));
        }
        return hits;
    });
    std::vector<ChainInstance> out;
    for (auto& v : found)
        for (auto& inst : v) out.push_back(std::move(inst));
    return out;
}

}  // namespace detail

/// Every instance with e <= e_max, 2 <= k_i <= k_max and
/// 3*2^e <= p_y <= 3*2^e + p_margin where the divisibility holds.
/// The impossibility claim predicts an empty result.
inline std::vector<ChainInstance> chain_divisibility_scan(std::uint64_t e_max, std::uint64_t k_max, std::uint64_t p_margin,
                                             BExpansion variant = BExpansion::proof, unsigned workers = 0) {
    if (e_max < 1 || e_max > 5) throw DomainError("chain_divisibility_scan: e_max must be in [1, 5]");
    if (k_max < 2 || k_max > 6) throw DomainError("chain_divisibility_scan: k_max must be in [2, 6]");
    return detail::chain_grid(e_max, k_max, workers, variant, [p_margin](std::size_t e) {
        const std::uint64_t start = std::uint64_t{3} << e;
        return std::pair{start, start + p_margin};
    });
}

/// The two points 3*2^e - 2 and 3*2^e - 1 lying between the threshold the
/// argument derives and the one claimed; reported, not asserted.
inline std::vector<ChainInstance> chain_gap_scan(std::uint64_t e_max, std::uint64_t k_max,
                                                 BExpansion variant = BExpansion::proof, unsigned workers = 0) {
    if (e_max < 1 || e_max > 5) throw DomainError("chain_gap_scan: e_max must be in [1, 5]");
    if (k_max < 2 || k_max > 6) throw DomainError("chain_gap_scan: k_max must be in [2, 6]");
    return detail::chain_grid(e_max, k_max, workers, variant, [](std::size_t e) {
        const std::uint64_t start = std::uint64_t{3} << e;
        return std::pair{start - 2, start - 1};
    });
}

}  // namespace mplab
