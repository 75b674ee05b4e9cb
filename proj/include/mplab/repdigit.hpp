#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "mplab/arith.hpp"
#include "mplab/error.hpp"
#include "mplab/parallel.hpp"

namespace mplab {

/// U_n = (g^n - 1) / (g - 1), the base-g repunit of length n.
inline mpz_class lucas_u(std::uint64_t g, std::uint64_t n) {
    if (g < 2) throw DomainError("lucas_u: base must be >= 2");
    if (n < 1) throw DomainError("lucas_u: length must be >= 1");
    mpz_class v;
    mpz_ui_pow_ui(v.get_mpz_t(), g, n);
    v -= 1;
    mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), g - 1);
    return v;
}

struct RepunitSpec {
    std::uint64_t g;
    std::uint64_t n;
    mpz_class value;
};

struct MultirepdigitSpec {
    RepunitSpec base;
    mpz_class digit;  // D
    mpz_class value;  // D * U_n

    bool is_classic_repdigit() const { return digit <= base.g - 1; }
};

inline MultirepdigitSpec make_multirepdigit(std::uint64_t g, std::uint64_t n, const mpz_class& digit) {
    if (digit < 1) throw DomainError("multirepdigit: D must be positive");
    RepunitSpec base{g, n, lucas_u(g, n)};
    mpz_class value = digit * base.value;
    return {std::move(base), digit, std::move(value)};
}

namespace detail {

inline int mobius(std::uint64_t n) {
    int mu = 1;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        mu = -mu;
    }
    return n > 1 ? -mu : mu;
}

}  // namespace detail

/// Phi_d(g): g^n - 1 = prod over d | n of Phi_d(g).
inline mpz_class cyclotomic_value(std::uint64_t d, std::uint64_t g) {
    mpz_class num = 1, den = 1, term;
    for (std::uint64_t e = 1; e <= d; ++e) {
        if (d % e) continue;
        const int mu = detail::mobius(d / e);
        if (mu == 0) continue;
        mpz_ui_pow_ui(term.get_mpz_t(), g, e);
        term -= 1;
        (mu > 0 ? num : den) *= term;
    }
    mpz_divexact(num.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return num;
}

/// Factors U_n one cyclotomic piece Phi_d(g), d | n, d > 1, at a time. For
/// n = 2^s this is the split U_{2^(j+1)} = U_{2^j} * (g^(2^j) + 1).
inline FactorResult factor_repunit(std::uint64_t g, std::uint64_t n, const FactorEffort& effort) {
    if (g < 2 || n < 1) throw DomainError("factor_repunit: need g >= 2 and n >= 1");
    FactorResult total;
    for (std::uint64_t d = 2; d <= n; ++d) {
        if (n % d) continue;
        auto piece = factorize_with_effort(cyclotomic_value(d, g), effort);
        total.factors = total.factors * piece.factors;
        for (auto& c : piece.cofactors) total.cofactors.push_back(std::move(c));
    }
    return total;
}

struct RatioChain {
    std::vector<ExactRatio> ratios;  // index s holds sigma(U_{2^s}) / U_{2^s}
    bool truncated = false;          // factoring budget ran out at s = ratios.size()
};

/// sigma(U_{2^s}) / U_{2^s} for s = 0..s_max. Each step multiplies in the
/// factorization of g^(2^(s-1)) + 1.
inline RatioChain sigma_ratio_chain(std::uint64_t g, std::uint64_t s_max, const FactorEffort& effort = {}) {
    if (g < 2) throw DomainError("sigma_ratio_chain: base must be >= 2");
    if (s_max > 20) throw DomainError("sigma_ratio_chain: s_max beyond desk scale");
    RatioChain chain;
    Factorization u;  // U_1 = 1
    chain.ratios.push_back(abundancy(u));
    for (std::uint64_t s = 1; s <= s_max; ++s) {
        auto piece = factorize_with_effort(cyclotomic_value(std::uint64_t{1} << s, g), effort);
        if (!piece.complete()) {
            chain.truncated = true;
            break;
        }
        u = u * piece.factors;
        chain.ratios.push_back(abundancy(u));
    }
    return chain;
}

/// Smallest n >= 1 with p | U_n, for p prime not dividing g. Returns nullopt
/// when p | g - 1, the case excluded from the z(p) | p - 1 divisibility.
inline std::optional<std::uint64_t> rank_of_apparition(std::uint64_t p, std::uint64_t g) {
    if (p < 3 || !is_prime_u64(p)) throw DomainError("rank_of_apparition: p must be an odd prime");
    if (g < 2) throw DomainError("rank_of_apparition: base must be >= 2");
    if (g % p == 0) throw DomainError("rank_of_apparition: p divides g");
    if ((g - 1) % p == 0) return std::nullopt;
    // U_1 = 1, U_{n+1} = g U_n + 1 (mod p)
    const std::uint64_t gm = g % p;
    std::uint64_t u = 1 % p;
    for (std::uint64_t n = 1;; ++n) {
        if (u == 0) return n;
        u = (detail::mulmod64(u, gm, p) + 1) % p;
    }
}

struct RepunitAbundancyRow {
    std::uint64_t g = 0;
    std::uint64_t m = 0;
    double log_ratio = 0;   // log(sigma(U_m)/U_m)
    double bound_term = 0;  // (log(e * omega(m)))^2
    double quotient = 0;    // log_ratio / bound_term
};

/// Throws IncompleteFactorization if U_m cannot be factored within the budget.
inline RepunitAbundancyRow repunit_abundancy_instrument(std::uint64_t g, std::uint64_t m, const FactorEffort& effort = {}) {
    if (g < 2) throw DomainError("repunit_abundancy_instrument: base must be >= 2");
    if (m < 2) throw DomainError("repunit_abundancy_instrument: m must be >= 2");
    auto u = factor_repunit(g, m, effort);
    if (!u.complete())
        throw IncompleteFactorization("U_" + std::to_string(m) + " in base " + std::to_string(g) + " not factored",
                                      u.cofactors.front().get_str());
    const ExactRatio ratio = abundancy(u.factors);
    RepunitAbundancyRow row;
    row.g = g;
    row.m = m;
    // log1p of the exact excess: for prime U_m the ratio is 1 + 1/U_m, which a
    // difference of two logs would round to 0.
    row.log_ratio = std::log1p(mpq_class(ratio.value() - 1).get_d());
    const double w = static_cast<double>(omega(factorize(mpz_class(static_cast<unsigned long>(m)))));
    const double inner = std::log(std::numbers::e * w);
    row.bound_term = inner * inner;
    row.quotient = row.log_ratio / row.bound_term;
    return row;
}

/// Truncated check of
///   sum_{d in P*} log(d)/d = (sum_{p in P} log p/(p-1)) * prod_{p in P} (1 - 1/p)^-1
/// for P = the first `prime_count` primes. The left side is summed over every
/// d whose exponents are all <= exponent_cap; tail_bound certifies how much
/// of the full series those omitted d can carry.
struct EulerProductCheck {
    double truncated_lhs = 0;
    double rhs = 0;
    double tail_bound = 0;
};

inline EulerProductCheck euler_log_identity(std::size_t prime_count, std::uint32_t exponent_cap) {
    if (prime_count < 1 || prime_count > 8) throw DomainError("euler_log_identity: prime_count must be in [1, 8]");
    std::vector<double> primes;
    for (std::uint32_t p : small_primes()) {
        if (primes.size() == prime_count) break;
        primes.push_back(p);
    }
    const std::size_t r = primes.size();

    // Truncated left side by direct enumeration of the exponent box.
    EulerProductCheck out;
    std::vector<std::uint32_t> exps(r, 0);
    for (;;) {
        double log_d = 0;
        for (std::size_t i = 0; i < r; ++i) log_d += exps[i] * std::log(primes[i]);
        out.truncated_lhs += log_d * std::exp(-log_d);
        std::size_t i = 0;
        while (i < r && exps[i] == exponent_cap) exps[i++] = 0;
        if (i == r) break;
        ++exps[i];
    }

    double weighted = 0, euler = 1;
    for (double p : primes) {
        weighted += std::log(p) / (p - 1);
        euler *= p / (p - 1);
    }
    out.rhs = weighted * euler;

    // Omitted terms have some exponent a_i > cap. With x = 1/p:
    //   sum_{a>A} x^a = x^(A+1)/(1-x),  sum_{a>A} a x^a = x^(A+1)((A+1) - A x)/(1-x)^2
    //   full sums:  x/(1-x) + 1 = 1/(1-x),  sum_a a x^a = x/(1-x)^2
    const double cap = exponent_cap;
    for (std::size_t i = 0; i < r; ++i) {
        const double xi = 1 / primes[i];
        const double t0 = std::pow(xi, cap + 1) / (1 - xi);
        const double t1 = std::pow(xi, cap + 1) * ((cap + 1) - cap * xi) / ((1 - xi) * (1 - xi));
        double others0 = 1, others_weighted = 0;
        for (std::size_t j = 0; j < r; ++j) {
            if (j == i) continue;
            const double xj = 1 / primes[j];
            others0 /= (1 - xj);
        }
        for (std::size_t j = 0; j < r; ++j) {
            if (j == i) continue;
            const double xj = 1 / primes[j];
            others_weighted += std::log(primes[j]) * (xj / ((1 - xj) * (1 - xj))) * (others0 * (1 - xj));
        }
        out.tail_bound += std::log(primes[i]) * t1 * others0 + t0 * others_weighted;
    }
    return out;
}

enum class CandidateStatus { multiperfect, undetermined };

struct RepdigitHit {
    mpz_class digit;  // D
    std::uint64_t s = 0;
    mpz_class k;      // abundancy when multiperfect
    CandidateStatus status = CandidateStatus::multiperfect;
};

/// Every (D, s) with 1 <= D <= d_max and 1 <= s <= s_max such that
/// D * U_{2^s} is multiperfect, ordered by (s, D). Lengths start at 2 since
/// every integer is D * U_1. When U_{2^s} cannot be factored within the budget,
/// each of its candidates is listed as undetermined.
inline std::vector<RepdigitHit> scan_multirepdigit_multiperfect(std::uint64_t g, std::uint64_t d_max,
                                                                std::uint64_t s_max, const FactorEffort& effort = {},
                                                                unsigned workers = 0) {
    if (g < 2) throw DomainError("repdigit scan: base must be >= 2");
    if (s_max < 1) throw DomainError("repdigit scan: s_max must be >= 1");
    if (s_max > 20) throw DomainError("repdigit scan: s_max beyond desk scale");
    if (d_max < 1) throw DomainError("repdigit scan: d_max must be >= 1");

    std::vector<std::optional<Factorization>> unit(s_max + 1);
    Factorization u;
    bool ok = true;
    for (std::uint64_t s = 1; s <= s_max; ++s) {
        if (ok) {
            auto piece = factorize_with_effort(cyclotomic_value(std::uint64_t{1} << s, g), effort);
            ok = piece.complete();
            if (ok) u = u * piece.factors;
        }
        if (ok) unit[s] = u;
    }

    auto per_s = parallel_map(s_max, workers, [&](std::size_t idx) {
        const std::uint64_t s = idx + 1;
        std::vector<RepdigitHit> hits;
        for (std::uint64_t d = 1; d <= d_max; ++d) {
            const mpz_class digit = static_cast<unsigned long>(d);
            if (!unit[s]) {
                hits.push_back({digit, s, 0, CandidateStatus::undetermined});
                continue;
            }
            const Factorization f = factorize(digit, FactorEffort::unlimited()) * *unit[s];
            const mpz_class value = f.value();
            const mpz_class sig = sigma(f);
            if (mpz_divisible_p(sig.get_mpz_t(), value.get_mpz_t()) && sig >= 2 * value)
                hits.push_back({digit, s, sig / value, CandidateStatus::multiperfect});
        }
        return hits;
    });
    std::vector<RepdigitHit> out;
    for (auto& v : per_s)
        for (auto& h : v) out.push_back(std::move(h));
    return out;
}

}  // namespace mplab
