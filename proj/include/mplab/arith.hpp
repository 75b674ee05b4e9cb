#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "mplab/error.hpp"
#include "mplab/primes.hpp"

namespace mplab {

/// Parses unbounded non-negative decimal text; rejects signs, blanks and junk.
inline mpz_class parse_decimal(std::string_view text) {
    if (text.empty() || !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw DomainError("not a non-negative decimal integer: '" + std::string(text) + "'");
    return mpz_class(std::string(text), 10);
}

/// Reduced positive rational. Used for abundancy sigma(m)/m and for radical
/// bound exponents, so all comparisons stay exact.
class ExactRatio {
public:
    ExactRatio() : value_(1) {}
    ExactRatio(const mpz_class& numerator, const mpz_class& denominator) : value_(numerator, denominator) {
        if (denominator == 0) throw DomainError("ExactRatio with zero denominator");
        value_.canonicalize();
    }
    explicit ExactRatio(const mpq_class& value) : value_(value) { value_.canonicalize(); }

    mpz_class numerator() const { return value_.get_num(); }
    mpz_class denominator() const { return value_.get_den(); }
    const mpq_class& value() const { return value_; }
    bool is_integer() const { return value_.get_den() == 1; }
    double to_double() const { return value_.get_d(); }

    /// Always "num/den", integers included ("3/1").
    std::string to_string() const { return value_.get_num().get_str() + "/" + value_.get_den().get_str(); }

    friend ExactRatio operator*(const ExactRatio& a, const ExactRatio& b) {
        return ExactRatio(mpq_class(a.value_ * b.value_));
    }
    friend bool operator==(const ExactRatio& a, const ExactRatio& b) { return a.value_ == b.value_; }
    friend bool operator<(const ExactRatio& a, const ExactRatio& b) { return a.value_ < b.value_; }
    friend bool operator<=(const ExactRatio& a, const ExactRatio& b) { return a.value_ <= b.value_; }
    friend bool operator>(const ExactRatio& a, const ExactRatio& b) { return a.value_ > b.value_; }

private:
    mpq_class value_;
};

struct PrimePower {
    mpz_class prime;
    std::uint32_t exponent = 1;

    friend bool operator==(const PrimePower& a, const PrimePower& b) {
        return a.prime == b.prime && a.exponent == b.exponent;
    }
};

/// Canonical factored form: primes strictly increasing, all prime, exponents >= 1.
/// The empty factorization is 1.
class Factorization {
public:
    Factorization() = default;

    /// Validating constructor; entries must already be canonical.
    static Factorization from_entries(std::vector<PrimePower> entries) {
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const auto& e = entries[i];
            if (e.exponent == 0) throw DomainError("zero exponent on prime " + e.prime.get_str());
            if (i > 0 && !(entries[i - 1].prime < e.prime))
                throw DomainError("primes not strictly increasing at " + e.prime.get_str());
            if (!is_prime(e.prime)) throw DomainError(e.prime.get_str() + " is not prime");
        }
        return Factorization(std::move(entries));
    }

    /// Sorts and merges repeated primes, then validates.
    static Factorization from_unordered(std::vector<PrimePower> entries) {
        std::sort(entries.begin(), entries.end(),
                  [](const PrimePower& a, const PrimePower& b) { return a.prime < b.prime; });
        std::vector<PrimePower> merged;
        for (auto& e : entries) {
            if (!merged.empty() && merged.back().prime == e.prime)
                merged.back().exponent += e.exponent;
            else
                merged.push_back(std::move(e));
        }
        return from_entries(std::move(merged));
    }

    const std::vector<PrimePower>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    mpz_class value() const {
        mpz_class v = 1, pe;
        for (const auto& e : entries_) {
            mpz_pow_ui(pe.get_mpz_t(), e.prime.get_mpz_t(), e.exponent);
            v *= pe;
        }
        return v;
    }

    std::uint32_t exponent_of(const mpz_class& p) const {
        for (const auto& e : entries_)
            if (e.prime == p) return e.exponent;
        return 0;
    }

    friend Factorization operator*(const Factorization& a, const Factorization& b) {
        std::vector<PrimePower> out;
        out.reserve(a.size() + b.size());
        std::size_t i = 0, j = 0;
        while (i < a.size() || j < b.size()) {
            if (j == b.size() || (i < a.size() && a.entries_[i].prime < b.entries_[j].prime)) {
                out.push_back(a.entries_[i++]);
            } else if (i == a.size() || b.entries_[j].prime < a.entries_[i].prime) {
                out.push_back(b.entries_[j++]);
            } else {
                out.push_back({a.entries_[i].prime, a.entries_[i].exponent + b.entries_[j].exponent});
                ++i;
                ++j;
            }
        }
        return Factorization(std::move(out));
    }

    friend bool operator==(const Factorization& a, const Factorization& b) { return a.entries_ == b.entries_; }

private:
    explicit Factorization(std::vector<PrimePower> entries) : entries_(std::move(entries)) {}

    friend class FactorizationBuilder;
    std::vector<PrimePower> entries_;
};

/// "2^3 * 3 * 5"; "1" for the empty factorization.
inline std::string to_string(const Factorization& f) {
    if (f.empty()) return "1";
    std::string out;
    for (const auto& e : f.entries()) {
        if (!out.empty()) out += " * ";
        out += e.prime.get_str();
        if (e.exponent > 1) out += "^" + std::to_string(e.exponent);
    }
    return out;
}

// Accumulates prime factors found in any order. Only factorization code that
// has already proven primality uses it, so no re-validation happens here.
class FactorizationBuilder {
public:
    void add(const mpz_class& p, std::uint32_t exponent = 1) { exponents_[p] += exponent; }

    Factorization build() const {
        std::vector<PrimePower> entries;
        entries.reserve(exponents_.size());
        for (const auto& [p, e] : exponents_) entries.push_back({p, e});
        return Factorization(std::move(entries));
    }

private:
    std::map<mpz_class, std::uint32_t> exponents_;
};

/// Budget for the rho stage. Empty fields mean unlimited.
struct FactorEffort {
    std::optional<double> max_seconds;
    std::optional<std::uint64_t> max_rho_iterations;

    static FactorEffort unlimited() { return {}; }

    /// Reads MPLAB_EFFORT_CAP_SECONDS; unset or unparsable means unlimited.
    static FactorEffort from_environment() {
        FactorEffort effort;
        if (const char* env = std::getenv("MPLAB_EFFORT_CAP_SECONDS")) {
            char* end = nullptr;
            const double seconds = std::strtod(env, &end);
            if (end != env && seconds > 0) effort.max_seconds = seconds;
        }
        return effort;
    }
};

struct FactorResult {
    Factorization factors;                 // the fully factored part
    std::vector<mpz_class> cofactors;      // composites left when the budget ran out

    bool complete() const noexcept { return cofactors.empty(); }
};

namespace detail {

class RhoBudget {
public:
    explicit RhoBudget(const FactorEffort& effort) : effort_(effort), start_(std::chrono::steady_clock::now()) {}

    // Returns false once the budget is exhausted.
    bool spend(std::uint64_t iterations) {
        used_ += iterations;
        if (effort_.max_rho_iterations && used_ > *effort_.max_rho_iterations) exhausted_ = true;
        if (effort_.max_seconds) {
            const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
            if (elapsed.count() > *effort_.max_seconds) exhausted_ = true;
        }
        return !exhausted_;
    }
    bool exhausted() const noexcept { return exhausted_; }

private:
    FactorEffort effort_;
    std::chrono::steady_clock::time_point start_;
    std::uint64_t used_ = 0;
    bool exhausted_ = false;
};

// Brent's cycle-finding variant of Pollard rho. n must be odd, composite and
// not a perfect power. Returns a nontrivial factor, or nullopt if the budget ran out.
inline std::optional<mpz_class> brent_rho(const mpz_class& n, RhoBudget& budget, std::mt19937_64& rng) {
    constexpr std::uint64_t kBatch = 128;
    mpz_class x, y, ys, q, g, c, diff;
    while (!budget.exhausted()) {
        y = mpz_class(std::to_string(rng())) % n;
        c = mpz_class(std::to_string(rng())) % (n - 1) + 1;
        g = 1;
        q = 1;
        std::uint64_t r = 1;
        do {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) y = (y * y + c) % n;
            std::uint64_t k = 0;
            do {
                ys = y;
                const std::uint64_t steps = std::min(kBatch, r - k);
                for (std::uint64_t i = 0; i < steps; ++i) {
                    y = (y * y + c) % n;
                    diff = x - y;
                    q = q * abs(diff) % n;
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += steps;
                if (!budget.spend(2 * steps)) return std::nullopt;
            } while (k < r && g == 1);
            r *= 2;
        } while (g == 1);
        if (g == n) {
            // overshot inside the last batch; walk it one step at a time
            do {
                ys = (ys * ys + c) % n;
                diff = x - ys;
                mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g != n) return g;
    }
    return std::nullopt;
}

}  // namespace detail

/// Trial division by primes up to 10^6, then Brent rho on what remains.
/// Never throws for budget exhaustion; leftover composites land in `cofactors`.
inline FactorResult factorize_with_effort(const mpz_class& n, const FactorEffort& effort) {
    if (n < 1) throw DomainError("factorize: n must be >= 1, got " + n.get_str());
    FactorizationBuilder builder;
    FactorResult result;
    mpz_class rest = n;

    if (mpz_fits_ulong_p(rest.get_mpz_t())) {
        std::uint64_t r = rest.get_ui();
        for (std::uint32_t p : small_primes()) {
            if (std::uint64_t{p} * p > r) break;
            if (r % p) continue;
            std::uint32_t e = 0;
            while (r % p == 0) {
                r /= p;
                ++e;
            }
            builder.add(p, e);
        }
        rest = static_cast<unsigned long>(r);
    } else {
        for (std::uint32_t p : small_primes()) {
            if (mpz_divisible_ui_p(rest.get_mpz_t(), p) == 0) continue;
            std::uint32_t e = 0;
            while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
                mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
                ++e;
            }
            builder.add(p, e);
            if (rest == 1) break;
        }
    }

    if (rest > 1) {
        detail::RhoBudget budget(effort);
        std::mt19937_64 rng(0x9E3779B97F4A7C15ull ^ mpz_get_ui(n.get_mpz_t()));
        std::vector<std::pair<mpz_class, std::uint32_t>> pending{{rest, 1}};
        while (!pending.empty()) {
            auto [m, mult] = pending.back();
            pending.pop_back();
            if (m == 1) continue;
            if (is_prime(m)) {
                builder.add(m, mult);
                continue;
            }
            if (mpz_perfect_power_p(m.get_mpz_t())) {
                mpz_class root;
                for (unsigned long k = mpz_sizeinbase(m.get_mpz_t(), 2); k >= 2; --k) {
                    if (mpz_root(root.get_mpz_t(), m.get_mpz_t(), k)) {
                        pending.emplace_back(root, mult * static_cast<std::uint32_t>(k));
                        break;
                    }
                }
                continue;
            }
            auto d = budget.exhausted() ? std::nullopt : detail::brent_rho(m, budget, rng);
            if (!d) {
                for (std::uint32_t i = 0; i < mult; ++i) result.cofactors.push_back(m);
                continue;
            }
            mpz_class other = m / *d;
            pending.emplace_back(*d, mult);
            pending.emplace_back(other, mult);
        }
        std::sort(result.cofactors.begin(), result.cofactors.end());
    }
    result.factors = builder.build();
    return result;
}

/// Complete factorization under the given budget; throws IncompleteFactorization
/// when the budget runs out.
inline Factorization factorize(const mpz_class& n, const FactorEffort& effort) {
    auto result = factorize_with_effort(n, effort);
    if (!result.complete()) {
        mpz_class cofactor = 1;
        for (const auto& c : result.cofactors) cofactor *= c;
        throw IncompleteFactorization("factorization of " + n.get_str() + " incomplete; composite cofactor " +
                                          cofactor.get_str(),
                                      cofactor.get_str());
    }
    return std::move(result.factors);
}

/// Budget from MPLAB_EFFORT_CAP_SECONDS (unlimited when unset).
inline Factorization factorize(const mpz_class& n) { return factorize(n, FactorEffort::from_environment()); }

inline Factorization factorize(unsigned long n) { return factorize(mpz_class(n)); }

/// sigma(n) = prod (p^(e+1) - 1) / (p - 1)
inline mpz_class sigma(const Factorization& f) {
    mpz_class s = 1, term;
    for (const auto& e : f.entries()) {
        mpz_pow_ui(term.get_mpz_t(), e.prime.get_mpz_t(), e.exponent + 1);
        term -= 1;
        mpz_class denom = e.prime - 1;
        mpz_divexact(term.get_mpz_t(), term.get_mpz_t(), denom.get_mpz_t());
        s *= term;
    }
    return s;
}

inline mpz_class radical(const Factorization& f) {
    mpz_class r = 1;
    for (const auto& e : f.entries()) r *= e.prime;
    return r;
}

inline std::size_t omega(const Factorization& f) { return f.size(); }

inline ExactRatio abundancy(const Factorization& f) { return ExactRatio(sigma(f), f.value()); }

/// Largest e with p^e | n.
inline std::uint64_t valuation(const mpz_class& n, const mpz_class& p) {
    if (n < 1) throw DomainError("valuation: n must be >= 1");
    if (p < 2) throw DomainError("valuation: p must be prime");
    if (p == 2) return mpz_scan1(n.get_mpz_t(), 0);
    mpz_class rest;
    return mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
}

/// All divisors, ascending.
inline std::vector<mpz_class> divisors(const Factorization& f) {
    std::vector<mpz_class> out{1};
    for (const auto& e : f.entries()) {
        const std::size_t base = out.size();
        mpz_class pk = 1;
        for (std::uint32_t k = 1; k <= e.exponent; ++k) {
            pk *= e.prime;
            for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// sum over d | n of 1/d, which equals sigma(n)/n.
inline ExactRatio reciprocal_divisor_sum(const Factorization& f) {
    mpq_class total = 0;
    for (const auto& d : divisors(f)) total += mpq_class(1, d);
    return ExactRatio(total);
}

inline double log_of(const mpz_class& n) {
    long exp = 0;
    const double mantissa = mpz_get_d_2exp(&exp, n.get_mpz_t());
    return std::log(mantissa) + static_cast<double>(exp) * std::log(2.0);
}

}  // namespace mplab
