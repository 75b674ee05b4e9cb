#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "mplab/arith.hpp"
#include "mplab/error.hpp"
#include "mplab/parallel.hpp"

namespace mplab {

// ---------------------------------------------------------------------------
// ABC triples
// ---------------------------------------------------------------------------

struct AbcTriple {
    mpz_class a, b, c;
    mpz_class rad_abc;
    double quality = 0;  // log c / log rad(abc); > 1 is an ABC hit

    bool is_hit() const { return quality > 1; }
};

/// c = a + b for coprime positive a, b.
inline AbcTriple abc_quality(const mpz_class& a, const mpz_class& b, const FactorEffort& effort = {}) {
    if (a < 1 || b < 1) throw DomainError("abc_quality: a and b must be positive");
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (g != 1) throw DomainError("abc_quality: gcd(" + a.get_str() + ", " + b.get_str() + ") = " + g.get_str());
    AbcTriple t{a, b, a + b, 1, 0};
    // a, b, c pairwise coprime, so rad(abc) = rad(a) rad(b) rad(c)
    for (const mpz_class* x : {&t.a, &t.b, &t.c}) t.rad_abc *= radical(factorize(*x, effort));
    t.quality = log_of(t.c) / log_of(t.rad_abc);
    return t;
}

/// Quality of the triple (y, x - y, x) attached to a gap x - y between two integers.
inline AbcTriple gap_triple_quality(const mpz_class& x, const mpz_class& y, const FactorEffort& effort = {}) {
    if (!(x > y) || y < 1) throw DomainError("gap_triple_quality: need x > y >= 1");
    return abc_quality(y, x - y, effort);
}

// ---------------------------------------------------------------------------
// Factorials
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kFactorialCap = 200;

/// n! by Legendre's formula: the exponent of p is sum_j floor(n / p^j).
inline Factorization factorial_factorization(std::uint64_t n) {
    FactorizationBuilder b;
    for (std::uint32_t p : small_primes()) {
        if (p > n) break;
        std::uint32_t e = 0;
        for (std::uint64_t q = n / p; q > 0; q /= p) e += static_cast<std::uint32_t>(q);
        b.add(p, e);
    }
    return b.build();
}

inline ExactRatio factorial_abundancy(std::uint64_t n, std::uint64_t cap = kFactorialCap) {
    if (n < 1) throw DomainError("factorial_abundancy: n must be >= 1");
    if (n > cap) throw DomainError("factorial_abundancy: n = " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
    return abundancy(factorial_factorization(n));
}

/// Every n in [1, limit] with n! perfect.
inline std::vector<std::uint64_t> perfect_factorial_scan(std::uint64_t limit, std::uint64_t cap = kFactorialCap) {
    if (limit > cap) throw DomainError("perfect_factorial_scan: limit exceeds cap");
    std::vector<std::uint64_t> out;
    const ExactRatio two(2, 1);
    for (std::uint64_t n = 1; n <= limit; ++n)
        if (factorial_abundancy(n, cap) == two) out.push_back(n);
    return out;
}

/// True iff sigma(n!)/n! is strictly increasing on 2..limit. Combined with
/// integrality this leaves at most one n! per abundancy k.
inline bool factorial_abundancy_increasing(std::uint64_t limit, std::uint64_t cap = kFactorialCap) {
    if (limit < 2) throw DomainError("factorial_abundancy_increasing: limit must be >= 2");
    if (limit > cap) throw DomainError("factorial_abundancy_increasing: limit exceeds cap");
    ExactRatio prev = factorial_abundancy(2, cap);
    for (std::uint64_t n = 3; n <= limit; ++n) {
        ExactRatio cur = factorial_abundancy(n, cap);
        if (!(prev < cur)) return false;
        prev = std::move(cur);
    }
    return true;
}

/// log rad(n!) / log n!, with rad(n!) the primorial of n.
inline double factorial_radical_ratio(std::uint64_t n, std::uint64_t cap = kFactorialCap) {
    if (n < 2) throw DomainError("factorial_radical_ratio: n must be >= 2");
    if (n > cap) throw DomainError("factorial_radical_ratio: n exceeds cap");
    double log_primorial = 0, log_factorial = 0;
    for (std::uint64_t i = 2; i <= n; ++i) {
        const double li = std::log(static_cast<double>(i));
        log_factorial += li;
        if (is_prime_u64(i)) log_primorial += li;
    }
    return log_primorial / log_factorial;
}

enum class ShiftedStatus { prime, not_multiperfect, multiperfect, undetermined };

inline const char* to_string(ShiftedStatus s) {
    switch (s) {
        case ShiftedStatus::prime: return "prime";
        case ShiftedStatus::not_multiperfect: return "not-multiperfect";
        case ShiftedStatus::multiperfect: return "multiperfect";
        case ShiftedStatus::undetermined: return "undetermined";
    }
    return "?";
}

struct ShiftedFactorialRow {
    std::uint64_t n = 0;
    mpz_class value;  // n! + 1
    ShiftedStatus status = ShiftedStatus::undetermined;
    mpz_class k;      // abundancy, when multiperfect
    std::optional<Factorization> factors;
};

inline constexpr std::uint64_t kShiftedFactorialCap = 25;

/// Classifies n! + 1 for n in [1, limit]. A prime p has sigma(p) = p + 1 < 2p,
/// so primes are settled before any factoring.
inline std::vector<ShiftedFactorialRow> factorial_plus_one_scan(std::uint64_t limit, const FactorEffort& effort = {},
                                                                unsigned workers = 0,
                                                                std::uint64_t cap = kShiftedFactorialCap) {
    if (limit > cap) throw DomainError("factorial_plus_one_scan: limit exceeds cap " + std::to_string(cap));
    return parallel_map(limit, workers, [&](std::size_t idx) {
        ShiftedFactorialRow row;
        row.n = idx + 1;
        mpz_fac_ui(row.value.get_mpz_t(), row.n);
        row.value += 1;
        if (is_prime(row.value)) {
            row.status = ShiftedStatus::prime;
            return row;
        }
        auto result = factorize_with_effort(row.value, effort);
        if (!result.complete()) {
            row.status = ShiftedStatus::undetermined;
            return row;
        }
        const mpz_class s = sigma(result.factors);
        if (mpz_divisible_p(s.get_mpz_t(), row.value.get_mpz_t()) && s >= 2 * row.value) {
            row.status = ShiftedStatus::multiperfect;
            row.k = s / row.value;
        } else {
            row.status = ShiftedStatus::not_multiperfect;
        }
        row.factors = std::move(result.factors);
        return row;
    });
}

// ---------------------------------------------------------------------------
// Radicals of polynomial values
// ---------------------------------------------------------------------------

/// Integer polynomial, coefficients from the leading one down to the constant.
class IntPolynomial {
public:
    explicit IntPolynomial(std::vector<mpz_class> coeffs) : coeffs_(std::move(coeffs)) {
        while (coeffs_.size() > 1 && coeffs_.front() == 0) coeffs_.erase(coeffs_.begin());
        if (coeffs_.empty()) coeffs_.push_back(0);
    }

    std::size_t degree() const { return coeffs_.size() - 1; }
    const std::vector<mpz_class>& coeffs() const { return coeffs_; }

    mpz_class operator()(const mpz_class& x) const {
        mpz_class v = 0;
        for (const auto& c : coeffs_) v = v * x + c;
        return v;
    }

    /// True iff gcd(f, f') is constant, i.e. f has no repeated root.
    bool is_squarefree() const {
        using Poly = std::vector<mpq_class>;
        auto strip = [](Poly& p) {
            while (p.size() > 1 && p.front() == 0) p.erase(p.begin());
        };
        Poly a(coeffs_.begin(), coeffs_.end());
        Poly b;
        for (std::size_t i = 0; i + 1 < coeffs_.size(); ++i)
            b.push_back(mpq_class(coeffs_[i] * static_cast<unsigned long>(degree() - i)));
        strip(b);
        if (b.size() == 1 && b[0] == 0) return degree() == 0 ? false : true;
        // Euclid over Q
        while (!(b.size() == 1 && b[0] == 0)) {
            Poly r = a;
            while (r.size() >= b.size() && !(r.size() == 1 && r[0] == 0)) {
                const mpq_class factor = r.front() / b.front();
                for (std::size_t i = 0; i < b.size(); ++i) r[i] -= factor * b[i];
                r.erase(r.begin());
                if (r.empty()) r.push_back(0);
                strip(r);
            }
            a = std::move(b);
            b = std::move(r);
        }
        return a.size() == 1;
    }

private:
    std::vector<mpz_class> coeffs_;
};

struct PolyRadicalRow {
    mpz_class x;
    mpz_class value;                   // f(x)
    std::optional<mpz_class> rad;      // rad(|f(x)|); empty when skipped or unfactored
    std::optional<double> exponent;    // log rad / log |x|, for |x| >= 2
    bool skipped = false;              // f(x) in {-1, 0, 1}
};

struct PolyScanOptions {
    std::uint64_t max_points = 100'000;
    unsigned workers = 0;
    FactorEffort effort;
};

/// rad(f(x)) over x in [lo, hi], for nonconstant f without repeated roots.
inline std::vector<PolyRadicalRow> poly_radical_scan(const IntPolynomial& f, std::int64_t lo, std::int64_t hi,
                                                     const PolyScanOptions& options = {}) {
    if (f.degree() < 1) throw DomainError("poly_radical_scan: polynomial must be nonconstant");
    if (!f.is_squarefree()) throw DomainError("poly_radical_scan: polynomial has a repeated root");
    if (hi < lo) throw DomainError("poly_radical_scan: empty range");
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span > options.max_points) throw DomainError("poly_radical_scan: range exceeds point budget");
    return parallel_map(span, options.workers, [&](std::size_t i) {
        PolyRadicalRow row;
        row.x = static_cast<long>(lo + static_cast<std::int64_t>(i));
        row.value = f(row.x);
        const mpz_class mag = abs(row.value);
        if (mag <= 1) {
            row.skipped = true;
            return row;
        }
        auto fx = factorize_with_effort(mag, options.effort);
        if (!fx.complete()) return row;
        row.rad = radical(fx.factors);
        if (abs(row.x) >= 2) row.exponent = log_of(*row.rad) / log_of(mpz_class(abs(row.x)));
        return row;
    });
}

struct FormRadicalRow {
    std::int64_t m = 0, n = 0;
    mpz_class value;
    std::optional<mpz_class> rad;
    std::optional<double> exponent;  // log rad / log max(|m|, |n|)
    bool skipped = false;
};

/// Binary form f(m, n) = sum_i c_i m^(d-i) n^i with the same coefficient order
/// as IntPolynomial. Scans coprime 1 <= m, n <= max_coord. The form must have
/// no repeated linear factor: f(x, 1) squarefree and n^2 not dividing f.
inline std::vector<FormRadicalRow> form_radical_scan(const std::vector<mpz_class>& coeffs, std::int64_t max_coord,
                                                     const FactorEffort& effort = {}) {
    if (coeffs.size() < 2) throw DomainError("form_radical_scan: degree must be >= 1");
    if (max_coord < 1 || max_coord > 1000) throw DomainError("form_radical_scan: max_coord must be in [1, 1000]");
    if (coeffs[0] == 0 && coeffs[1] == 0) throw DomainError("form_radical_scan: n^2 divides the form");
    const IntPolynomial dehomogenized(coeffs);
    if (dehomogenized.degree() >= 1 && !dehomogenized.is_squarefree())
        throw DomainError("form_radical_scan: repeated linear factor");
    const std::size_t d = coeffs.size() - 1;

    std::vector<FormRadicalRow> out;
    for (std::int64_t m = 1; m <= max_coord; ++m) {
        for (std::int64_t n = 1; n <= max_coord; ++n) {
            if (std::gcd(m, n) != 1) continue;
            FormRadicalRow row;
            row.m = m;
            row.n = n;
            mpz_class mp, np;
            for (std::size_t i = 0; i <= d; ++i) {
                mpz_ui_pow_ui(mp.get_mpz_t(), static_cast<unsigned long>(m), d - i);
                mpz_ui_pow_ui(np.get_mpz_t(), static_cast<unsigned long>(n), i);
                row.value += coeffs[i] * mp * np;
            }
            const mpz_class mag = abs(row.value);
            if (mag <= 1) {
                row.skipped = true;
            } else if (auto fx = factorize_with_effort(mag, effort); fx.complete()) {
                row.rad = radical(fx.factors);
                const std::int64_t top = std::max(m, n);
                if (top >= 2) row.exponent = log_of(*row.rad) / std::log(static_cast<double>(top));
            }
            out.push_back(std::move(row));
        }
    }
    return out;
}

}  // namespace mplab
