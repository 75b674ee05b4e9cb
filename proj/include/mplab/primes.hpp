#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <gmpxx.h>

namespace mplab {

inline constexpr std::uint32_t kTrialDivisionBound = 1'000'000;

namespace detail {

struct SmallPrimeTable {
    std::vector<std::uint32_t> primes;
    std::vector<bool> composite;  // composite[n] for n <= kTrialDivisionBound

    SmallPrimeTable() : composite(kTrialDivisionBound + 1, false) {
        composite[0] = composite[1] = true;
        for (std::uint32_t i = 2; i <= kTrialDivisionBound; ++i) {
            if (composite[i]) continue;
            primes.push_back(i);
            for (std::uint64_t j = std::uint64_t{i} * i; j <= kTrialDivisionBound; j += i)
                composite[j] = true;
        }
    }
};

inline const SmallPrimeTable& small_prime_table() {
    static const SmallPrimeTable table;
    return table;
}

inline std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) result = mulmod64(result, base, m);
        base = mulmod64(base, base, m);
        exp >>= 1;
    }
    return result;
}

inline bool miller_rabin_witness64(std::uint64_t n, std::uint64_t a, std::uint64_t d, int s) {
    std::uint64_t x = powmod64(a, d, n);
    if (x == 1 || x == n - 1) return false;
    for (int r = 1; r < s; ++r) {
        x = mulmod64(x, x, n);
        if (x == n - 1) return false;
    }
    return true;
}

inline bool miller_rabin_witness(const mpz_class& n, unsigned long a, const mpz_class& d, unsigned long s) {
    mpz_class x;
    mpz_class base = a;
    const mpz_class n_minus_1 = n - 1;
    mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n_minus_1) return false;
    for (unsigned long r = 1; r < s; ++r) {
        x = x * x % n;
        if (x == n_minus_1) return false;
    }
    return true;
}

inline constexpr unsigned long kMillerRabinBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

}  // namespace detail

/// Primes up to the trial-division bound, ascending.
inline std::span<const std::uint32_t> small_primes() { return detail::small_prime_table().primes; }

inline bool is_prime_u64(std::uint64_t n) {
    if (n <= kTrialDivisionBound) return !detail::small_prime_table().composite[n];
    for (std::uint64_t p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u})
        if (n % p == 0) return false;
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // Bases 2..37 are a proven deterministic set for all n < 2^64.
    for (std::uint64_t a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u})
        if (detail::miller_rabin_witness64(n, a, d, s)) return false;
    return true;
}

/// Primality test. Deterministic Miller-Rabin below 3.317e24 (bases 2..41);
/// above that, GMP's Baillie-PSW plus extra Miller-Rabin rounds.
inline bool is_prime(const mpz_class& n) {
    if (n < 2) return false;
    if (mpz_fits_ulong_p(n.get_mpz_t())) return is_prime_u64(n.get_ui());
    for (unsigned long p : detail::kMillerRabinBases)
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
    static const mpz_class kDeterministicLimit("3317044064679887385961981");
    if (n >= kDeterministicLimit) return mpz_probab_prime_p(n.get_mpz_t(), 25) > 0;
    mpz_class d = n - 1;
    const unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
    for (unsigned long a : detail::kMillerRabinBases)
        if (detail::miller_rabin_witness(n, a, d, s)) return false;
    return true;
}

}  // namespace mplab
