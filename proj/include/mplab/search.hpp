#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mplab/arith.hpp"
#include "mplab/error.hpp"
#include "mplab/parallel.hpp"

namespace mplab {

struct SieveConfig {
    /// Maximum entries per segment; one segment holds this many 64-bit sums.
    std::uint64_t segment_size = std::uint64_t{1} << 22;
};

/// Searches stay well inside this so sigma(n) < 2^64 always.
inline constexpr std::uint64_t kMaxSearchLimit = 1'000'000'000'000ull;

struct SearchHit {
    std::uint64_t m = 0;
    std::uint64_t k = 0;
    std::uint64_t segment_id = 0;

    friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

namespace detail {

inline std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// Every n in [lo, hi) receives d + n/d for each divisor d < sqrt(n) and d once
// when d^2 = n. Divisors below sqrt(hi) are enough to cover every pair.
inline void accumulate_sigma(std::uint64_t lo, std::uint64_t hi, std::span<std::uint64_t> out) {
    std::fill(out.begin(), out.end(), 0);
    const std::uint64_t dmax = isqrt(hi - 1);
    for (std::uint64_t d = 1; d <= dmax; ++d) {
        std::uint64_t q = std::max(d, (lo + d - 1) / d);
        std::uint64_t n = d * q;
        if (n >= hi) continue;
        if (q == d) {
            out[n - lo] += d;
            ++q;
            n += d;
        }
        std::uint64_t* slot = out.data() + (n - lo);
        std::uint64_t partner = d + q;
        for (; n < hi; n += d, slot += d, ++partner) *slot += partner;
    }
}

}  // namespace detail

/// sigma(n) for every n in [lo, hi), by divisor accumulation over the segment.
inline std::vector<std::uint64_t> sieve_sigma(std::uint64_t lo, std::uint64_t hi, const SieveConfig& config = {}) {
    if (lo < 1 || hi <= lo) throw DomainError("sieve_sigma: need 1 <= lo < hi");
    if (hi - lo > config.segment_size)
        throw DomainError("sieve_sigma: segment of " + std::to_string(hi - lo) + " entries exceeds the configured " +
                          std::to_string(config.segment_size));
    if (hi > kMaxSearchLimit + 1) throw DomainError("sieve_sigma: hi beyond supported range");
    std::vector<std::uint64_t> out(hi - lo);
    detail::accumulate_sigma(lo, hi, out);
    return out;
}

struct SearchOptions {
    unsigned workers = 0;  // 0 = all cores
    SieveConfig sieve;
};

/// All m <= limit with sigma(m) = k*m, k >= 2, ascending in m. With k_filter,
/// only that abundancy is kept. Every hit is re-checked by factorization.
inline std::vector<SearchHit> search_multiperfect(std::uint64_t limit, std::optional<std::uint64_t> k_filter = {},
                                                  const SearchOptions& options = {}) {
    if (limit < 2) throw DomainError("search_multiperfect: limit must be >= 2");
    if (limit > kMaxSearchLimit) throw DomainError("search_multiperfect: limit beyond supported range");
    if (options.sieve.segment_size == 0) throw DomainError("search_multiperfect: segment size must be positive");

    const std::uint64_t seg = options.sieve.segment_size;
    const std::uint64_t end = limit + 1;
    const std::uint64_t segments = (end - 1 + seg - 1) / seg;

    auto per_segment = parallel_map(segments, options.workers, [&](std::size_t id) {
        const std::uint64_t lo = 1 + id * seg;
        const std::uint64_t hi = std::min(end, lo + seg);
        std::vector<std::uint64_t> sums(hi - lo);
        detail::accumulate_sigma(lo, hi, sums);
        std::vector<SearchHit> hits;
        for (std::uint64_t i = 0; i < sums.size(); ++i) {
            const std::uint64_t m = lo + i;
            if (sums[i] % m) continue;
            const std::uint64_t k = sums[i] / m;
            if (k < 2 || (k_filter && k != *k_filter)) continue;
            hits.push_back({m, k, id});
        }
        return hits;
    });

    std::vector<SearchHit> merged;
    for (auto& hits : per_segment) {
        for (auto& h : hits) {
            const mpz_class m = static_cast<unsigned long>(h.m);
            if (sigma(factorize(m, FactorEffort::unlimited())) != m * static_cast<unsigned long>(h.k))
                throw std::logic_error("sieve reported " + std::to_string(h.m) + " but re-validation failed");
            merged.push_back(h);
        }
    }
    return merged;
}

}  // namespace mplab
