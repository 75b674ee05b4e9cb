#include <gtest/gtest.h>

#include <cmath>
#include <tuple>

#include "mplab/repdigit.hpp"
#include "oracles.hpp"

using namespace mplab;

namespace {

std::vector<std::tuple<unsigned long, std::uint64_t, unsigned long>> triples(const std::vector<RepdigitHit>& hits) {
    std::vector<std::tuple<unsigned long, std::uint64_t, unsigned long>> out;
    for (const auto& h : hits) {
        EXPECT_EQ(h.status, CandidateStatus::multiperfect);
        out.emplace_back(h.digit.get_ui(), h.s, h.k.get_ui());
    }
    return out;
}

std::vector<std::string> ratio_strings(const RatioChain& c) {
    std::vector<std::string> out;
    for (const auto& r : c.ratios) out.push_back(r.to_string());
    return out;
}

}  // namespace

TEST(Repunit, Values) {
    EXPECT_EQ(lucas_u(10, 1), 1);
    EXPECT_EQ(lucas_u(10, 6), 111111);
    EXPECT_EQ(lucas_u(2, 8), 255);
    EXPECT_EQ(lucas_u(3, 3), 13);
    EXPECT_THROW(lucas_u(1, 3), DomainError);
    EXPECT_THROW(lucas_u(10, 0), DomainError);

    const auto m = make_multirepdigit(10, 3, 7);
    EXPECT_EQ(m.value, 777);
    EXPECT_TRUE(m.is_classic_repdigit());
    EXPECT_FALSE(make_multirepdigit(10, 3, 12).is_classic_repdigit());
    EXPECT_THROW(make_multirepdigit(10, 3, 0), DomainError);
}

TEST(Repunit, DivisibilityChain) {
    for (std::uint64_t g = 2; g <= 10; ++g)
        for (std::uint64_t b = 1; b <= 64; ++b) {
            const mpz_class ub = lucas_u(g, b);
            for (std::uint64_t a = 1; a <= b; ++a)
                if (b % a == 0) { ASSERT_TRUE(mpz_divisible_p(ub.get_mpz_t(), lucas_u(g, a).get_mpz_t())) << g << a << b; }
        }
}

TEST(Repunit, CyclotomicSplitMultipliesBack) {
    for (std::uint64_t g : {2u, 3u, 10u})
        for (std::uint64_t n = 1; n <= 24; ++n) {
            const auto r = factor_repunit(g, n, FactorEffort::unlimited());
            ASSERT_TRUE(r.complete());
            ASSERT_EQ(r.factors.value(), lucas_u(g, n)) << g << " " << n;
        }
    EXPECT_EQ(cyclotomic_value(4, 10), 101);
    EXPECT_EQ(cyclotomic_value(6, 2), 3);
}

TEST(SigmaRatioChain, Examples) {
    EXPECT_EQ(ratio_strings(sigma_ratio_chain(10, 3)),
              (std::vector<std::string>{"1/1", "12/11", "1224/1111", "12499488/11111111"}));
    EXPECT_EQ(ratio_strings(sigma_ratio_chain(2, 3)), (std::vector<std::string>{"1/1", "4/3", "8/5", "144/85"}));
    EXPECT_THROW(sigma_ratio_chain(1, 3), DomainError);
    EXPECT_THROW(sigma_ratio_chain(10, 21), DomainError);
}

TEST(SigmaRatioChain, StrictlyIncreasing) {
    for (std::uint64_t g = 2; g <= 10; ++g) {
        const auto c = sigma_ratio_chain(g, 5);
        ASSERT_FALSE(c.truncated);
        ASSERT_EQ(c.ratios.size(), 6u);
        for (std::size_t s = 1; s < c.ratios.size(); ++s) EXPECT_LT(c.ratios[s - 1], c.ratios[s]) << g << " " << s;
    }
}

TEST(SigmaRatioChain, TruncatesUnderTinyBudget) {
    FactorEffort tiny;
    tiny.max_rho_iterations = 1;
    const auto c = sigma_ratio_chain(10, 8, tiny);
    EXPECT_TRUE(c.truncated);
    EXPECT_LT(c.ratios.size(), 9u);
}

TEST(RankOfApparition, Examples) {
    EXPECT_EQ(rank_of_apparition(7, 10), 6u);
    EXPECT_EQ(rank_of_apparition(11, 10), 2u);
    EXPECT_EQ(rank_of_apparition(5, 2), 4u);
    EXPECT_EQ(rank_of_apparition(3, 10), std::nullopt);
    EXPECT_THROW(rank_of_apparition(5, 10), DomainError);
    EXPECT_THROW(rank_of_apparition(9, 10), DomainError);
    EXPECT_THROW(rank_of_apparition(2, 3), DomainError);
}

TEST(RankOfApparition, DividesPMinusOne) {
    for (std::uint64_t g : {2u, 3u, 10u})
        for (std::uint64_t p = 3; p <= 10'000; p += 2) {
            if (!oracle::is_prime(p) || g % p == 0 || (g - 1) % p == 0) continue;
            const auto z = rank_of_apparition(p, g);
            ASSERT_TRUE(z.has_value());
            ASSERT_EQ((p - 1) % *z, 0u) << p << " " << g;
            ASSERT_EQ(*z, oracle::multiplicative_order(g, p)) << p << " " << g;
        }
}

TEST(Abundancy, SubmultiplicativeWithEqualityOnCoprime) {
    std::vector<Factorization> f(501);
    for (unsigned long n = 1; n <= 500; ++n) f[n] = factorize(mpz_class(n));
    for (unsigned long d = 1; d <= 500; ++d)
        for (unsigned long u = 1; u <= 500; ++u) {
            const auto joint = abundancy(f[d] * f[u]);
            const auto product = abundancy(f[d]) * abundancy(f[u]);
            if (oracle::gcd(d, u) == 1)
                ASSERT_EQ(joint, product) << d << " " << u;
            else
                ASSERT_LT(joint, product) << d << " " << u;
        }
}

TEST(RepunitAbundancyInstrument, FrozenValues) {
    const auto a = repunit_abundancy_instrument(10, 2);
    EXPECT_NEAR(a.log_ratio, 0.0870113769896297, 1e-12);
    EXPECT_NEAR(a.bound_term, 1.0, 1e-12);
    EXPECT_NEAR(a.quotient, 0.0870113769896297, 1e-12);

    const auto b = repunit_abundancy_instrument(2, 6);
    EXPECT_NEAR(b.log_ratio, 0.5012561727498399, 1e-12);
    EXPECT_NEAR(b.quotient, 0.17485188165322016, 1e-12);

    EXPECT_NEAR(repunit_abundancy_instrument(2, 2).log_ratio, 0.28768207245178085, 1e-12);
    // R19 is prime, so the ratio is 1 + 1/R19.
    EXPECT_NEAR(repunit_abundancy_instrument(10, 19).log_ratio / 9.000000000000000009e-19, 1.0, 1e-12);
    EXPECT_THROW(repunit_abundancy_instrument(10, 1), DomainError);
}

TEST(RepunitAbundancyInstrument, QuotientBoundedAcrossGrid) {
    for (std::uint64_t g : {2u, 3u, 10u}) {
        double worst = 0;
        for (std::uint64_t m = 2; m <= 40; ++m) {
            const auto row = repunit_abundancy_instrument(g, m);
            ASSERT_GT(row.log_ratio, 0);
            ASSERT_TRUE(std::isfinite(row.quotient));
            worst = std::max(worst, row.quotient);
        }
        // The growth claim is log(sigma(U_m)/U_m) << (log(e * omega(m)))^2; on
        // this grid the constant stays small.
        EXPECT_LT(worst, 1.0) << "base " << g;
    }
}

TEST(EulerLogIdentity, TruncationBracketsClosedForm) {
    for (std::size_t k = 1; k <= 6; ++k)
        for (std::uint32_t cap : {8u, 16u}) {
            const auto r = euler_log_identity(k, cap);
            EXPECT_GE(r.tail_bound, 0);
            EXPECT_LE(r.truncated_lhs, r.rhs + 1e-9);
            EXPECT_GE(r.truncated_lhs + r.tail_bound, r.rhs - 1e-9) << k << " " << cap;
        }
    const auto one = euler_log_identity(1, 60);
    EXPECT_NEAR(one.rhs, 2 * std::log(2.0), 1e-12);
    EXPECT_NEAR(one.truncated_lhs, one.rhs, 1e-12);
    EXPECT_THROW(euler_log_identity(0, 4), DomainError);
    EXPECT_THROW(euler_log_identity(9, 4), DomainError);
}

TEST(MultirepdigitScan, Examples) {
    EXPECT_TRUE(scan_multirepdigit_multiperfect(10, 100, 3).empty());
    using T = std::tuple<unsigned long, std::uint64_t, unsigned long>;
    EXPECT_EQ(triples(scan_multirepdigit_multiperfect(3, 50, 3)), (std::vector<T>{{7, 1, 2}, {30, 1, 3}, {3, 2, 3}}));
    EXPECT_EQ(triples(scan_multirepdigit_multiperfect(2, 10, 2)), (std::vector<T>{{2, 1, 2}, {8, 2, 3}}));
    EXPECT_THROW(scan_multirepdigit_multiperfect(10, 10, 0), DomainError);
    EXPECT_THROW(scan_multirepdigit_multiperfect(10, 0, 2), DomainError);
}

TEST(MultirepdigitScan, AgreesWithNaiveSigmaAndWorkers) {
    for (std::uint64_t g : {2u, 4u, 6u}) {
        std::vector<std::tuple<unsigned long, std::uint64_t, unsigned long>> expect;
        for (std::uint64_t s = 1; s <= 3; ++s) {
            const std::uint64_t u = lucas_u(g, std::uint64_t{1} << s).get_ui();
            for (std::uint64_t d = 1; d <= 200; ++d) {
                const std::uint64_t v = d * u;
                const std::uint64_t sg = oracle::sigma(v);
                if (sg % v == 0 && sg >= 2 * v) expect.emplace_back(d, s, sg / v);
            }
        }
        EXPECT_EQ(triples(scan_multirepdigit_multiperfect(g, 200, 3, {}, 1)), expect) << g;
        EXPECT_EQ(triples(scan_multirepdigit_multiperfect(g, 200, 3, {}, 8)), expect) << g;
    }
}

TEST(MultirepdigitScan, UnfactoredLengthsAreUndetermined) {
    FactorEffort tiny;
    tiny.max_rho_iterations = 1;
    const auto hits = scan_multirepdigit_multiperfect(10, 3, 8, tiny);
    ASSERT_FALSE(hits.empty());
    EXPECT_EQ(hits.back().status, CandidateStatus::undetermined);
    EXPECT_EQ(hits.back().s, 8u);
}
