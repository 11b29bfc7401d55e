#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include "asep/mallows.hpp"

using namespace asep;

namespace {

const Rational kHalf(1, 2);

// sum over all configurations with k ones on n sites of q^energy, by enumeration
Rational brute_q_binomial(int n, int k, const Rational& q) {
    if (n == 0) return 1;
    Rational s = 0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) != k) continue;
        std::vector<std::uint8_t> b(n);
        for (int i = 0; i < n; ++i) b[i] = (mask >> i) & 1;
        s += pow(q, static_cast<unsigned long>(energy_config(BinaryConfig(Interval(1, n), b, kIntervalBoundary))));
    }
    return s;
}

} // namespace

TEST(PartitionFunction, SmallCases) {
    const Rational q(1, 3);
    EXPECT_EQ(partition_Z(1, 1, q), Rational(1));
    EXPECT_EQ(partition_Z(1, 2, q), 1 / (1 + q));
    EXPECT_EQ(partition_Z(1, 3, q), 1 / ((1 + q) * (1 + q + q * q)));
}

TEST(PartitionFunction, MatchesEnumeration) {
    for (const Rational& q : {Rational(0), Rational(1, 4), Rational(2, 3)})
        for (int n = 1; n <= 6; ++n) {
            Rational total = 0;
            for (const auto& [w, p] : mallows_law(make_mallows(Interval(1, n), q))) total += p;
            EXPECT_EQ(total, 1);
            std::vector<int> v(n);
            for (int i = 0; i < n; ++i) v[i] = i + 1;
            Rational s = 0;
            do s += pow(q, static_cast<unsigned long>(energy_perm(Permutation(Interval(1, n), v))));
            while (std::next_permutation(v.begin(), v.end()));
            EXPECT_EQ(partition_Z(1, n, q), 1 / s);
        }
}

TEST(QBinomial, HandValues) {
    const Rational q(2, 5);
    EXPECT_EQ(q_binomial(5, 0, q), Rational(1));
    EXPECT_EQ(q_binomial(2, 1, q), 1 + q);
    EXPECT_EQ(q_binomial(4, 2, q), 1 + q + 2 * q * q + q * q * q + q * q * q * q);
}

TEST(QBinomial, MatchesEnumeration) {
    const Rational q(3, 7);
    for (int n = 0; n <= 10; ++n)
        for (int k = 0; k <= n; ++k) EXPECT_EQ(q_binomial(n, k, q), brute_q_binomial(n, k, q)) << n << "," << k;
}

TEST(MallowsProb, HandValues) {
    const Rational q(1, 3);
    const auto mu2 = make_mallows(Interval(1, 2), q);
    EXPECT_EQ(mallows_prob(mu2, Permutation::reversal(Interval(1, 2))), 1 / (1 + q));
    EXPECT_EQ(mallows_prob(mu2, Permutation::identity(Interval(1, 2))), q / (1 + q));
    EXPECT_EQ(mallows_prob(make_mallows(Interval(1, 3), q), Permutation::identity(Interval(1, 3))),
              q * q * q / ((1 + q) * (1 + q + q * q)));
}

TEST(ProjectedProb, HandValues) {
    const Rational q(1, 3);
    const auto mu = make_projected(Interval(1, 2), 1, q);
    EXPECT_EQ(projected_prob(mu, BinaryConfig(Interval(1, 2), {0, 1}, kIntervalBoundary)), 1 / (1 + q));
    EXPECT_EQ(projected_prob(mu, BinaryConfig(Interval(1, 2), {1, 0}, kIntervalBoundary)), q / (1 + q));
    EXPECT_EQ(projected_prob(mu, BinaryConfig(Interval(1, 2), {1, 1}, kIntervalBoundary)), 0);
}

TEST(ProjectedProb, IsImageOfMallows) {
    // the threshold projection of the Mallows measure is the projected measure
    const Rational q(2, 5);
    const Interval iv(1, 5);
    for (int k = 0; k <= 5; ++k) {
        std::map<std::vector<std::uint8_t>, Rational> image;
        for (const auto& [w, p] : mallows_law(make_mallows(iv, q))) image[project_threshold(w, k).bits()] += p;
        for (const auto& [b, p] : image)
            EXPECT_EQ(projected_prob(make_projected(iv, k, q), BinaryConfig(iv, b, kIntervalBoundary)), p);
    }
}

TEST(EnergyDistribution, TwoSites) {
    const Rational q(1, 3);
    const auto d = energy_distribution(make_projected(Interval(1, 2), 1, q));
    ASSERT_EQ(d.size(), 2u);
    EXPECT_EQ(d.at(0), 1 / (1 + q));
    EXPECT_EQ(d.at(1), q / (1 + q));
}

TEST(EnergyDistribution, SumsToOne) {
    for (int k : {0, 3, 10, 17}) {
        Rational s = 0;
        for (const auto& [a, p] : energy_distribution(make_projected(Interval(1, 20), k, Rational(3, 4)))) s += p;
        EXPECT_EQ(s, 1);
    }
    EXPECT_THROW(energy_distribution(make_projected(Interval(1, 201), 3, kHalf)), Error);
}

TEST(EnergyTail, BelowGeometricBound) {
    // exact tails against a rational lower bound of C q^{a/2}
    const auto tails = energy_tails(energy_distribution(make_projected(Interval(1, 20), 10, kHalf)));
    const auto bounds = energy_tail_bounds_lower(kHalf, static_cast<long>(tails.size()) - 1);
    for (size_t a = 0; a < tails.size(); ++a) EXPECT_LE(tails[a], bounds[a]) << "a=" << a;
    EXPECT_GT(tails[10], 0);
    const double C = energy_tail_constant(0.5);
    EXPECT_NEAR(energy_tail_bound_lower(kHalf, 0).get_d(), C, 1e-12);
    EXPECT_LT(energy_tail_bound_lower(kHalf, 0).get_d(), C);
}

TEST(SampleMallows, Deterministic) {
    const auto mu = make_mallows(Interval(1, 30), Rational(7, 10));
    std::mt19937_64 a(42), b(42);
    EXPECT_EQ(sample_mallows(mu, a), sample_mallows(mu, b));
}

TEST(SampleMallows, QZeroGivesReversal) {
    const auto mu = make_mallows(Interval(-3, 9), Rational(0));
    std::mt19937_64 rng(1);
    for (int i = 0; i < 20; ++i) EXPECT_EQ(sample_mallows(mu, rng), Permutation::reversal(Interval(-3, 9)));
}

TEST(SampleMallows, EmpiricalLawOnS4) {
    const auto mu = make_mallows(Interval(1, 4), kHalf);
    std::mt19937_64 rng(2024);
    std::map<Permutation, long> counts;
    const long n = 1000000;
    for (long i = 0; i < n; ++i) ++counts[sample_mallows(mu, rng)];
    double tv = 0;
    for (const auto& [w, p] : mallows_law(mu)) tv += std::fabs(static_cast<double>(counts[w]) / n - p.get_d());
    EXPECT_LT(tv / 2, 0.01);
}

TEST(SampleProjected, Extremes) {
    std::mt19937_64 rng(9);
    const auto zero = sample_projected(make_projected(Interval(1, 6), 0, kHalf), rng);
    const auto full = sample_projected(make_projected(Interval(1, 6), 6, kHalf), rng);
    for (int x = 1; x <= 6; ++x) {
        EXPECT_EQ(zero(x), 0);
        EXPECT_EQ(full(x), 1);
    }
}

TEST(SampleProjected, EmpiricalLaw) {
    const Interval iv(1, 4);
    const auto mu = make_projected(iv, 2, kHalf);
    std::mt19937_64 rng(77);
    std::map<std::vector<std::uint8_t>, long> counts;
    const long n = 1000000;
    for (long i = 0; i < n; ++i) ++counts[sample_projected(mu, rng).bits()];
    EXPECT_EQ(counts.size(), 6u);
    double tv = 0;
    for (const auto& [b, c] : counts)
        tv += std::fabs(static_cast<double>(c) / n - projected_prob(mu, BinaryConfig(iv, b, kIntervalBoundary)).get_d());
    EXPECT_LT(tv / 2, 0.01);
}

TEST(TruncatedGeometric, Law) {
    std::mt19937_64 rng(5);
    const int v = 4;
    const double q = 0.6;
    std::vector<long> c(v, 0);
    const long n = 400000;
    for (long i = 0; i < n; ++i) ++c[truncated_geometric(q, v, rng)];
    double Z = 0;
    for (int p = 0; p < v; ++p) Z += std::pow(q, p);
    for (int p = 0; p < v; ++p) {
        const double e = std::pow(q, p) / Z;
        EXPECT_NEAR(static_cast<double>(c[p]) / n, e, 5 * std::sqrt(e * (1 - e) / n));
    }
}
