#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

#include "asep/observables.hpp"

using namespace asep;

namespace {

ProcessState zeta_identity(int L, int R) { return ProcessState::multi(Permutation::identity(Interval(L, R))); }

Permutation random_window(int L, int R, std::mt19937_64& rng) {
    std::vector<int> v(R - L + 1);
    std::iota(v.begin(), v.end(), L);
    std::shuffle(v.begin(), v.end(), rng);
    return Permutation(Interval(L, R), v);
}

} // namespace

TEST(Observables, HeightsAgreeWithProjectionHeights) {
    std::mt19937_64 rng(3);
    const auto z = random_window(-4, 9, rng);
    for (int k = -2; k <= 7; ++k)
        for (int x = -8; x <= 14; ++x) EXPECT_EQ(zeta_height(z, k, x), height(project_window(z, k))(x));
    const auto w = random_window(1, 8, rng);
    for (int k = 0; k <= 8; ++k)
        for (int x = -3; x <= 12; ++x) EXPECT_EQ(interval_height(w, k, x), height(project_threshold(w, k))(x));
}

TEST(Observables, EventDAtTimeZero) {
    // identity zeta, N = 2: heights at N-k are 2, -1, 0 for k = 0, 1, 2, so D needs b < -2
    const auto z = zeta_identity(-6, 6);
    EXPECT_FALSE(event_D(z, 2, -1));
    EXPECT_FALSE(event_D(z, 2, -2));
    EXPECT_TRUE(event_D(z, 2, -3));
    EXPECT_TRUE(event_D(z, 2, -5));
    EXPECT_TRUE(event_D(z, 2, -7));
    EXPECT_THROW(event_D(zeta_identity(0, 6), 2, -3), Error);
}

TEST(Observables, EventAAtTimeZero) {
    const auto z = zeta_identity(-6, 10);
    const auto xi = ProcessState::multi(Permutation::identity(Interval(1, 4)));
    EXPECT_TRUE(event_A(z, xi, 4, 1, 1, -3));
    EXPECT_FALSE(event_A(z, xi, 4, 1, 1, 0)); // zeta side fails: h(3) = 1
    const auto ground = ProcessState::multi(Permutation::reversal(Interval(1, 4)));
    EXPECT_FALSE(event_A(z, ground, 4, 1, 1, -3));
    // a single-species xi gives the same answer as its multi-species parent
    EXPECT_TRUE(event_A(z, ProcessState::single(project_threshold(xi.perm(), 1)), 4, 1, 1, -3));
}

TEST(Observables, EventBHandTrajectories) {
    // N = 4, k = 1, a = 2: center 3, sides 1 and 5 at height 1
    const BinaryConfig start(Interval(1, 4), {0, 1, 0, 0});
    SpeciesTrajectory tr{start, 0.0, 2.0, {}};
    EXPECT_TRUE(event_B(tr, 4, 1, 2));
    tr.swaps = {{0.5, 2}};
    EXPECT_TRUE(event_B(tr, 4, 1, 2));
    tr.swaps = {{0.5, 2}, {1.5, 3}}; // center reaches 3
    EXPECT_FALSE(event_B(tr, 4, 1, 2));
    tr.swaps = {{0.5, 1}}; // side 1 drops to -1 before offset 1
    EXPECT_FALSE(event_B(tr, 4, 1, 2));
    SpeciesTrajectory late{start, 0.0, 1.0, {{1.5, 1}}}; // after the last offset only the center counts
    EXPECT_TRUE(event_B(late, 4, 1, 2));
    EXPECT_FALSE(event_B(SpeciesTrajectory{BinaryConfig(Interval(1, 4), {0, 0, 0, 1}), 0.0, 1.0, {}}, 4, 1, 2));
}

TEST(Observables, MinHeightStatisticAtTimeZero) {
    for (int N = 1; N <= 12; ++N) EXPECT_EQ(min_height_statistic(Permutation::identity(Interval(-3, N + 3)), N), N % 2);
}

TEST(Observables, MinHeightStatisticMatchesBruteForce) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int N = 1 + static_cast<int>(rng() % 10);
        const int L = -1 - static_cast<int>(rng() % 5), R = N + 1 + static_cast<int>(rng() % 5);
        const auto z = random_window(L, R, rng);
        long best = std::numeric_limits<long>::max();
        for (int k = 0; k <= N; ++k) best = std::min(best, zeta_height(z, k, N - k) + k);
        EXPECT_EQ(min_height_statistic(z, N), best);
    }
}

TEST(Observables, MaxDeficitMatchesBruteForce) {
    std::mt19937_64 rng(12);
    EXPECT_EQ(max_deficit(Permutation::reversal(Interval(1, 6))), 0);
    for (int trial = 0; trial < 200; ++trial) {
        const int N = 1 + static_cast<int>(rng() % 10);
        const auto w = random_window(1, N, rng);
        long best = 0;
        for (int k = 0; k <= N; ++k) best = std::max(best, N - k - interval_height(w, k, N - k));
        EXPECT_EQ(max_deficit(w), best);
    }
}

TEST(Observables, GuardBandFlagsOnlyRelevantBorderSwaps) {
    GuardBand g{Interval(-5, 5), 0, 3};
    g.multi_swap(0, 1, 2);
    EXPECT_FALSE(g.violated);
    g.multi_swap(-5, 7, 9); // both values high
    EXPECT_FALSE(g.violated);
    g.multi_swap(4, -3, -1); // both values low
    EXPECT_FALSE(g.violated);
    g.multi_swap(4, 2, 8);
    EXPECT_TRUE(g.violated);
}
