#include <gtest/gtest.h>

#include <cmath>

#include "asep/clocks.hpp"

using namespace asep;

namespace {

std::vector<ClockEvent> drain(const ClockSource& src, Interval edges, double t_end) {
    std::vector<ClockEvent> out;
    EventCursor cur(src, edges);
    cur.run(t_end, [&](const ClockEvent& e) {
        out.push_back(e);
        return true;
    });
    return out;
}

bool same(const ClockEvent& a, const ClockEvent& b) {
    return a.time == b.time && a.edge == b.edge && a.rate_q == b.rate_q;
}

} // namespace

TEST(Clocks, QZeroHasNoReversedClock) {
    const auto cs = gen_clocks(Interval(0, 20), Rational(0), 50.0, 3);
    for (const auto& v : cs.per_edge)
        for (const auto& e : v) EXPECT_FALSE(e.rate_q);
}

TEST(Clocks, PoissonCounts) {
    // one edge, horizon T, 10^4 replicas: mean count T for rate 1 and qT for rate q
    const double T = 10.0;
    const int reps = 10000;
    double n1 = 0, nq = 0;
    for (int r = 0; r < reps; ++r) {
        const auto cs = gen_clocks(Interval(0, 0), Rational(1, 2), T, trial_seed(99, r));
        for (const auto& e : cs.per_edge[0]) (e.rate_q ? nq : n1) += 1;
    }
    EXPECT_NEAR(n1 / reps, T, 3 * std::sqrt(T / reps));
    EXPECT_NEAR(nq / reps, T / 2, 3 * std::sqrt(T / 2 / reps));
}

TEST(Clocks, Deterministic) {
    const auto a = gen_clocks(Interval(-3, 7), Rational(1, 3), 12.5, 17);
    const auto b = gen_clocks(Interval(-3, 7), Rational(1, 3), 12.5, 17);
    ASSERT_EQ(a.per_edge.size(), b.per_edge.size());
    for (size_t i = 0; i < a.per_edge.size(); ++i) {
        ASSERT_EQ(a.per_edge[i].size(), b.per_edge[i].size());
        for (size_t j = 0; j < a.per_edge[i].size(); ++j) EXPECT_TRUE(same(a.per_edge[i][j], b.per_edge[i][j]));
    }
}

TEST(Clocks, WindowInvariance) {
    // an edge sees the same events whatever range of edges or horizon is requested
    const ClockSource src(Rational(2, 3), 5);
    const auto small = drain(src, Interval(0, 5), 30.0);
    const auto big = drain(src, Interval(-40, 40), 30.0);
    std::vector<ClockEvent> restricted;
    for (const auto& e : big)
        if (e.edge >= 0 && e.edge <= 5) restricted.push_back(e);
    ASSERT_EQ(small.size(), restricted.size());
    for (size_t i = 0; i < small.size(); ++i) EXPECT_TRUE(same(small[i], restricted[i]));

    const auto shorter = gen_clocks(Interval(0, 5), Rational(2, 3), 13.0, 5).merged();
    for (size_t i = 0; i < shorter.size(); ++i) EXPECT_TRUE(same(shorter[i], small[i]));
    EXPECT_GT(small[shorter.size()].time, 13.0);
}

TEST(Clocks, CursorOrderAndStops) {
    const ClockSource src(Rational(1, 2), 8);
    const auto all = drain(src, Interval(0, 30), 20.0);
    for (size_t i = 1; i < all.size(); ++i) EXPECT_TRUE(event_before(all[i - 1], all[i]));
    EXPECT_LE(all.back().time, 20.0);

    // stopping early and resuming yields the same sequence
    EventCursor cur(src, Interval(0, 30));
    std::vector<ClockEvent> got;
    size_t stop_at = all.size() / 3;
    EXPECT_FALSE(cur.run(20.0, [&](const ClockEvent& e) {
        got.push_back(e);
        return got.size() < stop_at;
    }));
    cur.run(7.0, [&](const ClockEvent& e) {
        got.push_back(e);
        return true;
    });
    EXPECT_GE(cur.now(), got.back().time);
    EXPECT_TRUE(cur.run(20.0, [&](const ClockEvent& e) {
        got.push_back(e);
        return true;
    }));
    ASSERT_EQ(got.size(), all.size());
    for (size_t i = 0; i < all.size(); ++i) EXPECT_TRUE(same(got[i], all[i]));
}

TEST(Clocks, StreamMatchesCursor) {
    const auto cs = gen_clocks(Interval(2, 9), Rational(1, 4), 17.3, 21);
    const auto merged = cs.merged();
    const auto cur = drain(ClockSource(Rational(1, 4), 21), Interval(2, 9), 17.3);
    ASSERT_EQ(merged.size(), cur.size());
    for (size_t i = 0; i < cur.size(); ++i) EXPECT_TRUE(same(merged[i], cur[i]));
}

TEST(Clocks, RejectsBadArguments) {
    EXPECT_THROW(gen_clocks(Interval(0, 3), Rational(3, 2), 1.0, 1), Error);
    EXPECT_THROW(gen_clocks(Interval(0, 3), Rational(1, 2), 0.0, 1), Error);
    EXPECT_THROW(ClockSource(Rational(1, 2), 1, 0.0), Error);
}
