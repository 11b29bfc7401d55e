#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "clocks.hpp"
#include "mallows.hpp"
#include "process.hpp"

namespace asep {

struct CensoredTime {
    double value = 0;
    bool censored = false;
};

// inf{t : lambda_t = xibar_t} where xibar_0 ~ Mallows and both follow the same clocks.
// The Mallows draw uses trial_seed(seed, 0), the clocks trial_seed(seed, 1).
inline CensoredTime coupling_time(int N, const Rational& q, const Permutation& lambda0, std::uint64_t seed,
                                  double horizon) {
    require(lambda0.interval() == Interval(1, N), ErrorKind::invalid_input, "coupling_time: start must be on [1,N]");
    std::mt19937_64 rng(trial_seed(seed, 0));
    Permutation xbar = sample_mallows(make_mallows(Interval(1, N), q), rng);
    std::vector<int> a = lambda0.values(), b = xbar.values();
    a.insert(a.begin(), 0);
    b.insert(b.begin(), 0);
    long diff = 0;
    for (int i = 1; i <= N; ++i) diff += a[i] != b[i];
    if (diff == 0) return {0, false};
    ClockSource src(q, trial_seed(seed, 1));
    EventCursor cur(src, Interval(1, N - 1));
    double hit = 0;
    bool reached = cur.run(horizon, [&](const ClockEvent& e) {
        const int x = e.edge;
        const int before = (a[x] != b[x]) + (a[x + 1] != b[x + 1]);
        if (multi_swaps(a[x], a[x + 1], e.rate_q)) std::swap(a[x], a[x + 1]);
        if (multi_swaps(b[x], b[x + 1], e.rate_q)) std::swap(b[x], b[x + 1]);
        diff += (a[x] != b[x]) + (a[x + 1] != b[x + 1]) - before;
        if (diff == 0) {
            hit = e.time;
            return false;
        }
        return true;
    });
    if (reached) return {horizon, true};
    return {hit, false};
}

// First time eta^{n,m} reaches 1[x >= n+1]. Only edges between the leftmost particle and the
// rightmost hole can act, so the process is simulated on that growing region with thinning:
// proposals at total rate (edges)(1+q), edge uniform, clock type rate-q w.p. q/(1+q).
inline CensoredTime hitting_time_H(int n, int m, const Rational& q, std::uint64_t seed, double horizon) {
    require(m >= 1, ErrorKind::invalid_input, "hitting_time_H needs m >= 1");
    require_unit_q(q);
    const double qd = q.get_d();
    std::mt19937_64 rng(seed);
    int lo = n - m - 64, hi = n + m + 64; // stored sites [lo, hi]
    std::vector<std::uint8_t> bits(hi - lo + 1);
    auto init = [&](int x) { return ((x >= n - m + 1 && x <= n) || x >= n + m + 1) ? 1 : 0; };
    for (int x = lo; x <= hi; ++x) bits[x - lo] = init(x);
    int pmin = n - m + 1, hmax = n + m; // leftmost particle, rightmost hole
    auto grow = [&](int need_lo, int need_hi) {
        if (need_lo >= lo && need_hi <= hi) return;
        int nlo = std::min(lo, need_lo - (hi - lo)), nhi = std::max(hi, need_hi + (hi - lo));
        std::vector<std::uint8_t> nb(nhi - nlo + 1);
        for (int x = nlo; x <= nhi; ++x) nb[x - nlo] = (x >= lo && x <= hi) ? bits[x - lo] : (x > hi ? 1 : 0);
        bits.swap(nb);
        lo = nlo;
        hi = nhi;
    };
    double t = 0;
    std::exponential_distribution<double> expo(1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double pq = qd / (1 + qd);
    while (hmax >= pmin) {
        const int first = pmin - 1, edges = hmax - pmin + 2;
        t += expo(rng) / (edges * (1 + qd));
        if (t > horizon) return {horizon, true};
        std::uniform_int_distribution<int> pick(0, edges - 1);
        const int x = first + pick(rng);
        const bool rq = unif(rng) < pq;
        grow(x - 1, x + 2);
        auto& l = bits[x - lo];
        auto& r = bits[x + 1 - lo];
        if (!single_swaps(l, r, rq)) continue;
        std::swap(l, r);
        if (bits[x - lo] == 1) pmin = std::min(pmin, x);
        if (bits[x + 1 - lo] == 0) hmax = std::max(hmax, x + 1);
        while (bits[pmin - lo] == 0) ++pmin;
        while (bits[hmax - lo] == 1) --hmax;
    }
    return {t, false};
}

// Oriented swap process (q = 0) on [1,N] from the identity: time until the reversal.
// Proposals arrive at rate N-1 on a uniform edge; the absorbing time is the sum of the
// proposal gaps, i.e. Gamma(number of proposals, N-1).
inline double osp_absorbing_time(int N, std::uint64_t seed) {
    require(N >= 1, ErrorKind::invalid_input, "osp_absorbing_time needs N >= 1");
    if (N == 1) return 0;
    std::mt19937_64 rng(seed);
    std::vector<int> w(N);
    for (int i = 0; i < N; ++i) w[i] = i + 1;
    long ascents = N - 1;
    std::uniform_int_distribution<int> pick(0, N - 2);
    long proposals = 0;
    while (ascents > 0) {
        ++proposals;
        const int x = pick(rng);
        if (w[x] < w[x + 1]) {
            std::swap(w[x], w[x + 1]);
            ascents -= 1;
            if (x > 0) ascents += (w[x - 1] < w[x]) - (w[x - 1] < w[x + 1]);
            if (x + 2 < N) ascents += (w[x + 1] < w[x + 2]) - (w[x] < w[x + 2]);
        }
    }
    std::gamma_distribution<double> gam(static_cast<double>(proposals), 1.0 / (N - 1));
    return gam(rng);
}

} // namespace asep
