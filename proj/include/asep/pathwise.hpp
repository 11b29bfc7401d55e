#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "observables.hpp"
#include "process.hpp"

namespace asep {

struct PathwiseReport {
    long events = 0;                  // clock events processed
    long swaps = 0;                   // swaps in any multi-species process
    long projection_mismatches = 0;   // single-species copies disagreeing with projections
    long ordering_violations = 0;     // h{xi^k} above h{lambda^k}, h{zeta^k} or h{xibar^k}
    int guard = 0;                    // zeta window [-guard, N + guard]
    int attempts = 0;
};

// Couples xi (identity), lambda (lambda0), xibar (Mallows, trial_seed(seed, 0)) on [1,N] with zeta
// (identity on a window of Z) under clocks trial_seed(seed, 1), together with every threshold
// projection evolved on its own as a single-species process. After each event it checks that the
// single-species copies still equal the projections and that h{xi^k} <= h{.^k} for the other three.
// A guard-band violation reruns the same clocks on a wider window.
inline PathwiseReport pathwise_check(int N, const Rational& q, double t, std::uint64_t seed,
                                     const Permutation& lambda0) {
    require(N >= 2, ErrorKind::invalid_input, "pathwise_check needs N >= 2");
    require(t > 0, ErrorKind::invalid_input, "pathwise_check needs t > 0");
    require(lambda0.interval() == Interval(1, N), ErrorKind::invalid_input, "lambda0 must be on [1,N]");
    std::mt19937_64 rng(trial_seed(seed, 0));
    const Permutation xibar0 = sample_mallows(make_mallows(Interval(1, N), q), rng);
    int G = default_guard(t);
    for (int attempt = 1;; ++attempt) {
        PathwiseReport rep;
        rep.guard = G;
        rep.attempts = attempt;
        const Interval W(-G, N + G);
        const ClockStream clocks = gen_clocks(Interval(W.m, W.n - 1), q, t, trial_seed(seed, 1));
        // processes 0..2 on [1,N] (xi, lambda, xibar), 3 is zeta on W
        std::vector<ProcessState> multi = {ProcessState::multi(Permutation::identity(Interval(1, N))),
                                           ProcessState::multi(lambda0), ProcessState::multi(xibar0),
                                           ProcessState::multi(Permutation::identity(W))};
        const int P = 4, K = N + 1;
        std::vector<ProcessState> single;
        for (int p = 0; p < P; ++p)
            for (int k = 0; k <= N; ++k)
                single.push_back(ProcessState::single(p == 3 ? project_window(multi[p].perm(), k)
                                                            : project_threshold(multi[p].perm(), k)));
        // heights on sites [W.m - 1, W.n]
        const int S0 = W.m - 1, S = W.n - S0 + 1;
        auto omega = [&](int p, int k, int y) -> int {
            const Interval& iv = multi[p].interval();
            if (y < iv.m) return p == 3 ? 1 : 0;
            if (y > iv.n) return p == 3 ? 0 : 1;
            return multi[p].perm()(y) <= k;
        };
        std::vector<long> H(static_cast<size_t>(P) * K * S);
        auto h = [&](int p, int k, int x) -> long& { return H[(static_cast<size_t>(p) * K + k) * S + (x - S0)]; };
        auto rebuild = [&](int p, int k) {
            long v = p == 3 ? -static_cast<long>(S0) : S0; // h(x) = -x (left ones) or x (left zeros)
            h(p, k, S0) = v;
            for (int x = S0 + 1; x <= W.n; ++x) h(p, k, x) = v += 1 - 2 * omega(p, k, x);
        };
        for (int p = 0; p < P; ++p)
            for (int k = 0; k <= N; ++k) rebuild(p, k);
        auto ordered_at = [&](int k, int x) {
            const long a = h(0, k, x);
            return a <= h(1, k, x) && a <= h(2, k, x) && a <= h(3, k, x);
        };
        auto full_check = [&] {
            for (int p = 0; p < P; ++p)
                for (int k = 0; k <= N; ++k) {
                    const auto want = p == 3 ? project_window(multi[p].perm(), k) : project_threshold(multi[p].perm(), k);
                    if (want.bits() != single[p * K + k].config().bits()) ++rep.projection_mismatches;
                    const auto hv = height(want);
                    for (int x = S0; x <= W.n; ++x)
                        if (hv(x) != h(p, k, x)) ++rep.projection_mismatches;
                }
            for (int k = 0; k <= N; ++k)
                for (int x = S0; x <= W.n; ++x) rep.ordering_violations += !ordered_at(k, x);
        };
        full_check();
        GuardBand guard{W, 0, N};
        for (const ClockEvent& e : clocks.merged()) {
            ++rep.events;
            const int x = e.edge;
            for (int p = 0; p < P; ++p) {
                const bool inside = x >= multi[p].interval().m && x + 1 <= multi[p].interval().n;
                if (!inside) continue;
                const int a = multi[p].perm()(x), b = multi[p].perm()(x + 1);
                const bool did = multi[p].apply(x, e.rate_q);
                rep.swaps += did;
                if (p == 3 && did) guard.multi_swap(x, a, b);
                for (int k = 0; k <= N; ++k) {
                    auto& c = single[p * K + k];
                    c.apply(x, e.rate_q);
                    if (c.config()(x) != omega(p, k, x) || c.config()(x + 1) != omega(p, k, x + 1))
                        ++rep.projection_mismatches;
                    if (did) h(p, k, x) = h(p, k, x - 1) + 1 - 2 * omega(p, k, x);
                }
            }
            for (int k = 0; k <= N; ++k) rep.ordering_violations += !ordered_at(k, x);
        }
        full_check();
        if (!guard.violated) return rep;
        require(attempt < 6, ErrorKind::invalid_sample, "guard band violated on every window tried");
        G *= 2;
    }
}

} // namespace asep
