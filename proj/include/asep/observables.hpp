#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include "config.hpp"
#include "process.hpp"

namespace asep {

// Projection of a windowed permutation of Z: sites left of the window hold smaller values
// (ones), sites right of it larger values (zeros).
inline BinaryConfig project_window(const Permutation& z, int k) {
    return project_threshold(z, k).with_boundary({Fill::ones, Fill::zeros});
}

// h{z^k}(x) for a windowed permutation of Z (left ones, right zeros).
inline long zeta_height(const Permutation& z, int k, int x) {
    const Interval& iv = z.interval();
    if (x < iv.m) return -static_cast<long>(x);
    long h = -static_cast<long>(iv.m - 1);
    const int top = std::min(x, iv.n);
    for (int y = iv.m; y <= top; ++y) h += z(y) > k ? 1 : -1;
    if (x > iv.n) h += x - iv.n;
    return h;
}

// h{w^k}(x) for a permutation of a finite interval (left zeros, right ones).
inline long interval_height(const Permutation& w, int k, int x) {
    const Interval& iv = w.interval();
    if (x < iv.m) return x;
    long h = iv.m - 1;
    const int top = std::min(x, iv.n);
    for (int y = iv.m; y <= top; ++y) h += w(y) <= k ? -1 : 1;
    if (x > iv.n) h -= x - iv.n;
    return h;
}

inline void require_zeta_window(const Permutation& z, int N) {
    require(z.interval().contains(Interval(-1, N + 1)), ErrorKind::unsupported_window,
            "window must contain [-1, N+1]");
}

// D: h{z^k}(N-k) > N-k+b for every k in [0,N]
inline bool event_D(const ProcessState& zeta, int N, long b) {
    require(zeta.kind == ProcessKind::multi_species, ErrorKind::invalid_input, "event_D needs a multi-species state");
    const auto& z = zeta.perm();
    require_zeta_window(z, N);
    for (int k = 0; k <= N; ++k)
        if (zeta_height(z, k, N - k) <= N - k + b) return false;
    return true;
}

// h of the species-k projection of xi (multi-species on [1,N], or already a single-species config)
inline long species_height(const ProcessState& xi, int k, int x) {
    if (xi.kind == ProcessKind::multi_species) return interval_height(xi.perm(), k, x);
    return height(xi.config())(x);
}

// A^{a,b}: h{z^k}(N-k) > N-k+b, and h{xi^k}(N-k-a) < N-k-a or h{xi^k}(N-k+a) < N-k-a
inline bool event_A(const ProcessState& zeta, const ProcessState& xi, int N, int k, int a, long b) {
    require(zeta.kind == ProcessKind::multi_species, ErrorKind::invalid_input, "event_A needs a multi-species zeta");
    require_zeta_window(zeta.perm(), N);
    if (zeta_height(zeta.perm(), k, N - k) <= N - k + b) return false;
    const long target = N - k - a;
    return species_height(xi, k, N - k - a) < target || species_height(xi, k, N - k + a) < target;
}

// A single-species path on [t0, t1]: the starting configuration and every swap that happened.
struct SpeciesTrajectory {
    BinaryConfig start;
    double t0 = 0, t1 = 0;
    std::vector<std::pair<double, int>> swaps; // (time, edge), time-sorted
};

// B^{a,r}: side heights h(N-k-a) and h(N-k+a) both equal N-k-a at every integer offset i in
// [0, r], and the center height h(N-k) stays strictly below N-k on [t0, t1].
inline bool event_B(const SpeciesTrajectory& tr, int N, int k, int a) {
    BinaryConfig c = tr.start;
    const int center = N - k;
    const long side = N - k - a;
    auto h = [&](int x) { return height(c)(x); };
    long hc = h(center);
    if (hc >= center) return false;
    size_t next = 0;
    const double r = tr.t1 - tr.t0;
    const long offsets = static_cast<long>(std::floor(r + 1e-12));
    for (long i = 0; i <= offsets; ++i) {
        const double ti = tr.t0 + static_cast<double>(i);
        for (; next < tr.swaps.size() && tr.swaps[next].first <= ti; ++next) {
            int e = tr.swaps[next].second;
            c.swap_adjacent(e);
            if (e == center) {
                hc = h(center);
                if (hc >= center) return false;
            }
        }
        if (h(center - a) != side || h(center + a) != side) return false;
    }
    for (; next < tr.swaps.size(); ++next) {
        int e = tr.swaps[next].second;
        c.swap_adjacent(e);
        if (e == center && h(center) >= center) return false;
    }
    return true;
}

// Flags a windowed run whose relevant projections change at an outermost window site. If they
// never do, the projections for thresholds in [k_lo, k_hi] coincide with those of the process
// on Z driven by the same clocks: the first discrepancy needs such a change.
struct GuardBand {
    Interval window;
    int k_lo = std::numeric_limits<int>::min();
    int k_hi = std::numeric_limits<int>::max();
    bool violated = false;

    bool at_border(int edge) const { return edge == window.m || edge + 1 == window.n; }

    void multi_swap(int edge, int a, int b) {
        if (!at_border(edge)) return;
        if (std::min(a, b) <= k_hi && std::max(a, b) > k_lo) violated = true;
    }
    void single_swap(int edge) {
        if (at_border(edge)) violated = true;
    }
};

// Sites [1,N]: max over k of N-k-h{xi^k}(N-k) = 2 #{y <= N-k : xi(y) <= k}.
inline long max_deficit(const std::vector<int>& xi) {
    const int N = static_cast<int>(xi.size());
    std::vector<int> pos(N + 1), fen(N + 1, 0);
    for (int y = 1; y <= N; ++y) pos[xi[y - 1]] = y;
    long best = 0;
    for (int k = 1; k <= N; ++k) {
        for (int i = pos[k]; i <= N; i += i & -i) ++fen[i];
        long c = 0;
        for (int i = N - k; i > 0; i -= i & -i) c += fen[i];
        best = std::max(best, 2 * c);
    }
    return best;
}

inline long max_deficit(const Permutation& xi) {
    require(xi.interval().m == 1, ErrorKind::invalid_input, "max_deficit expects an interval [1,N]");
    return max_deficit(xi.values());
}

// min over k in [0,N] of h{z^k}(N-k) + k for a windowed permutation z of Z with window [L,R]
// containing [0,N]. values/offset: z(x) = values[x - L].
inline long min_height_statistic(const std::vector<int>& values, int L, int N) {
    const int W = static_cast<int>(values.size());
    const int R = L + W - 1;
    std::vector<int> pos(W), fen(W + 1, 0);
    for (int i = 0; i < W; ++i) pos[values[i] - L] = i + 1;
    auto add = [&](int v) {
        for (int i = pos[v - L]; i <= W; i += i & -i) ++fen[i];
    };
    auto prefix = [&](int x) { // #{y in [L,x] : z(y) <= current k}
        long c = 0;
        for (int i = std::min(x, R) - L + 1; i > 0; i -= i & -i) c += fen[i];
        return c;
    };
    for (int v = L; v <= -1; ++v) add(v);
    long best = std::numeric_limits<long>::max();
    for (int k = 0; k <= N; ++k) {
        add(k);
        const int x = N - k;
        const long below = prefix(x);
        const long above = static_cast<long>(x - L + 1) - below;
        const long h = -static_cast<long>(L - 1) + above - below;
        best = std::min(best, h + k);
    }
    return best;
}

inline long min_height_statistic(const Permutation& z, int N) {
    require_zeta_window(z, N);
    return min_height_statistic(z.values(), z.interval().m, N);
}

} // namespace asep
