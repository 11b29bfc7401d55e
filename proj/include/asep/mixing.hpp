#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "clocks.hpp"
#include "hecke.hpp"
#include "mallows.hpp"
#include "observables.hpp"
#include "process.hpp"
#include "times.hpp"
#include "tracy_widom.hpp"

namespace asep {

// Runs body(i) for i in [0, count); the CLI supplies a thread pool, everything else runs inline.
using ForEach = std::function<void(std::size_t, const std::function<void(std::size_t)>&)>;

inline void run_inline(std::size_t count, const std::function<void(std::size_t)>& body) {
    for (std::size_t i = 0; i < count; ++i) body(i);
}

struct Estimate {
    double value = 0;
    double se = 0;
};

inline Estimate proportion(std::size_t hits, std::size_t trials) {
    const double p = trials ? static_cast<double>(hits) / static_cast<double>(trials) : 0.0;
    return {p, trials ? std::sqrt(p * (1 - p) / static_cast<double>(trials)) : 0.0};
}

inline Estimate difference(const Estimate& a, const Estimate& b) {
    return {a.value - b.value, std::sqrt(a.se * a.se + b.se * b.se)};
}

inline double z_score(const Estimate& a, const Estimate& b) {
    const double se = std::sqrt(a.se * a.se + b.se * b.se);
    if (se == 0) return a.value == b.value ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), a.value - b.value);
    return (a.value - b.value) / se;
}

// TV between the law at time t (start lambda0) and the Mallows measure, by uniformization of the
// exact generator on S_N with rate bound (N-1)(1+q).
inline std::vector<double> exact_tv_table(int N, const Rational& q, const Permutation& lambda0,
                                          const std::vector<double>& times) {
    require(N >= 1, ErrorKind::invalid_input, "exact_tv needs N >= 1");
    require(N <= 7, ErrorKind::unsupported_size, "exact_tv supports N <= 7");
    require(lambda0.interval() == Interval(1, N), ErrorKind::invalid_input, "start must be a permutation of [1,N]");
    require_unit_q(q);
    const Interval iv(1, N);
    const auto g = SymmetricGroup::get(iv);
    const int S = g->order();
    const double qd = q.get_d();
    std::vector<double> pi(S);
    {
        const auto law = mallows_law(make_mallows(iv, q));
        for (const auto& [w, p] : law) pi[g->index(w)] = p.get_d();
    }
    const double Lam = (N - 1) * (1 + qd);
    auto step = [&](const std::vector<double>& p) { // p P with P = I + Q / Lam
        std::vector<double> out(p);
        if (N == 1) return out;
        for (int a = 0; a < S; ++a) {
            if (p[a] == 0) continue;
            for (int i = 1; i < N; ++i) {
                const double r = g->ascent(a, i) ? 1.0 : qd;
                const double m = p[a] * r / Lam;
                out[a] -= m;
                out[g->right_swap(a, i)] += m;
            }
        }
        return out;
    };
    auto advance = [&](std::vector<double> p, double dt) {
        if (dt <= 0 || N == 1) return p;
        const int chunks = std::max(1, static_cast<int>(std::ceil(Lam * dt / 20.0)));
        const double mu = Lam * dt / chunks;
        for (int c = 0; c < chunks; ++c) {
            std::vector<double> acc(S, 0.0), cur = p;
            double w = std::exp(-mu), mass = 0;
            for (int n = 0;; ++n) {
                for (int a = 0; a < S; ++a) acc[a] += w * cur[a];
                mass += w;
                if (n >= mu && 1 - mass < 1e-15) break;
                require(n < 10000, ErrorKind::numerical_failure, "uniformization series did not converge");
                cur = step(cur);
                w *= mu / (n + 1);
            }
            p = std::move(acc);
        }
        return p;
    };
    std::vector<double> order(times);
    for (double t : times) require(t >= 0, ErrorKind::invalid_input, "times must be nonnegative");
    std::vector<size_t> idx(times.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return times[a] < times[b]; });
    std::vector<double> p(S, 0.0), out(times.size());
    p[g->index(lambda0)] = 1;
    double now = 0;
    for (size_t i : idx) {
        p = advance(std::move(p), times[i] - now);
        now = times[i];
        double tv = 0;
        for (int a = 0; a < S; ++a) tv += std::fabs(p[a] - pi[a]);
        out[i] = std::min(1.0, 0.5 * tv);
    }
    return out;
}

inline double exact_tv(int N, const Rational& q, double t, const Permutation& lambda0) {
    return exact_tv_table(N, q, lambda0, {t}).front();
}

// P[coupling time > t] for each t; trial i uses coupling_time(..., trial_seed(seed, i)).
inline std::vector<Estimate> mc_tv_upper(int N, const Rational& q, const std::vector<double>& times, std::size_t trials,
                                         std::uint64_t seed, const Permutation& lambda0,
                                         const ForEach& for_each = run_inline) {
    require(trials >= 1, ErrorKind::invalid_input, "trials must be positive");
    const double horizon = times.empty() ? 0.0 : *std::max_element(times.begin(), times.end());
    std::vector<CensoredTime> T(trials);
    for_each(trials, [&](std::size_t i) {
        T[i] = horizon > 0 ? coupling_time(N, q, lambda0, trial_seed(seed, i), horizon)
                           : coupling_time(N, q, lambda0, trial_seed(seed, i), 0.0);
    });
    std::vector<Estimate> out;
    for (double t : times) {
        std::size_t hits = 0;
        for (const auto& c : T) hits += (c.censored || c.value > t);
        out.push_back(proportion(hits, trials));
    }
    return out;
}

inline std::vector<Estimate> mc_tv_upper(int N, const Rational& q, const std::vector<double>& times, std::size_t trials,
                                         std::uint64_t seed, const ForEach& for_each = run_inline) {
    return mc_tv_upper(N, q, times, trials, seed, Permutation::identity(Interval(1, N)), for_each);
}

inline int default_theta(int N) { return static_cast<int>(std::ceil(std::pow(std::log(static_cast<double>(N)), 2))); }

// Runs the multi-species process on [1,N] from start under clocks keyed by seed, calling
// observe(j, values) at each of the sorted times.
template <class Observe>
void run_interval_process(std::vector<int>& w, const Rational& q, std::uint64_t seed, const std::vector<double>& times,
                          Observe&& observe) {
    const int N = static_cast<int>(w.size());
    ClockSource src(q, seed);
    EventCursor cur(src, Interval(0, N - 2)); // 0-based sites
    for (std::size_t j = 0; j < times.size(); ++j) {
        cur.run(times[j], [&](const ClockEvent& e) {
            if (multi_swaps(w[e.edge], w[e.edge + 1], e.rate_q)) std::swap(w[e.edge], w[e.edge + 1]);
            return true;
        });
        observe(j, w);
    }
}

// P_dyn[stat >= theta] - P_Mallows[stat >= theta], stat = max_k (N-k - h{xi_t^k}(N-k)).
// Trial i: dynamics clocks trial_seed(seed, 2i), Mallows draw trial_seed(seed, 2i+1).
inline Estimate mc_tv_lower(int N, const Rational& q, double t, int theta, std::size_t trials, std::uint64_t seed,
                            const Permutation& lambda0, const ForEach& for_each = run_inline) {
    require(theta >= 1, ErrorKind::invalid_input, "theta must be >= 1");
    require(trials >= 1, ErrorKind::invalid_input, "trials must be positive");
    std::vector<std::uint8_t> dyn(trials), mal(trials);
    const auto mu = make_mallows(Interval(1, N), q);
    for_each(trials, [&](std::size_t i) {
        std::vector<int> w = lambda0.values();
        run_interval_process(w, q, trial_seed(seed, 2 * i), {t},
                             [&](std::size_t, const std::vector<int>& v) { dyn[i] = max_deficit(v) >= theta; });
        std::mt19937_64 rng(trial_seed(seed, 2 * i + 1));
        mal[i] = max_deficit(sample_mallows(mu, rng)) >= theta;
    });
    std::size_t a = 0, b = 0;
    for (std::size_t i = 0; i < trials; ++i) {
        a += dyn[i];
        b += mal[i];
    }
    return difference(proportion(a, trials), proportion(b, trials));
}

inline Estimate mc_tv_lower(int N, const Rational& q, double t, int theta, std::size_t trials, std::uint64_t seed,
                            const ForEach& for_each = run_inline) {
    return mc_tv_lower(N, q, t, theta, trials, seed, Permutation::identity(Interval(1, N)), for_each);
}

struct ExperimentPlan {
    int N = 0;
    Rational q;
    std::vector<double> taus;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    int theta = 0; // 0: default ceil(log(N)^2)
};

struct ProfilePoint {
    double tau = 0;
    double t = 0;
    Estimate tv_upper, tv_lower;
    double goe_reference = 0;
};

inline double cutoff_time(int N, double q, double tau) {
    return 2.0 / (1 - q) * (N + tau * std::cbrt(static_cast<double>(N)));
}

// Identity start. Trial i (s = trial_seed(seed, i)): stationary partner from trial_seed(s, 0),
// clocks trial_seed(s, 1), independent Mallows draw for the lower bound trial_seed(s, 2).
inline std::vector<ProfilePoint> profile_curve(const ExperimentPlan& plan, const ForEach& for_each = run_inline) {
    require(plan.N >= 2, ErrorKind::invalid_input, "profile needs N >= 2");
    require(plan.trials >= 1, ErrorKind::invalid_input, "trials must be positive");
    require(!plan.taus.empty(), ErrorKind::invalid_input, "empty tau grid");
    require_unit_q(plan.q);
    const int N = plan.N;
    const double qd = plan.q.get_d();
    const int theta = plan.theta > 0 ? plan.theta : default_theta(N);
    const std::size_t G = plan.taus.size();
    std::vector<double> times(G);
    for (std::size_t j = 0; j < G; ++j) {
        times[j] = cutoff_time(N, qd, plan.taus[j]);
        require(times[j] >= 0, ErrorKind::invalid_input, "tau gives a negative time");
    }
    std::vector<std::size_t> order(G);
    for (std::size_t j = 0; j < G; ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return times[a] < times[b]; });
    std::vector<double> sorted(G);
    for (std::size_t j = 0; j < G; ++j) sorted[j] = times[order[j]];

    const auto mu = make_mallows(Interval(1, N), plan.q);
    // per trial: for each grid time, not-yet-coupled and stat >= theta; then the Mallows indicator
    std::vector<std::uint8_t> uncoupled(plan.trials * G), dyn(plan.trials * G), mal(plan.trials);
    for_each(plan.trials, [&](std::size_t i) {
        const std::uint64_t s = trial_seed(plan.seed, i);
        std::mt19937_64 rng(trial_seed(s, 0));
        std::vector<int> b = sample_mallows(mu, rng).values();
        std::vector<int> a(N);
        for (int x = 0; x < N; ++x) a[x] = x + 1;
        long diff = 0;
        for (int x = 0; x < N; ++x) diff += a[x] != b[x];
        ClockSource src(plan.q, trial_seed(s, 1));
        EventCursor cur(src, Interval(0, N - 2));
        for (std::size_t j = 0; j < G; ++j) {
            cur.run(sorted[j], [&](const ClockEvent& e) {
                const int x = e.edge;
                if (diff == 0) {
                    if (multi_swaps(a[x], a[x + 1], e.rate_q)) std::swap(a[x], a[x + 1]);
                    return true;
                }
                const int before = (a[x] != b[x]) + (a[x + 1] != b[x + 1]);
                if (multi_swaps(a[x], a[x + 1], e.rate_q)) std::swap(a[x], a[x + 1]);
                if (multi_swaps(b[x], b[x + 1], e.rate_q)) std::swap(b[x], b[x + 1]);
                diff += (a[x] != b[x]) + (a[x + 1] != b[x + 1]) - before;
                return true;
            });
            uncoupled[i * G + order[j]] = diff != 0;
            dyn[i * G + order[j]] = max_deficit(a) >= theta;
        }
        std::mt19937_64 rng2(trial_seed(s, 2));
        mal[i] = max_deficit(sample_mallows(mu, rng2)) >= theta;
    });
    std::size_t mal_hits = 0;
    for (auto v : mal) mal_hits += v;
    const Estimate pm = proportion(mal_hits, plan.trials);
    std::vector<ProfilePoint> out;
    for (std::size_t j = 0; j < G; ++j) {
        std::size_t up = 0, dn = 0;
        for (std::size_t i = 0; i < plan.trials; ++i) {
            up += uncoupled[i * G + j];
            dn += dyn[i * G + j];
        }
        ProfilePoint p;
        p.tau = plan.taus[j];
        p.t = times[j];
        p.tv_upper = proportion(up, plan.trials);
        p.tv_lower = difference(proportion(dn, plan.trials), pm);
        p.goe_reference = 1 - GoeDistribution::instance().cdf_clamped(std::cbrt(4.0) * plan.taus[j]);
        out.push_back(p);
    }
    return out;
}

// ---- windowed processes on Z ----

// Multi-species process from the identity on window [L, R], run to t_end; swaps at an outermost
// site that change a projection with threshold in [k_lo, k_hi] mark the run invalid.
struct WindowedZeta {
    int L = 0, R = 0;
    std::vector<int> values; // values[x - L]
    bool valid = true;
    std::uint64_t events = 0;
};

inline WindowedZeta run_windowed_zeta(int L, int R, const Rational& q, std::uint64_t seed, double t_end, int k_lo,
                                      int k_hi) {
    WindowedZeta z;
    z.L = L;
    z.R = R;
    z.values.resize(R - L + 1);
    for (int x = L; x <= R; ++x) z.values[x - L] = x;
    if (t_end <= 0) return z;
    ClockSource src(q, seed);
    EventCursor cur(src, Interval(L, R - 1));
    int* v = z.values.data() - L;
    std::uint64_t count = 0;
    bool bad = false;
    cur.run(t_end, [&](const ClockEvent& e) {
        ++count;
        const int x = e.edge;
        const int a = v[x], b = v[x + 1];
        if (e.rate_q ? a > b : a < b) {
            v[x] = b;
            v[x + 1] = a;
            if ((x == L || x + 1 == R) && std::min(a, b) <= k_hi && std::max(a, b) > k_lo) bad = true;
        }
        return true;
    });
    z.events = count;
    z.valid = !bad;
    return z;
}

// Single-species process on window [L, R] (left fill ones, right fill zeros), from bits.
struct WindowedConfig {
    int L = 0;
    std::vector<std::uint8_t> bits;
    bool valid = true;
};

inline WindowedConfig run_windowed_config(int L, std::vector<std::uint8_t> bits, const Rational& q, std::uint64_t seed,
                                          double t_end) {
    WindowedConfig c{L, std::move(bits), true};
    const int R = L + static_cast<int>(c.bits.size()) - 1;
    if (t_end <= 0) return c;
    ClockSource src(q, seed);
    EventCursor cur(src, Interval(L, R - 1));
    std::uint8_t* v = c.bits.data() - L;
    bool bad = false;
    cur.run(t_end, [&](const ClockEvent& e) {
        const int x = e.edge;
        if (single_swaps(v[x], v[x + 1], e.rate_q)) {
            std::swap(v[x], v[x + 1]);
            if (x == L || x + 1 == R) bad = true;
        }
        return true;
    });
    c.valid = !bad;
    return c;
}

// h at x for a windowed single-species config with left fill ones
inline long window_height(const WindowedConfig& c, int x) {
    const int R = c.L + static_cast<int>(c.bits.size()) - 1;
    if (x < c.L) return -static_cast<long>(x);
    long h = -static_cast<long>(c.L - 1);
    for (int y = c.L; y <= std::min(x, R); ++y) h += c.bits[y - c.L] ? -1 : 1;
    if (x > R) h += x - R;
    return h;
}

// Multi-species process on Z from the identity, tracked only through its projections with
// thresholds in [k_lo, k_hi]. Values <= k_lo are ones for every such projection and values > k_hi
// zeros, so an edge joining two of the former or two of the latter never matters. Each slab
// simulates the edges from `margin` sites left of the leftmost value > k_lo to `margin` sites right
// of the rightmost value <= k_hi. A relevant swap on the outermost simulated edge voids the run.
struct LightConeZeta {
    int L = 0;               // values[i] is the value at site L + i
    std::vector<int> values; // sites left of L hold values <= k_lo, right of the end values > k_hi
    bool valid = true;
    std::uint64_t events = 0;
    int max_width = 0; // widest simulated edge range
};

inline LightConeZeta run_zeta_light_cone(const Rational& q, std::uint64_t seed, double t_end, int k_lo, int k_hi,
                                         int margin) {
    require(k_lo <= k_hi, ErrorKind::invalid_input, "empty threshold range");
    require(margin >= 1, ErrorKind::invalid_input, "margin must be positive");
    LightConeZeta z;
    int L = k_lo - 2 * margin, R = k_hi + 2 * margin; // stored sites, ζ_0(x) = x
    std::vector<int> vals(R - L + 1);
    for (int x = L; x <= R; ++x) vals[x - L] = x;
    auto grow = [&](int need_lo, int need_hi) {
        if (need_lo >= L && need_hi <= R) return;
        const int extra = std::max(64, (R - L) / 2);
        const int nL = std::min(L, need_lo - extra), nR = std::max(R, need_hi + extra);
        std::vector<int> nv(nR - nL + 1);
        for (int x = nL; x <= nR; ++x) nv[x - nL] = (x >= L && x <= R) ? vals[x - L] : x;
        vals.swap(nv);
        L = nL;
        R = nR;
    };
    int lo = k_lo + 1, hi = k_hi; // leftmost value > k_lo, rightmost value <= k_hi
    ClockSource src(q, seed);
    const double w = src.slab_width();
    std::vector<ClockEvent> raw, buf;
    std::vector<std::uint32_t> scratch;
    for (std::int64_t slab = 0; static_cast<double>(slab) * w < t_end; ++slab) {
        const int a = lo - margin, b = hi + margin; // edges [a, b]
        grow(a, b + 1);
        z.max_width = std::max(z.max_width, b - a + 1);
        raw.clear();
        for (int x = a; x <= b; ++x) src.edge_slab(x, slab, raw);
        sort_slab(raw, static_cast<double>(slab) * w, w, buf, scratch);
        int* v = vals.data() - L;
        for (const ClockEvent& e : buf) {
            if (e.time > t_end) break;
            ++z.events;
            const int x = e.edge, p = v[x], r = v[x + 1];
            if (e.rate_q ? p > r : p < r) {
                v[x] = r;
                v[x + 1] = p;
                if ((x == a || x == b) && std::min(p, r) <= k_hi && std::max(p, r) > k_lo) z.valid = false;
            }
        }
        if (!z.valid) break;
        // sites a and b + 1 kept their class, so both scans stop inside [a, b + 1]
        for (lo = a + 1; v[lo] <= k_lo; ++lo) {}
        for (hi = b; v[hi] > k_hi; --hi) {}
    }
    z.L = L;
    z.values = std::move(vals);
    return z;
}

struct MinHeightSample {
    double value = 0;
    long min_statistic = 0;
    int margin = 0;   // light-cone margin of the accepted run
    int attempts = 0; // runs needed (margin doubles after a voided run)
    std::uint64_t events = 0;
    int max_width = 0;
};

inline constexpr int kLightConeMargin = 24;

// -2^{2/3} N^{-1/3} min_k {h{z_t^k}(N-k) + k} + 2^{2/3} N^{2/3} + 2^{2/3} tau at t = 2(N + tau N^{1/3})/(1-q).
// A voided run is repeated with the same clocks and a doubled margin, so accepted samples are exact.
inline MinHeightSample min_height_sample(int N, const Rational& q, double tau, std::uint64_t seed,
                                    int margin = kLightConeMargin) {
    require(N >= 1, ErrorKind::invalid_input, "min_height_sample needs N >= 1");
    require_unit_q(q);
    const double t = cutoff_time(N, q.get_d(), tau);
    require(t >= 0, ErrorKind::invalid_input, "tau gives a negative time");
    MinHeightSample out;
    int M = margin > 0 ? margin : kLightConeMargin;
    for (int attempt = 1;; ++attempt) {
        auto z = run_zeta_light_cone(q, seed, t, 0, N, M);
        out.events += z.events;
        if (z.valid) {
            out.min_statistic = min_height_statistic(z.values, z.L, N);
            out.margin = M;
            out.attempts = attempt;
            out.max_width = z.max_width;
            const double c = std::cbrt(4.0), n3 = std::cbrt(static_cast<double>(N));
            out.value = -c / n3 * static_cast<double>(out.min_statistic) + c * n3 * n3 + c * tau;
            return out;
        }
        require(attempt < 8, ErrorKind::invalid_sample, "light-cone border crossed on every margin tried");
        M *= 2;
    }
}

struct ProbeResult {
    Estimate first, second;
    double z = 0;
    std::size_t reruns = 0; // trials that needed an enlarged window
};

namespace detail {

// Windowed run with doubling on guard violation; returns the final state.
inline WindowedZeta certified_zeta(int N, const Rational& q, std::uint64_t seed, double t, std::size_t& reruns) {
    int G = default_guard(t);
    for (int attempt = 0;; ++attempt) {
        auto z = run_windowed_zeta(-G, N + G, q, seed, t, 0, N);
        if (z.valid) return z;
        require(attempt < 8, ErrorKind::invalid_sample, "guard band violated on every window tried");
        ++reruns;
        G *= 2;
    }
}

inline WindowedConfig certified_config(int L, int R, const std::function<bool(int)>& init, const Rational& q,
                                       std::uint64_t seed, double t, std::size_t& reruns) {
    for (int attempt = 0;; ++attempt) {
        std::vector<std::uint8_t> bits(R - L + 1);
        for (int x = L; x <= R; ++x) bits[x - L] = init(x) ? 1 : 0;
        auto c = run_windowed_config(L, std::move(bits), q, seed, t);
        if (c.valid) return c;
        require(attempt < 8, ErrorKind::invalid_sample, "guard band violated on every window tried");
        ++reruns;
        const int w = R - L;
        L -= w / 2 + 1;
        R += w / 2 + 1;
    }
}

// h{step_t}(N-2k) > N+b for all k in [0,N]
inline bool step_event(int N, long b, const Rational& q, std::uint64_t seed, double t, std::size_t& reruns) {
    const int G = default_guard(t);
    auto c = certified_config(-N - G, N + G, [](int x) { return x <= 0; }, q, seed, t, reruns);
    for (int k = 0; k <= N; ++k)
        if (window_height(c, N - 2 * k) <= N + b) return false;
    return true;
}

} // namespace detail

// P[h{z_t^k}(N-k) > N-k+b for all k] vs P[h{z_t^0}(N-2k) > N+b for all k]; independent trials,
// first estimate on trial_seed(seed, 2i), second on trial_seed(seed, 2i+1).
inline ProbeResult shift_invariance_probe(int N, const Rational& q, long b, double t, std::size_t trials,
                                          std::uint64_t seed, const ForEach& for_each = run_inline) {
    require(trials >= 1, ErrorKind::invalid_input, "trials must be positive");
    std::vector<std::uint8_t> e1(trials), e2(trials);
    std::vector<std::size_t> rr(trials, 0);
    for_each(trials, [&](std::size_t i) {
        auto z = detail::certified_zeta(N, q, trial_seed(seed, 2 * i), t, rr[i]);
        Permutation w(Interval(z.L, z.L + static_cast<int>(z.values.size()) - 1), z.values);
        e1[i] = event_D(ProcessState::multi(w), N, b);
        e2[i] = detail::step_event(N, b, q, trial_seed(seed, 2 * i + 1), t, rr[i]);
    });
    ProbeResult r;
    std::size_t a = 0, c = 0;
    for (std::size_t i = 0; i < trials; ++i) {
        a += e1[i];
        c += e2[i];
        r.reruns += rr[i];
    }
    r.first = proportion(a, trials);
    r.second = proportion(c, trials);
    r.z = z_score(r.first, r.second);
    return r;
}

// P[h{z_t^0}(N-2k) > N+b for all k] vs P[h{eta^{N,*}_t}(0) > 2N+b].
inline ProbeResult skew_reversibility_probe(int N, const Rational& q, long b, double t, std::size_t trials,
                                            std::uint64_t seed, const ForEach& for_each = run_inline) {
    require(trials >= 1, ErrorKind::invalid_input, "trials must be positive");
    std::vector<std::uint8_t> e1(trials), e2(trials);
    std::vector<std::size_t> rr(trials, 0);
    const int G = default_guard(t);
    for_each(trials, [&](std::size_t i) {
        e1[i] = detail::step_event(N, b, q, trial_seed(seed, 2 * i), t, rr[i]);
        auto c = detail::certified_config(
            -N - G, N + G, [N](int x) { return x <= -N || (x <= N && (x + N) % 2 == 0); }, q,
            trial_seed(seed, 2 * i + 1), t, rr[i]);
        e2[i] = window_height(c, 0) > 2 * N + b;
    });
    ProbeResult r;
    std::size_t a = 0, c = 0;
    for (std::size_t i = 0; i < trials; ++i) {
        a += e1[i];
        c += e2[i];
        r.reruns += rr[i];
    }
    r.first = proportion(a, trials);
    r.second = proportion(c, trials);
    r.z = z_score(r.first, r.second);
    return r;
}

// Probability that h{z^k}(N-k) falls at least delta below its running maximum during [t, t+r].
// Only rate-q swaps on the edge (N-k, N-k+1) lower that height (by 2 each).
inline Estimate down_crossing_probe(int N, const Rational& q, int k, double t, double r, int delta, std::size_t trials,
                                    std::uint64_t seed, const ForEach& for_each = run_inline) {
    require(trials >= 1, ErrorKind::invalid_input, "trials must be positive");
    require(0 <= k && k <= N, ErrorKind::invalid_input, "species out of range");
    require(r >= 0 && t >= 0, ErrorKind::invalid_input, "times must be nonnegative");
    std::vector<std::uint8_t> hit(trials);
    for_each(trials, [&](std::size_t i) {
        const std::uint64_t s = trial_seed(seed, i);
        int G = default_guard(t + r);
        for (int attempt = 0;; ++attempt) {
            const int L = -G, R = N + G, c = N - k;
            std::vector<int> vals(R - L + 1);
            for (int x = L; x <= R; ++x) vals[x - L] = x;
            int* v = vals.data() - L;
            ClockSource src(q, s);
            EventCursor cur(src, Interval(L, R - 1));
            bool bad = false;
            auto apply = [&](const ClockEvent& e) {
                const int x = e.edge, a = v[x], b = v[x + 1];
                if (e.rate_q ? a > b : a < b) {
                    v[x] = b;
                    v[x + 1] = a;
                    if ((x == L || x + 1 == R) && std::min(a, b) <= k && std::max(a, b) > k) bad = true;
                    return true;
                }
                return false;
            };
            cur.run(t, [&](const ClockEvent& e) {
                apply(e);
                return true;
            });
            long h = 0; // h{z^k}(c), tracked from here on
            for (int y = L; y <= c; ++y) h += v[y] > k ? 1 : -1;
            h += -(L - 1);
            long peak = h;
            bool drop = false;
            cur.run(t + r, [&](const ClockEvent& e) {
                const int x = e.edge;
                const bool before = v[x] <= k;
                if (apply(e) && x == c) {
                    const bool after = v[x] <= k;
                    if (before != after) h += after ? -2 : 2;
                    peak = std::max(peak, h);
                    if (peak - h >= delta) drop = true;
                }
                return true;
            });
            if (!bad) {
                hit[i] = drop;
                break;
            }
            require(attempt < 8, ErrorKind::invalid_sample, "guard band violated on every window tried");
            G *= 2;
        }
    });
    std::size_t h = 0;
    for (auto v : hit) h += v;
    return proportion(h, trials);
}

// sup_x |F_n(x) - F(x)| for the empirical CDF F_n of samples
template <class Cdf>
double ks_distance(std::vector<double> samples, Cdf&& cdf) {
    require(!samples.empty(), ErrorKind::invalid_input, "ks_distance needs samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0;
    for (std::size_t i = 0; i < samples.size();) {
        std::size_t j = i;
        while (j < samples.size() && samples[j] == samples[i]) ++j; // ties form one jump
        const double F = cdf(samples[i]);
        d = std::max({d, std::fabs(F - i / n), std::fabs(j / n - F)});
        i = j;
    }
    return d;
}

} // namespace asep
