#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "config.hpp"
#include "rational.hpp"
#include "rng.hpp"

namespace asep {

struct MallowsMeasure {
    Interval interval;
    Rational q;
};

struct ProjectedMeasure {
    Interval interval;
    int k = 0;
    Rational q;
};

inline MallowsMeasure make_mallows(Interval iv, const Rational& q) {
    require(iv.m <= iv.n, ErrorKind::invalid_input, "empty interval");
    require_unit_q(q);
    return {iv, q};
}

inline ProjectedMeasure make_projected(Interval iv, int k, const Rational& q) {
    require(iv.m <= iv.n, ErrorKind::invalid_input, "empty interval");
    require_unit_q(q);
    require(0 <= k && k <= iv.size(), ErrorKind::invalid_input, "particle count out of range");
    return {iv, k, q};
}

// [i]_q = 1 + q + ... + q^{i-1}
inline Rational q_integer(int i, const Rational& q) {
    Rational s = 0, p = 1;
    for (int j = 0; j < i; ++j) {
        s += p;
        p *= q;
    }
    return s;
}

// Z_{m,n} = prod_{i=1}^{n-m+1} (1-q)/(1-q^i) = 1 / prod [i]_q
inline Rational partition_Z(int m, int n, const Rational& q) {
    require(m <= n, ErrorKind::invalid_input, "partition_Z needs m <= n");
    require_unit_q(q);
    Rational prod = 1;
    for (int i = 1; i <= n - m + 1; ++i) prod *= q_integer(i, q);
    return 1 / prod;
}

// Coefficients of sum over k-particle configs on n sites of x^{energy}.
// Sites are added on the left: a new particle pairs with every hole already present.
inline std::vector<BigInt> q_binomial_coefficients(int n, int k) {
    require(0 <= k && k <= n, ErrorKind::invalid_input, "q_binomial needs 0 <= k <= n");
    // g[j] = polynomial for the current number of sites i with j particles
    std::vector<std::vector<BigInt>> g(k + 1);
    g[0] = {BigInt(1)};
    for (int i = 1; i <= n; ++i) {
        for (int j = std::min(i, k); j >= 1; --j) {
            const int holes = i - j;
            if (holes < 0) continue;
            std::vector<BigInt> next = (j <= i - 1) ? g[j] : std::vector<BigInt>{};
            const auto& src = g[j - 1];
            if (!src.empty()) {
                if (next.size() < src.size() + holes) next.resize(src.size() + holes);
                for (size_t a = 0; a < src.size(); ++a) next[a + holes] += src[a];
            }
            g[j] = std::move(next);
        }
    }
    return g[k];
}

inline Rational eval_poly(const std::vector<BigInt>& c, const Rational& q) {
    Rational s = 0;
    for (size_t a = c.size(); a-- > 0;) s = s * q + Rational(c[a]);
    return s;
}

inline Rational q_binomial(int n, int k, const Rational& q) { return eval_poly(q_binomial_coefficients(n, k), q); }

inline Rational mallows_prob(const MallowsMeasure& mu, const Permutation& w) {
    require(w.interval() == mu.interval, ErrorKind::invalid_input, "mallows_prob: interval mismatch");
    return pow(mu.q, static_cast<unsigned long>(energy_perm(w))) * partition_Z(mu.interval.m, mu.interval.n, mu.q);
}

inline Rational projected_prob(const ProjectedMeasure& mu, const BinaryConfig& w) {
    require(w.interval() == mu.interval, ErrorKind::invalid_input, "projected_prob: interval mismatch");
    if (w.particles() != mu.k) return 0;
    return pow(mu.q, static_cast<unsigned long>(energy_config(w))) / q_binomial(mu.interval.size(), mu.k, mu.q);
}

// Exact law of the energy under the projected measure; keys with zero mass are omitted.
inline std::map<long, Rational> energy_distribution(const ProjectedMeasure& mu) {
    const int L = mu.interval.size();
    require(L <= 200, ErrorKind::unsupported_size, "energy_distribution supports at most 200 sites");
    auto c = q_binomial_coefficients(L, mu.k);
    std::map<long, Rational> out;
    Rational total = eval_poly(c, mu.q);
    Rational p = 1;
    for (size_t a = 0; a < c.size(); ++a) {
        if (c[a] != 0 && p != 0) out[static_cast<long>(a)] = Rational(c[a]) * p / total;
        p *= mu.q;
    }
    return out;
}

// Exact tails P[energy > a] for a = 0 .. max energy.
inline std::vector<Rational> energy_tails(const std::map<long, Rational>& dist) {
    long top = dist.empty() ? 0 : dist.rbegin()->first;
    std::vector<Rational> tail(top + 1, Rational(0));
    Rational acc = 0;
    for (long a = top; a >= 0; --a) {
        tail[a] = acc;
        if (auto it = dist.find(a); it != dist.end()) acc += it->second;
    }
    return tail;
}

// C = q^{1/2} prod_{i>=1} (1 - q^{i/2})^{-1}
inline double energy_tail_constant(double q) {
    double r = std::sqrt(q), c = r, p = r;
    for (int i = 1; i < 10000 && p > 1e-18; ++i, p *= r) c /= (1 - p);
    return c;
}

// Rational lower bounds of C q^{a/2} for a = 0 .. a_max. q^{1/2} is replaced by a rational
// r <= sqrt(q), the product is truncated (every factor exceeds 1), and every intermediate value
// is rounded down to a multiple of 10^-digits, so each step can only lower the result.
inline std::vector<Rational> energy_tail_bounds_lower(const Rational& q, long a_max, int digits = 60,
                                                      int factors = 400) {
    require(q > 0 && q < 1, ErrorKind::invalid_input, "tail bound needs 0 < q < 1");
    require(a_max >= 0, ErrorKind::invalid_input, "a_max must be >= 0");
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    auto floor_to_grid = [&](const Rational& x) {
        BigInt n = x.get_num() * scale, f;
        mpz_fdiv_q(f.get_mpz_t(), n.get_mpz_t(), x.get_den().get_mpz_t());
        Rational out(f, scale);
        out.canonicalize();
        return out;
    };
    BigInt radicand = q.get_num() * q.get_den() * scale * scale, root;
    mpz_sqrt(root.get_mpz_t(), radicand.get_mpz_t());
    Rational r(root, q.get_den() * scale);
    r.canonicalize();
    Rational c = r, p = r;
    for (int i = 1; i <= factors; ++i) {
        c = floor_to_grid(c / (1 - p));
        p = floor_to_grid(p * r);
    }
    std::vector<Rational> out;
    for (long a = 0; a <= a_max; ++a) {
        out.push_back(c);
        c = floor_to_grid(c * r);
    }
    return out;
}

inline Rational energy_tail_bound_lower(const Rational& q, long a) { return energy_tail_bounds_lower(q, a).back(); }

// Exact law of the Mallows measure by enumeration (at most 8 sites).
inline std::map<Permutation, Rational> mallows_law(const MallowsMeasure& mu) {
    require(mu.interval.size() <= 8, ErrorKind::unsupported_size, "enumeration limited to 8 sites");
    std::map<Permutation, Rational> out;
    auto id = Permutation::identity(mu.interval);
    std::vector<int> v = id.values();
    Rational Z = partition_Z(mu.interval.m, mu.interval.n, mu.q);
    do {
        Permutation w(mu.interval, v);
        out.emplace(w, pow(mu.q, static_cast<unsigned long>(energy_perm(w))) * Z);
    } while (std::next_permutation(v.begin(), v.end()));
    return out;
}

// Draw p in {0..v-1} with P(p) proportional to q^p.
template <class Gen>
int truncated_geometric(double q, int v, Gen& rng) {
    if (q <= 0 || v <= 1) return 0;
    double u = uniform01(rng);
    double qv = std::pow(q, v);
    int p = static_cast<int>(std::floor(std::log1p(-u * (1 - qv)) / std::log(q)));
    return std::clamp(p, 0, v - 1);
}

// Sequential insertion: value v (in increasing order) is inserted with p_v smaller values to its
// left, p_v truncated geometric. Positions are resolved from the largest value down, each value
// taking the p_v-th free slot (Fenwick tree search), O(n log n).
template <class Gen>
Permutation sample_mallows(const MallowsMeasure& mu, Gen& rng) {
    const int L = mu.interval.size();
    const double q = mu.q.get_d();
    std::vector<int> p(L + 1);
    for (int v = 1; v <= L; ++v) p[v] = truncated_geometric(q, v, rng);
    std::vector<int> fen(L + 1, 0);
    for (int i = 1; i <= L; ++i) {
        ++fen[i];
        if (int j = i + (i & -i); j <= L) fen[j] += fen[i];
    }
    int top = 1;
    while (top * 2 <= L) top *= 2;
    std::vector<int> vals(L);
    for (int v = L; v >= 1; --v) {
        // smallest index with prefix count p[v] + 1
        int need = p[v] + 1, pos = 0;
        for (int step = top; step > 0; step >>= 1) {
            if (pos + step <= L && fen[pos + step] < need) {
                pos += step;
                need -= fen[pos];
            }
        }
        int slot = pos + 1;
        vals[slot - 1] = mu.interval.m + v - 1;
        for (int i = slot; i <= L; i += i & -i) --fen[i];
    }
    return Permutation(mu.interval, std::move(vals));
}

// Left-to-right sampling with the table B(r, j) = sum over j particles on r sites of q^energy.
template <class Gen>
BinaryConfig sample_projected(const ProjectedMeasure& mu, Gen& rng) {
    const int L = mu.interval.size(), K = mu.k;
    const double q = mu.q.get_d();
    std::vector<double> qp(L + 1);
    qp[0] = 1;
    for (int i = 1; i <= L; ++i) qp[i] = qp[i - 1] * q;
    const int W = K + 1;
    std::vector<double> B(static_cast<size_t>(L + 1) * W, 0.0);
    auto at = [&](int r, int j) -> double& { return B[static_cast<size_t>(r) * W + j]; };
    at(0, 0) = 1;
    for (int r = 1; r <= L; ++r)
        for (int j = 0; j <= std::min(r, K); ++j)
            at(r, j) = (j > 0 ? qp[r - j] * at(r - 1, j - 1) : 0.0) + (j <= r - 1 ? at(r - 1, j) : 0.0);
    std::vector<std::uint8_t> bits(L, 0);
    int j = K;
    for (int i = 0; i < L && j > 0; ++i) {
        int r = L - i;
        if (j == r) {
            for (; i < L; ++i) bits[i] = 1;
            break;
        }
        double pp = qp[r - j] * at(r - 1, j - 1) / at(r, j);
        if (uniform01(rng) < pp) {
            bits[i] = 1;
            --j;
        }
    }
    return BinaryConfig(mu.interval, std::move(bits), kIntervalBoundary);
}

} // namespace asep
