#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "mallows.hpp"
#include "rational.hpp"

namespace asep {

// Group elements compose as wv = v∘w. T_s T_w = T_{w∘s} when w(i) < w(i+1) (the energy drops),
// otherwise (1-q) T_w + q T_{w∘s}; w∘s_i swaps the entries at positions i and i+1.
class SymmetricGroup {
public:
    explicit SymmetricGroup(Interval iv) : iv_(iv) {
        require(iv.m <= iv.n, ErrorKind::invalid_input, "empty interval");
        require(iv.size() <= 7, ErrorKind::unsupported_size, "Hecke algebra limited to 7 sites");
        std::vector<int> v = Permutation::identity(iv).values();
        do {
            perms_.emplace_back(iv, v);
        } while (std::next_permutation(v.begin(), v.end()));
        const int L = iv.size(), G = order();
        swap_.assign(static_cast<size_t>(G) * std::max(L - 1, 1), 0);
        inv_.resize(G);
        words_.resize(G);
        for (int a = 0; a < G; ++a) {
            for (int i = iv.m; i < iv.n; ++i) {
                Permutation w = perms_[a];
                w.swap_adjacent(i);
                swap_[static_cast<size_t>(a) * (L - 1) + (i - iv.m)] = index(w);
            }
            inv_[a] = index(perms_[a].inverse());
            // peel descents: w -> w∘s_i; T_w = T_{g[0]} T_{g[1]} ... T_{g.back()}
            Permutation u = perms_[a];
            while (true) {
                int d = iv.m;
                while (d < iv.n && u(d) < u(d + 1)) ++d;
                if (d == iv.n) break;
                words_[a].push_back(d);
                u.swap_adjacent(d);
            }
        }
    }

    static std::shared_ptr<const SymmetricGroup> get(Interval iv) {
        static std::mutex mu;
        static std::map<Interval, std::shared_ptr<const SymmetricGroup>> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto& slot = cache[iv];
        if (!slot) slot = std::make_shared<const SymmetricGroup>(iv);
        return slot;
    }

    const Interval& interval() const { return iv_; }
    int order() const { return static_cast<int>(perms_.size()); }
    const Permutation& perm(int a) const { return perms_[a]; }

    // lexicographic rank of the one-line notation
    int index(const Permutation& w) const {
        const int L = iv_.size();
        int r = 0;
        for (int i = 0; i < L; ++i) {
            int smaller = 0;
            for (int j = i + 1; j < L; ++j) smaller += w.values()[j] < w.values()[i];
            r = r * (L - i) + smaller;
        }
        return r;
    }

    int right_swap(int a, int i) const { return swap_[static_cast<size_t>(a) * (iv_.size() - 1) + (i - iv_.m)]; }
    bool ascent(int a, int i) const { return perms_[a](i) < perms_[a](i + 1); }
    int inverse(int a) const { return inv_[a]; }
    const std::vector<int>& reduced_word(int a) const { return words_[a]; }
    int identity() const { return 0; }

private:
    Interval iv_;
    std::vector<Permutation> perms_;
    std::vector<int> swap_;
    std::vector<int> inv_;
    std::vector<std::vector<int>> words_;
};

inline double to_double(const Rational& r) { return r.get_d(); }
inline double to_double(double d) { return d; }

template <class C>
class HeckeElement {
public:
    HeckeElement(std::shared_ptr<const SymmetricGroup> g, C q) : g_(std::move(g)), q_(q), c_(g_->order(), C(0)) {}
    HeckeElement(Interval iv, C q) : HeckeElement(SymmetricGroup::get(iv), q) {}

    static HeckeElement basis(Interval iv, C q, const Permutation& w) {
        HeckeElement e(iv, q);
        e.c_[e.g_->index(w)] = C(1);
        return e;
    }
    static HeckeElement unit(Interval iv, C q) {
        HeckeElement e(iv, q);
        e.c_[0] = C(1);
        return e;
    }

    const SymmetricGroup& group() const { return *g_; }
    const std::shared_ptr<const SymmetricGroup>& group_ptr() const { return g_; }
    const Interval& interval() const { return g_->interval(); }
    const C& q() const { return q_; }
    const C& coeff(int a) const { return c_[a]; }
    C& coeff(int a) { return c_[a]; }
    const C& coeff(const Permutation& w) const { return c_[g_->index(w)]; }
    const std::vector<C>& dense() const { return c_; }

    // nonzero terms in canonical (lexicographic) order
    std::vector<std::pair<Permutation, C>> terms() const {
        std::vector<std::pair<Permutation, C>> out;
        for (int a = 0; a < g_->order(); ++a)
            if (c_[a] != C(0)) out.emplace_back(g_->perm(a), c_[a]);
        return out;
    }

    C coefficient_sum() const {
        C s(0);
        for (const auto& x : c_) s += x;
        return s;
    }

    bool is_probability() const {
        for (const auto& x : c_)
            if (x < C(0)) return false;
        return coefficient_sum() == C(1);
    }

    HeckeElement& operator+=(const HeckeElement& o) {
        check_same(o);
        for (size_t a = 0; a < c_.size(); ++a) c_[a] += o.c_[a];
        return *this;
    }
    HeckeElement& operator-=(const HeckeElement& o) {
        check_same(o);
        for (size_t a = 0; a < c_.size(); ++a) c_[a] -= o.c_[a];
        return *this;
    }
    HeckeElement& operator*=(const C& s) {
        for (auto& x : c_) x *= s;
        return *this;
    }
    friend HeckeElement operator+(HeckeElement a, const HeckeElement& b) { return a += b; }
    friend HeckeElement operator-(HeckeElement a, const HeckeElement& b) { return a -= b; }
    friend HeckeElement operator*(HeckeElement a, const C& s) { return a *= s; }

    bool operator==(const HeckeElement& o) const {
        return g_->interval() == o.interval() && q_ == o.q_ && c_ == o.c_;
    }

    double l1_distance(const HeckeElement& o) const {
        check_same(o);
        double d = 0;
        for (size_t a = 0; a < c_.size(); ++a) d += std::abs(to_double(c_[a]) - to_double(o.c_[a]));
        return d;
    }

    void check_same(const HeckeElement& o) const {
        require(interval() == o.interval(), ErrorKind::invalid_input, "Hecke elements on different intervals");
        require(q_ == o.q_, ErrorKind::invalid_input, "Hecke elements with different q");
    }

private:
    std::shared_ptr<const SymmetricGroup> g_;
    C q_;
    std::vector<C> c_;
};

using ExactHecke = HeckeElement<Rational>;

// T_{s_i} · A
template <class C>
HeckeElement<C> left_mul_generator(int i, const HeckeElement<C>& A) {
    const auto& g = A.group();
    require(i >= g.interval().m && i < g.interval().n, ErrorKind::invalid_input,
            "generator s_" + std::to_string(i) + " not on the element's interval");
    HeckeElement<C> out(A.group_ptr(), A.q());
    const C one_minus_q = C(1) - A.q();
    for (int a = 0; a < g.order(); ++a) {
        const C& c = A.coeff(a);
        if (c == C(0)) continue;
        const int b = g.right_swap(a, i);
        if (g.ascent(a, i)) {
            out.coeff(b) += c;
        } else {
            out.coeff(a) += one_minus_q * c;
            out.coeff(b) += A.q() * c;
        }
    }
    return out;
}

// T_w · B by the reduced word of w
template <class C>
HeckeElement<C> basis_times(int w, const HeckeElement<C>& B) {
    const auto& word = B.group().reduced_word(w);
    HeckeElement<C> cur = B;
    for (auto it = word.rbegin(); it != word.rend(); ++it) cur = left_mul_generator(*it, cur);
    return cur;
}

template <class C>
HeckeElement<C> multiply(const HeckeElement<C>& A, const HeckeElement<C>& B) {
    A.check_same(B);
    HeckeElement<C> out(A.group_ptr(), A.q());
    for (int a = 0; a < A.group().order(); ++a) {
        const C& c = A.coeff(a);
        if (c == C(0)) continue;
        auto term = basis_times(a, B);
        term *= c;
        out += term;
    }
    return out;
}

template <class C>
HeckeElement<C> involution(const HeckeElement<C>& A) {
    HeckeElement<C> out(A.group_ptr(), A.q());
    for (int a = 0; a < A.group().order(); ++a) out.coeff(A.group().inverse(a)) = A.coeff(a);
    return out;
}

// Mallows element of the sub-interval sub, embedded in the algebra of iv (identity outside sub).
inline ExactHecke mallows_element_on(Interval iv, Interval sub, const Rational& q) {
    require(iv.contains(sub), ErrorKind::invalid_input, "sub-interval outside the algebra's interval");
    require_unit_q(q);
    ExactHecke out(iv, q);
    const auto& g = out.group();
    for (const auto& [v, p] : mallows_law(make_mallows(sub, q))) {
        std::vector<int> vals = Permutation::identity(iv).values();
        for (int x = sub.m; x <= sub.n; ++x) vals[x - iv.m] = v(x);
        out.coeff(g.index(Permutation(iv, vals))) = p;
    }
    return out;
}

inline ExactHecke mallows_element(int m, int n, const Rational& q) {
    require(n - m + 1 <= 7, ErrorKind::unsupported_size, "Mallows element limited to 7 sites");
    return mallows_element_on(Interval(m, n), Interval(m, n), q);
}

// That = (n-m)^{-1} sum_i T_{s_i}
template <class C>
HeckeElement<C> shuffle_generator(Interval iv, C q) {
    HeckeElement<C> out(iv, q);
    const auto& g = out.group();
    if (iv.size() == 1) {
        out.coeff(0) = C(1);
        return out;
    }
    const C w = C(1) / C(iv.n - iv.m);
    for (int i = iv.m; i < iv.n; ++i) {
        std::vector<int> vals = Permutation::identity(iv).values();
        std::swap(vals[i - iv.m], vals[i + 1 - iv.m]);
        out.coeff(g.index(Permutation(iv, vals))) += w;
    }
    return out;
}

// That^0 .. That^K, exact
inline std::vector<ExactHecke> shuffle_series_terms(Interval iv, const Rational& q, int K) {
    std::vector<ExactHecke> out;
    out.push_back(ExactHecke::unit(iv, q));
    const ExactHecke T = shuffle_generator<Rational>(iv, q);
    for (int i = 1; i <= K; ++i) out.push_back(multiply(T, out.back()));
    return out;
}

struct ShuffleElement {
    HeckeElement<double> element; // renormalized truncated series
    int order = 0;                // truncation order K
    double defect = 0;            // un-normalized Poisson tail mass dropped
};

// W(t) = e^{-(n-m)t} sum_i ((n-m)t)^i / i! That^i, truncated at the first K with tail < eps.
inline ShuffleElement shuffle_element(int m, int n, const Rational& q, double t, double eps = 1e-12) {
    require(t >= 0, ErrorKind::invalid_input, "shuffle_element needs t >= 0");
    require_unit_q(q);
    const Interval iv = checked_interval(m, n);
    const double qd = q.get_d();
    ShuffleElement out{HeckeElement<double>::unit(iv, qd), 0, 0};
    if (iv.size() == 1 || t == 0) return out;
    const double lam = (n - m) * t;
    const HeckeElement<double> T = shuffle_generator<double>(iv, qd);
    // weights in log space to stay finite for large lam
    HeckeElement<double> power = HeckeElement<double>::unit(iv, qd), acc(iv, qd);
    double mass = 0;
    for (int i = 0;; ++i) {
        const double w = std::exp(-lam + i * std::log(lam) - std::lgamma(i + 1.0));
        acc += power * w;
        mass += w;
        if (1 - mass < eps && i >= lam) {
            out.order = i;
            break;
        }
        require(i < 100000, ErrorKind::numerical_failure, "shuffle_element: series did not converge");
        power = multiply(T, power);
    }
    out.defect = std::max(0.0, 1 - mass);
    acc *= 1 / mass;
    out.element = acc;
    return out;
}

// phi∘v on sub, w elsewhere; phi the increasing bijection from sub onto w(sub).
inline Permutation increasing_recompose(const Permutation& w, Interval sub, const Permutation& v) {
    require(w.interval().contains(sub), ErrorKind::invalid_input, "sub-interval outside the permutation's interval");
    require(v.interval() == sub, ErrorKind::invalid_input, "v must be a permutation of the sub-interval");
    std::vector<int> image;
    for (int x = sub.m; x <= sub.n; ++x) image.push_back(w(x));
    std::sort(image.begin(), image.end());
    std::vector<int> vals = w.values();
    for (int x = sub.m; x <= sub.n; ++x) vals[x - w.interval().m] = image[v(x) - sub.m];
    return Permutation(w.interval(), std::move(vals));
}

// "one-line-permutation : coefficient" per nonzero term, lexicographic order
template <class C>
std::string dump(const HeckeElement<C>& A) {
    std::ostringstream os;
    for (const auto& [w, c] : A.terms()) {
        os << format_permutation(w) << " : ";
        if constexpr (std::is_same_v<C, Rational>) os << c.get_str();
        else os << c;
        os << '\n';
    }
    return os.str();
}

struct HeckeCheck {
    std::string name;
    long cases = 0;
    long failures = 0;
    bool passed() const { return failures == 0; }
};

// Exhaustive exact checks on the algebra of iv: associativity on basis triples, 𝔦 as an
// anti-homomorphism, absorption by the Mallows element, and the two exchange identities
// That^i M_A = 𝔦(M_A That^i), That^i M_A M_B = 𝔦(M_B M_A That^i) for every sub-interval pair, i <= K.
inline std::vector<HeckeCheck> verify_hecke(Interval iv, const Rational& q, int K) {
    require(iv.size() <= 5, ErrorKind::unsupported_size, "verify_hecke limited to 5 sites");
    require(K >= 0, ErrorKind::invalid_input, "series order must be >= 0");
    require_unit_q(q);
    const auto g = SymmetricGroup::get(iv);
    const int G = g->order();
    std::vector<ExactHecke> T;
    for (int a = 0; a < G; ++a) T.push_back(ExactHecke::basis(iv, q, g->perm(a)));
    std::vector<HeckeCheck> out;
    auto check = [&](const std::string& name, auto&& body) {
        HeckeCheck c{name};
        body([&](bool ok) {
            ++c.cases;
            c.failures += !ok;
        });
        out.push_back(c);
    };
    check("associativity", [&](auto rec) {
        for (int u = 0; u < G; ++u)
            for (int v = 0; v < G; ++v) {
                const auto uv = multiply(T[u], T[v]);
                for (int w = 0; w < G; ++w) rec(multiply(uv, T[w]) == multiply(T[u], multiply(T[v], T[w])));
            }
    });
    check("involution-anti-homomorphism", [&](auto rec) {
        for (int u = 0; u < G; ++u)
            for (int v = 0; v < G; ++v)
                rec(involution(multiply(T[u], T[v])) == multiply(involution(T[v]), involution(T[u])));
    });
    const ExactHecke M = mallows_element_on(iv, iv, q);
    check("generator-absorbs-mallows", [&](auto rec) {
        for (int i = iv.m; i < iv.n; ++i) rec(left_mul_generator(i, M) == M);
    });
    check("mallows-idempotent", [&](auto rec) { rec(multiply(M, M) == M); });
    check("mallows-involution-fixed", [&](auto rec) { rec(involution(M) == M); });
    const auto series = shuffle_series_terms(iv, q, K);
    check("shuffle-involution-fixed", [&](auto rec) {
        for (const auto& P : series) rec(involution(P) == P);
    });
    std::vector<ExactHecke> subs;
    for (int a = iv.m; a <= iv.n; ++a)
        for (int b = a; b <= iv.n; ++b) subs.push_back(mallows_element_on(iv, Interval(a, b), q));
    check("exchange-one-block", [&](auto rec) {
        for (const auto& P : series)
            for (const auto& A : subs) rec(multiply(P, A) == involution(multiply(A, P)));
    });
    check("exchange-two-blocks", [&](auto rec) {
        for (const auto& P : series)
            for (const auto& A : subs)
                for (const auto& B : subs)
                    rec(multiply(multiply(P, A), B) == involution(multiply(multiply(B, A), P)));
    });
    return out;
}

} // namespace asep
