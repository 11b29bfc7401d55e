#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"

namespace asep {

struct Interval {
    int m = 1;
    int n = 1;

    constexpr Interval() = default;
    constexpr Interval(int m_, int n_) : m(m_), n(n_) {}

    int size() const { return n - m + 1; }
    bool contains(int x) const { return m <= x && x <= n; }
    bool contains(const Interval& o) const { return m <= o.m && o.n <= n; }
    auto operator<=>(const Interval&) const = default;
};

inline Interval checked_interval(int m, int n) {
    require(m <= n, ErrorKind::invalid_input,
            "interval needs m <= n, got [" + std::to_string(m) + "," + std::to_string(n) + "]");
    return {m, n};
}

// Bijection of [m,n] onto itself, stored densely with an inverse cache.
class Permutation {
public:
    Permutation() : iv_(1, 0) {}

    Permutation(Interval iv, std::vector<int> values) : iv_(iv), vals_(std::move(values)) {
        require(iv.m <= iv.n, ErrorKind::invalid_input, "empty interval");
        require(static_cast<int>(vals_.size()) == iv.size(), ErrorKind::invalid_input,
                "permutation length does not match interval");
        inv_.assign(vals_.size(), iv.m - 1);
        for (int i = 0; i < iv.size(); ++i) {
            int v = vals_[i];
            require(iv.contains(v) && inv_[v - iv.m] == iv.m - 1, ErrorKind::invalid_input,
                    "values are not a bijection of the interval");
            inv_[v - iv.m] = iv.m + i;
        }
    }

    static Permutation identity(Interval iv) {
        std::vector<int> v(iv.size());
        for (int i = 0; i < iv.size(); ++i) v[i] = iv.m + i;
        return Permutation(iv, std::move(v));
    }

    static Permutation reversal(Interval iv) {
        std::vector<int> v(iv.size());
        for (int i = 0; i < iv.size(); ++i) v[i] = iv.n - i;
        return Permutation(iv, std::move(v));
    }

    const Interval& interval() const { return iv_; }
    int size() const { return static_cast<int>(vals_.size()); }
    int operator()(int x) const { return vals_[x - iv_.m]; }
    int position_of(int v) const { return inv_[v - iv_.m]; }
    const std::vector<int>& values() const { return vals_; }

    Permutation inverse() const {
        Permutation p;
        p.iv_ = iv_;
        p.vals_ = inv_;
        p.inv_ = vals_;
        return p;
    }

    // swaps the values at sites x and x+1
    void swap_adjacent(int x) {
        int i = x - iv_.m;
        std::swap(vals_[i], vals_[i + 1]);
        inv_[vals_[i] - iv_.m] = x;
        inv_[vals_[i + 1] - iv_.m] = x + 1;
    }

    bool operator==(const Permutation& o) const { return iv_ == o.iv_ && vals_ == o.vals_; }
    std::strong_ordering operator<=>(const Permutation& o) const {
        if (auto c = iv_ <=> o.iv_; c != 0) return c;
        return vals_ <=> o.vals_;
    }

private:
    Interval iv_;
    std::vector<int> vals_;
    std::vector<int> inv_;
};

// (f ∘ g)(x) = f(g(x))
inline Permutation compose(const Permutation& f, const Permutation& g) {
    require(f.interval() == g.interval(), ErrorKind::invalid_input, "compose: interval mismatch");
    std::vector<int> v(g.size());
    for (int i = 0; i < g.size(); ++i) v[i] = f(g.values()[i]);
    return Permutation(g.interval(), std::move(v));
}

enum class Fill : std::uint8_t { zeros = 0, ones = 1 };

struct BoundaryMode {
    Fill left = Fill::zeros;
    Fill right = Fill::ones;
    auto operator<=>(const BoundaryMode&) const = default;
};

inline constexpr BoundaryMode kIntervalBoundary{Fill::zeros, Fill::ones};

class BinaryConfig {
public:
    BinaryConfig() : iv_(1, 0) {}
    BinaryConfig(Interval iv, std::vector<std::uint8_t> bits, BoundaryMode b = kIntervalBoundary)
        : iv_(iv), bits_(std::move(bits)), bnd_(b) {
        require(iv.m <= iv.n, ErrorKind::invalid_input, "empty interval");
        require(static_cast<int>(bits_.size()) == iv.size(), ErrorKind::invalid_input,
                "config length does not match interval");
        for (auto v : bits_) require(v <= 1, ErrorKind::invalid_input, "config entries must be 0 or 1");
    }

    const Interval& interval() const { return iv_; }
    const BoundaryMode& boundary() const { return bnd_; }
    const std::vector<std::uint8_t>& bits() const { return bits_; }
    int size() const { return static_cast<int>(bits_.size()); }

    // value at any site of Z, using the fills outside the interval
    int operator()(int x) const {
        if (x < iv_.m) return static_cast<int>(bnd_.left);
        if (x > iv_.n) return static_cast<int>(bnd_.right);
        return bits_[x - iv_.m];
    }

    int particles() const { return static_cast<int>(std::count(bits_.begin(), bits_.end(), 1)); }

    void swap_adjacent(int x) { std::swap(bits_[x - iv_.m], bits_[x + 1 - iv_.m]); }

    BinaryConfig with_boundary(BoundaryMode b) const { return BinaryConfig(iv_, bits_, b); }

    bool operator==(const BinaryConfig&) const = default;

private:
    Interval iv_;
    std::vector<std::uint8_t> bits_;
    BoundaryMode bnd_;
};

// Integer function with unit steps: anchored at anchor_x, explicit increments over
// (anchor_x, anchor_x + increments.size()], linear with the declared slopes outside.
class HeightFunction {
public:
    HeightFunction(int anchor_x, long anchor_value, std::vector<std::int8_t> increments, int left_slope,
                   int right_slope)
        : x0_(anchor_x), inc_(std::move(increments)), ls_(left_slope), rs_(right_slope) {
        require((ls_ == 1 || ls_ == -1) && (rs_ == 1 || rs_ == -1), ErrorKind::invalid_input,
                "asymptotic slopes must be +-1");
        vals_.resize(inc_.size() + 1);
        vals_[0] = anchor_value;
        for (size_t i = 0; i < inc_.size(); ++i) {
            require(inc_[i] == 1 || inc_[i] == -1, ErrorKind::invalid_input, "height increments must be +-1");
            vals_[i + 1] = vals_[i] + inc_[i];
        }
    }

    int anchor_x() const { return x0_; }
    long anchor_value() const { return vals_.front(); }
    int window_end() const { return x0_ + static_cast<int>(inc_.size()); }
    const std::vector<std::int8_t>& increments() const { return inc_; }
    int left_slope() const { return ls_; }
    int right_slope() const { return rs_; }

    long operator()(int x) const {
        if (x <= x0_) return vals_.front() + static_cast<long>(ls_) * (x - x0_);
        int end = window_end();
        if (x >= end) return vals_.back() + static_cast<long>(rs_) * (x - end);
        return vals_[x - x0_];
    }

private:
    int x0_;
    std::vector<std::int8_t> inc_;
    std::vector<long> vals_;
    int ls_, rs_;
};

// number of increasing pairs i<j, w(i)<w(j)
inline long energy_perm(const Permutation& w) {
    const int n = w.size();
    std::vector<int> fen(n + 1, 0);
    long total = 0;
    for (int j = 0; j < n; ++j) {
        int r = w.values()[j] - w.interval().m + 1;
        for (int i = r - 1; i > 0; i -= i & -i) total += fen[i];
        for (int i = r; i <= n; i += i & -i) ++fen[i];
    }
    return total;
}

// number of (1 before 0) pairs
inline long energy_config(const BinaryConfig& w) {
    long ones = 0, total = 0;
    for (auto b : w.bits()) {
        if (b) ++ones;
        else total += ones;
    }
    return total;
}

inline BinaryConfig project_threshold(const Permutation& w, int threshold) {
    std::vector<std::uint8_t> bits(w.size());
    for (int i = 0; i < w.size(); ++i) bits[i] = w.values()[i] <= threshold ? 1 : 0;
    return BinaryConfig(w.interval(), std::move(bits), kIntervalBoundary);
}

// w(x) = min{k : w^k(x) = 1}; the family must contain every threshold of the value range.
inline Permutation recover_from_projections(const std::map<int, BinaryConfig>& configs) {
    require(!configs.empty(), ErrorKind::invalid_input, "empty projection family");
    const Interval iv = configs.begin()->second.interval();
    for (int k = iv.m; k <= iv.n; ++k)
        require(configs.count(k) == 1, ErrorKind::invalid_input, "missing threshold " + std::to_string(k));
    const BinaryConfig* prev = nullptr;
    for (const auto& [k, c] : configs) {
        require(c.interval() == iv, ErrorKind::invalid_input, "projections on different intervals");
        if (prev) {
            for (int i = 0; i < iv.size(); ++i)
                require(prev->bits()[i] <= c.bits()[i], ErrorKind::invalid_input,
                        "projections not monotone in the threshold at k=" + std::to_string(k));
        }
        prev = &c;
    }
    std::vector<int> vals(iv.size(), iv.m - 1);
    for (int k = iv.n; k >= iv.m; --k) {
        const auto& c = configs.at(k);
        for (int i = 0; i < iv.size(); ++i)
            if (c.bits()[i]) vals[i] = k;
    }
    for (int i = 0; i < iv.size(); ++i)
        require(vals[i] >= iv.m, ErrorKind::invalid_input, "site never occupied by any threshold");
    Permutation w = [&] {
        try {
            return Permutation(iv, vals);
        } catch (const Error&) {
            fail(ErrorKind::invalid_input, "projection family realizes no permutation");
        }
    }();
    for (const auto& [k, c] : configs)
        require(project_threshold(w, k).bits() == c.bits(), ErrorKind::invalid_input,
                "projection family is inconsistent at k=" + std::to_string(k));
    return w;
}

// h(x) - h(x-1) = 1 - 2 w(x); h(x) = x far left for left zeros, h(x) = -x for left ones.
inline HeightFunction height(const BinaryConfig& w) {
    const Interval& iv = w.interval();
    const int x0 = iv.m - 1;
    const int ls = w.boundary().left == Fill::zeros ? 1 : -1;
    const int rs = w.boundary().right == Fill::zeros ? 1 : -1;
    std::vector<std::int8_t> inc(w.size());
    for (int i = 0; i < w.size(); ++i) inc[i] = static_cast<std::int8_t>(1 - 2 * w.bits()[i]);
    return HeightFunction(x0, static_cast<long>(ls) * x0, std::move(inc), ls, rs);
}

inline HeightFunction height_prime(const BinaryConfig& w) {
    return height(w.with_boundary({Fill::ones, w.boundary().right}));
}

inline bool is_dominated(const HeightFunction& h1, const HeightFunction& h2, Interval window) {
    for (int x = window.m; x <= window.n; ++x)
        if (h1(x) > h2(x)) return false;
    return true;
}

// Text formats: permutations in one-line notation "3,1,4,2" (interval inferred from the
// values); configurations as "<bits>@<m>[<left fill><right fill>]", e.g. "1010@1[01]".
inline std::string format_permutation(const Permutation& w) {
    std::string out;
    for (int i = 0; i < w.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(w.values()[i]);
    }
    return out;
}

inline Permutation parse_permutation(std::string_view text) {
    std::vector<int> vals;
    std::string s(text), tok;
    std::stringstream ss(s);
    while (std::getline(ss, tok, ',')) {
        size_t pos = 0;
        int v = 0;
        try {
            v = std::stoi(tok, &pos);
        } catch (const std::exception&) {
            fail(ErrorKind::invalid_input, "bad permutation entry '" + tok + "'");
        }
        while (pos < tok.size() && tok[pos] == ' ') ++pos;
        require(pos == tok.size(), ErrorKind::invalid_input, "bad permutation entry '" + tok + "'");
        vals.push_back(v);
    }
    require(!vals.empty(), ErrorKind::invalid_input, "empty permutation");
    const int m = *std::min_element(vals.begin(), vals.end());
    const Interval iv(m, m + static_cast<int>(vals.size()) - 1);
    return Permutation(iv, std::move(vals));
}

inline std::string format_config(const BinaryConfig& w) {
    std::string out;
    for (auto b : w.bits()) out += b ? '1' : '0';
    out += '@' + std::to_string(w.interval().m) + '[';
    out += w.boundary().left == Fill::ones ? '1' : '0';
    out += w.boundary().right == Fill::ones ? '1' : '0';
    out += ']';
    return out;
}

inline BinaryConfig parse_config_text(std::string_view text) {
    std::string s(text);
    auto bad = [&] { fail(ErrorKind::invalid_input, "bad configuration text '" + s + "'"); };
    auto at = s.find('@'), lb = s.find('['), rb = s.find(']');
    if (at == std::string::npos || lb == std::string::npos || rb != s.size() - 1 || lb < at || rb != lb + 3) bad();
    std::vector<std::uint8_t> bits;
    for (size_t i = 0; i < at; ++i) {
        if (s[i] != '0' && s[i] != '1') bad();
        bits.push_back(static_cast<std::uint8_t>(s[i] - '0'));
    }
    if (bits.empty()) bad();
    int m = 0;
    try {
        size_t pos = 0;
        m = std::stoi(s.substr(at + 1, lb - at - 1), &pos);
        if (pos != lb - at - 1) bad();
    } catch (const std::exception&) {
        bad();
    }
    auto fill = [&](char c) {
        if (c != '0' && c != '1') bad();
        return c == '1' ? Fill::ones : Fill::zeros;
    };
    BoundaryMode b{fill(s[lb + 1]), fill(s[lb + 2])};
    const Interval iv(m, m + static_cast<int>(bits.size()) - 1);
    return BinaryConfig(iv, std::move(bits), b);
}

} // namespace asep
