#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "config.hpp"
#include "rational.hpp"
#include "rng.hpp"

namespace asep {

struct ClockEvent {
    double time;
    int edge;    // edge (edge, edge+1)
    bool rate_q; // false: rate-1 clock, true: rate-q clock
};

inline bool event_before(const ClockEvent& a, const ClockEvent& b) {
    return a.time < b.time || (a.time == b.time && a.edge < b.edge);
}

// Counter-based Poisson clocks on the edges of Z. Time is cut into slabs of fixed width; the
// events of (edge, slab) come from a generator keyed by (seed, edge, slab), so every edge has
// the same events whatever window or horizon is simulated.
class ClockSource {
public:
    ClockSource(const Rational& q, std::uint64_t seed, double slab_width = kDefaultSlabWidth)
        : q_(q), qd_(q.get_d()), seed_(seed), width_(slab_width) {
        require_unit_q(q);
        require(slab_width > 0 && slab_width <= 64, ErrorKind::invalid_input, "slab width must be in (0, 64]");
        cdf1_ = poisson_cdf(width_);
        cdfq_ = poisson_cdf(qd_ * width_);
    }

    static constexpr double kDefaultSlabWidth = 4.0;

    const Rational& q() const { return q_; }
    double q_double() const { return qd_; }
    std::uint64_t seed() const { return seed_; }
    double slab_width() const { return width_; }
    std::int64_t slab_of(double t) const { return static_cast<std::int64_t>(std::floor(t / width_)); }

    // Appends the events of one edge inside one slab (not sorted).
    void edge_slab(int edge, std::int64_t slab, std::vector<ClockEvent>& out) const {
        SplitMix64 g(stream_key(seed_, edge, slab));
        const int n1 = poisson(g, cdf1_);
        const int nq = qd_ > 0 ? poisson(g, cdfq_) : 0;
        const double t0 = static_cast<double>(slab) * width_;
        for (int i = 0; i < n1 + nq; ++i) {
            double t = t0 + g.uniform() * width_;
            if (t <= t0) t = std::nextafter(t0, t0 + 1);
            out.push_back({t, edge, i >= n1});
        }
    }

private:
    // CDF table of Poisson(mean), cut where the remaining mass is below 2^-60
    static std::vector<double> poisson_cdf(double mean) {
        std::vector<double> cdf;
        double p = std::exp(-mean), c = p;
        cdf.push_back(c);
        for (int k = 1; 1 - c > 0x1.0p-60 && k < 1000; ++k) {
            p *= mean / k;
            c += p;
            cdf.push_back(c);
        }
        return cdf;
    }

    static int poisson(SplitMix64& g, const std::vector<double>& cdf) {
        const double u = g.uniform();
        int k = 0;
        const int last = static_cast<int>(cdf.size()) - 1;
        while (k < last && u >= cdf[k]) ++k;
        return k;
    }

    Rational q_;
    double qd_;
    std::uint64_t seed_;
    double width_;
    std::vector<double> cdf1_, cdfq_;
};

// Orders the events of one slab [t0, t0 + width) by (time, edge): bucket pass, then insertion
// sort to fix up the few events sharing a bucket.
inline void sort_slab(const std::vector<ClockEvent>& raw, double t0, double width, std::vector<ClockEvent>& out,
                      std::vector<std::uint32_t>& scratch) {
    out.resize(raw.size());
    if (raw.empty()) return;
    size_t nb = 1;
    while (nb < raw.size()) nb <<= 1;
    const double scale = static_cast<double>(nb) / width;
    scratch.assign(nb + 1 + raw.size(), 0);
    std::uint32_t* count = scratch.data();
    std::uint32_t* key = scratch.data() + nb + 1;
    for (size_t i = 0; i < raw.size(); ++i) {
        size_t b = static_cast<size_t>((raw[i].time - t0) * scale);
        if (b >= nb) b = nb - 1;
        key[i] = static_cast<std::uint32_t>(b);
        ++count[b + 1];
    }
    for (size_t b = 0; b < nb; ++b) count[b + 1] += count[b];
    for (size_t i = 0; i < raw.size(); ++i) out[count[key[i]]++] = raw[i];
    for (size_t i = 1; i < out.size(); ++i) {
        ClockEvent e = out[i];
        size_t j = i;
        while (j > 0 && event_before(e, out[j - 1])) {
            out[j] = out[j - 1];
            --j;
        }
        out[j] = e;
    }
}

// Streams the merged, time-ordered events of a range of edges. Slabs are generated on demand
// and bucket-sorted by time.
class EventCursor {
public:
    EventCursor(const ClockSource& src, Interval edges, double t_start = 0.0)
        : src_(&src), edges_(edges), now_(t_start), slab_(src.slab_of(t_start)) {
        load(slab_);
    }

    double now() const { return now_; }
    const Interval& edges() const { return edges_; }

    // Calls f(event) for each event with time in (now, t_end], in time order. f returns false to
    // stop early; the cursor then sits just after that event. Returns true if t_end was reached.
    template <class F>
    bool run(double t_end, F&& f) {
        while (true) {
            while (pos_ < buf_.size()) {
                const ClockEvent& e = buf_[pos_];
                if (e.time > t_end) {
                    now_ = std::max(now_, t_end);
                    return true;
                }
                ++pos_;
                if (e.time <= now_) continue;
                now_ = e.time;
                if (!f(e)) return false;
            }
            const double slab_end = static_cast<double>(slab_ + 1) * src_->slab_width();
            // events of a slab lie strictly before its end
            if (slab_end >= t_end) {
                now_ = std::max(now_, t_end);
                return true;
            }
            load(++slab_);
        }
    }

private:
    void load(std::int64_t slab) {
        raw_.clear();
        for (int x = edges_.m; x <= edges_.n; ++x) src_->edge_slab(x, slab, raw_);
        sort_slab(raw_, static_cast<double>(slab) * src_->slab_width(), src_->slab_width(), buf_, scratch_);
        pos_ = 0;
    }

    const ClockSource* src_;
    Interval edges_;
    double now_;
    std::int64_t slab_;
    std::vector<ClockEvent> raw_, buf_;
    std::vector<std::uint32_t> scratch_;
    size_t pos_ = 0;
};

// Materialized clocks over [0, horizon] for a range of edges.
struct ClockStream {
    Interval edges;
    double horizon = 0;
    Rational q;
    std::uint64_t seed = 0;
    double slab_width = ClockSource::kDefaultSlabWidth;
    std::vector<std::vector<ClockEvent>> per_edge; // indexed by edge - edges.m

    const std::vector<ClockEvent>& events_on(int edge) const { return per_edge.at(edge - edges.m); }

    std::vector<ClockEvent> merged() const {
        std::vector<ClockEvent> all;
        for (const auto& v : per_edge) all.insert(all.end(), v.begin(), v.end());
        std::sort(all.begin(), all.end(), event_before);
        return all;
    }
};

inline ClockStream gen_clocks(Interval edges, const Rational& q, double horizon, std::uint64_t seed,
                              double slab_width = ClockSource::kDefaultSlabWidth) {
    require(horizon > 0, ErrorKind::invalid_input, "clock horizon must be positive");
    require(edges.m <= edges.n, ErrorKind::invalid_input, "empty edge range");
    ClockSource src(q, seed, slab_width);
    ClockStream cs{edges, horizon, q, seed, slab_width, {}};
    cs.per_edge.resize(edges.size());
    const std::int64_t last = src.slab_of(horizon);
    for (int x = edges.m; x <= edges.n; ++x) {
        auto& v = cs.per_edge[x - edges.m];
        for (std::int64_t s = 0; s <= last; ++s) src.edge_slab(x, s, v);
        v.erase(std::remove_if(v.begin(), v.end(), [&](const ClockEvent& e) { return e.time > horizon; }), v.end());
        std::sort(v.begin(), v.end(), event_before);
    }
    return cs;
}

} // namespace asep
