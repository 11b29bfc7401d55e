#pragma once

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "clocks.hpp"
#include "config.hpp"
#include "mallows.hpp"

namespace asep {

enum class ProcessKind { multi_species, single_species };

// Swap rules of the basic coupling.
inline bool multi_swaps(int left, int right, bool rate_q) { return rate_q ? left > right : left < right; }
inline bool single_swaps(int left, int right, bool rate_q) {
    return rate_q ? (left == 0 && right == 1) : (left == 1 && right == 0);
}

struct ProcessState {
    ProcessKind kind = ProcessKind::multi_species;
    std::variant<Permutation, BinaryConfig> state;
    double time = 0;

    static ProcessState multi(Permutation w, double t = 0) { return {ProcessKind::multi_species, std::move(w), t}; }
    static ProcessState single(BinaryConfig w, double t = 0) { return {ProcessKind::single_species, std::move(w), t}; }

    const Permutation& perm() const { return std::get<Permutation>(state); }
    const BinaryConfig& config() const { return std::get<BinaryConfig>(state); }
    Permutation& perm() { return std::get<Permutation>(state); }
    BinaryConfig& config() { return std::get<BinaryConfig>(state); }

    const Interval& interval() const {
        return kind == ProcessKind::multi_species ? perm().interval() : config().interval();
    }

    // Applies one clock event; returns whether a swap happened. Events on edges not inside the
    // state's interval are ignored.
    bool apply(int edge, bool rate_q) {
        const Interval& iv = interval();
        if (edge < iv.m || edge + 1 > iv.n) return false;
        if (kind == ProcessKind::multi_species) {
            auto& w = perm();
            if (!multi_swaps(w(edge), w(edge + 1), rate_q)) return false;
            w.swap_adjacent(edge);
        } else {
            auto& w = config();
            if (!single_swaps(w(edge), w(edge + 1), rate_q)) return false;
            w.swap_adjacent(edge);
        }
        return true;
    }
};

struct WindowSpec {
    Interval core;
    int guard = 0;
    BoundaryMode fill{Fill::ones, Fill::zeros};

    Interval window() const { return {core.m - guard, core.n + guard}; }
};

// guard = ceil((1+eps) t_end) + 20
inline int default_guard(double t_end, double eps = 0.5) {
    return static_cast<int>(std::ceil((1 + eps) * t_end)) + 20;
}

struct InitialParams {
    Interval interval{1, 1}; // interval or window
    int n = 0;               // eta-nm: position parameter
    int m = 1;               // eta-nm: block length
    int N = 1;               // eta-star
    int k = 0;               // ground-config particle count
    Rational q = 0;          // mallows
    std::uint64_t seed = 0;  // mallows
};

// Tags: identity, reversal, mallows (multi-species on params.interval); ground-config, eta-nm,
// eta-star, step (single-species; the last three on a Z-window given by params.interval).
inline ProcessState make_initial(std::string_view tag, const InitialParams& p) {
    const Interval iv = checked_interval(p.interval.m, p.interval.n);
    auto bits_of = [&](auto&& f) {
        std::vector<std::uint8_t> b(iv.size());
        for (int x = iv.m; x <= iv.n; ++x) b[x - iv.m] = f(x) ? 1 : 0;
        return b;
    };
    if (tag == "identity") return ProcessState::multi(Permutation::identity(iv));
    if (tag == "reversal") return ProcessState::multi(Permutation::reversal(iv));
    if (tag == "mallows") {
        std::mt19937_64 rng(p.seed);
        return ProcessState::multi(sample_mallows(make_mallows(iv, p.q), rng));
    }
    if (tag == "ground-config") {
        require(0 <= p.k && p.k <= iv.size(), ErrorKind::invalid_input, "ground-config: bad particle count");
        return ProcessState::single(
            BinaryConfig(iv, bits_of([&](int x) { return x >= iv.n - p.k + 1; }), kIntervalBoundary));
    }
    if (tag == "eta-nm") {
        require(p.m >= 1, ErrorKind::invalid_input, "eta-nm needs m >= 1");
        require(iv.contains(Interval(p.n - p.m + 1, p.n + p.m)), ErrorKind::unsupported_window,
                "eta-nm window must contain [n-m+1, n+m]");
        return ProcessState::single(
            BinaryConfig(iv, bits_of([&](int x) { return (x >= p.n - p.m + 1 && x <= p.n) || x >= p.n + p.m + 1; }),
                         {Fill::zeros, Fill::ones}));
    }
    if (tag == "eta-star") {
        require(p.N >= 1, ErrorKind::invalid_input, "eta-star needs N >= 1");
        require(iv.contains(Interval(-p.N, p.N + 1)), ErrorKind::unsupported_window,
                "eta-star window must contain [-N, N+1]");
        // 1 on (-inf,-N], 0 on [N+1,inf), and sites -N+2x -> 1, -N-1+2x -> 0 for x in [1,N]
        return ProcessState::single(
            BinaryConfig(iv, bits_of([&](int x) { return x <= -p.N || (x <= p.N && ((x + p.N) % 2 == 0)); }),
                         {Fill::ones, Fill::zeros}));
    }
    if (tag == "step") {
        return ProcessState::single(BinaryConfig(iv, bits_of([](int x) { return x <= 0; }), {Fill::ones, Fill::zeros}));
    }
    fail(ErrorKind::invalid_input, "unknown initial-state tag '" + std::string(tag) + "'");
}

struct LoggedEvent {
    double time;
    int edge;
    bool rate_q;
    std::vector<bool> applied; // per process
};

struct TrajectoryLog {
    std::uint64_t seed = 0;
    Rational q;
    Interval edges;
    double horizon = 0;
    std::vector<LoggedEvent> events;
};

inline void check_evolve_args(const std::vector<ProcessState>& states, const ClockStream& clocks, double t_end) {
    require(t_end <= clocks.horizon, ErrorKind::invalid_input, "evolve: t_end exceeds the clock horizon");
    for (const auto& s : states) {
        require(s.time == states.front().time, ErrorKind::invalid_input, "evolve: states at different times");
        require(s.time <= t_end, ErrorKind::invalid_input, "evolve: t_end precedes the state time");
        const Interval& iv = s.interval();
        if (iv.size() >= 2)
            require(clocks.edges.contains(Interval(iv.m, iv.n - 1)), ErrorKind::invalid_input,
                    "evolve: state edges outside the clock edge range");
    }
}

// Advances every state under the same clock events in (t0, t_end]; optionally logs them.
inline std::vector<ProcessState> evolve(std::vector<ProcessState> states, const ClockStream& clocks, double t_end,
                                        TrajectoryLog* log = nullptr) {
    check_evolve_args(states, clocks, t_end);
    const double t0 = states.empty() ? 0.0 : states.front().time;
    if (log) {
        log->seed = clocks.seed;
        log->q = clocks.q;
        log->edges = clocks.edges;
        log->horizon = clocks.horizon;
    }
    for (const auto& e : clocks.merged()) {
        if (e.time <= t0) continue;
        if (e.time > t_end) break;
        LoggedEvent le{e.time, e.edge, e.rate_q, {}};
        for (auto& s : states) {
            bool did = s.apply(e.edge, e.rate_q);
            if (log) le.applied.push_back(did);
        }
        if (log) log->events.push_back(std::move(le));
    }
    for (auto& s : states) s.time = t_end;
    return states;
}

// Dump: "# trajectory v1" then seed/q/window/horizon/processes lines, then one line per event:
// "<time> <edge> <1|q> <flags>", flags one 0/1 character per process.
inline void write_trajectory(std::ostream& os, const TrajectoryLog& log) {
    char buf[64];
    os << "# trajectory v1\n";
    os << "seed " << log.seed << "\n";
    os << "q " << log.q.get_str() << "\n";
    os << "window " << log.edges.m << " " << log.edges.n << "\n";
    std::snprintf(buf, sizeof buf, "%.17g", log.horizon);
    os << "horizon " << buf << "\n";
    os << "processes " << (log.events.empty() ? 0 : log.events.front().applied.size()) << "\n";
    for (const auto& e : log.events) {
        std::snprintf(buf, sizeof buf, "%.17g", e.time);
        os << buf << ' ' << e.edge << ' ' << (e.rate_q ? 'q' : '1') << ' ';
        for (bool b : e.applied) os << (b ? '1' : '0');
        os << '\n';
    }
}

inline TrajectoryLog read_trajectory(std::istream& is) {
    TrajectoryLog log;
    std::string line, key;
    auto bad = [](const std::string& what) { fail(ErrorKind::invalid_input, "trajectory dump: " + what); };
    if (!std::getline(is, line) || line != "# trajectory v1") bad("missing header");
    size_t nproc = 0;
    for (const char* want : {"seed", "q", "window", "horizon", "processes"}) {
        if (!std::getline(is, line)) bad("truncated header");
        std::istringstream ls(line);
        ls >> key;
        if (key != want) bad("expected '" + std::string(want) + "'");
        if (key == "seed") ls >> log.seed;
        else if (key == "q") {
            std::string qs;
            ls >> qs;
            log.q = parse_rational(qs);
        } else if (key == "window") ls >> log.edges.m >> log.edges.n;
        else if (key == "horizon") ls >> log.horizon;
        else ls >> nproc;
        if (ls.fail()) bad("bad value for " + key);
    }
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        LoggedEvent e{};
        std::string tag, flags;
        ls >> e.time >> e.edge >> tag >> flags;
        if (ls.fail() && nproc > 0) bad("bad event line '" + line + "'");
        if (tag != "1" && tag != "q") bad("bad rate tag");
        e.rate_q = tag == "q";
        if (flags.size() != nproc) bad("flag count mismatch");
        for (char c : flags) e.applied.push_back(c == '1');
        log.events.push_back(std::move(e));
    }
    return log;
}

} // namespace asep
