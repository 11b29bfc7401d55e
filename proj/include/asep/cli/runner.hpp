#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "../hecke.hpp"
#include "../mixing.hpp"
#include "../version.hpp"
#include "config.hpp"

namespace asep::cli {

inline constexpr const char* kThreadsEnv = "ASEP_THREADS";

inline unsigned default_threads() {
    if (const char* env = std::getenv(kThreadsEnv)) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// Work-sharing loop over trial indices. Results land in per-index slots, so output does not
// depend on the number of threads.
inline ForEach thread_pool(unsigned threads) {
    if (threads <= 1) return run_inline;
    return [threads](std::size_t count, const std::function<void(std::size_t)>& body) {
        std::atomic<std::size_t> next{0};
        std::exception_ptr err;
        std::mutex mu;
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lk(mu);
                    if (!err) err = std::current_exception();
                    next = count;
                }
            }
        };
        std::vector<std::thread> pool;
        const unsigned n = static_cast<unsigned>(std::min<std::size_t>(threads, count));
        for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
        if (err) std::rethrow_exception(err);
    };
}

struct ResultTable {
    ResultTable(std::string sub, std::vector<std::string> cols) : subcommand(std::move(sub)), header(std::move(cols)) {}
    std::string subcommand;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    nlohmann::ordered_json aggregates = nlohmann::ordered_json::object();
    bool checks_passed = true;
};

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::vector<double> grid(double lo, double hi, double step, const std::string& key) {
    if (!(step > 0)) config_error(key + "-step", "must be positive");
    if (hi < lo) config_error(key + "-max", "below " + key + "-min");
    std::vector<double> out;
    const long n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
    return out;
}

inline Permutation start_permutation(const RunConfig& cfg, int N) {
    const std::string& tag = cfg.text("start");
    if (tag == "identity") return Permutation::identity(Interval(1, N));
    if (tag == "reversal") return Permutation::reversal(Interval(1, N));
    try {
        return parse_permutation(tag);
    } catch (const Error&) {
        config_error("start", "expected identity, reversal or a permutation like 2,1,3");
    }
}

namespace detail {

inline ResultTable run_sample_mallows(const RunConfig& cfg, const ForEach& pool) {
    const int N = static_cast<int>(cfg.integer("n"));
    const Rational q = cfg.rational("q");
    const auto trials = static_cast<std::size_t>(cfg.integer("trials"));
    const std::uint64_t seed = cfg.unsigned64("seed");
    const auto mu = make_mallows(checked_interval(1, N), q);
    std::vector<Permutation> out(trials);
    pool(trials, [&](std::size_t i) {
        std::mt19937_64 rng(trial_seed(seed, i));
        out[i] = sample_mallows(mu, rng);
    });
    ResultTable r{"sample-mallows", {"trial", "permutation", "energy"}};
    double mean = 0;
    for (std::size_t i = 0; i < trials; ++i) {
        const long e = energy_perm(out[i]);
        mean += static_cast<double>(e);
        r.rows.push_back({std::to_string(i), format_permutation(out[i]), std::to_string(e)});
    }
    r.aggregates["mean_energy"] = mean / static_cast<double>(trials);
    if (N <= 8) {
        std::map<Permutation, std::size_t> counts;
        for (const auto& w : out) ++counts[w];
        double tv = 0;
        for (const auto& [w, p] : mallows_law(mu)) {
            auto it = counts.find(w);
            const double emp = it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(trials);
            tv += std::fabs(emp - p.get_d());
        }
        r.aggregates["tv_to_exact_law"] = tv / 2;
    }
    return r;
}

inline ResultTable run_simulate(const RunConfig& cfg, const ForEach& pool) {
    const int N = static_cast<int>(cfg.integer("n"));
    const Rational q = cfg.rational("q");
    const double t = cfg.real("t");
    if (t < 0) config_error("t", "must be nonnegative");
    const auto trials = static_cast<std::size_t>(cfg.integer("trials"));
    const std::uint64_t seed = cfg.unsigned64("seed");
    const Interval iv = checked_interval(1, N);
    std::vector<Permutation> finals(trials);
    TrajectoryLog first;
    pool(trials, [&](std::size_t i) {
        const std::uint64_t s = trial_seed(seed, i);
        ProcessState start = cfg.text("start") == "mallows"
                                 ? make_initial("mallows", InitialParams{iv, 0, 1, 1, 0, q, trial_seed(s, 0)})
                                 : ProcessState::multi(start_permutation(cfg, N));
        const Interval edges = N >= 2 ? Interval(1, N - 1) : Interval(1, 0);
        const ClockStream clocks = gen_clocks(edges, q, t, trial_seed(s, 1));
        TrajectoryLog log;
        auto states = evolve({start}, clocks, t, i == 0 ? &log : nullptr);
        finals[i] = states.front().perm();
        if (i == 0) first = std::move(log);
    });
    if (cfg.has("trajectory")) {
        std::ofstream os(cfg.text("trajectory"));
        if (!os) fail(ErrorKind::io_error, "cannot open " + cfg.text("trajectory"));
        write_trajectory(os, first);
    }
    ResultTable r{"simulate", {"trial", "t", "permutation", "energy"}};
    for (std::size_t i = 0; i < trials; ++i)
        r.rows.push_back({std::to_string(i), num(t), format_permutation(finals[i]), std::to_string(energy_perm(finals[i]))});
    return r;
}

inline ResultTable run_tv_exact(const RunConfig& cfg) {
    const int N = static_cast<int>(cfg.integer("n"));
    const Rational q = cfg.rational("q");
    const auto times = grid(cfg.real("t-min"), cfg.real("t-max"), cfg.real("t-step"), "t");
    const auto tv = exact_tv_table(N, q, start_permutation(cfg, N), times);
    ResultTable r{"tv-exact", {"t", "tv"}};
    for (std::size_t j = 0; j < times.size(); ++j) r.rows.push_back({num(times[j]), num(tv[j])});
    return r;
}

inline ResultTable run_tv_mc(const RunConfig& cfg, const ForEach& pool) {
    const int N = static_cast<int>(cfg.integer("n"));
    const Rational q = cfg.rational("q");
    const auto trials = static_cast<std::size_t>(cfg.integer("trials"));
    const std::uint64_t seed = cfg.unsigned64("seed");
    const int theta = cfg.integer("theta") > 0 ? static_cast<int>(cfg.integer("theta")) : default_theta(N);
    const auto times = grid(cfg.real("t-min"), cfg.real("t-max"), cfg.real("t-step"), "t");
    const auto up = mc_tv_upper(N, q, times, trials, trial_seed(seed, 0), pool);
    ResultTable r{"tv-mc", {"t", "tv_upper", "tv_upper_se", "tv_lower", "tv_lower_se"}};
    for (std::size_t j = 0; j < times.size(); ++j) {
        const auto lo = mc_tv_lower(N, q, times[j], theta, trials, trial_seed(seed, j + 1), pool);
        r.rows.push_back({num(times[j]), num(up[j].value), num(up[j].se), num(lo.value), num(lo.se)});
    }
    r.aggregates["theta"] = theta;
    return r;
}

inline std::vector<double> tau_grid(const RunConfig& cfg) {
    if (cfg.has("tau")) return cfg.real_list("tau");
    return grid(cfg.real("tau-min"), cfg.real("tau-max"), cfg.real("tau-step"), "tau");
}

inline ResultTable run_profile(const RunConfig& cfg, const ForEach& pool) {
    ExperimentPlan plan;
    plan.N = static_cast<int>(cfg.integer("n"));
    plan.q = cfg.rational("q");
    plan.taus = tau_grid(cfg);
    plan.trials = static_cast<std::size_t>(cfg.integer("trials"));
    plan.seed = cfg.unsigned64("seed");
    plan.theta = static_cast<int>(cfg.integer("theta"));
    const auto pts = profile_curve(plan, pool);
    ResultTable r{"profile", {"tau", "t", "tv_upper", "tv_upper_se", "tv_lower", "tv_lower_se", "goe_reference"}};
    for (const auto& p : pts)
        r.rows.push_back({num(p.tau), num(p.t), num(p.tv_upper.value), num(p.tv_upper.se), num(p.tv_lower.value),
                          num(p.tv_lower.se), num(p.goe_reference)});
    r.aggregates["theta"] = plan.theta > 0 ? plan.theta : default_theta(plan.N);
    return r;
}

inline ResultTable run_min_height(const RunConfig& cfg, const ForEach& pool) {
    const int N = static_cast<int>(cfg.integer("n"));
    const Rational q = cfg.rational("q");
    const double tau = cfg.real("tau");
    const auto trials = static_cast<std::size_t>(cfg.integer("trials"));
    const std::uint64_t seed = cfg.unsigned64("seed");
    const int margin = static_cast<int>(cfg.integer("margin"));
    if (margin < 1) config_error("margin", "must be positive");
    std::vector<MinHeightSample> s(trials);
    pool(trials, [&](std::size_t i) { s[i] = min_height_sample(N, q, tau, trial_seed(seed, i), margin); });
    ResultTable r{"min-height", {"trial", "value", "min_statistic", "margin", "attempts"}};
    std::vector<double> v;
    double mean = 0, sq = 0;
    std::size_t reruns = 0;
    for (std::size_t i = 0; i < trials; ++i) {
        r.rows.push_back({std::to_string(i), num(s[i].value), std::to_string(s[i].min_statistic),
                          std::to_string(s[i].margin), std::to_string(s[i].attempts)});
        v.push_back(s[i].value);
        mean += s[i].value;
        reruns += s[i].attempts - 1;
    }
    mean /= static_cast<double>(trials);
    for (double x : v) sq += (x - mean) * (x - mean);
    const auto& goe = GoeDistribution::instance();
    r.aggregates["mean"] = mean;
    r.aggregates["variance"] = trials > 1 ? sq / static_cast<double>(trials - 1) : 0.0;
    r.aggregates["ks_distance_goe"] = ks_distance(v, [&](double x) { return goe.cdf_clamped(x); });
    r.aggregates["voided_runs"] = reruns;
    return r;
}

inline ResultTable run_probe(const RunConfig& cfg, const ForEach& pool) {
    const int N = static_cast<int>(cfg.integer("n"));
    const Rational q = cfg.rational("q");
    const double t = cfg.real("t");
    const long b = static_cast<long>(cfg.integer("b"));
    const auto trials = static_cast<std::size_t>(cfg.integer("trials"));
    const std::uint64_t seed = cfg.unsigned64("seed");
    const bool shift = cfg.subcommand == "shift-invariance";
    const ProbeResult p = shift ? shift_invariance_probe(N, q, b, t, trials, seed, pool)
                                : skew_reversibility_probe(N, q, b, t, trials, seed, pool);
    ResultTable r{cfg.subcommand, {"probe", "p1", "se1", "p2", "se2", "z", "reruns"}};
    r.rows.push_back({cfg.subcommand, num(p.first.value), num(p.first.se), num(p.second.value), num(p.second.se),
                      num(p.z), std::to_string(p.reruns)});
    r.aggregates["z"] = p.z;
    return r;
}

inline ResultTable run_hitting(const RunConfig& cfg, const ForEach& pool) {
    const auto ms = cfg.integer_list("m");
    const Rational q = cfg.rational("q");
    const auto trials = static_cast<std::size_t>(cfg.integer("trials"));
    const std::uint64_t seed = cfg.unsigned64("seed");
    const auto Cs = grid(cfg.real("c-min"), cfg.real("c-max"), cfg.real("c-step"), "c");
    ResultTable r{"hitting", {"m", "C", "exceedance", "exceedance_se", "one_over_m"}};
    for (std::size_t a = 0; a < ms.size(); ++a) {
        const int m = static_cast<int>(ms[a]);
        if (m < 1) config_error("m", "must be positive");
        const double horizon = Cs.back() * m;
        std::vector<CensoredTime> T(trials);
        const std::uint64_t s = trial_seed(seed, static_cast<std::uint64_t>(m));
        pool(trials, [&](std::size_t i) { T[i] = hitting_time_H(0, m, q, trial_seed(s, i), horizon); });
        nlohmann::ordered_json first = nullptr;
        for (double C : Cs) {
            std::size_t hits = 0;
            for (const auto& c : T) hits += c.censored || c.value > C * m;
            const Estimate e = proportion(hits, trials);
            r.rows.push_back({std::to_string(m), num(C), num(e.value), num(e.se), num(1.0 / m)});
            if (first.is_null() && e.value < 1.0 / m) first = C;
        }
        r.aggregates["smallest_C_below_one_over_m"][std::to_string(m)] = first;
    }
    return r;
}

inline ResultTable run_osp(const RunConfig& cfg, const ForEach& pool) {
    const int N = static_cast<int>(cfg.integer("n"));
    const auto trials = static_cast<std::size_t>(cfg.integer("trials"));
    const std::uint64_t seed = cfg.unsigned64("seed");
    std::vector<double> T(trials);
    pool(trials, [&](std::size_t i) { T[i] = osp_absorbing_time(N, trial_seed(seed, i)); });
    ResultTable r{"osp", {"trial", "T", "T_over_N", "fluctuation"}};
    const double c = std::cbrt(4.0) / std::cbrt(static_cast<double>(N));
    double m1 = 0, m2 = 0;
    for (std::size_t i = 0; i < trials; ++i) {
        const double f = c * (T[i] / 2 - N);
        r.rows.push_back({std::to_string(i), num(T[i]), num(T[i] / N), num(f)});
        m1 += T[i] / N;
        m2 += f;
    }
    r.aggregates["mean_T_over_N"] = m1 / static_cast<double>(trials);
    r.aggregates["mean_fluctuation"] = m2 / static_cast<double>(trials);
    return r;
}

inline ResultTable run_hecke_verify(const RunConfig& cfg) {
    const int n = static_cast<int>(cfg.integer("n"));
    const int K = static_cast<int>(cfg.integer("order"));
    ResultTable r{"hecke-verify", {"q", "check", "cases", "failures", "status"}};
    for (const Rational& q : cfg.rational_list("q")) {
        for (const auto& c : verify_hecke(checked_interval(1, n), q, K)) {
            r.rows.push_back({q.get_str(), c.name, std::to_string(c.cases), std::to_string(c.failures),
                              c.passed() ? "exact-pass" : "FAIL"});
            r.checks_passed = r.checks_passed && c.passed();
        }
    }
    r.aggregates["all_exact"] = r.checks_passed;
    return r;
}

inline ResultTable run_tw_table(const RunConfig& cfg) {
    const auto s = grid(cfg.real("s-min"), cfg.real("s-max"), cfg.real("s-step"), "s");
    const auto& goe = GoeDistribution::instance();
    ResultTable r{"tw-table", {"s", "f_goe", "hastings_mcleod"}};
    for (double x : s) r.rows.push_back({num(x), num(goe.cdf(x)), num(goe.hm().value(x))});
    const auto mom = goe_moments();
    r.aggregates["mean"] = mom.mean;
    r.aggregates["variance"] = mom.variance;
    return r;
}

} // namespace detail

inline ResultTable run(const RunConfig& cfg, const ForEach& pool = run_inline) {
    try {
        const std::string& c = cfg.subcommand;
        if (c == "sample-mallows") return detail::run_sample_mallows(cfg, pool);
        if (c == "simulate") return detail::run_simulate(cfg, pool);
        if (c == "tv-exact") return detail::run_tv_exact(cfg);
        if (c == "tv-mc") return detail::run_tv_mc(cfg, pool);
        if (c == "profile") return detail::run_profile(cfg, pool);
        if (c == "min-height") return detail::run_min_height(cfg, pool);
        if (c == "shift-invariance" || c == "skew-reversibility") return detail::run_probe(cfg, pool);
        if (c == "hitting") return detail::run_hitting(cfg, pool);
        if (c == "osp") return detail::run_osp(cfg, pool);
        if (c == "hecke-verify") return detail::run_hecke_verify(cfg);
        if (c == "tw-table") return detail::run_tw_table(cfg);
        fail(ErrorKind::configuration_error, "unknown subcommand '" + c + "'");
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::configuration_error) throw;
        throw Error(e.kind(), cfg.subcommand + ": " + e.detail());
    }
}

inline void write_csv(std::ostream& os, const ResultTable& r) {
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
        os << '\n';
    };
    line(r.header);
    for (const auto& row : r.rows) line(row);
}

inline nlohmann::ordered_json summary_json(const ResultTable& r, const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["tool"] = "asep-lab";
    j["version"] = kVersion;
    j["subcommand"] = r.subcommand;
    j["seed"] = cfg.unsigned64("seed");
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [k, v] : cfg.values)
        if (k != "out" && k != "format" && k != "threads") params[k] = v;
    j["parameters"] = params;
    j["rows"] = r.rows.size();
    j["aggregates"] = r.aggregates;
    j["checks_passed"] = r.checks_passed;
    return j;
}

inline void write_results(const ResultTable& r, const RunConfig& cfg, const std::string& path, const std::string& format) {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!path.empty() && path != "-") {
        file.open(path);
        if (!file) fail(ErrorKind::io_error, "cannot open " + path + " for writing");
        os = &file;
    }
    if (format == "csv") write_csv(*os, r);
    else if (format == "json-summary") *os << summary_json(r, cfg).dump(2) << '\n';
    else fail(ErrorKind::configuration_error, "format: expected csv or json-summary");
    os->flush();
    if (!*os) fail(ErrorKind::io_error, "write failed for " + (path.empty() ? std::string("stdout") : path));
}

} // namespace asep::cli
