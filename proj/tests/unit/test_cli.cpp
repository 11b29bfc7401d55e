#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "asep/cli/runner.hpp"

using namespace asep;
using namespace asep::cli;

namespace {

std::string csv_of(const ResultTable& r) {
    std::ostringstream os;
    write_csv(os, r);
    return os.str();
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// a cheap configuration per subcommand
const std::map<std::string, std::string> kTiny = {
    {"sample-mallows", "n = 4\nq = 1/2\ntrials = 50"},
    {"simulate", "n = 5\nq = 1/2\nt = 1\ntrials = 3"},
    {"tv-exact", "n = 3\nq = 1/2\nt-max = 1\nt-step = 0.5"},
    {"tv-mc", "n = 4\nq = 1/2\ntrials = 50\nt-max = 2\nt-step = 1"},
    {"profile", "n = 20\nq = 1/2\ntrials = 20"},
    {"min-height", "n = 20\nq = 1/2\ntrials = 3"},
    {"shift-invariance", "n = 3\nq = 1/2\ntrials = 50\nt = 0.5\nb = -2"},
    {"skew-reversibility", "n = 3\nq = 1/2\ntrials = 50\nt = 0.5\nb = -2"},
    {"hitting", "m = 2,3\nq = 1/2\ntrials = 20\nc-max = 3"},
    {"osp", "n = 10\ntrials = 5"},
    {"hecke-verify", "n = 3\nq = 1/2\norder = 3"},
    {"tw-table", "s-min = -2\ns-max = 2\ns-step = 1"},
};

} // namespace

TEST(Cli, ParseProfileConfig) {
    const auto cfg = parse_config("N = 400\nq = 1/2\ntrials = 500", "profile");
    EXPECT_EQ(cfg.integer("n"), 400);
    EXPECT_EQ(cfg.rational("q"), Rational(1, 2));
    EXPECT_EQ(cfg.integer("trials"), 500);
    EXPECT_EQ(cfg.text("seed"), "1");
    EXPECT_EQ(cfg.text("format"), "csv");
}

TEST(Cli, FlagsOverrideFile) {
    const auto cfg = parse_config("n = 4\nq = 1/2\ntrials = 10 # comment", "profile", {{"q", "0.25"}});
    EXPECT_EQ(cfg.rational("q"), Rational(1, 4));
    EXPECT_EQ(cfg.integer("trials"), 10);
}

TEST(Cli, MissingKeyIsNamed) {
    try {
        parse_config("n = 400\nq = 1/2", "profile");
        FAIL() << "expected a configuration error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::configuration_error);
        EXPECT_NE(std::string(e.what()).find("trials"), std::string::npos);
    }
}

TEST(Cli, RejectsBadInput) {
    EXPECT_THROW(parse_config("n = 4\nq = 1/2\ntrials = 5\ncolour = red", "profile"), Error);
    EXPECT_THROW(parse_config("n = 4\nq = 1/3x\ntrials = 5", "profile"), Error);
    EXPECT_THROW(parse_config("n = 4\nq = 1/2\ntrials = 0", "profile"), Error);
    EXPECT_THROW(parse_config("just words", "profile"), Error);
    EXPECT_THROW(parse_config("", "no-such-thing"), Error);
    EXPECT_THROW(parse_config("n = 4\nq = 1/2\ntrials = 5\nformat = xml", "profile"), Error);
    EXPECT_THROW(parse_config("n = four\nq = 1/2\ntrials = 5", "profile").integer("n"), Error);
}

TEST(Cli, TvExactTwoSites) {
    const auto r = run(parse_config("n = 2\nq = 1/2\nt-max = 5\nt-step = 0.5", "tv-exact"));
    ASSERT_EQ(r.rows.size(), 11u);
    for (const auto& row : r.rows) {
        const double t = std::stod(row[0]);
        EXPECT_NEAR(std::stod(row[1]), 2.0 / 3.0 * std::exp(-1.5 * t), 1e-11);
    }
}

TEST(Cli, HeckeVerifyPasses) {
    const auto r = run(parse_config("", "hecke-verify", {{"order", "4"}}));
    EXPECT_TRUE(r.checks_passed);
    EXPECT_EQ(r.rows.size(), 4u * 8u);
    for (const auto& row : r.rows) EXPECT_EQ(row.back(), "exact-pass");
}

TEST(Cli, IndependentOfThreadCount) {
    for (const std::string sub : {"profile", "min-height", "hitting", "sample-mallows"}) {
        const auto cfg = parse_config(kTiny.at(sub), sub, {{"seed", "99"}});
        EXPECT_EQ(csv_of(run(cfg, run_inline)), csv_of(run(cfg, thread_pool(3)))) << sub;
        EXPECT_EQ(csv_of(run(cfg)), csv_of(run(cfg))) << sub;
    }
}

TEST(Cli, SeedChangesOutput) {
    const auto a = run(parse_config(kTiny.at("osp"), "osp", {{"seed", "1"}}));
    const auto b = run(parse_config(kTiny.at("osp"), "osp", {{"seed", "2"}}));
    EXPECT_NE(csv_of(a), csv_of(b));
}

TEST(Cli, GoldenHeaders) {
    for (const auto& [sub, text] : kTiny) {
        const auto r = run(parse_config(text, sub));
        const std::string csv = csv_of(r);
        const std::string want = read_file(std::string(ASEP_GOLDEN_DIR) + "/" + sub + ".header");
        ASSERT_FALSE(want.empty()) << sub;
        EXPECT_EQ(csv.substr(0, csv.find('\n') + 1), want) << sub;
        EXPECT_FALSE(r.rows.empty()) << sub;
        for (const auto& row : r.rows) EXPECT_EQ(row.size(), r.header.size()) << sub;
    }
}

TEST(Cli, EmptyTableIsHeaderOnly) {
    ResultTable r{"profile", {"tau", "t"}};
    EXPECT_EQ(csv_of(r), "tau,t\n");
}

TEST(Cli, JsonSummaryEchoesSeed) {
    const auto cfg = parse_config(kTiny.at("tw-table"), "tw-table", {{"seed", "12345"}});
    const auto j = summary_json(run(cfg), cfg);
    EXPECT_EQ(j["seed"], 12345u);
    EXPECT_EQ(j["version"], kVersion);
    EXPECT_EQ(j["parameters"]["s-min"], "-2");
    EXPECT_TRUE(j["checks_passed"].get<bool>());
}

TEST(Cli, WriteFailureIsIoError) {
    const auto cfg = parse_config(kTiny.at("tw-table"), "tw-table");
    try {
        write_results(run(cfg), cfg, "/nonexistent-dir/out.csv", "csv");
        FAIL() << "expected an io error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::io_error);
    }
}

TEST(Cli, DownstreamErrorsNameTheSubcommand) {
    try {
        run(parse_config("n = 9\nq = 1/2\nt-max = 1\nt-step = 1", "tv-exact"));
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::unsupported_size);
        EXPECT_NE(std::string(e.what()).find("tv-exact"), std::string::npos);
    }
}
