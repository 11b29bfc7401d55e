#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "asep/cli/runner.hpp"

int main(int argc, char** argv) {
    using namespace asep;
    CLI::App app{"Simulation and verification lab for biased card shuffling"};
    app.set_version_flag("--version", kVersion);

    std::vector<std::string> names;
    for (const auto& [name, keys] : cli::subcommand_keys()) names.push_back(name);

    std::string subcommand, config_path;
    std::vector<std::string> sets;
    std::map<std::string, std::string> flags;
    app.add_option("subcommand", subcommand, "experiment to run")->required()->check(CLI::IsMember(names));
    app.add_option("--config", config_path, "key = value file")->check(CLI::ExistingFile);
    std::set<std::string> keys;
    for (const auto& k : cli::common_keys()) keys.insert(k.name);
    for (const auto& [name, specs] : cli::subcommand_keys())
        for (const auto& k : specs) keys.insert(k.name);
    for (const auto& key : keys)
        app.add_option_function<std::string>("--" + key, [&flags, key](const std::string& v) { flags[key] = v; });
    app.add_option("--set", sets, "extra key=value overrides (repeatable)");

    CLI11_PARSE(app, argc, argv);

    try {
        for (const auto& kv : sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) fail(ErrorKind::configuration_error, "--set expects key=value, got '" + kv + "'");
            flags[cli::trim(kv.substr(0, eq))] = cli::trim(kv.substr(eq + 1));
        }
        std::string text;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) fail(ErrorKind::io_error, "cannot read " + config_path);
            std::stringstream ss;
            ss << in.rdbuf();
            text = ss.str();
        }
        const cli::RunConfig cfg = cli::parse_config(text, subcommand, flags);
        const unsigned threads =
            cfg.has("threads") ? static_cast<unsigned>(cfg.integer("threads")) : cli::default_threads();
        const auto result = cli::run(cfg, cli::thread_pool(threads));
        cli::write_results(result, cfg, cfg.has("out") ? cfg.text("out") : "", cfg.text("format"));
        return result.checks_passed ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "asep-lab: " << e.what() << '\n';
        return 2;
    }
}
