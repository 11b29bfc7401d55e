#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../error.hpp"
#include "../rational.hpp"

namespace asep::cli {

struct KeySpec {
    KeySpec(std::string n, bool req = false, std::string fb = {})
        : name(std::move(n)), required(req), fallback(std::move(fb)) {}
    std::string name;
    bool required;
    std::string fallback; // used when absent and not required; empty means "no value"
};

// Keys accepted by every subcommand.
inline const std::vector<KeySpec>& common_keys() {
    static const std::vector<KeySpec> keys = {
        {"seed", false, "1"}, {"threads", false, ""}, {"out", false, ""}, {"format", false, "csv"}};
    return keys;
}

inline const std::map<std::string, std::vector<KeySpec>>& subcommand_keys() {
    static const std::map<std::string, std::vector<KeySpec>> table = {
        {"sample-mallows", {{"n", true}, {"q", true}, {"trials", true}}},
        {"simulate",
         {{"n", true}, {"q", true}, {"t", true}, {"trials", false, "1"}, {"start", false, "identity"},
          {"trajectory", false, ""}}},
        {"tv-exact",
         {{"n", true}, {"q", true}, {"start", false, "identity"}, {"t-min", false, "0"}, {"t-max", true},
          {"t-step", true}}},
        {"tv-mc",
         {{"n", true}, {"q", true}, {"trials", true}, {"theta", false, "0"}, {"t-min", false, "0"}, {"t-max", true},
          {"t-step", true}}},
        {"profile",
         {{"n", true}, {"q", true}, {"trials", true}, {"theta", false, "0"}, {"tau", false, ""},
          {"tau-min", false, "-2"}, {"tau-max", false, "2"}, {"tau-step", false, "1"}}},
        {"min-height", {{"n", true}, {"q", true}, {"trials", true}, {"tau", false, "0"}, {"margin", false, "24"}}},
        {"shift-invariance", {{"n", true}, {"q", true}, {"trials", true}, {"t", true}, {"b", false, "0"}}},
        {"skew-reversibility", {{"n", true}, {"q", true}, {"trials", true}, {"t", true}, {"b", false, "0"}}},
        {"hitting",
         {{"m", true}, {"q", true}, {"trials", true}, {"c-min", false, "1"}, {"c-max", false, "20"},
          {"c-step", false, "1"}}},
        {"osp", {{"n", true}, {"trials", true}}},
        {"hecke-verify", {{"n", false, "3"}, {"q", false, "0,1/4,1/2,3/4"}, {"order", false, "8"}}},
        {"tw-table", {{"s-min", false, "-8"}, {"s-max", false, "6"}, {"s-step", false, "0.5"}}},
    };
    return table;
}

inline std::string normalize_key(std::string key) {
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
    std::replace(key.begin(), key.end(), '_', '-');
    return key;
}

inline std::string trim(std::string_view s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

[[noreturn]] inline void config_error(const std::string& key, const std::string& what) {
    fail(ErrorKind::configuration_error, key + ": " + what);
}

class RunConfig {
public:
    std::string subcommand;
    std::map<std::string, std::string> values; // normalized key -> raw text

    bool has(const std::string& key) const {
        auto it = values.find(key);
        return it != values.end() && !it->second.empty();
    }
    const std::string& text(const std::string& key) const {
        auto it = values.find(key);
        if (it == values.end() || it->second.empty()) config_error(key, "missing value");
        return it->second;
    }
    long long integer(const std::string& key) const {
        const std::string& s = text(key);
        long long v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size()) config_error(key, "not an integer: '" + s + "'");
        return v;
    }
    std::uint64_t unsigned64(const std::string& key) const {
        const std::string& s = text(key);
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size()) config_error(key, "not an unsigned integer: '" + s + "'");
        return v;
    }
    double real(const std::string& key) const {
        const std::string& s = text(key);
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end != s.c_str() + s.size() || s.empty()) config_error(key, "not a number: '" + s + "'");
        return v;
    }
    Rational rational(const std::string& key) const { return parse_rational_key(key, text(key)); }
    std::vector<Rational> rational_list(const std::string& key) const {
        std::vector<Rational> out;
        for (const auto& part : split(text(key))) out.push_back(parse_rational_key(key, part));
        return out;
    }
    std::vector<double> real_list(const std::string& key) const {
        std::vector<double> out;
        for (const auto& part : split(text(key))) {
            char* end = nullptr;
            const double v = std::strtod(part.c_str(), &end);
            if (part.empty() || end != part.c_str() + part.size()) config_error(key, "not a number: '" + part + "'");
            out.push_back(v);
        }
        return out;
    }
    std::vector<long long> integer_list(const std::string& key) const {
        std::vector<long long> out;
        for (const auto& part : split(text(key))) {
            long long v = 0;
            auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
            if (ec != std::errc() || p != part.data() + part.size())
                config_error(key, "not an integer: '" + part + "'");
            out.push_back(v);
        }
        return out;
    }

private:
    static std::vector<std::string> split(const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(trim(tok));
        return out;
    }
    static Rational parse_rational_key(const std::string& key, const std::string& s) {
        try {
            return parse_rational(s);
        } catch (const Error& e) {
            config_error(key, e.detail());
        }
    }
};

// "key = value" lines; '#' starts a comment.
inline std::map<std::string, std::string> parse_key_values(std::string_view text) {
    std::map<std::string, std::string> out;
    std::istringstream is{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            fail(ErrorKind::configuration_error, "line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = normalize_key(trim(body.substr(0, eq)));
        if (key.empty()) fail(ErrorKind::configuration_error, "line " + std::to_string(lineno) + ": empty key");
        out[key] = trim(body.substr(eq + 1));
    }
    return out;
}

// File values, then flag overrides; validates keys and required values for the subcommand.
inline RunConfig parse_config(std::string_view text, const std::string& subcommand,
                              const std::map<std::string, std::string>& overrides = {}) {
    const auto& table = subcommand_keys();
    auto it = table.find(subcommand);
    if (it == table.end()) fail(ErrorKind::configuration_error, "unknown subcommand '" + subcommand + "'");
    RunConfig cfg;
    cfg.subcommand = subcommand;
    auto merged = parse_key_values(text);
    for (const auto& [k, v] : overrides) merged[normalize_key(k)] = v;

    std::map<std::string, const KeySpec*> allowed;
    for (const auto& k : common_keys()) allowed[k.name] = &k;
    for (const auto& k : it->second) allowed[k.name] = &k;
    for (const auto& [k, v] : merged)
        if (!allowed.count(k)) config_error(k, "unknown key for subcommand " + subcommand);
    for (const auto& [name, spec] : allowed) {
        auto m = merged.find(name);
        if (m != merged.end() && !m->second.empty()) {
            cfg.values[name] = m->second;
        } else if (spec->required) {
            config_error(name, "required by subcommand " + subcommand);
        } else if (!spec->fallback.empty()) {
            cfg.values[name] = spec->fallback;
        }
    }
    if (cfg.has("q")) {
        if (subcommand == "hecke-verify") (void)cfg.rational_list("q");
        else (void)cfg.rational("q");
    }
    if (cfg.has("trials") && cfg.integer("trials") < 1) config_error("trials", "must be positive");
    const std::string& fmt = cfg.text("format");
    if (fmt != "csv" && fmt != "json-summary") config_error("format", "expected csv or json-summary");
    return cfg;
}

} // namespace asep::cli
