#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kgstar/errors.hpp"
#include "kgstar/initial_data.hpp"
#include "kgstar/network.hpp"

namespace kgstar {

/**
 * Experiment description parsed from the flat key-value config format
 * (dotted sections, '#' comments), e.g.
 *
 *   network.c = 1, 1
 *   network.a = 0, 10
 *   profile.j = 2
 *   profile.k = 1
 *   profile.alpha = 0.25
 *   profile.beta = 0.75
 *   profile.shift = auto        # band lower edge; or an explicit number
 *   observation.r = 2
 *   grids.t_list = 100, 200, 400, 800, 1600, 3200, 6400, 12800
 *   grids.slopes =              # empty = derive from the cone
 *   grids.a2 = 100, 316.227766, 1000, 3162.2776602, 10000
 *   grids.rays_per_cone = 129
 *   run.seed = 12345
 *   run.threads = 0             # 0 = hardware concurrency
 *   tolerances.panel_cap = 200000
 *   tolerances.min_panels = 64
 *   output.dir = out
 */
struct ExperimentConfig {
    std::vector<double> network_c;
    std::vector<double> network_a;
    int profile_j = 0;
    int profile_k = 0;
    double profile_alpha = 0.0;
    double profile_beta = 0.0;
    std::optional<double> profile_shift;  // absent => lower edge of band j
    int observation_r = 0;
    std::vector<double> t_list;
    std::vector<double> slopes;
    std::vector<double> a2_grid;
    int rays_per_cone = 129;
    std::uint64_t seed = 12345;
    int threads = 0;
    long panel_cap = 200000;
    int min_panels = 64;
    std::string out_dir = "out";
    std::string raw_text;  // verbatim input, hashed into every summary
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& field, const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line) + ", field " + field +
                         ": not a number: '" + v + "'");
    }
}

inline long parse_long(const std::string& field, const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const long d = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line) + ", field " + field +
                         ": not an integer: '" + v + "'");
    }
}

inline std::vector<double> parse_list(const std::string& field, const std::string& v, int line) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty())
            throw ParseError("line " + std::to_string(line) + ", field " + field +
                             ": empty list element");
        out.push_back(parse_double(field, item, line));
    }
    return out;
}

} // namespace detail

inline ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    cfg.raw_text = text;

    std::map<std::string, std::pair<std::string, int>> kv;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        if (key.empty())
            throw ParseError("line " + std::to_string(lineno) + ": empty key");
        if (kv.count(key))
            throw ParseError("line " + std::to_string(lineno) + ": duplicate key " + key);
        kv[key] = {val, lineno};
    }

    const auto take = [&](const std::string& key) -> std::optional<std::pair<std::string, int>> {
        const auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        auto v = it->second;
        kv.erase(it);
        return v;
    };
    const auto require = [&](const std::string& key) {
        auto v = take(key);
        if (!v) throw ParseError("missing field: " + key);
        return *v;
    };

    {
        const auto [v, ln] = require("network.c");
        cfg.network_c = detail::parse_list("network.c", v, ln);
    }
    {
        const auto [v, ln] = require("network.a");
        cfg.network_a = detail::parse_list("network.a", v, ln);
    }
    {
        const auto [v, ln] = require("profile.j");
        cfg.profile_j = static_cast<int>(detail::parse_long("profile.j", v, ln));
    }
    {
        const auto [v, ln] = require("profile.k");
        cfg.profile_k = static_cast<int>(detail::parse_long("profile.k", v, ln));
    }
    {
        const auto [v, ln] = require("profile.alpha");
        cfg.profile_alpha = detail::parse_double("profile.alpha", v, ln);
    }
    {
        const auto [v, ln] = require("profile.beta");
        cfg.profile_beta = detail::parse_double("profile.beta", v, ln);
    }
    if (auto v = take("profile.shift")) {
        if (v->first != "auto")
            cfg.profile_shift = detail::parse_double("profile.shift", v->first, v->second);
    }
    {
        const auto [v, ln] = require("observation.r");
        cfg.observation_r = static_cast<int>(detail::parse_long("observation.r", v, ln));
    }
    if (auto v = take("grids.t_list")) cfg.t_list = detail::parse_list("grids.t_list", v->first, v->second);
    if (auto v = take("grids.slopes")) {
        if (!v->first.empty()) cfg.slopes = detail::parse_list("grids.slopes", v->first, v->second);
    }
    if (auto v = take("grids.a2")) cfg.a2_grid = detail::parse_list("grids.a2", v->first, v->second);
    if (auto v = take("grids.rays_per_cone"))
        cfg.rays_per_cone = static_cast<int>(detail::parse_long("grids.rays_per_cone", v->first, v->second));
    if (auto v = take("run.seed"))
        cfg.seed = static_cast<std::uint64_t>(detail::parse_long("run.seed", v->first, v->second));
    if (auto v = take("run.threads"))
        cfg.threads = static_cast<int>(detail::parse_long("run.threads", v->first, v->second));
    if (auto v = take("tolerances.panel_cap"))
        cfg.panel_cap = detail::parse_long("tolerances.panel_cap", v->first, v->second);
    if (auto v = take("tolerances.min_panels"))
        cfg.min_panels = static_cast<int>(detail::parse_long("tolerances.min_panels", v->first, v->second));
    if (auto v = take("output.dir")) cfg.out_dir = v->first;

    if (!kv.empty())
        throw ParseError("line " + std::to_string(kv.begin()->second.second) +
                         ": unknown field " + kv.begin()->first);

    if (cfg.t_list.empty())
        for (int i = 0; i < 8; ++i) cfg.t_list.push_back(100.0 * std::pow(2.0, i));
    if (cfg.a2_grid.empty())
        for (int i = 0; i < 5; ++i) cfg.a2_grid.push_back(std::pow(10.0, 2.0 + 0.5 * i));
    return cfg;
}

/// Validated experiment objects built from a parsed config.
struct Experiment {
    StarNetwork net;
    SpectralProfile profile;
    int r = 0;
};

inline Experiment validate_config(const ExperimentConfig& cfg) {
    try {
        StarNetwork net = validate_network(cfg.network_c, cfg.network_a);
        const double shift = cfg.profile_shift ? *cfg.profile_shift
                                               : band(net, cfg.profile_j).lo;
        const BandBump psi = band_bump(cfg.profile_alpha + shift, cfg.profile_beta + shift);
        SpectralProfile prof = make_profile(net, cfg.profile_j, cfg.profile_k, psi);
        if (cfg.observation_r < 1 || cfg.observation_r > net.size() ||
            cfg.observation_r > prof.j || cfg.observation_r == prof.k)
            throw BranchHypothesisViolated("observation.r = " + std::to_string(cfg.observation_r) +
                                           " needs r <= j and r != k");
        return Experiment{std::move(net), std::move(prof), cfg.observation_r};
    } catch (const ValidationError&) {
        throw;
    } catch (const Error& e) {
        throw ValidationError(e.what());
    }
}

} // namespace kgstar
