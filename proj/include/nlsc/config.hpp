#pragma once

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nlsc/classify.hpp"
#include "nlsc/dynamics.hpp"
#include "nlsc/errors.hpp"
#include "nlsc/params.hpp"

namespace nlsc {

struct GridSpec {
    double r_max = 30.0;
    int n = 2048;
};

struct DataSpec {
    std::string family = "ground";  // ground | gaussian
    double scale = 1.0;             // multiplier on the bound state
    double amplitude = 1.0;         // gaussian height
    double width = 1.0;             // gaussian width
};

struct VirialSpec {
    double R = 10.0;
    double eps = 0.0;  // 0 = half the admissible supremum
};

struct IoSpec {
    std::string out_dir = "out";
    std::string format = "csv";  // csv | json
};

struct RunConfig {
    std::string subcommand = "ground";
    int d = 3;
    double alpha = 2.0;
    double c = -0.1;
    GridSpec grid;
    EvolveControls controls;
    DataSpec data;
    VirialSpec virial;
    IoSpec io;
    SweepConfig sweep;

    ModelParams model() const { return make_model_params(d, alpha, c); }
};

namespace detail {

inline std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline double parse_double(const std::string& v, int line) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigParseError("line " + std::to_string(line) + ": bad number '" + v + "'");
    return x;
}

inline long parse_int(const std::string& v, int line) {
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigParseError("line " + std::to_string(line) + ": bad integer '" + v + "'");
    return x;
}

inline bool parse_bool(const std::string& v, int line) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigParseError("line " + std::to_string(line) + ": bad boolean '" + v + "'");
}

inline std::vector<double> parse_list(const std::string& v, int line) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(item, line));
    }
    return out;
}

}  // namespace detail

inline const std::vector<std::string>& known_subcommands() {
    static const std::vector<std::string> subs{"ground",   "evolve", "virial-check",
                                              "classify", "sweep",  "verify"};
    return subs;
}

// Sectioned key = value document: [run]/[model]/[grid]/[controls]/[data]/
// [virial]/[io]/[sweep].  Every key must be known; every value must parse;
// the model block must validate.  Missing keys keep their defaults.
inline RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::vector<double> gauss_amp, gauss_wid;
    std::istringstream is(text);
    std::string raw;
    std::string section = "run";
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        std::string s = raw;
        const size_t hash = s.find_first_of("#;");
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = detail::trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw ConfigParseError("line " + std::to_string(line) +
                                       ": unterminated section header");
            section = detail::trim(s.substr(1, s.size() - 2));
            if (section != "run" && section != "model" && section != "grid" &&
                section != "controls" && section != "data" && section != "virial" &&
                section != "io" && section != "sweep")
                throw ConfigParseError("line " + std::to_string(line) +
                                       ": unknown section '" + section + "'");
            continue;
        }
        const size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigParseError("line " + std::to_string(line) + ": expected key = value");
        const std::string key = detail::trim(s.substr(0, eq));
        const std::string val = detail::trim(s.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigParseError("line " + std::to_string(line) + ": empty key or value");

        auto unknown = [&]() {
            throw ConfigParseError("line " + std::to_string(line) + ": unknown key '" +
                                   section + "." + key + "'");
        };
        if (section == "run") {
            if (key == "subcommand") cfg.subcommand = val;
            else unknown();
        } else if (section == "model") {
            if (key == "d") cfg.d = static_cast<int>(detail::parse_int(val, line));
            else if (key == "alpha") cfg.alpha = detail::parse_double(val, line);
            else if (key == "c") cfg.c = detail::parse_double(val, line);
            else unknown();
        } else if (section == "grid") {
            if (key == "r_max") cfg.grid.r_max = detail::parse_double(val, line);
            else if (key == "n") cfg.grid.n = static_cast<int>(detail::parse_int(val, line));
            else unknown();
        } else if (section == "controls") {
            if (key == "dt0") cfg.controls.dt0 = detail::parse_double(val, line);
            else if (key == "t_end") cfg.controls.t_end = detail::parse_double(val, line);
            else if (key == "adapt") cfg.controls.adapt = detail::parse_bool(val, line);
            else if (key == "blowup_h1_factor")
                cfg.controls.blowup_h1_factor = detail::parse_double(val, line);
            else if (key == "energy_drift_cap")
                cfg.controls.energy_drift_cap = detail::parse_double(val, line);
            else if (key == "snapshot_stride")
                cfg.controls.snapshot_stride = static_cast<int>(detail::parse_int(val, line));
            else if (key == "max_steps") cfg.controls.max_steps = detail::parse_int(val, line);
            else unknown();
        } else if (section == "data") {
            if (key == "family") cfg.data.family = val;
            else if (key == "scale") cfg.data.scale = detail::parse_double(val, line);
            else if (key == "amplitude") cfg.data.amplitude = detail::parse_double(val, line);
            else if (key == "width") cfg.data.width = detail::parse_double(val, line);
            else unknown();
        } else if (section == "virial") {
            if (key == "R") cfg.virial.R = detail::parse_double(val, line);
            else if (key == "eps") cfg.virial.eps = detail::parse_double(val, line);
            else unknown();
        } else if (section == "io") {
            if (key == "out_dir") cfg.io.out_dir = val;
            else if (key == "format") cfg.io.format = val;
            else unknown();
        } else if (section == "sweep") {
            if (key == "ds") {
                cfg.sweep.ds.clear();
                for (double x : detail::parse_list(val, line))
                    cfg.sweep.ds.push_back(static_cast<int>(x));
            } else if (key == "alphas") cfg.sweep.alphas = detail::parse_list(val, line);
            else if (key == "cs") cfg.sweep.cs = detail::parse_list(val, line);
            else if (key == "lambdas") cfg.sweep.lambdas = detail::parse_list(val, line);
            else if (key == "gaussian_amplitudes") gauss_amp = detail::parse_list(val, line);
            else if (key == "gaussian_widths") gauss_wid = detail::parse_list(val, line);
            else if (key == "workers")
                cfg.sweep.workers = static_cast<int>(detail::parse_int(val, line));
            else unknown();
        }
    }
    if (gauss_amp.size() != gauss_wid.size())
        throw ConfigParseError("sweep.gaussian_amplitudes and sweep.gaussian_widths "
                               "must pair up");
    for (size_t i = 0; i < gauss_amp.size(); ++i)
        cfg.sweep.gaussians.push_back({gauss_amp[i], gauss_wid[i]});

    bool known = false;
    for (const auto& s : known_subcommands()) known = known || s == cfg.subcommand;
    if (!known)
        throw ConfigParseError("unknown subcommand '" + cfg.subcommand + "'");
    if (cfg.data.family != "ground" && cfg.data.family != "gaussian")
        throw ConfigParseError("unknown data family '" + cfg.data.family + "'");
    if (cfg.io.format != "csv" && cfg.io.format != "json")
        throw ConfigParseError("unknown output format '" + cfg.io.format + "'");
    cfg.model();  // surface dimension/coupling violations now
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigParseError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace nlsc
