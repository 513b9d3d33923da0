#include "robinwave/config.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>

#include "robinwave/errors.hpp"

namespace robinwave {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, const std::string& key, int line) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": value of '" + key +
                              "' is not a number: '" + v + "'",
                          line);
    }
    if (pos != v.size() || !std::isfinite(x))
        throw ConfigError("line " + std::to_string(line) + ": value of '" + key +
                              "' is not a number: '" + v + "'",
                          line);
    return x;
}

int parse_int(const std::string& v, const std::string& key, int line) {
    const double x = parse_double(v, key, line);
    const int i = static_cast<int>(x);
    if (static_cast<double>(i) != x)
        throw ConfigError("line " + std::to_string(line) + ": value of '" + key +
                              "' is not an integer: '" + v + "'",
                          line);
    return i;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::set<std::string> seen;
    bool has_ny = false;

    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        const auto hash = s.find('#');
        if (hash != std::string::npos) s.erase(hash);
        s = trim(s);
        if (s.empty()) continue;

        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ": line " + std::to_string(line) +
                                  ": expected 'key = value', got '" + trim(raw) + "'",
                              line);
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(origin + ": line " + std::to_string(line) +
                                  ": expected 'key = value', got '" + trim(raw) + "'",
                              line);
        if (!seen.insert(key).second)
            throw ConfigError(origin + ": line " + std::to_string(line) +
                                  ": duplicate key '" + key + "'",
                              line);

        if (key == "problem.b") cfg.b = parse_double(value, key, line);
        else if (key == "problem.gamma") cfg.gamma = parse_double(value, key, line);
        else if (key == "nonlinearity.p") cfg.p = parse_double(value, key, line);
        else if (key == "forcing.kind") {
            if (value != "none" && value != "exp_decay")
                throw ConfigError(origin + ": line " + std::to_string(line) +
                                      ": forcing.kind must be 'none' or 'exp_decay'",
                                  line);
            cfg.forcing_kind = value;
        } else if (key == "forcing.amplitude") cfg.forcing_amplitude = parse_double(value, key, line);
        else if (key == "forcing.lambda") cfg.forcing_lambda = parse_double(value, key, line);
        else if (key == "domain.kind") {
            if (value != "interval" && value != "rectangle")
                throw ConfigError(origin + ": line " + std::to_string(line) +
                                      ": domain.kind must be 'interval' or 'rectangle'",
                                  line);
            cfg.domain_kind = value;
        } else if (key == "domain.length") cfg.length = parse_double(value, key, line);
        else if (key == "domain.length_y") cfg.length_y = parse_double(value, key, line);
        else if (key == "grid.n") cfg.n = parse_int(value, key, line);
        else if (key == "grid.ny") { cfg.ny = parse_int(value, key, line); has_ny = true; }
        else if (key == "init.kind") {
            if (value != "remark" && value != "file")
                throw ConfigError(origin + ": line " + std::to_string(line) +
                                      ": init.kind must be 'remark' or 'file'",
                                  line);
            cfg.init_kind = value;
        } else if (key == "init.scale") cfg.init_scale = parse_double(value, key, line);
        else if (key == "init.profile_file") cfg.init_profile_file = value;
        else if (key == "time.dt") { cfg.dt = parse_double(value, key, line); cfg.has_time = true; }
        else if (key == "time.t_max") { cfg.t_max = parse_double(value, key, line); cfg.has_time = true; }
        else if (key == "time.record_every") cfg.record_every = parse_int(value, key, line);
        else if (key == "detect.threshold") cfg.threshold = parse_double(value, key, line);
        else if (key == "scenario.theorem") {
            const int t = parse_int(value, key, line);
            if (t != 1 && t != 2)
                throw ConfigError(origin + ": line " + std::to_string(line) +
                                      ": scenario.theorem must be 1 or 2",
                                  line);
            cfg.theorem = t;
        } else if (key == "theorem2.c0") cfg.c0 = parse_double(value, key, line);
        else
            throw ConfigError(origin + ": line " + std::to_string(line) +
                                  ": unknown key '" + key + "'",
                              line);
    }

    if (cfg.domain_kind == "rectangle" && !has_ny) cfg.ny = cfg.n;
    return cfg;
}

void validate_config(const RunConfig& cfg, bool needs_time) {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };

    if (cfg.n < 4) fail("grid.n must be >= 4");
    if (!(cfg.length > 0.0)) fail("domain.length must be positive");
    if (cfg.domain_kind == "rectangle") {
        if (!(cfg.length_y > 0.0)) fail("domain.length_y must be positive");
        if (cfg.ny < 4) fail("grid.ny must be >= 4");
    }
    if (cfg.p < 0.0) fail("nonlinearity.p must be >= 0");
    if (cfg.forcing_kind == "exp_decay" && !(cfg.forcing_lambda > 0.0))
        fail("forcing.lambda must be positive");
    if (cfg.init_kind == "file" && cfg.init_profile_file.empty())
        fail("init.kind = file requires init.profile_file");
    if (!(cfg.init_scale > 0.0)) fail("init.scale must be positive");
    if (cfg.theorem == 2 && !(cfg.c0 > 0.0)) fail("theorem2.c0 must be positive");
    if (needs_time) {
        if (!cfg.has_time || !(cfg.dt > 0.0)) fail("time.dt must be positive");
        if (!(cfg.t_max > 0.0)) fail("time.t_max must be positive");
        if (cfg.record_every < 1) fail("time.record_every must be >= 1");
        if (!(cfg.threshold > 0.0)) fail("detect.threshold must be positive");
    }
}

std::string canonical_text(const RunConfig& cfg) {
    std::ostringstream out;
    out << "problem.b = " << fmt(cfg.b) << "\n";
    out << "problem.gamma = " << fmt(cfg.gamma) << "\n";
    out << "nonlinearity.p = " << fmt(cfg.p) << "\n";
    out << "forcing.kind = " << cfg.forcing_kind << "\n";
    out << "forcing.amplitude = " << fmt(cfg.forcing_amplitude) << "\n";
    out << "forcing.lambda = " << fmt(cfg.forcing_lambda) << "\n";
    out << "domain.kind = " << cfg.domain_kind << "\n";
    out << "domain.length = " << fmt(cfg.length) << "\n";
    if (cfg.domain_kind == "rectangle") {
        out << "domain.length_y = " << fmt(cfg.length_y) << "\n";
        out << "grid.ny = " << cfg.ny << "\n";
    }
    out << "grid.n = " << cfg.n << "\n";
    out << "init.kind = " << cfg.init_kind << "\n";
    out << "init.scale = " << fmt(cfg.init_scale) << "\n";
    if (!cfg.init_profile_file.empty())
        out << "init.profile_file = " << cfg.init_profile_file << "\n";
    if (cfg.has_time) {
        out << "time.dt = " << fmt(cfg.dt) << "\n";
        out << "time.t_max = " << fmt(cfg.t_max) << "\n";
    }
    out << "time.record_every = " << cfg.record_every << "\n";
    out << "detect.threshold = " << fmt(cfg.threshold) << "\n";
    out << "scenario.theorem = " << cfg.theorem << "\n";
    out << "theorem2.c0 = " << fmt(cfg.c0) << "\n";
    return out.str();
}

}  // namespace robinwave
