#pragma once

#include <string>

namespace robinwave {

/// Flat key-value run configuration, parsed from plain text with one
/// `key = value` pair per line and `#` comments. Unknown keys are
/// rejected; numbers parse in decimal with optional exponent.
struct RunConfig {
    // problem.*
    double b = 0.0;
    double gamma = 0.0;
    // nonlinearity.p: p > 0 selects f(u) = |u|^p u with alpha = p/4;
    // p = 0 selects the zero nonlinearity.
    double p = 0.0;
    // forcing.*
    std::string forcing_kind = "none";  // none | exp_decay
    double forcing_amplitude = 0.0;
    double forcing_lambda = 1.0;
    // domain.* / grid.*
    std::string domain_kind = "interval";  // interval | rectangle
    double length = 1.0;
    double length_y = 1.0;  // rectangle only
    int n = 0;
    int ny = 0;  // rectangle only; defaults to grid.n
    // init.*
    std::string init_kind = "remark";  // remark (constructed) | file
    double init_scale = 1.0;
    std::string init_profile_file;
    // time.*
    bool has_time = false;
    double dt = 0.0;
    double t_max = 0.0;
    int record_every = 1;
    // detect.*
    double threshold = 1e8;
    // scenario.* / theorem2.*
    int theorem = 1;  // 1 = damped criterion, 2 = accelerating criterion
    double c0 = 1.0;

    bool operator==(const RunConfig&) const = default;
};

/// Parse config text; `origin` names the source in error messages.
/// Throws ConfigError (with the offending line number) on unknown keys,
/// malformed numbers, duplicate keys, or bad enum values.
RunConfig parse_config_text(const std::string& text, const std::string& origin);

/// Validation beyond the grammar: required keys for the chosen scenario,
/// positivity constraints, init.profile_file presence for init.kind=file.
/// Throws ConfigError.
void validate_config(const RunConfig& cfg, bool needs_time);

/// Canonical serialization; parse_config_text(canonical_text(c)) == c.
std::string canonical_text(const RunConfig& cfg);

}  // namespace robinwave
