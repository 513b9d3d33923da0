#include "robinwave/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "robinwave/concavity.hpp"
#include "robinwave/config.hpp"
#include "robinwave/errors.hpp"

namespace robinwave::cli {

namespace fs = std::filesystem;

namespace {

std::string fmt(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig load_config(const std::string& path) {
    return parse_config_text(read_text_file(path), path);
}

// Single-column decimal node values, one per line.
std::vector<double> load_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open profile file '" + path + "'");
    std::vector<double> values;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        const auto b = line.find_last_not_of(" \t\r");
        const std::string tok = line.substr(a, b - a + 1);
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &pos);
        } catch (const std::exception&) {
            pos = std::string::npos;
        }
        if (pos != tok.size() || !std::isfinite(v))
            throw ConfigError(path + ": line " + std::to_string(lineno) +
                                  ": not a number: '" + tok + "'",
                              lineno);
        values.push_back(v);
    }
    return values;
}

std::optional<std::vector<double>> maybe_profile(const RunConfig& cfg) {
    if (cfg.init_profile_file.empty()) return std::nullopt;
    return load_profile(cfg.init_profile_file);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw std::ios_base::failure("write failed for '" + path.string() + "'");
}

std::string bound_text(const BoundResult& b) {
    std::ostringstream out;
    out << "rule = " << (b.rule == BoundRule::basic ? "basic" : "general") << "\n";
    if (b.rule == BoundRule::general) {
        out << "gamma1 = " << fmt(b.gamma1) << "\n";
        out << "gamma2 = " << fmt(b.gamma2) << "\n";
    }
    out << "premise_ok = " << (b.premise_ok ? "true" : "false") << "\n";
    if (b.premise_ok)
        out << "t_bound = " << fmt(b.t_bound) << "\n";
    else
        out << "t_bound = inf  # no bound: premise fails\n";
    return out.str();
}

}  // namespace

std::string format_verdict(const ScenarioReport& rep) {
    const Verdict& v = rep.verdict;
    std::ostringstream out;
    out << "regime = " << to_string(v.regime) << "\n";
    out << "branch = " << to_string(v.branch) << "\n";
    out << "satisfied = " << (v.satisfied ? "true" : "false") << "\n";
    if (!v.reason.empty()) out << "reason = " << v.reason << "\n";
    out << "lhs = " << fmt(v.lhs) << "\n";
    out << "rhs = " << fmt(v.rhs) << "\n";
    for (const auto& [name, value] : v.constants)
        out << name << " = " << fmt(value) << "\n";
    if (rep.d0)
        out << "d0_two_grid_rel_change = " << fmt(rep.d0->two_grid_rel_change) << "\n";
    if (rep.c_eps)
        out << "C_eps_two_grid_rel_change = " << fmt(rep.c_eps->two_grid_rel_change)
            << "\n";
    if (v.regime == Regime::accelerating) {
        out << "psi2_positive = " << (v.psi2_positive ? "true" : "false") << "\n";
        out << "dpsi2_positive = " << (v.dpsi2_positive ? "true" : "false") << "\n";
    }
    out << "setup.alpha = " << fmt(v.setup.alpha) << "\n";
    out << "setup.c1 = " << fmt(v.setup.c1) << "\n";
    out << "setup.c2 = " << fmt(v.setup.c2) << "\n";
    out << "setup.psi0 = " << fmt(v.setup.psi0) << "\n";
    out << "setup.dpsi0 = " << fmt(v.setup.dpsi0) << "\n";
    if (v.bound)
        out << bound_text(*v.bound);
    else
        out << "t_bound = inf  # no bound: criterion not satisfied\n";
    for (const std::string& n : v.notes) out << "note = " << n << "\n";
    return out.str();
}

std::string format_report(const ScenarioReport& rep) {
    std::ostringstream out;
    out << format_verdict(rep);
    out << "status = " << to_string(rep.blowup.status) << "\n";
    if (rep.blowup.status == SimStatus::blew_up) {
        out << "t_lo = " << fmt(rep.blowup.t_lo) << "\n";
        out << "t_hi = " << fmt(rep.blowup.t_hi) << "\n";
    }
    out << "threshold = " << fmt(rep.blowup.threshold) << "\n";
    out << "records = " << rep.series.records.size() << "\n";
    out << "energy_residual = " << fmt(rep.energy_residual) << "\n";
    if (rep.bound_respected.has_value())
        out << "bound_check = " << (*rep.bound_respected ? "pass" : "fail") << "\n";
    else
        out << "bound_check = n/a\n";
    if (rep.e1_growth_min_slack)
        out << "e1_growth_min_slack = " << fmt(*rep.e1_growth_min_slack) << "\n";
    for (const std::string& f : rep.findings) out << "finding = " << f << "\n";
    for (const std::string& w : rep.warnings) out << "warning = " << w << "\n";
    return out.str();
}

std::string series_csv(const SimSeries& series) {
    std::ostringstream out;
    out << "t,norm_u_sq,norm_ut_sq,grad_sq,boundary_sq,potential,u_dot_ut,energy,"
           "cum_damping,cum_forcing\n";
    for (const Record& r : series.records) {
        out << fmt(r.t) << ',' << fmt(r.norm_u_sq) << ',' << fmt(r.norm_ut_sq) << ','
            << fmt(r.grad_sq) << ',' << fmt(r.boundary_sq) << ',' << fmt(r.potential)
            << ',' << fmt(r.u_dot_ut) << ',' << fmt(r.energy) << ','
            << fmt(r.cum_damping) << ',' << fmt(r.cum_forcing) << '\n';
    }
    return out.str();
}

namespace {

int cmd_check(const std::string& config_path, const std::string& out_dir,
              std::ostream& out) {
    const RunConfig cfg = load_config(config_path);
    validate_config(cfg, /*needs_time=*/false);
    const ScenarioReport rep = prepare_scenario(cfg, maybe_profile(cfg));
    const std::string text = format_verdict(rep);
    out << text;
    fs::create_directories(out_dir);
    write_text(fs::path(out_dir) / "verdict.txt", text);
    return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 std::ostream& out) {
    const RunConfig cfg = load_config(config_path);
    validate_config(cfg, /*needs_time=*/true);
    const ScenarioReport rep = run_scenario(cfg, maybe_profile(cfg));
    fs::create_directories(out_dir);
    write_text(fs::path(out_dir) / "series.csv", series_csv(rep.series));
    write_text(fs::path(out_dir) / "report.txt", format_report(rep));
    out << "status = " << to_string(rep.blowup.status) << "\n";
    if (rep.blowup.status == SimStatus::blew_up)
        out << "t_interval = [" << fmt(rep.blowup.t_lo) << ", " << fmt(rep.blowup.t_hi)
            << "]\n";
    return 0;
}

int cmd_bound(const ConcavitySetup& setup, std::ostream& out) {
    const BoundResult b = blowup_bound(setup);
    out << bound_text(b);
    return 0;
}

int cmd_oracle(const ConcavitySetup& setup, double threshold, std::ostream& out) {
    const BoundResult b = blowup_bound(setup);
    ProbeOptions opt;
    opt.threshold = threshold;
    const BlowupProbe probe = extremal_blowup(setup, opt);
    out << bound_text(b);
    switch (probe.outcome) {
        case ProbeOutcome::blew_up:
            out << "oracle_t_lo = " << fmt(probe.t_lo) << "\n";
            out << "oracle_t_hi = " << fmt(probe.t_hi) << "\n";
            if (b.premise_ok)
                out << "check = "
                    << (probe.t_hi <= b.t_bound * 1.001 ? "PASS" : "FAIL") << "\n";
            else
                out << "check = FINDING  # blow-up without a certified premise\n";
            break;
        case ProbeOutcome::no_blowup:
            if (!b.premise_ok)
                out << "oracle = no blow-up predicted; oracle confirms boundedness\n";
            else
                out << "oracle = no blow-up observed (guard time reached)\n";
            out << "psi_max = " << fmt(probe.psi_max) << "\n";
            out << "check = " << (b.premise_ok ? "FAIL" : "PASS") << "\n";
            break;
        case ProbeOutcome::stiff_failure:
            out << "oracle = stiff failure: step underflow at t = " << fmt(probe.t_lo)
                << ", psi_max = " << fmt(probe.psi_max) << "\n";
            out << "check = FAIL\n";
            break;
    }
    return 0;
}

struct VarySpec {
    std::string key;
    double lo = 0.0;
    double hi = 0.0;
    int count = 0;
};

VarySpec parse_vary(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos)
        throw ConfigError("--vary expects key=lo:hi:n, got '" + text + "'");
    VarySpec spec;
    spec.key = text.substr(0, eq);
    const std::string rest = text.substr(eq + 1);
    const auto c1 = rest.find(':');
    const auto c2 = rest.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw ConfigError("--vary expects key=lo:hi:n, got '" + text + "'");
    try {
        std::size_t pos = 0;
        spec.lo = std::stod(rest.substr(0, c1), &pos);
        spec.hi = std::stod(rest.substr(c1 + 1, c2 - c1 - 1), &pos);
        spec.count = std::stoi(rest.substr(c2 + 1), &pos);
    } catch (const std::exception&) {
        throw ConfigError("--vary expects numeric lo:hi:n, got '" + text + "'");
    }
    if (spec.count < 1) throw ConfigError("--vary needs n >= 1");
    return spec;
}

bool set_numeric_key(RunConfig& cfg, const std::string& key, double v) {
    if (key == "problem.b") cfg.b = v;
    else if (key == "problem.gamma") cfg.gamma = v;
    else if (key == "nonlinearity.p") cfg.p = v;
    else if (key == "forcing.amplitude") cfg.forcing_amplitude = v;
    else if (key == "forcing.lambda") cfg.forcing_lambda = v;
    else if (key == "domain.length") cfg.length = v;
    else if (key == "domain.length_y") cfg.length_y = v;
    else if (key == "init.scale") cfg.init_scale = v;
    else if (key == "time.dt") cfg.dt = v;
    else if (key == "time.t_max") cfg.t_max = v;
    else if (key == "detect.threshold") cfg.threshold = v;
    else if (key == "theorem2.c0") cfg.c0 = v;
    else return false;
    return true;
}

std::vector<double> vary_values(const VarySpec& spec) {
    std::vector<double> values;
    if (spec.count == 1) {
        values.push_back(spec.lo);
        return values;
    }
    const bool log_spacing = spec.lo > 0.0 && spec.hi / spec.lo > 100.0;
    for (int i = 0; i < spec.count; ++i) {
        const double s = static_cast<double>(i) / (spec.count - 1);
        values.push_back(log_spacing
                             ? spec.lo * std::pow(spec.hi / spec.lo, s)
                             : spec.lo + s * (spec.hi - spec.lo));
    }
    return values;
}

int cmd_sweep(const std::string& config_path, const std::string& vary_text,
              const std::string& out_dir, std::ostream& out) {
    const RunConfig base = load_config(config_path);
    const VarySpec vary = parse_vary(vary_text);
    {
        RunConfig probe = base;
        if (!set_numeric_key(probe, vary.key, vary.lo))
            throw ConfigError("--vary: unknown or non-numeric key '" + vary.key + "'");
    }
    const std::vector<double> values = vary_values(vary);
    const std::optional<std::vector<double>> profile = maybe_profile(base);

    // Scenario runs are pure; only the coordinator writes files.
    std::vector<std::future<ScenarioReport>> futures;
    futures.reserve(values.size());
    for (double v : values) {
        RunConfig cfg = base;
        set_numeric_key(cfg, vary.key, v);
        validate_config(cfg, /*needs_time=*/true);
        futures.push_back(std::async(std::launch::async, [cfg, &profile]() {
            return run_scenario(cfg, profile);
        }));
    }

    fs::create_directories(out_dir);
    std::ostringstream summary;
    summary << "value,satisfied,bound,status,t_lo,t_hi\n";
    for (std::size_t i = 0; i < futures.size(); ++i) {
        const ScenarioReport rep = futures[i].get();
        char name[32];
        std::snprintf(name, sizeof(name), "point_%03zu", i);
        const fs::path dir = fs::path(out_dir) / name;
        fs::create_directories(dir);
        write_text(dir / "series.csv", series_csv(rep.series));
        write_text(dir / "report.txt", format_report(rep));

        const bool blew = rep.blowup.status == SimStatus::blew_up;
        const double bound = rep.verdict.bound && rep.verdict.bound->premise_ok
                                 ? rep.verdict.bound->t_bound
                                 : std::numeric_limits<double>::infinity();
        summary << fmt(values[i]) << ',' << (rep.verdict.satisfied ? "true" : "false")
                << ',' << fmt(bound) << ',' << to_string(rep.blowup.status) << ','
                << (blew ? fmt(rep.blowup.t_lo) : std::string()) << ','
                << (blew ? fmt(rep.blowup.t_hi) : std::string()) << '\n';
    }
    write_text(fs::path(out_dir) / "summary.csv", summary.str());
    out << "points = " << values.size() << "\n";
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"numerical laboratory for finite-time blow-up of semilinear wave "
                 "equations under Robin boundary conditions"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::string vary_text;
    ConcavitySetup setup;
    double threshold = 1e8;

    CLI::App* check = app.add_subcommand("check", "evaluate the criterion, no simulation");
    check->add_option("config", config_path, "run configuration file")->required();
    check->add_option("--out", out_dir, "output directory for verdict.txt");

    CLI::App* simulate = app.add_subcommand("simulate", "run the full scenario pipeline");
    simulate->add_option("config", config_path, "run configuration file")->required();
    simulate->add_option("--out", out_dir, "output directory for series.csv/report.txt");

    CLI::App* bound = app.add_subcommand("bound", "closed-form blow-up bound");
    bound->add_option("--alpha", setup.alpha)->required();
    bound->add_option("--c1", setup.c1);
    bound->add_option("--c2", setup.c2);
    bound->add_option("--psi0", setup.psi0)->required();
    bound->add_option("--dpsi0", setup.dpsi0)->required();

    CLI::App* oracle = app.add_subcommand("oracle", "integrate the extremal equality case");
    oracle->add_option("--alpha", setup.alpha)->required();
    oracle->add_option("--c1", setup.c1);
    oracle->add_option("--c2", setup.c2);
    oracle->add_option("--psi0", setup.psi0)->required();
    oracle->add_option("--dpsi0", setup.dpsi0)->required();
    oracle->add_option("--threshold", threshold);

    CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep of scenarios");
    sweep->add_option("config", config_path, "run configuration file")->required();
    sweep->add_option("--vary", vary_text, "key=lo:hi:n")->required();
    sweep->add_option("--out", out_dir, "output directory")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*check) return cmd_check(config_path, out_dir, out);
        if (*simulate) return cmd_simulate(config_path, out_dir, out);
        if (*bound) return cmd_bound(setup, out);
        if (*oracle) return cmd_oracle(setup, threshold, out);
        if (*sweep) return cmd_sweep(config_path, vary_text, out_dir, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ApplicabilityError& e) {
        err << "not applicable: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "not applicable: " << e.what() << "\n";
        return 3;
    } catch (const std::ios_base::failure& e) {
        err << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const fs::filesystem_error& e) {
        err << "i/o error: " << e.what() << "\n";
        return 4;
    }
    return 2;
}

}  // namespace robinwave::cli
