#include "robinwave/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "robinwave/errors.hpp"
#include "robinwave/functionals.hpp"

namespace robinwave {

const char* to_string(SimStatus s) {
    switch (s) {
        case SimStatus::blew_up: return "blew_up";
        case SimStatus::no_blowup_by_tmax: return "no_blowup_by_tmax";
        default: return "escaped_numerically";
    }
}

void rhs_eval(const State& state, const ProblemSpec& spec, GridField& du,
              GridField& dut) {
    if (!state.u.conforms(spec.domain) || !state.ut.conforms(spec.domain))
        throw std::invalid_argument("rhs_eval: state does not conform to domain");
    RobinLaplacian lap{spec.domain, spec.gamma};
    lap.apply(state.u, dut);
    if (!du.conforms(spec.domain)) du = GridField(spec.domain);

    const NonlinearitySpec& nl = spec.nonlinearity;
    const bool forced = !spec.forcing.is_zero();
    const double hfac = forced ? spec.forcing.time_factor(state.t) : 0.0;
    const std::size_t n = state.u.values.size();
    for (std::size_t i = 0; i < n; ++i) {
        du.values[i] = state.ut.values[i];
        double acc = dut.values[i] - spec.b * state.ut.values[i];
        if (!nl.is_zero()) acc += nl.f(state.u.values[i]);
        if (forced) acc += hfac * spec.forcing.profile.values[i];
        dut.values[i] = acc;
    }
}

namespace {

std::vector<double> quadrature_weights(const SpatialDomain& d) {
    std::vector<double> w(d.node_count());
    if (d.dim() == 1) {
        for (int i = 0; i < d.nodes(0); ++i) w[static_cast<std::size_t>(i)] = node_weight(d, i);
    } else {
        std::size_t a = 0;
        for (int j = 0; j < d.nodes(1); ++j)
            for (int i = 0; i < d.nodes(0); ++i) w[a++] = node_weight(d, i, j);
    }
    return w;
}

// One RK4 stage of the augmented system (u, u_t, z1, z2) with
// z1' = ||u_t||^2 and z2' = (u_t, h(t)); z1, z2 ride along so the
// cumulative integrals carry the stepper's accuracy.
struct Stage {
    GridField du;
    GridField dut;
    double dz1 = 0.0;
    double dz2 = 0.0;
};

class Stepper {
public:
    Stepper(const ProblemSpec& spec)
        : spec_(spec),
          lap_{spec.domain, spec.gamma},
          w_(quadrature_weights(spec.domain)),
          tmp_u_(spec.domain),
          tmp_ut_(spec.domain) {
        for (Stage& k : k_) {
            k.du = GridField(spec.domain);
            k.dut = GridField(spec.domain);
        }
    }

    void eval(const GridField& u, const GridField& ut, double t, Stage& k) {
        lap_.apply(u, k.dut);
        const NonlinearitySpec& nl = spec_.nonlinearity;
        const bool forced = !spec_.forcing.is_zero();
        const double hfac = forced ? spec_.forcing.time_factor(t) : 0.0;
        const std::size_t n = u.values.size();
        double z1 = 0.0, z2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = ut.values[i];
            k.du.values[i] = v;
            double acc = k.dut.values[i] - spec_.b * v;
            if (!nl.is_zero()) acc += nl.f(u.values[i]);
            if (forced) {
                const double g = spec_.forcing.profile.values[i];
                acc += hfac * g;
                z2 += w_[i] * v * g;
            }
            k.dut.values[i] = acc;
            z1 += w_[i] * v * v;
        }
        k.dz1 = z1;
        k.dz2 = hfac * z2;
    }

    // Classical RK4 from (u, ut, z1, z2) at time t over dt.
    void step(const GridField& u, const GridField& ut, double z1, double z2, double t,
              double dt, GridField& nu, GridField& nut, double& nz1, double& nz2) {
        eval(u, ut, t, k_[0]);
        blend(u, ut, k_[0], 0.5 * dt);
        eval(tmp_u_, tmp_ut_, t + 0.5 * dt, k_[1]);
        blend(u, ut, k_[1], 0.5 * dt);
        eval(tmp_u_, tmp_ut_, t + 0.5 * dt, k_[2]);
        blend(u, ut, k_[2], dt);
        eval(tmp_u_, tmp_ut_, t + dt, k_[3]);

        const std::size_t n = u.values.size();
        if (!nu.conforms(spec_.domain)) nu = GridField(spec_.domain);
        if (!nut.conforms(spec_.domain)) nut = GridField(spec_.domain);
        const double c = dt / 6.0;
        for (std::size_t i = 0; i < n; ++i) {
            nu.values[i] = u.values[i] + c * (k_[0].du.values[i] +
                                              2.0 * (k_[1].du.values[i] + k_[2].du.values[i]) +
                                              k_[3].du.values[i]);
            nut.values[i] = ut.values[i] + c * (k_[0].dut.values[i] +
                                                2.0 * (k_[1].dut.values[i] + k_[2].dut.values[i]) +
                                                k_[3].dut.values[i]);
        }
        nz1 = z1 + c * (k_[0].dz1 + 2.0 * (k_[1].dz1 + k_[2].dz1) + k_[3].dz1);
        nz2 = z2 + c * (k_[0].dz2 + 2.0 * (k_[1].dz2 + k_[2].dz2) + k_[3].dz2);
    }

private:
    void blend(const GridField& u, const GridField& ut, const Stage& k, double h) {
        const std::size_t n = u.values.size();
        for (std::size_t i = 0; i < n; ++i) {
            tmp_u_.values[i] = u.values[i] + h * k.du.values[i];
            tmp_ut_.values[i] = ut.values[i] + h * k.dut.values[i];
        }
    }

    const ProblemSpec& spec_;
    RobinLaplacian lap_;
    std::vector<double> w_;
    Stage k_[4];
    GridField tmp_u_, tmp_ut_;
};

Record make_record(double t, const GridField& u, const GridField& ut, double z1,
                   double z2, const ProblemSpec& spec) {
    Record r;
    r.t = t;
    r.norm_u_sq = l2_norm_sq(u);
    r.norm_ut_sq = l2_norm_sq(ut);
    r.grad_sq = grad_norm_sq(u);
    r.boundary_sq = boundary_square_integral(u);
    const NonlinearitySpec& nl = spec.nonlinearity;
    r.potential =
        nl.is_zero() ? 0.0 : integrate_pointwise(u, [&nl](double s) { return nl.F(s); });
    r.u_dot_ut = l2_inner(u, ut);
    r.energy = 0.5 * r.norm_ut_sq + 0.5 * r.grad_sq +
               0.5 * spec.gamma * r.boundary_sq - r.potential;
    r.cum_damping = z1;
    r.cum_forcing = z2;
    return r;
}

bool all_finite(const GridField& a, const GridField& b) {
    return first_nonfinite_node(a) == static_cast<std::size_t>(-1) &&
           first_nonfinite_node(b) == static_cast<std::size_t>(-1);
}

double max_abs(const GridField& u) {
    double m = 0.0;
    for (double x : u.values) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

std::pair<SimSeries, BlowUpReport> integrate(const ProblemSpec& spec,
                                             const IntegrateOptions& opt) {
    if (!spec.u0.conforms(spec.domain) || !spec.u1.conforms(spec.domain))
        throw std::invalid_argument("integrate: initial data does not conform to domain");
    if (!(opt.dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");

    SimSeries series;
    BlowUpReport report;
    report.threshold = opt.threshold;

    double min_dx = spec.domain.dx(0);
    if (spec.domain.dim() == 2) min_dx = std::min(min_dx, spec.domain.dx(1));
    if (opt.dt > 0.5 * min_dx)
        report.note = "warning: time.dt exceeds the CFL guard 0.5*dx";

    Stepper stepper(spec);
    GridField u = spec.u0;
    GridField ut = spec.u1;
    GridField nu(spec.domain), nut(spec.domain);
    double z1 = 0.0, z2 = 0.0;
    double t = 0.0;
    double dt = opt.dt;
    long accepted = 0;
    std::size_t next_snapshot = 0;

    auto snapshot_due = [&](double now) {
        while (next_snapshot < opt.snapshot_times.size() &&
               now >= opt.snapshot_times[next_snapshot]) {
            series.snapshots.push_back(State{now, u, ut});
            ++next_snapshot;
        }
    };

    series.records.push_back(make_record(0.0, u, ut, z1, z2, spec));
    snapshot_due(0.0);
    double cur_norm = series.records.front().norm_u_sq;

    if (cur_norm >= opt.threshold) {
        report.status = SimStatus::blew_up;
        report.t_lo = report.t_hi = 0.0;
        report.note = "initial data already beyond the detection threshold";
        report.final_record = series.records.back();
        return {std::move(series), report};
    }

    const double t_eps = 1e-12 * std::max(1.0, opt.t_max);
    report.status = SimStatus::no_blowup_by_tmax;

    while (t < opt.t_max - t_eps) {
        const double dt_step = std::min(dt, opt.t_max - t);
        double nz1 = 0.0, nz2 = 0.0;
        stepper.step(u, ut, z1, z2, t, dt_step, nu, nut, nz1, nz2);

        const bool healthy = all_finite(nu, nut);
        const double new_norm = healthy ? l2_norm_sq(nu) : 0.0;

        if (healthy && new_norm >= opt.threshold) {
            // Bracket: the state at t is below the threshold, t + dt_step above.
            if (t > series.records.back().t + t_eps)
                series.records.push_back(make_record(t, u, ut, z1, z2, spec));
            u = nu;
            ut = nut;
            series.records.push_back(make_record(t + dt_step, u, ut, nz1, nz2, spec));
            report.status = SimStatus::blew_up;
            report.t_lo = t;
            report.t_hi = t + dt_step;
            break;
        }

        const bool spike = healthy && max_abs(nu) > opt.node_cap;
        // The absolute floor keeps the growth guard quiet near the zero
        // solution, where the ratio is round-off noise.
        const bool runaway =
            healthy && new_norm > opt.growth_factor * cur_norm && new_norm > 1e-6;
        if (!healthy || spike || runaway) {
            dt *= 0.5;
            if (dt < opt.dt_min) {
                report.status = SimStatus::escaped_numerically;
                report.note = !healthy
                                  ? "non-finite values before threshold; step underflow"
                                  : "per-node escape before threshold; step underflow";
                break;
            }
            continue;
        }

        std::swap(u.values, nu.values);
        std::swap(ut.values, nut.values);
        z1 = nz1;
        z2 = nz2;
        t += dt_step;
        cur_norm = new_norm;
        ++accepted;
        if (accepted % opt.record_every == 0 &&
            t > series.records.back().t + t_eps)
            series.records.push_back(make_record(t, u, ut, z1, z2, spec));
        snapshot_due(t);
    }

    if (report.status == SimStatus::no_blowup_by_tmax &&
        t > series.records.back().t + t_eps)
        series.records.push_back(make_record(t, u, ut, z1, z2, spec));

    report.final_record = series.records.back();
    return {std::move(series), report};
}

namespace {

GridField default_profile(const SpatialDomain& d) {
    constexpr double pi = 3.14159265358979323846;
    if (d.dim() == 1) {
        const double L = d.length[0];
        return sampled(d, [L, pi](double x) { return std::sin(pi * x / L); });
    }
    const double lx = d.length[0];
    const double ly = d.length[1];
    return sampled(d, [=](double x, double y) {
        return std::sin(pi * x / lx) * std::sin(pi * y / ly);
    });
}

int estimation_resolution(const SpatialDomain& d) {
    if (d.dim() == 1) return std::clamp(d.cells[0], 200, 400);
    return std::clamp(std::max(d.cells[0], d.cells[1]), 16, 32);
}

}  // namespace

ScenarioReport prepare_scenario(const RunConfig& cfg,
                                const std::optional<std::vector<double>>& file_profile) {
    validate_config(cfg, /*needs_time=*/false);

    ScenarioReport rep;
    SpatialDomain domain =
        cfg.domain_kind == "interval"
            ? SpatialDomain::interval(cfg.length, cfg.n)
            : SpatialDomain::rectangle(cfg.length, cfg.length_y, cfg.n, cfg.ny);

    GridField profile;
    if (file_profile.has_value()) {
        if (file_profile->size() != domain.node_count())
            throw ConfigError("init.profile_file: expected " +
                              std::to_string(domain.node_count()) + " node values, got " +
                              std::to_string(file_profile->size()));
        profile = GridField(domain);
        profile.values = *file_profile;
    } else {
        if (cfg.init_kind == "file")
            throw ConfigError("init.kind = file requires profile data");
        profile = default_profile(domain);
    }

    ProblemSpec spec;
    spec.b = cfg.b;
    spec.gamma = cfg.gamma;
    spec.domain = domain;
    spec.nonlinearity =
        cfg.p > 0.0 ? NonlinearitySpec::power(cfg.p) : NonlinearitySpec::none();
    if (cfg.forcing_kind == "exp_decay")
        spec.forcing = ForcingSpec::exp_decay(cfg.forcing_amplitude, cfg.forcing_lambda,
                                              profile);
    const int est_res = estimation_resolution(domain);

    GridField u0 = profile;
    for (double& x : u0.values) x *= cfg.init_scale;

    if (cfg.theorem == 1) {
        rep.regime = Regime::damped;
        if (cfg.p > 0.0 && l2_norm_sq(u0) > 0.0) {
            auto [m_u0, m_u1] = matched_initial_data(profile, cfg.p, cfg.init_scale);
            spec.u0 = std::move(m_u0);
            spec.u1 = std::move(m_u1);
        } else {
            spec.u0 = u0;
            spec.u1 = GridField(domain);
        }
        rep.d0 = estimate_d0(domain, est_res);
        rep.verdict = classify_damped(spec, rep.d0->value);
    } else {
        rep.regime = Regime::accelerating;
        if (spec.gamma == 0.0)
            throw ApplicabilityError(
                "accelerating criterion requires gamma != 0 (C(|gamma|^{-1}) undefined)");
        rep.c_eps = estimate_c_eps(domain, 1.0 / std::abs(spec.gamma), est_res);
        rep.m = solve_growth_rate(spec.b, spec.gamma, rep.c_eps->value);
        spec.u0 = u0;
        GridField u1 = u0;
        for (double& x : u1.values) x *= *rep.m;
        spec.u1 = std::move(u1);
        rep.verdict = check_accelerating(spec, *rep.m, rep.c_eps->value, cfg.c0);
    }

    const std::vector<std::string> violations = validate(spec);
    if (!violations.empty()) {
        std::string msg = "problem spec invalid:";
        for (const std::string& v : violations) msg += " " + v + ";";
        throw ConfigError(msg);
    }

    rep.spec = std::move(spec);
    return rep;
}

ScenarioReport run_scenario(const RunConfig& cfg,
                            const std::optional<std::vector<double>>& file_profile) {
    validate_config(cfg, /*needs_time=*/true);
    ScenarioReport rep = prepare_scenario(cfg, file_profile);

    IntegrateOptions opt;
    opt.dt = cfg.dt;
    opt.t_max = cfg.t_max;
    opt.record_every = cfg.record_every;
    opt.threshold = cfg.threshold;
    auto [series, blowup] = integrate(rep.spec, opt);
    rep.series = std::move(series);
    rep.blowup = blowup;
    if (!blowup.note.empty()) rep.warnings.push_back(blowup.note);

    rep.energy_residual = energy_residual(rep.series, rep.spec);
    if (rep.regime == Regime::accelerating && rep.m.has_value()) {
        // Monitor the growth estimate on the resolved window only: three
        // decades above the initial amplitude, below the blow-up ramp.
        const double base = std::max(rep.series.records.front().norm_u_sq, 1e-12);
        const double cutoff = std::min(1e3 * base, 1e-3 * cfg.threshold);
        rep.e1_growth_min_slack =
            transformed_energy_growth_min_slack(rep.series, rep.spec, *rep.m, cutoff);
    }

    const bool have_bound = rep.verdict.satisfied && rep.verdict.bound.has_value() &&
                            rep.verdict.bound->premise_ok;
    if (have_bound) {
        const double bound = rep.verdict.bound->t_bound;
        switch (rep.blowup.status) {
            case SimStatus::blew_up: {
                const bool ok = rep.blowup.t_hi <= bound * (1.0 + rep.compare_tolerance);
                rep.bound_respected = ok;
                if (!ok)
                    rep.findings.push_back(
                        "observed blow-up interval ends after the predicted bound");
                break;
            }
            case SimStatus::no_blowup_by_tmax:
                rep.findings.push_back(
                    "criterion satisfied but no blow-up by t_max "
                    "(t_max too small or resolution artifact)");
                break;
            case SimStatus::escaped_numerically:
                rep.findings.push_back(
                    "criterion satisfied but the run escaped numerically before the "
                    "threshold");
                break;
        }
    } else if (rep.blowup.status == SimStatus::blew_up) {
        rep.findings.push_back(
            "blow-up observed although the criterion is not satisfied "
            "(the criteria are sufficient, not necessary)");
    }

    return rep;
}

}  // namespace robinwave
