#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "robinwave/config.hpp"
#include "robinwave/criteria.hpp"
#include "robinwave/grid.hpp"
#include "robinwave/series.hpp"

namespace robinwave {

enum class SimStatus { blew_up, no_blowup_by_tmax, escaped_numerically };

const char* to_string(SimStatus s);

/// Outcome of a run. When blew_up, [t_lo, t_hi] brackets the first time
/// ||u||^2 crossed the threshold: ||u(t_lo)||^2 < threshold <= ||u(t_hi)||^2.
struct BlowUpReport {
    SimStatus status = SimStatus::no_blowup_by_tmax;
    double t_lo = 0.0;
    double t_hi = 0.0;
    double threshold = 0.0;
    Record final_record;
    std::string note;
};

struct IntegrateOptions {
    double dt = 1e-3;
    double t_max = 1.0;
    int record_every = 1;
    double threshold = 1e8;       // blow-up detection on ||u||^2
    double node_cap = 1e6;        // per-node escape magnitude
    double growth_factor = 10.0;  // per-step ||u||^2 growth triggering halving
    double dt_min = 1e-12;
    std::vector<double> snapshot_times;  // states captured at >= these times
};

/// Semidiscrete right-hand side: du = u_t,
/// dut = laplacian_robin(u) - b u_t + f(u) + h(.,t), evaluated nodewise.
void rhs_eval(const State& state, const ProblemSpec& spec, GridField& du,
              GridField& dut);

/// Fixed-step RK4 with emergency step-halving: a step is retried at half
/// dt when it produces non-finite values, grows ||u||^2 by more than
/// growth_factor, or pushes a node past node_cap while still below the
/// blow-up threshold; dt never grows back. All outcomes are statuses,
/// never errors. The cumulative integrals int ||u_t||^2 and int (u_t,h)
/// are carried as RK4 quadrature states so the energy-balance residual
/// inherits the stepper's order.
std::pair<SimSeries, BlowUpReport> integrate(const ProblemSpec& spec,
                                             const IntegrateOptions& opt);

/// Everything a scenario produced: constants, verdict, predicted bound,
/// the simulated series, and the bound-versus-observation comparison.
struct ScenarioReport {
    ProblemSpec spec;
    Regime regime = Regime::damped;
    Verdict verdict;
    std::optional<ConstantEstimate> d0;
    std::optional<ConstantEstimate> c_eps;
    std::optional<double> m;
    SimSeries series;
    BlowUpReport blowup;
    double energy_residual = 0.0;
    /// observed t_hi <= bound * (1 + compare_tolerance); nullopt when not
    /// applicable (criterion unsatisfied or no blow-up observed).
    std::optional<bool> bound_respected;
    double compare_tolerance = 0.0;
    /// Accelerating regime: min over records of the slack in the
    /// transformed-energy growth estimate E1(t) >= e^{4mat}[E1(0) + ...].
    std::optional<double> e1_growth_min_slack;
    std::vector<std::string> findings;
    std::vector<std::string> warnings;
};

/// Criteria-only part of a scenario (everything before time integration).
/// file_profile carries the node values of init.profile_file when the
/// config references one; the caller owns all file I/O.
ScenarioReport prepare_scenario(const RunConfig& cfg,
                                const std::optional<std::vector<double>>& file_profile);

/// Full pipeline: build spec -> estimate constants -> construct data ->
/// classify -> predicted bound -> integrate -> compare. A satisfied
/// criterion without observed blow-up is reported as a finding.
ScenarioReport run_scenario(const RunConfig& cfg,
                            const std::optional<std::vector<double>>& file_profile);

}  // namespace robinwave
