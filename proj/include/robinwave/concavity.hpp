#pragma once

#include <optional>

#include "robinwave/model.hpp"

namespace robinwave {

/// Inputs of the ODE-level concavity argument: the differential inequality
///   Psi'' Psi - (1+alpha)(Psi')^2 >= -2 c1 Psi Psi' - c2 Psi^2
/// together with the initial values Psi(0), Psi'(0).
struct ConcavitySetup {
    double alpha = 1.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double psi0 = 0.0;
    double dpsi0 = 0.0;
};

enum class BoundRule { basic, general };

struct BoundResult {
    BoundRule rule = BoundRule::basic;
    bool premise_ok = false;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    /// Upper bound on the blow-up time; +inf when the premise fails.
    double t_bound = 0.0;
};

/// Undamped case (c1 = c2 = 0): if Psi(0) > 0 and Psi'(0) > 0, Psi blows up
/// no later than Psi(0) / (alpha Psi'(0)). Throws when Psi(0) <= 0.
BoundResult basic_bound(const ConcavitySetup& setup);

/// Damped case (c1, c2 >= 0, c1 + c2 > 0): with s = sqrt(c1^2 + alpha c2),
/// gamma_1 = -c1 + s, gamma_2 = -c1 - s, the premise is
/// Psi'(0) > -gamma_2 Psi(0)/alpha and the bound is
///   T1 = ln[(gamma_1 Psi(0) + alpha Psi'(0)) / (gamma_2 Psi(0) + alpha Psi'(0))] / (2s).
/// Throws when Psi(0) <= 0.
BoundResult general_bound(const ConcavitySetup& setup);

/// Dispatch on c1 + c2.
BoundResult blowup_bound(const ConcavitySetup& setup);

enum class ProbeOutcome { blew_up, no_blowup, stiff_failure };

/// Result of integrating the equality case of the inequality. When
/// blew_up, [t_lo, t_hi] brackets the threshold crossing with
/// t_hi - t_lo <= 1e-6 t_hi; the reported time is always an interval,
/// never a point.
struct BlowupProbe {
    ProbeOutcome outcome = ProbeOutcome::no_blowup;
    double t_lo = 0.0;
    double t_hi = 0.0;
    double psi_max = 0.0;
    double threshold = 0.0;
    long steps = 0;
};

struct ProbeOptions {
    double threshold = 1e8;
    double dt0 = 1e-3;
    double t_guard = 1e3;
    double dt_min = 1e-12;
};

/// Brute-force oracle: adaptive step-halving RK4 on the equality case
///   Psi'' = ((1+alpha)(Psi')^2 - 2 c1 Psi Psi' - c2 Psi^2) / Psi
/// until Psi exceeds the threshold, Psi' turns nonpositive with Psi
/// bounded (no blow-up), or the guard time passes. The substitution
/// y = Psi^{-alpha} turns the equality case into the linear ODE
/// y'' + 2 c1 y' - alpha c2 y = 0, so the crossing time saturates the
/// closed-form bound exactly; see linearized_zero_time for that route.
BlowupProbe extremal_blowup(const ConcavitySetup& setup, const ProbeOptions& opt = {});

/// Machine-precision cross-check: the first zero of y = Psi^{-alpha}
/// solving y'' + 2 c1 y' - alpha c2 y = 0, or nullopt when y never
/// vanishes (no blow-up in the equality case).
std::optional<double> linearized_zero_time(const ConcavitySetup& setup);

}  // namespace robinwave
