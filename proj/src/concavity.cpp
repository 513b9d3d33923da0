#include "robinwave/concavity.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace robinwave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_setup(const ConcavitySetup& s) {
    if (!(s.alpha > 0.0)) throw std::invalid_argument("concavity: alpha must be positive");
    if (s.c1 < 0.0 || s.c2 < 0.0)
        throw std::invalid_argument("concavity: c1 and c2 must be nonnegative");
    if (!(s.psi0 > 0.0)) throw std::invalid_argument("concavity: Psi(0) must be positive");
}

}  // namespace

BoundResult basic_bound(const ConcavitySetup& setup) {
    require_setup(setup);
    if (setup.c1 != 0.0 || setup.c2 != 0.0)
        throw std::invalid_argument("basic_bound: requires c1 = c2 = 0");
    BoundResult r;
    r.rule = BoundRule::basic;
    r.premise_ok = setup.dpsi0 > 0.0;
    r.t_bound = r.premise_ok ? setup.psi0 / (setup.alpha * setup.dpsi0) : kInf;
    return r;
}

BoundResult general_bound(const ConcavitySetup& setup) {
    require_setup(setup);
    if (!(setup.c1 + setup.c2 > 0.0))
        throw std::invalid_argument("general_bound: requires c1 + c2 > 0");
    BoundResult r;
    r.rule = BoundRule::general;
    const double s = std::sqrt(setup.c1 * setup.c1 + setup.alpha * setup.c2);
    r.gamma1 = -setup.c1 + s;
    r.gamma2 = -setup.c1 - s;
    const double denom = r.gamma2 * setup.psi0 + setup.alpha * setup.dpsi0;
    r.premise_ok = denom > 0.0;
    if (!r.premise_ok) {
        r.t_bound = kInf;
        return r;
    }
    const double numer = r.gamma1 * setup.psi0 + setup.alpha * setup.dpsi0;
    r.t_bound = std::log(numer / denom) / (2.0 * s);
    return r;
}

BoundResult blowup_bound(const ConcavitySetup& setup) {
    return (setup.c1 == 0.0 && setup.c2 == 0.0) ? basic_bound(setup)
                                                : general_bound(setup);
}

std::optional<double> linearized_zero_time(const ConcavitySetup& setup) {
    require_setup(setup);
    const double y0 = std::pow(setup.psi0, -setup.alpha);
    const double yp0 = -setup.alpha * std::pow(setup.psi0, -setup.alpha - 1.0) * setup.dpsi0;

    if (setup.c1 == 0.0 && setup.c2 == 0.0) {
        // y'' = 0: y is affine, vanishing iff it decreases.
        if (yp0 < 0.0) return -y0 / yp0;
        return std::nullopt;
    }

    const double s = std::sqrt(setup.c1 * setup.c1 + setup.alpha * setup.c2);
    const double g1 = -setup.c1 + s;
    const double g2 = -setup.c1 - s;
    // y = A e^{g1 t} + B e^{g2 t}; a positive first zero exists iff A < 0.
    const double A = (yp0 - g2 * y0) / (g1 - g2);
    const double B = (g1 * y0 - yp0) / (g1 - g2);
    if (!(A < 0.0)) return std::nullopt;
    return std::log(-B / A) / (g1 - g2);
}

namespace {

struct OdeState {
    double psi;
    double dpsi;
};

OdeState rhs(const ConcavitySetup& s, const OdeState& x) {
    const double acc = ((1.0 + s.alpha) * x.dpsi * x.dpsi -
                        2.0 * s.c1 * x.psi * x.dpsi - s.c2 * x.psi * x.psi) /
                       x.psi;
    return {x.dpsi, acc};
}

OdeState rk4_step(const ConcavitySetup& s, const OdeState& x, double dt) {
    const OdeState k1 = rhs(s, x);
    const OdeState x2{x.psi + 0.5 * dt * k1.psi, x.dpsi + 0.5 * dt * k1.dpsi};
    const OdeState k2 = rhs(s, x2);
    const OdeState x3{x.psi + 0.5 * dt * k2.psi, x.dpsi + 0.5 * dt * k2.dpsi};
    const OdeState k3 = rhs(s, x3);
    const OdeState x4{x.psi + dt * k3.psi, x.dpsi + dt * k3.dpsi};
    const OdeState k4 = rhs(s, x4);
    return {x.psi + dt / 6.0 * (k1.psi + 2.0 * (k2.psi + k3.psi) + k4.psi),
            x.dpsi + dt / 6.0 * (k1.dpsi + 2.0 * (k2.dpsi + k3.dpsi) + k4.dpsi)};
}

}  // namespace

BlowupProbe extremal_blowup(const ConcavitySetup& setup, const ProbeOptions& opt) {
    require_setup(setup);
    if (!(opt.threshold >= 1e8))
        throw std::invalid_argument("extremal_blowup: threshold must be >= 1e8");

    // Per-step growth caps: reject a step that moves Psi by more than ~2%
    // so the trajectory stays resolved on the blow-up ramp.
    constexpr double kGrowCap = 1.02;
    constexpr double kGrowTarget = 1.005;
    constexpr double kDtGrowth = 1.26;

    BlowupProbe probe;
    probe.threshold = opt.threshold;

    OdeState x{setup.psi0, setup.dpsi0};
    double t = 0.0;
    double dt = opt.dt0;
    probe.psi_max = x.psi;

    while (true) {
        if (x.dpsi <= 0.0 || t >= opt.t_guard) {
            probe.outcome = ProbeOutcome::no_blowup;
            probe.t_lo = probe.t_hi = t;
            return probe;
        }
        const double psi_prev = x.psi;
        const OdeState next = rk4_step(setup, x, dt);
        ++probe.steps;

        const bool healthy =
            std::isfinite(next.psi) && std::isfinite(next.dpsi) && next.psi > 0.0;
        if (healthy && next.psi >= opt.threshold) {
            // Bracket the crossing by bisection on the final step.
            double t_lo = t;
            double t_hi = t + dt;
            OdeState lo = x;
            while (t_hi - t_lo > 1e-6 * t_hi) {
                const double half = 0.5 * (t_hi - t_lo);
                const OdeState mid = rk4_step(setup, lo, half);
                ++probe.steps;
                if (!std::isfinite(mid.psi) || mid.psi >= opt.threshold) {
                    t_hi = t_lo + half;
                } else {
                    lo = mid;
                    t_lo += half;
                }
            }
            probe.outcome = ProbeOutcome::blew_up;
            probe.t_lo = t_lo;
            probe.t_hi = t_hi;
            probe.psi_max = opt.threshold;
            return probe;
        }
        if (!healthy || next.psi > kGrowCap * psi_prev) {
            dt *= 0.5;
            if (dt < opt.dt_min) {
                // For large alpha the crossing sits closer to the
                // singularity than one representable time step: resolving
                // Psi up to the threshold would need dt below the ulp of t.
                // Close the last stretch with a certified Taylor bracket on
                // y = Psi^{-alpha}: y is convex and decreasing here, so the
                // crossing of y_thr happens within 2 (y - y_thr)/|y'| as
                // long as that window is tiny.
                if (x.dpsi > 0.0) {
                    const double y = std::pow(x.psi, -setup.alpha);
                    const double y_thr = std::pow(opt.threshold, -setup.alpha);
                    const double dy = setup.alpha * std::pow(x.psi, -setup.alpha - 1.0) *
                                      x.dpsi;
                    const double window = 2.0 * (y - y_thr) / dy;
                    if (window > 0.0 && window <= 1e3 * opt.dt_min &&
                        window <= 1e-6 * (t + window)) {
                        probe.outcome = ProbeOutcome::blew_up;
                        probe.t_lo = t;
                        probe.t_hi = t + window;
                        probe.psi_max = opt.threshold;
                        return probe;
                    }
                }
                probe.outcome = ProbeOutcome::stiff_failure;
                probe.t_lo = probe.t_hi = t;
                return probe;
            }
            continue;
        }
        x = next;
        t += dt;
        probe.psi_max = std::max(probe.psi_max, x.psi);
        if (x.psi < kGrowTarget * psi_prev && dt * kDtGrowth <= opt.dt0) dt *= kDtGrowth;
    }
}

}  // namespace robinwave
