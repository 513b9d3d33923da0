#include "robinwave/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "robinwave/errors.hpp"
#include "robinwave/functionals.hpp"
#include "robinwave/grid.hpp"

namespace robinwave {

const char* to_string(Regime r) {
    return r == Regime::damped ? "damped" : "accelerating";
}

const char* to_string(Branch b) {
    switch (b) {
        case Branch::k0_nonpositive: return "k0_nonpositive";
        case Branch::k0_positive: return "k0_positive";
        default: return "accelerating";
    }
}

namespace {

// Strict inequalities are tested with a relative margin so the verdict
// never hinges on round-off.
bool strictly_greater(double lhs, double rhs) {
    const double margin = 1e-12 * std::max({1.0, std::abs(lhs), std::abs(rhs)});
    return lhs - rhs > margin;
}

}  // namespace

Verdict classify_damped(const ProblemSpec& spec, double d0) {
    if (!(spec.b > 0.0) || !(spec.gamma > 0.0))
        throw ApplicabilityError(
            "damped criterion requires b > 0 and gamma > 0 (got b=" +
            std::to_string(spec.b) + ", gamma=" + std::to_string(spec.gamma) + ")");

    const double alpha = spec.nonlinearity.alpha;
    const double e0 = energy(State{0.0, spec.u0, spec.u1}, spec).total;
    const double h0 = forcing_h0(spec.forcing);
    const double h1 = forcing_h1(spec.forcing);
    const double a0 = compute_a0(alpha, spec.b, spec.gamma, d0, h0, h1);
    const double k0 = compute_k0(e0, a0, alpha);
    const double norm_u0_sq = l2_norm_sq(spec.u0);
    const double ip = l2_inner(spec.u0, spec.u1);

    Verdict v;
    v.regime = Regime::damped;
    v.constants = {{"alpha", alpha}, {"E0", e0},  {"A0", a0}, {"K0", k0},
                   {"d0", d0},       {"h0", h0},  {"h1", h1},
                   {"norm_u0_sq", norm_u0_sq},    {"u0_dot_u1", ip}};

    if (k0 <= 0.0) {
        v.branch = Branch::k0_nonpositive;
        v.lhs = ip;
        v.rhs = spec.b / alpha * norm_u0_sq;
        v.setup = ConcavitySetup{alpha, spec.b / 2.0, 0.0, norm_u0_sq, 2.0 * ip};
    } else {
        v.branch = Branch::k0_positive;
        v.lhs = 2.0 * ip;
        v.rhs = (spec.b / 2.0 + std::sqrt(spec.b * spec.b / 4.0 + alpha)) / alpha *
                (norm_u0_sq + k0);
        v.setup = ConcavitySetup{alpha, spec.b / 2.0, 1.0, norm_u0_sq + k0, 2.0 * ip};
    }
    v.satisfied = strictly_greater(v.lhs, v.rhs);
    if (!v.satisfied) v.reason = "condition";
    if (v.satisfied && v.setup.psi0 > 0.0) v.bound = general_bound(v.setup);
    return v;
}

std::pair<GridField, GridField> matched_initial_data(const GridField& profile,
                                                     double p, double scale) {
    if (!(p > 0.0)) throw std::invalid_argument("matched_initial_data: p must be positive");
    if (!(scale > 0.0))
        throw std::invalid_argument("matched_initial_data: scale must be positive");

    GridField u0 = profile;
    for (double& x : u0.values) x *= scale;

    const double norm = std::sqrt(l2_norm_sq(u0));
    if (norm == 0.0)
        throw std::invalid_argument("matched_initial_data: profile is identically zero");

    const double lp_integral =
        integrate_pointwise(u0, [p](double s) { return std::pow(std::abs(s), p + 2.0); });
    const double factor = std::sqrt(2.0 / (p + 2.0) * lp_integral) / norm;

    GridField u1 = u0;
    for (double& x : u1.values) x *= factor;
    return {std::move(u0), std::move(u1)};
}

namespace {

// Log-scale bisection shared by both regimes; `satisfied` must be
// monotone in the scale (true above a single threshold).
ScaleSearchResult scale_search(const std::function<Verdict(double)>& classify_at) {
    constexpr double kLo = 1e-3;
    constexpr double kHi = 1e6;
    constexpr double kFactor = 1.05;

    ScaleSearchResult res;
    Verdict at_hi = classify_at(kHi);
    if (!at_hi.satisfied) {
        res.found = false;
        res.verdict = std::move(at_hi);
        return res;
    }
    Verdict at_lo = classify_at(kLo);
    if (at_lo.satisfied) {
        res.found = true;
        res.scale = kLo;
        res.verdict = std::move(at_lo);
        return res;
    }

    double lo = kLo, hi = kHi;
    Verdict best = std::move(at_hi);
    while (hi / lo > kFactor) {
        const double mid = std::sqrt(lo * hi);
        Verdict at_mid = classify_at(mid);
        if (at_mid.satisfied) {
            hi = mid;
            best = std::move(at_mid);
        } else {
            lo = mid;
        }
    }
    res.found = true;
    res.scale = hi;
    res.verdict = std::move(best);
    return res;
}

}  // namespace

ScaleSearchResult find_blowup_scale(const GridField& profile, double p,
                                    const ProblemSpec& tmpl, double d0) {
    return scale_search([&](double s) {
        ProblemSpec spec = tmpl;
        spec.nonlinearity = NonlinearitySpec::power(p);
        auto [u0, u1] = matched_initial_data(profile, p, s);
        spec.u0 = std::move(u0);
        spec.u1 = std::move(u1);
        return classify_damped(spec, d0);
    });
}

double solve_growth_rate(double b, double gamma, double c_gamma) {
    if (c_gamma < 0.0)
        throw std::invalid_argument("solve_growth_rate: C(|gamma|^{-1}) must be >= 0");
    const double q = std::abs(gamma) * c_gamma;
    if (q == 0.0 && b >= 0.0)
        throw ApplicabilityError(
            "solve_growth_rate: no positive root (|gamma| C = 0 with b >= 0)");
    const double disc = std::sqrt(b * b + 4.0 * q);
    // Cancellation-free form of the positive root for b > 0.
    const double m = b > 0.0 ? 2.0 * q / (b + disc) : (-b + disc) / 2.0;
    const double residual = std::abs(m * m + m * b - q);
    if (!(m > 0.0) || residual > 1e-10 * std::max(1.0, q))
        throw std::runtime_error("solve_growth_rate: root certificate failed");
    return m;
}

Verdict check_accelerating(const ProblemSpec& spec, double m, double c_eps_value,
                           double c0) {
    if (!(m > 0.0)) throw std::invalid_argument("check_accelerating: m must be positive");
    if (!(c0 > 0.0)) throw std::invalid_argument("check_accelerating: c0 must be positive");

    const double alpha = spec.nonlinearity.alpha;
    const double e1_0 = transformed_energy(State{0.0, spec.u0, spec.u1}, spec, m);
    const double h0 = forcing_h0(spec.forcing);
    const double h1 = forcing_h1(spec.forcing);
    const double mbm2 = m * spec.b + m * m;
    const double b2m = spec.b + 2.0 * m;
    const double norm_u0_sq = l2_norm_sq(spec.u0);
    const double ip = l2_inner(spec.u0, spec.u1);

    Verdict v;
    v.regime = Regime::accelerating;
    v.branch = Branch::accelerating;
    if (spec.b >= 0.0)
        v.notes.push_back("accelerating criterion expects b < 0; got b >= 0");

    // Condition: lhs >= 0, with the forcing terms subtracted on the left.
    v.lhs = 4.0 * (alpha + 1.0) * e1_0 - h0 / (2.0 * m * alpha) -
            h1 * h1 / (2.0 * mbm2 * alpha) - 4.0 * (alpha + 1.0) * b2m * norm_u0_sq;
    v.rhs = 0.0;
    const double cond_margin = 1e-12 * std::max(1.0, std::abs(v.lhs));
    const bool condition_ok = v.lhs >= -cond_margin;

    const double psi2_0 = norm_u0_sq + c0;
    const double dpsi2_0 = 2.0 * (ip - m * norm_u0_sq) + b2m * norm_u0_sq;
    v.psi2_positive = psi2_0 > 0.0;
    v.dpsi2_positive = dpsi2_0 > 0.0;

    v.constants = {{"alpha", alpha}, {"E1_0", e1_0},   {"m", m},
                   {"C_eps", c_eps_value},             {"h0", h0},
                   {"h1", h1},       {"c0", c0},       {"norm_u0_sq", norm_u0_sq},
                   {"u0_dot_u1", ip},                  {"psi2_0", psi2_0},
                   {"dpsi2_0", dpsi2_0}};

    v.satisfied = condition_ok && v.psi2_positive && v.dpsi2_positive;
    if (!condition_ok)
        v.reason = "condition";
    else if (!v.satisfied)
        v.reason = "premise";

    v.setup = ConcavitySetup{alpha, 0.0, 0.0, psi2_0, dpsi2_0};
    if (v.satisfied) v.bound = basic_bound(v.setup);
    return v;
}

ScaleSearchResult find_blowup_scale_accelerating(const GridField& profile, double p,
                                                 const ProblemSpec& tmpl, double m,
                                                 double c_eps_value, double c0) {
    return scale_search([&](double s) {
        ProblemSpec spec = tmpl;
        spec.nonlinearity = NonlinearitySpec::power(p);
        GridField u0 = profile;
        for (double& x : u0.values) x *= s;
        GridField u1 = u0;
        for (double& x : u1.values) x *= m;
        spec.u0 = std::move(u0);
        spec.u1 = std::move(u1);
        return check_accelerating(spec, m, c_eps_value, c0);
    });
}

}  // namespace robinwave
