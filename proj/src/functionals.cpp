#include "robinwave/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "robinwave/errors.hpp"
#include "robinwave/grid.hpp"

namespace robinwave {

namespace {

void require_healthy(const GridField& field, const char* name) {
    const std::size_t bad = first_nonfinite_node(field);
    if (bad != static_cast<std::size_t>(-1))
        throw EscapedStateError(bad, std::string("escaped state: non-finite ") + name +
                                         " at node " + std::to_string(bad));
}

}  // namespace

EnergyBreakdown energy(const State& state, const ProblemSpec& spec) {
    require_healthy(state.u, "u");
    require_healthy(state.ut, "u_t");
    EnergyBreakdown e;
    e.kinetic = 0.5 * l2_norm_sq(state.ut);
    e.dirichlet = 0.5 * grad_norm_sq(state.u);
    e.robin = 0.5 * spec.gamma * boundary_square_integral(state.u);
    const NonlinearitySpec& nl = spec.nonlinearity;
    e.potential = nl.is_zero()
                      ? 0.0
                      : integrate_pointwise(state.u, [&nl](double s) { return nl.F(s); });
    e.total = e.kinetic + e.dirichlet + e.robin - e.potential;
    return e;
}

double compute_a0(double alpha, double b, double gamma, double d0, double h0, double h1) {
    if (!(b > 0.0))
        throw ApplicabilityError("the damped criterion requires positive damping (b > 0)");
    if (!(alpha > 0.0)) throw std::invalid_argument("compute_a0: alpha must be positive");
    if (!(gamma > 0.0)) throw std::invalid_argument("compute_a0: gamma must be positive");
    if (!(d0 > 0.0)) throw std::invalid_argument("compute_a0: d0 must be positive");
    return (1.0 + 2.0 * alpha) / b * h0 +
           d0 * h1 * h1 / (4.0 * alpha * std::min(1.0, gamma));
}

double compute_k0(double e0, double a0, double alpha) {
    return 4.0 * (1.0 + 2.0 * alpha) * e0 + a0;
}

std::vector<PsiPoint> psi_series(const SimSeries& series, double c0) {
    std::vector<PsiPoint> out;
    out.reserve(series.records.size());
    for (const Record& r : series.records)
        out.push_back({r.t, r.norm_u_sq + c0, 2.0 * r.u_dot_ut});
    return out;
}

std::vector<PsiPoint> transformed_psi_series(const SimSeries& series,
                                             const ProblemSpec& spec, double m,
                                             double c0) {
    if (!(m > 0.0))
        throw std::invalid_argument("transformed_psi_series: m must be positive");
    std::vector<PsiPoint> out;
    out.reserve(series.records.size());
    const double b2m = spec.b + 2.0 * m;
    double integral = 0.0;
    double prev_t = 0.0;
    double prev_vsq = 0.0;
    bool have_prev = false;
    for (const Record& r : series.records) {
        const double decay = std::exp(-2.0 * m * r.t);
        const double vsq = decay * r.norm_u_sq;
        const double v_dot_vt = decay * (r.u_dot_ut - m * r.norm_u_sq);
        if (have_prev) integral += 0.5 * (r.t - prev_t) * (vsq + prev_vsq);
        out.push_back({r.t, vsq + b2m * integral + c0, 2.0 * v_dot_vt + b2m * vsq});
        prev_t = r.t;
        prev_vsq = vsq;
        have_prev = true;
    }
    return out;
}

double energy_residual(const SimSeries& series, const ProblemSpec& spec) {
    if (series.records.empty()) return 0.0;
    const double e0 = series.records.front().energy;
    double worst = 0.0;
    for (const Record& r : series.records) {
        const double res = r.energy - e0 + spec.b * r.cum_damping - r.cum_forcing;
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

double transformed_energy_from_record(const Record& r, const ProblemSpec& spec,
                                      double m) {
    const double decay = std::exp(-2.0 * m * r.t);
    const double mbm2 = m * spec.b + m * m;
    const double norm_vt_sq =
        r.norm_ut_sq - 2.0 * m * r.u_dot_ut + m * m * r.norm_u_sq;
    return decay * (-0.5 * mbm2 * r.norm_u_sq - 0.5 * norm_vt_sq - 0.5 * r.grad_sq -
                    0.5 * spec.gamma * r.boundary_sq + r.potential);
}

double transformed_energy_growth_min_slack(const SimSeries& series,
                                           const ProblemSpec& spec, double m,
                                           double norm_cutoff) {
    if (series.records.empty()) return 0.0;
    const double alpha = spec.nonlinearity.alpha;
    const double b2m = spec.b + 2.0 * m;
    const double e1_0 = transformed_energy_from_record(series.records.front(), spec, m);
    const double g_norm_sq =
        spec.forcing.is_zero() ? 0.0 : l2_norm_sq(spec.forcing.profile);

    double min_slack = std::numeric_limits<double>::infinity();
    double iv = 0.0, ih = 0.0;
    double prev_t = 0.0, prev_fv = 0.0, prev_fh = 0.0;
    bool have_prev = false;
    for (const Record& r : series.records) {
        if (r.norm_u_sq > norm_cutoff) break;
        const double wexp = std::exp(-4.0 * m * alpha * r.t);
        const double norm_vt_sq = std::exp(-2.0 * m * r.t) *
                                  (r.norm_ut_sq - 2.0 * m * r.u_dot_ut +
                                   m * m * r.norm_u_sq);
        const double fv = norm_vt_sq * wexp;
        const double amp_t = spec.forcing.time_factor(r.t);
        const double fh = amp_t * amp_t * g_norm_sq * std::exp(-2.0 * m * r.t) * wexp;
        if (have_prev) {
            iv += 0.5 * (r.t - prev_t) * (fv + prev_fv);
            ih += 0.5 * (r.t - prev_t) * (fh + prev_fh);
        }
        const double rhs =
            (e1_0 + b2m * iv - ih / (8.0 * m * alpha)) / wexp;
        const double e1 = transformed_energy_from_record(r, spec, m);
        min_slack = std::min(min_slack, e1 - rhs);
        prev_t = r.t;
        prev_fv = fv;
        prev_fh = fh;
        have_prev = true;
    }
    return min_slack;
}

double transformed_energy(const State& state, const ProblemSpec& spec, double m) {
    if (!(m > 0.0)) throw std::invalid_argument("transformed_energy: m must be positive");
    require_healthy(state.u, "u");
    require_healthy(state.ut, "u_t");

    const double decay = std::exp(-m * state.t);
    GridField v(state.u.domain);
    GridField vt(state.u.domain);
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        v.values[i] = decay * state.u.values[i];
        vt.values[i] = decay * (state.ut.values[i] - m * state.u.values[i]);
    }
    const double mbm2 = m * spec.b + m * m;
    const NonlinearitySpec& nl = spec.nonlinearity;
    // e^{-2mt} (F(e^{mt} v), 1) reads the original field directly.
    const double potential =
        nl.is_zero() ? 0.0
                     : decay * decay *
                           integrate_pointwise(state.u, [&nl](double s) { return nl.F(s); });
    const double value = -0.5 * mbm2 * l2_norm_sq(v) - 0.5 * l2_norm_sq(vt) -
                         0.5 * grad_norm_sq(v) -
                         0.5 * spec.gamma * boundary_square_integral(v) + potential;
    if (!std::isfinite(value))
        throw EscapedStateError(0, "escaped state: non-finite transformed energy");
    return value;
}

}  // namespace robinwave
