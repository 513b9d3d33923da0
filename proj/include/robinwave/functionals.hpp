#pragma once

#include <limits>
#include <vector>

#include "robinwave/model.hpp"
#include "robinwave/series.hpp"

namespace robinwave {

/// E(t) split into its quadrature components:
///   total = kinetic + dirichlet + robin - potential
///         = 1/2||u_t||^2 + 1/2||grad u||^2 + (gamma/2) int_{dOmega} u^2
///           - (F(u),1).
struct EnergyBreakdown {
    double kinetic = 0.0;
    double dirichlet = 0.0;
    double robin = 0.0;
    double potential = 0.0;
    double total = 0.0;
};

/// Evaluate the energy of a state. Throws EscapedStateError naming the
/// first non-finite node if the state has escaped.
EnergyBreakdown energy(const State& state, const ProblemSpec& spec);

/// A0 = ((1+2a)/b) h0 + d0 h1^2 / (4a min{1,gamma}). Requires b > 0.
double compute_a0(double alpha, double b, double gamma, double d0, double h0, double h1);

/// K0 = 4(1+2a) E0 + A0.
double compute_k0(double e0, double a0, double alpha);

struct PsiPoint {
    double t = 0.0;
    double psi = 0.0;
    double dpsi = 0.0;
};

/// Psi(t) = ||u||^2 + c0 and Psi'(t) = 2(u,u_t) per record. Psi' is the
/// closed form, never a numeric difference, so 4||u_t||^2 Psi >= (Psi')^2
/// holds record-by-record whenever c0 >= 0.
std::vector<PsiPoint> psi_series(const SimSeries& series, double c0);

/// Transformed-variable functional for the accelerating regime, with
/// v = e^{-mt} u and v_t = e^{-mt}(u_t - m u):
///   Psi(t) = ||v||^2 + (b+2m) int_0^t ||v||^2 dtau + c0,
///   Psi'(t) = 2(v,v_t) + (b+2m)||v||^2.
/// The time integral is a running trapezoid over the stored records.
std::vector<PsiPoint> transformed_psi_series(const SimSeries& series,
                                             const ProblemSpec& spec, double m,
                                             double c0);

/// Max over records of |E(t) - E(0) + b int_0^t ||u_tau||^2 - int_0^t (u_tau,h)|,
/// using the cumulative integrals carried by the records.
double energy_residual(const SimSeries& series, const ProblemSpec& spec);

/// E1(t) for the transformed problem:
///   -((mb+m^2)/2)||v||^2 - 1/2||v_t||^2 - 1/2||grad v||^2
///   - (gamma/2) int_{dOmega} v^2 + e^{-2mt}(F(e^{mt}v),1),
/// evaluated from the original-variable state. Requires m > 0.
double transformed_energy(const State& state, const ProblemSpec& spec, double m);

/// E1(t) recomputed from the scalar quadratures of a record (the
/// transformed quantities are exponential rescalings of the stored ones).
double transformed_energy_from_record(const Record& r, const ProblemSpec& spec,
                                      double m);

/// Minimum slack, over all records with ||u||^2 <= norm_cutoff, of the
/// monitored growth estimate
///   E1(t) >= e^{4mat} [ E1(0) + (b+2m) I_v(t) - 1/(8ma) I_h(t) ],
/// where I_v(t) = int_0^t ||v_tau||^2 e^{-4ma tau} dtau and
/// I_h(t) = int_0^t ||h(tau)||^2 e^{-(4ma+2m) tau} dtau, both by running
/// trapezoid over the records. Nonnegative (up to quadrature error) along
/// any healthy transformed-regime run; the cutoff excludes the blow-up
/// ramp, where trapezoid sums of a near-singular integrand say nothing.
double transformed_energy_growth_min_slack(
    const SimSeries& series, const ProblemSpec& spec, double m,
    double norm_cutoff = std::numeric_limits<double>::infinity());

}  // namespace robinwave
