#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "robinwave/concavity.hpp"
#include "robinwave/model.hpp"

namespace robinwave {

/// The two blow-up regimes the tool decides between: weak damping
/// (b > 0, gamma > 0, arbitrary initial energy) and an accelerating
/// term (b < 0, checked through the change of variables u = e^{mt} v).
enum class Regime { damped, accelerating };

/// Which condition was evaluated: the damped criterion splits on the
/// sign of K0; the accelerating criterion has a single condition on the
/// transformed energy.
enum class Branch { k0_nonpositive, k0_positive, accelerating };

const char* to_string(Regime r);
const char* to_string(Branch b);

/// Outcome of a criterion check: the branch taken, every constant the
/// condition reads, the concavity setup it certifies, and the resulting
/// blow-up bound (present iff satisfied).
struct Verdict {
    Regime regime = Regime::damped;
    Branch branch = Branch::k0_nonpositive;
    bool satisfied = false;
    std::string reason;  // "condition" or "premise" when unsatisfied
    double lhs = 0.0;    // tested inequality, satisfied iff lhs > rhs
    double rhs = 0.0;
    std::map<std::string, double> constants;
    ConcavitySetup setup;
    std::optional<BoundResult> bound;
    bool psi2_positive = false;   // accelerating regime: Psi2(0) > 0
    bool dpsi2_positive = false;  // accelerating regime: Psi2'(0) > 0
    std::vector<std::string> notes;
};

/// Damped-regime classifier. Computes E(0), A0 and K0 (d0 is supplied by
/// the grid module), picks the branch by the sign of K0, tests the branch
/// condition with a 1e-12 relative margin, and attaches the general
/// concavity bound with c1 = b/2 and c2 = 0 (K0 <= 0) or c2 = 1 (K0 > 0).
/// Throws ApplicabilityError unless b > 0 and gamma > 0.
Verdict classify_damped(const ProblemSpec& spec, double d0);

/// Initial data with the velocity parallel to the displacement and scaled
/// so that the kinetic term cancels the potential exactly:
///   u0 = scale * profile,
///   u1 = sqrt(2/(p+2) * int |u0|^{p+2}) * u0 / ||u0||,
/// which forces 1/2 ||u1||^2 = (F(u0),1) and hence
/// E(0) = 1/2 ||grad u0||^2 + (gamma/2) int_{dOmega} u0^2.
/// Throws when the profile is identically zero.
std::pair<GridField, GridField> matched_initial_data(const GridField& profile,
                                                     double p, double scale);

struct ScaleSearchResult {
    bool found = false;
    double scale = 0.0;
    Verdict verdict;
};

/// Smallest scale (within factor 1.05) at which the damped criterion is
/// satisfied for matched data built on the profile, by bisection on
/// log-scale over [1e-3, 1e6]. found=false if even scale 1e6 fails.
ScaleSearchResult find_blowup_scale(const GridField& profile, double p,
                                    const ProblemSpec& tmpl, double d0);

/// Positive root m of m^2 + m b - |gamma| C(|gamma|^{-1}) = 0, the growth
/// rate of the change of variables u = e^{mt} v. The returned root
/// satisfies |m^2 + mb - q| <= 1e-10 max(1,q). Throws when no positive
/// root exists (q = 0 with b >= 0).
double solve_growth_rate(double b, double gamma, double c_gamma);

/// Accelerating-regime check: evaluates E1(0) with v(0) = u0 and
/// v_t(0) = u1 - m u0, tests
///   4(a+1)E1(0) - h0/(2ma) - h1^2/(2(mb+m^2)a) - 4(a+1)(b+2m)||u0||^2 >= 0,
/// reports the basic-rule premises Psi2(0) > 0 and Psi2'(0) > 0 separately,
/// and attaches the basic bound Psi2(0)/(alpha Psi2'(0)) when satisfied.
Verdict check_accelerating(const ProblemSpec& spec, double m, double c_eps_value,
                           double c0);

/// Scale search for the accelerating regime with u0 = s*profile and
/// u1 = m*u0 (so the transformed initial velocity vanishes).
ScaleSearchResult find_blowup_scale_accelerating(const GridField& profile, double p,
                                                 const ProblemSpec& tmpl, double m,
                                                 double c_eps_value, double c0);

}  // namespace robinwave
