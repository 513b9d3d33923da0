#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace robinwave {

enum class DomainKind { interval, rectangle };

/// Uniform tensor grid over (0,L) or (0,Lx)x(0,Ly). Fields are nodal
/// (vertex-centered): each axis carries cells+1 nodes including both
/// boundary nodes, so boundary traces are exact reads.
struct SpatialDomain {
    DomainKind kind = DomainKind::interval;
    std::array<double, 2> length{1.0, 1.0};
    std::array<int, 2> cells{0, 0};

    static SpatialDomain interval(double len, int n);
    static SpatialDomain rectangle(double lx, double ly, int nx, int ny);

    int dim() const { return kind == DomainKind::interval ? 1 : 2; }
    double dx(int axis) const { return length[axis] / cells[axis]; }
    int nodes(int axis) const { return cells[axis] + 1; }
    std::size_t node_count() const;
    double coord(int axis, int i) const { return i * dx(axis); }
    bool same_grid(const SpatialDomain& other) const;
};

/// Real-valued function sampled on the nodes of a SpatialDomain.
/// 2D storage is row-major in the second axis: index = j*(nx+1) + i.
struct GridField {
    SpatialDomain domain;
    std::vector<double> values;

    GridField() = default;
    explicit GridField(const SpatialDomain& d, double fill = 0.0);

    std::size_t size() const { return values.size(); }
    bool conforms(const SpatialDomain& d) const;

    double& at(int i) { return values[static_cast<std::size_t>(i)]; }
    double at(int i) const { return values[static_cast<std::size_t>(i)]; }
    double& at(int i, int j) { return values[index(i, j)]; }
    double at(int i, int j) const { return values[index(i, j)]; }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * domain.nodes(0) + i;
    }
};

/// Sample f(x) (interval) or f(x,y) (rectangle) at the grid nodes.
GridField sampled(const SpatialDomain& d, const std::function<double(double)>& f);
GridField sampled(const SpatialDomain& d,
                  const std::function<double(double, double)>& f);

/// Index of the first non-finite node value, or npos if all finite.
std::size_t first_nonfinite_node(const GridField& u);

enum class NonlinearityKind { zero, power };

/// Source term f(u) together with its antiderivative F and the concavity
/// exponent alpha. The power kind is f(s) = |s|^p s, F(s) = |s|^{p+2}/(p+2),
/// for which f(s)s - 2(2a+1)F(s) vanishes identically at alpha = p/4.
struct NonlinearitySpec {
    NonlinearityKind kind = NonlinearityKind::zero;
    double p = 0.0;
    double alpha = 1.0;

    static NonlinearitySpec none(double alpha = 1.0);
    static NonlinearitySpec power(double p);

    double f(double s) const;
    double F(double s) const;
    bool is_zero() const { return kind == NonlinearityKind::zero; }
};

/// f(s)*s - 2(2*alpha+1)*F(s). Zero up to round-off for the power kind
/// with alpha = p/4, and identically zero for the zero kind.
double nonlinearity_slack(const NonlinearitySpec& nl, double s);

enum class ForcingKind { none, exp_decay };

/// Separable forcing h(x,t) = amplitude * exp(-lambda t) * g(x). The
/// restriction to this shape keeps h0 = int_0^inf ||h||^2 dt and
/// h1 = sup_t ||h(t)|| available in closed form.
struct ForcingSpec {
    ForcingKind kind = ForcingKind::none;
    double amplitude = 0.0;
    double lambda = 1.0;
    GridField profile;

    static ForcingSpec none();
    static ForcingSpec exp_decay(double amplitude, double lambda, GridField profile);

    bool is_zero() const;
    double time_factor(double t) const;
};

/// Full problem instance u_tt + b u_t = Lap(u) + f(u) + h with the Robin
/// condition du/dnu + gamma u = 0 and data u(0)=u0, u_t(0)=u1.
struct ProblemSpec {
    double b = 0.0;
    double gamma = 0.0;
    SpatialDomain domain;
    NonlinearitySpec nonlinearity;
    ForcingSpec forcing;
    GridField u0;
    GridField u1;
};

/// Check every type invariant; returns one message per violation.
/// Violations are data, not failures.
std::vector<std::string> validate(const ProblemSpec& spec);

}  // namespace robinwave
