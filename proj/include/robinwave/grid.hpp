#pragma once

#include <functional>

#include "robinwave/model.hpp"

namespace robinwave {

// Discrete forms. All quadratures are trapezoid on the nodal grid; the
// gradient forms are cell-midpoint sums chosen so that the Robin stencil
// below is their exact adjoint:
//
//   (laplacian_robin(u), v)_M = -grad_inner(u,v) - gamma*boundary_inner(u,v)
//
// holds to round-off for every pair of fields (the discrete Green identity).

/// Trapezoid quadrature weight of node i (1D) or (i,j) (2D).
double node_weight(const SpatialDomain& d, int i, int j = 0);

/// Boundary-measure trapezoid weight of node i/(i,j); zero at interior
/// nodes. In 1D the boundary measure is counting measure (weight 1 at each
/// end); in 2D each corner carries dx/2 + dy/2 from its two edges.
double boundary_node_weight(const SpatialDomain& d, int i, int j = 0);

double l2_inner(const GridField& u, const GridField& v);
double l2_norm_sq(const GridField& u);

/// Boundary bilinear form int_{dOmega} u v dsigma.
double boundary_inner(const GridField& u, const GridField& v);
/// int_{dOmega} u^2 dsigma (the Robin trace integral without its gamma/2).
double boundary_square_integral(const GridField& u);

/// Stiffness bilinear form sum over cells of grad u . grad v.
double grad_inner(const GridField& u, const GridField& v);
/// ||grad u||^2.
double grad_norm_sq(const GridField& u);

/// Trapezoid integral of fn(u(x)) over the domain, e.g. (F(u),1).
double integrate_pointwise(const GridField& u, const std::function<double(double)>& fn);

/// Second-order Robin Laplacian: central differences at interior nodes,
/// ghost values eliminated through du/dnu + gamma u = 0 at the boundary
/// (1D left end: ghost = u[1] - 2 dx gamma u[0]; 2D edges per axis,
/// corners apply both axes).
struct RobinLaplacian {
    SpatialDomain domain;
    double gamma = 0.0;

    void apply(const GridField& u, GridField& out) const;
    GridField operator()(const GridField& u) const;
};

GridField laplacian_robin(const GridField& u, double gamma);

/// A numerically certified inequality constant with its two-grid
/// convergence estimate |value(n) - value(n/2)| / value(n).
struct ConstantEstimate {
    double value = 0.0;
    int resolution = 0;
    double two_grid_rel_change = 0.0;
    bool clamped = false;
    std::string note;
};

/// Sharp discrete constant d0 in  int u^2 <= d0 (int_{dOmega} u^2 + ||grad u||^2):
/// 1/lambda_min of the generalized eigenproblem (B + K) x = lambda M x
/// assembled from the quadrature forms above, solved densely.
/// Requires resolution >= 16.
ConstantEstimate estimate_d0(const SpatialDomain& shape, int resolution);

/// Sharp discrete constant C(eps) in
///   int_{dOmega} u^2 <= eps ||grad u||^2 + C(eps) ||u||^2:
/// the largest eigenvalue of (B - eps K) x = C M x, clamped below at 0
/// (clamped=true with a note when every eigenvalue is negative).
ConstantEstimate estimate_c_eps(const SpatialDomain& shape, double eps, int resolution);

/// Closed forms for the forcing size constants of a separable
/// exponentially decaying forcing:
///   h0 = int_0^inf ||h(t)||^2 dt = amplitude^2 ||g||^2 / (2 lambda)
///   h1 = sup_t ||h(t)|| = |amplitude| ||g||
double forcing_h0(const ForcingSpec& fc);
double forcing_h1(const ForcingSpec& fc);

}  // namespace robinwave
