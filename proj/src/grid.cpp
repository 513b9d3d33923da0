#include "robinwave/grid.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace robinwave {

namespace {

void require_conforming(const GridField& u, const GridField& v) {
    if (!u.domain.same_grid(v.domain) || u.values.size() != v.values.size())
        throw std::invalid_argument("grid: fields live on different grids");
}

double trapezoid_weight_1d(int i, int n, double dx) {
    return (i == 0 || i == n) ? 0.5 * dx : dx;
}

}  // namespace

double node_weight(const SpatialDomain& d, int i, int j) {
    double w = trapezoid_weight_1d(i, d.cells[0], d.dx(0));
    if (d.dim() == 2) w *= trapezoid_weight_1d(j, d.cells[1], d.dx(1));
    return w;
}

double boundary_node_weight(const SpatialDomain& d, int i, int j) {
    if (d.dim() == 1) {
        return (i == 0 || i == d.cells[0]) ? 1.0 : 0.0;
    }
    const int nx = d.cells[0];
    const int ny = d.cells[1];
    double w = 0.0;
    // Vertical edges x=0, x=Lx carry the y-trapezoid weight; horizontal
    // edges carry the x-trapezoid weight. Corners pick up both.
    if (i == 0 || i == nx) w += trapezoid_weight_1d(j, ny, d.dx(1));
    if (j == 0 || j == ny) w += trapezoid_weight_1d(i, nx, d.dx(0));
    return w;
}

double l2_inner(const GridField& u, const GridField& v) {
    require_conforming(u, v);
    const SpatialDomain& d = u.domain;
    double acc = 0.0;
    if (d.dim() == 1) {
        for (int i = 0; i < d.nodes(0); ++i)
            acc += node_weight(d, i) * u.at(i) * v.at(i);
    } else {
        for (int j = 0; j < d.nodes(1); ++j)
            for (int i = 0; i < d.nodes(0); ++i)
                acc += node_weight(d, i, j) * u.at(i, j) * v.at(i, j);
    }
    return acc;
}

double l2_norm_sq(const GridField& u) { return l2_inner(u, u); }

double boundary_inner(const GridField& u, const GridField& v) {
    require_conforming(u, v);
    const SpatialDomain& d = u.domain;
    if (d.dim() == 1) {
        const int n = d.cells[0];
        return u.at(0) * v.at(0) + u.at(n) * v.at(n);
    }
    double acc = 0.0;
    const int nx = d.cells[0];
    const int ny = d.cells[1];
    for (int j = 0; j < d.nodes(1); ++j)
        for (int i = 0; i < d.nodes(0); ++i) {
            if (i == 0 || i == nx || j == 0 || j == ny)
                acc += boundary_node_weight(d, i, j) * u.at(i, j) * v.at(i, j);
        }
    return acc;
}

double boundary_square_integral(const GridField& u) { return boundary_inner(u, u); }

double grad_inner(const GridField& u, const GridField& v) {
    require_conforming(u, v);
    const SpatialDomain& d = u.domain;
    double acc = 0.0;
    if (d.dim() == 1) {
        const double dx = d.dx(0);
        for (int c = 0; c < d.cells[0]; ++c) {
            const double du = u.at(c + 1) - u.at(c);
            const double dv = v.at(c + 1) - v.at(c);
            acc += du * dv / dx;
        }
        return acc;
    }
    const double dx = d.dx(0);
    const double dy = d.dx(1);
    // x-part: per y-node line with trapezoid weight in y.
    for (int j = 0; j < d.nodes(1); ++j) {
        const double wy = trapezoid_weight_1d(j, d.cells[1], dy);
        for (int c = 0; c < d.cells[0]; ++c) {
            const double du = u.at(c + 1, j) - u.at(c, j);
            const double dv = v.at(c + 1, j) - v.at(c, j);
            acc += wy * du * dv / dx;
        }
    }
    // y-part: per x-node line with trapezoid weight in x.
    for (int i = 0; i < d.nodes(0); ++i) {
        const double wx = trapezoid_weight_1d(i, d.cells[0], dx);
        for (int c = 0; c < d.cells[1]; ++c) {
            const double du = u.at(i, c + 1) - u.at(i, c);
            const double dv = v.at(i, c + 1) - v.at(i, c);
            acc += wx * du * dv / dy;
        }
    }
    return acc;
}

double grad_norm_sq(const GridField& u) { return grad_inner(u, u); }

double integrate_pointwise(const GridField& u, const std::function<double(double)>& fn) {
    const SpatialDomain& d = u.domain;
    double acc = 0.0;
    if (d.dim() == 1) {
        for (int i = 0; i < d.nodes(0); ++i) acc += node_weight(d, i) * fn(u.at(i));
    } else {
        for (int j = 0; j < d.nodes(1); ++j)
            for (int i = 0; i < d.nodes(0); ++i)
                acc += node_weight(d, i, j) * fn(u.at(i, j));
    }
    return acc;
}

void RobinLaplacian::apply(const GridField& u, GridField& out) const {
    if (!u.conforms(domain))
        throw std::invalid_argument("laplacian_robin: field does not conform to domain");
    if (!out.conforms(domain)) out = GridField(domain);

    if (domain.dim() == 1) {
        const int n = domain.cells[0];
        const double dx = domain.dx(0);
        const double inv2 = 1.0 / (dx * dx);
        for (int i = 1; i < n; ++i)
            out.at(i) = (u.at(i - 1) - 2.0 * u.at(i) + u.at(i + 1)) * inv2;
        // ghost = u[1] - 2 dx gamma u[0] and mirrored at the right end
        out.at(0) = (2.0 * u.at(1) - 2.0 * u.at(0) - 2.0 * dx * gamma * u.at(0)) * inv2;
        out.at(n) = (2.0 * u.at(n - 1) - 2.0 * u.at(n) - 2.0 * dx * gamma * u.at(n)) * inv2;
        return;
    }

    const int nx = domain.cells[0];
    const int ny = domain.cells[1];
    const double dx = domain.dx(0);
    const double dy = domain.dx(1);
    const double ix2 = 1.0 / (dx * dx);
    const double iy2 = 1.0 / (dy * dy);
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            double lx;
            if (i == 0)
                lx = (2.0 * u.at(1, j) - 2.0 * u.at(0, j) - 2.0 * dx * gamma * u.at(0, j)) * ix2;
            else if (i == nx)
                lx = (2.0 * u.at(nx - 1, j) - 2.0 * u.at(nx, j) - 2.0 * dx * gamma * u.at(nx, j)) * ix2;
            else
                lx = (u.at(i - 1, j) - 2.0 * u.at(i, j) + u.at(i + 1, j)) * ix2;

            double ly;
            if (j == 0)
                ly = (2.0 * u.at(i, 1) - 2.0 * u.at(i, 0) - 2.0 * dy * gamma * u.at(i, 0)) * iy2;
            else if (j == ny)
                ly = (2.0 * u.at(i, ny - 1) - 2.0 * u.at(i, ny) - 2.0 * dy * gamma * u.at(i, ny)) * iy2;
            else
                ly = (u.at(i, j - 1) - 2.0 * u.at(i, j) + u.at(i, j + 1)) * iy2;

            out.at(i, j) = lx + ly;
        }
    }
}

GridField RobinLaplacian::operator()(const GridField& u) const {
    GridField out(domain);
    apply(u, out);
    return out;
}

GridField laplacian_robin(const GridField& u, double gamma) {
    RobinLaplacian op{u.domain, gamma};
    return op(u);
}

namespace {

SpatialDomain with_resolution(const SpatialDomain& shape, int resolution) {
    SpatialDomain d = shape;
    d.cells[0] = resolution;
    if (d.dim() == 2) d.cells[1] = resolution;
    return d;
}

// Dense assembly of the mass (M), stiffness (K) and boundary (B) quadratic
// forms on the given grid, in the node ordering of GridField.
struct QuadraticForms {
    Eigen::MatrixXd M, K, B;
};

QuadraticForms assemble_forms(const SpatialDomain& d) {
    const int n = static_cast<int>(d.node_count());
    QuadraticForms q;
    q.M = Eigen::MatrixXd::Zero(n, n);
    q.K = Eigen::MatrixXd::Zero(n, n);
    q.B = Eigen::MatrixXd::Zero(n, n);

    auto flat = [&](int i, int j) { return j * d.nodes(0) + i; };

    if (d.dim() == 1) {
        const double dx = d.dx(0);
        for (int i = 0; i < d.nodes(0); ++i) q.M(i, i) = node_weight(d, i);
        for (int c = 0; c < d.cells[0]; ++c) {
            const double k = 1.0 / dx;
            q.K(c, c) += k;
            q.K(c + 1, c + 1) += k;
            q.K(c, c + 1) -= k;
            q.K(c + 1, c) -= k;
        }
        q.B(0, 0) = 1.0;
        q.B(d.cells[0], d.cells[0]) = 1.0;
        return q;
    }

    const double dx = d.dx(0);
    const double dy = d.dx(1);
    for (int j = 0; j < d.nodes(1); ++j)
        for (int i = 0; i < d.nodes(0); ++i) {
            const int a = flat(i, j);
            q.M(a, a) = node_weight(d, i, j);
            const double bw = boundary_node_weight(d, i, j);
            if (bw != 0.0) q.B(a, a) = bw;
        }
    for (int j = 0; j < d.nodes(1); ++j) {
        const double wy = trapezoid_weight_1d(j, d.cells[1], dy);
        for (int c = 0; c < d.cells[0]; ++c) {
            const double k = wy / dx;
            const int a = flat(c, j), b = flat(c + 1, j);
            q.K(a, a) += k;
            q.K(b, b) += k;
            q.K(a, b) -= k;
            q.K(b, a) -= k;
        }
    }
    for (int i = 0; i < d.nodes(0); ++i) {
        const double wx = trapezoid_weight_1d(i, d.cells[0], dx);
        for (int c = 0; c < d.cells[1]; ++c) {
            const double k = wx / dy;
            const int a = flat(i, c), b = flat(i, c + 1);
            q.K(a, a) += k;
            q.K(b, b) += k;
            q.K(a, b) -= k;
            q.K(b, a) -= k;
        }
    }
    return q;
}

Eigen::VectorXd solve_pencil(const Eigen::MatrixXd& A, const Eigen::MatrixXd& M) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(A, M);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("grid: generalized eigensolver failed (singular mass matrix?)");
    return solver.eigenvalues();
}

double d0_at(const SpatialDomain& shape, int resolution) {
    const SpatialDomain d = with_resolution(shape, resolution);
    QuadraticForms q = assemble_forms(d);
    const Eigen::VectorXd ev = solve_pencil(q.K + q.B, q.M);
    const double lambda_min = ev(0);
    if (!(lambda_min > 0.0))
        throw std::runtime_error("grid: nonpositive minimal eigenvalue in d0 estimate");
    return 1.0 / lambda_min;
}

double c_eps_at(const SpatialDomain& shape, double eps, int resolution, bool& clamped) {
    const SpatialDomain d = with_resolution(shape, resolution);
    QuadraticForms q = assemble_forms(d);
    const Eigen::VectorXd ev = solve_pencil(q.B - eps * q.K, q.M);
    const double lambda_max = ev(ev.size() - 1);
    clamped = lambda_max < 0.0;
    return clamped ? 0.0 : lambda_max;
}

}  // namespace

ConstantEstimate estimate_d0(const SpatialDomain& shape, int resolution) {
    if (resolution < 16)
        throw std::invalid_argument("estimate_d0: resolution must be >= 16");
    ConstantEstimate est;
    est.resolution = resolution;
    est.value = d0_at(shape, resolution);
    const double coarse = d0_at(shape, resolution / 2);
    est.two_grid_rel_change = std::abs(est.value - coarse) / est.value;
    return est;
}

ConstantEstimate estimate_c_eps(const SpatialDomain& shape, double eps, int resolution) {
    if (!(eps > 0.0)) throw std::invalid_argument("estimate_c_eps: eps must be positive");
    if (resolution < 16)
        throw std::invalid_argument("estimate_c_eps: resolution must be >= 16");
    ConstantEstimate est;
    est.resolution = resolution;
    bool clamped = false;
    est.value = c_eps_at(shape, eps, resolution, clamped);
    est.clamped = clamped;
    if (clamped) {
        est.note = "largest eigenvalue negative; constant clamped at 0";
        est.two_grid_rel_change = 0.0;
        return est;
    }
    bool clamped_coarse = false;
    const double coarse = c_eps_at(shape, eps, resolution / 2, clamped_coarse);
    est.two_grid_rel_change =
        est.value > 0.0 ? std::abs(est.value - coarse) / est.value : 0.0;
    return est;
}

double forcing_h0(const ForcingSpec& fc) {
    if (fc.is_zero()) return 0.0;
    return fc.amplitude * fc.amplitude * l2_norm_sq(fc.profile) / (2.0 * fc.lambda);
}

double forcing_h1(const ForcingSpec& fc) {
    if (fc.is_zero()) return 0.0;
    return std::abs(fc.amplitude) * std::sqrt(l2_norm_sq(fc.profile));
}

}  // namespace robinwave
