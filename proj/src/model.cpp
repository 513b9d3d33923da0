#include "robinwave/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace robinwave {

SpatialDomain SpatialDomain::interval(double len, int n) {
    SpatialDomain d;
    d.kind = DomainKind::interval;
    d.length = {len, 0.0};
    d.cells = {n, 0};
    return d;
}

SpatialDomain SpatialDomain::rectangle(double lx, double ly, int nx, int ny) {
    SpatialDomain d;
    d.kind = DomainKind::rectangle;
    d.length = {lx, ly};
    d.cells = {nx, ny};
    return d;
}

std::size_t SpatialDomain::node_count() const {
    std::size_t n = static_cast<std::size_t>(nodes(0));
    if (dim() == 2) n *= static_cast<std::size_t>(nodes(1));
    return n;
}

bool SpatialDomain::same_grid(const SpatialDomain& other) const {
    if (kind != other.kind) return false;
    for (int a = 0; a < dim(); ++a) {
        if (cells[a] != other.cells[a]) return false;
        if (length[a] != other.length[a]) return false;
    }
    return true;
}

GridField::GridField(const SpatialDomain& d, double fill)
    : domain(d), values(d.node_count(), fill) {}

bool GridField::conforms(const SpatialDomain& d) const {
    return domain.same_grid(d) && values.size() == d.node_count();
}

GridField sampled(const SpatialDomain& d, const std::function<double(double)>& f) {
    GridField u(d);
    if (d.dim() == 1) {
        for (int i = 0; i < d.nodes(0); ++i) u.at(i) = f(d.coord(0, i));
    } else {
        for (int j = 0; j < d.nodes(1); ++j)
            for (int i = 0; i < d.nodes(0); ++i) u.at(i, j) = f(d.coord(0, i));
    }
    return u;
}

GridField sampled(const SpatialDomain& d,
                  const std::function<double(double, double)>& f) {
    GridField u(d);
    if (d.dim() == 1) {
        for (int i = 0; i < d.nodes(0); ++i) u.at(i) = f(d.coord(0, i), 0.0);
    } else {
        for (int j = 0; j < d.nodes(1); ++j)
            for (int i = 0; i < d.nodes(0); ++i)
                u.at(i, j) = f(d.coord(0, i), d.coord(1, j));
    }
    return u;
}

std::size_t first_nonfinite_node(const GridField& u) {
    for (std::size_t i = 0; i < u.values.size(); ++i)
        if (!std::isfinite(u.values[i])) return i;
    return static_cast<std::size_t>(-1);
}

NonlinearitySpec NonlinearitySpec::none(double alpha) {
    NonlinearitySpec nl;
    nl.kind = NonlinearityKind::zero;
    nl.p = 0.0;
    nl.alpha = alpha;
    return nl;
}

NonlinearitySpec NonlinearitySpec::power(double p) {
    NonlinearitySpec nl;
    nl.kind = NonlinearityKind::power;
    nl.p = p;
    nl.alpha = p / 4.0;
    return nl;
}

double NonlinearitySpec::f(double s) const {
    if (kind == NonlinearityKind::zero) return 0.0;
    return std::pow(std::abs(s), p) * s;
}

double NonlinearitySpec::F(double s) const {
    if (kind == NonlinearityKind::zero) return 0.0;
    return std::pow(std::abs(s), p + 2.0) / (p + 2.0);
}

double nonlinearity_slack(const NonlinearitySpec& nl, double s) {
    return nl.f(s) * s - 2.0 * (2.0 * nl.alpha + 1.0) * nl.F(s);
}

ForcingSpec ForcingSpec::none() { return ForcingSpec{}; }

ForcingSpec ForcingSpec::exp_decay(double amplitude, double lambda, GridField profile) {
    ForcingSpec fc;
    fc.kind = ForcingKind::exp_decay;
    fc.amplitude = amplitude;
    fc.lambda = lambda;
    fc.profile = std::move(profile);
    return fc;
}

bool ForcingSpec::is_zero() const {
    return kind == ForcingKind::none || amplitude == 0.0;
}

double ForcingSpec::time_factor(double t) const {
    if (is_zero()) return 0.0;
    return amplitude * std::exp(-lambda * t);
}

namespace {

bool near(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

std::vector<std::string> validate(const ProblemSpec& spec) {
    std::vector<std::string> out;
    const SpatialDomain& d = spec.domain;

    for (int a = 0; a < d.dim(); ++a) {
        if (!(d.length[a] > 0.0)) out.push_back("domain.length > 0 violated");
        if (d.cells[a] < 4) out.push_back("domain.resolution >= 4 violated");
    }

    const NonlinearitySpec& nl = spec.nonlinearity;
    if (nl.kind == NonlinearityKind::power) {
        if (!(nl.p > 0.0)) out.push_back("nonlinearity.p > 0 violated");
        if (!near(nl.alpha, nl.p / 4.0, 1e-12)) out.push_back("alpha != p/4");
    }
    if (!(nl.alpha > 0.0)) out.push_back("nonlinearity.alpha > 0 violated");

    const ForcingSpec& fc = spec.forcing;
    if (fc.kind == ForcingKind::exp_decay) {
        if (!(fc.lambda > 0.0)) out.push_back("forcing.lambda > 0 violated");
        if (!fc.profile.conforms(d)) out.push_back("forcing.profile does not conform to domain grid");
    }

    if (!spec.u0.conforms(d)) out.push_back("u0 does not conform to domain grid");
    if (!spec.u1.conforms(d)) out.push_back("u1 does not conform to domain grid");
    if (spec.u0.conforms(d) && first_nonfinite_node(spec.u0) != static_cast<std::size_t>(-1))
        out.push_back("u0 contains non-finite values");
    if (spec.u1.conforms(d) && first_nonfinite_node(spec.u1) != static_cast<std::size_t>(-1))
        out.push_back("u1 contains non-finite values");

    return out;
}

}  // namespace robinwave
