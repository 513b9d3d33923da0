#include <doctest.h>

#include <cmath>
#include <random>

#include "robinwave/grid.hpp"
#include "robinwave/model.hpp"

using namespace robinwave;

namespace {

ProblemSpec basic_spec(int resolution = 8) {
    ProblemSpec spec;
    spec.b = 0.1;
    spec.gamma = 1.0;
    spec.domain = SpatialDomain::interval(1.0, resolution);
    spec.nonlinearity = NonlinearitySpec::power(2.0);
    spec.forcing = ForcingSpec::none();
    spec.u0 = GridField(spec.domain, 1.0);
    spec.u1 = GridField(spec.domain, 0.0);
    return spec;
}

}  // namespace

TEST_CASE("validate flags resolution below 4") {
    ProblemSpec spec = basic_spec();
    spec.domain = SpatialDomain::interval(1.0, 2);
    spec.u0 = GridField(spec.domain, 1.0);
    spec.u1 = GridField(spec.domain, 0.0);
    const auto violations = validate(spec);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0] == "domain.resolution >= 4 violated");
}

TEST_CASE("validate accepts alpha = p/4 and rejects anything else") {
    ProblemSpec spec = basic_spec();
    CHECK(validate(spec).empty());

    spec.nonlinearity.alpha = 1.0;  // p = 2 wants alpha = 0.5
    const auto violations = validate(spec);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0] == "alpha != p/4");
}

TEST_CASE("validate catches non-conforming and non-finite data") {
    ProblemSpec spec = basic_spec();
    spec.u1 = GridField(SpatialDomain::interval(1.0, 16));
    CHECK(validate(spec).size() == 1);

    spec = basic_spec();
    spec.u0.values[3] = std::nan("");
    const auto violations = validate(spec);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0] == "u0 contains non-finite values");
}

TEST_CASE("nonlinearity slack vanishes for the power kind at alpha = p/4") {
    const NonlinearitySpec p2 = NonlinearitySpec::power(2.0);
    // f(1.5)*1.5 = 1.5^4, 2(2a+1)F = 4 * 1.5^4/4
    CHECK(std::abs(nonlinearity_slack(p2, 1.5)) <= 1e-12 * std::pow(1.5, 4.0));

    const NonlinearitySpec p1 = NonlinearitySpec::power(1.0);
    CHECK(std::abs(nonlinearity_slack(p1, -2.0)) <= 1e-12 * std::pow(2.0, 3.0));

    const NonlinearitySpec none = NonlinearitySpec::none();
    CHECK(nonlinearity_slack(none, 3.0) == 0.0);
}

TEST_CASE("nonlinearity slack property: 1000 random s in [-10,10]") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> s_dist(-10.0, 10.0);
    std::uniform_real_distribution<double> p_dist(0.5, 4.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const NonlinearitySpec nl = NonlinearitySpec::power(p_dist(rng));
        const double s = s_dist(rng);
        const double scale = std::max(1.0, std::abs(nl.f(s) * s));
        CHECK(std::abs(nonlinearity_slack(nl, s)) <= 1e-12 * scale);
    }
}

TEST_CASE("forcing h0/h1 closed forms match time quadrature") {
    const SpatialDomain d = SpatialDomain::interval(1.0, 64);
    const GridField g = sampled(d, [](double x) { return 1.0 + 0.5 * std::sin(3.0 * x); });

    std::mt19937 rng(99);
    std::uniform_real_distribution<double> amp_dist(-3.0, 3.0);
    std::uniform_real_distribution<double> lam_dist(0.3, 4.0);
    for (int trial = 0; trial < 5; ++trial) {
        double amp = amp_dist(rng);
        if (amp == 0.0) amp = 1.0;
        const double lambda = lam_dist(rng);
        const ForcingSpec fc = ForcingSpec::exp_decay(amp, lambda, g);

        // Oracle: trapezoid quadrature of int_0^T ||h(t)||^2 dt, T = 40/lambda.
        const double g_sq = l2_norm_sq(g);
        const double T = 40.0 / lambda;
        const int steps = 200000;
        const double h_t = T / steps;
        double quad = 0.0;
        for (int i = 0; i <= steps; ++i) {
            const double t = i * h_t;
            const double w = (i == 0 || i == steps) ? 0.5 * h_t : h_t;
            const double a = amp * std::exp(-lambda * t);
            quad += w * a * a * g_sq;
        }
        CHECK(forcing_h0(fc) == doctest::Approx(quad).epsilon(1e-6));
        CHECK(forcing_h1(fc) == doctest::Approx(std::abs(amp) * std::sqrt(g_sq)).epsilon(1e-12));
    }
}

TEST_CASE("zero forcing has h0 = h1 = 0") {
    CHECK(forcing_h0(ForcingSpec::none()) == 0.0);
    CHECK(forcing_h1(ForcingSpec::none()) == 0.0);
}
