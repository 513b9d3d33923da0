#include <doctest.h>

#include <cmath>
#include <random>

#include "robinwave/errors.hpp"
#include "robinwave/functionals.hpp"
#include "robinwave/grid.hpp"
#include "robinwave/simulate.hpp"

using namespace robinwave;

namespace {

constexpr double kPi = 3.14159265358979323846;

ProblemSpec make_spec(double b, double gamma, double p, int resolution) {
    ProblemSpec spec;
    spec.b = b;
    spec.gamma = gamma;
    spec.domain = SpatialDomain::interval(1.0, resolution);
    spec.nonlinearity = p > 0.0 ? NonlinearitySpec::power(p) : NonlinearitySpec::none();
    spec.u0 = GridField(spec.domain);
    spec.u1 = GridField(spec.domain);
    return spec;
}

}  // namespace

TEST_CASE("energy breakdown on constant fields") {
    ProblemSpec spec = make_spec(0.1, 1.0, 2.0, 20);
    const State s{0.0, GridField(spec.domain, 1.0), GridField(spec.domain, 0.0)};
    const EnergyBreakdown e = energy(s, spec);
    CHECK(e.kinetic == doctest::Approx(0.0));
    CHECK(e.dirichlet == doctest::Approx(0.0));
    CHECK(e.robin == doctest::Approx(1.0));      // (1/2) * 2
    CHECK(e.potential == doctest::Approx(0.25)); // |1|^4/4
    CHECK(e.total == doctest::Approx(0.75));
    CHECK(e.total == e.kinetic + e.dirichlet + e.robin - e.potential);

    const State zero{0.0, GridField(spec.domain), GridField(spec.domain)};
    CHECK(energy(zero, spec).total == doctest::Approx(0.0));
}

TEST_CASE("energy of sin profile matches the closed form") {
    ProblemSpec spec = make_spec(0.0, 1.0, 0.0, 400);
    const State s{0.0, sampled(spec.domain, [](double x) { return std::sin(kPi * x); }),
                  GridField(spec.domain)};
    const double expected = kPi * kPi / 4.0;  // trace of sin vanishes at both ends
    CHECK(energy(s, spec).total ==
          doctest::Approx(expected).epsilon(1e-3 / expected));
}

TEST_CASE("energy names the first escaped node") {
    ProblemSpec spec = make_spec(0.0, 1.0, 0.0, 8);
    State s{0.0, GridField(spec.domain, 1.0), GridField(spec.domain)};
    s.u.values[5] = std::numeric_limits<double>::infinity();
    try {
        energy(s, spec);
        FAIL("expected EscapedStateError");
    } catch (const EscapedStateError& e) {
        CHECK(e.node() == 5);
    }
}

TEST_CASE("compute_a0 arithmetic and precondition") {
    CHECK(compute_a0(0.5, 1.0, 1.0, 1.0, 0.0, 0.0) == doctest::Approx(0.0));
    CHECK(compute_a0(0.5, 1.0, 1.0, 1.0, 2.0, 1.0) == doctest::Approx(4.5));
    CHECK(compute_a0(0.5, 2.0, 0.25, 2.0, 1.0, 1.0) == doctest::Approx(5.0));
    CHECK_THROWS_AS(compute_a0(0.5, -1.0, 1.0, 1.0, 0.0, 0.0), ApplicabilityError);
}

TEST_CASE("compute_k0 arithmetic") {
    CHECK(compute_k0(0.75, 0.0, 0.5) == doctest::Approx(6.0));
    CHECK(compute_k0(0.0, 0.0, 1.0) == doctest::Approx(0.0));
    CHECK(compute_k0(-1.0, 0.5, 0.25) == doctest::Approx(-5.5));
}

TEST_CASE("psi series reads the closed forms off the records") {
    SimSeries series;
    Record r;
    r.t = 0.0;
    r.norm_u_sq = 1.0;  // u = 1 on (0,1)
    r.u_dot_ut = 3.0;   // u_t = 3
    series.records.push_back(r);

    const auto psi = psi_series(series, 2.0);
    REQUIRE(psi.size() == 1);
    CHECK(psi[0].psi == doctest::Approx(3.0));
    CHECK(psi[0].dpsi == doctest::Approx(6.0));

    const auto psi0 = psi_series(series, 0.0);
    CHECK(psi0[0].psi == doctest::Approx(1.0));
}

TEST_CASE("transformed psi series: constant v closed form") {
    // u = e^{mt} v with v = 1 on (0,1): norm_u_sq = e^{2mt}, (u,u_t) = m e^{2mt}.
    const double m = 2.0;
    ProblemSpec spec = make_spec(1.0 - 2.0 * m, 1.0, 0.0, 8);  // b + 2m = 1
    SimSeries series;
    for (int k = 0; k <= 50; ++k) {
        Record r;
        r.t = 0.04 * k;
        r.norm_u_sq = std::exp(2.0 * m * r.t);
        r.u_dot_ut = m * r.norm_u_sq;
        series.records.push_back(r);
    }
    const auto psi = transformed_psi_series(series, spec, m, 1.0);
    for (std::size_t k = 0; k < psi.size(); ++k) {
        CHECK(psi[k].psi == doctest::Approx(2.0 + psi[k].t).epsilon(1e-12));
        CHECK(psi[k].dpsi == doctest::Approx(1.0).epsilon(1e-12));
    }

    // v = 0 trajectory: Psi = c0, Psi' = 0.
    SimSeries zero;
    for (int k = 0; k <= 10; ++k) zero.records.push_back(Record{0.1 * k, 0, 0, 0, 0, 0, 0, 0, 0, 0});
    const auto psi_zero = transformed_psi_series(zero, spec, m, 1.0);
    for (const auto& pt : psi_zero) {
        CHECK(pt.psi == doctest::Approx(1.0));
        CHECK(pt.dpsi == doctest::Approx(0.0));
    }
}

TEST_CASE("transformed psi series: finite-difference dPsi/dt matches Psi'") {
    // Smooth pre-blow-up window of a real accelerating run.
    ProblemSpec spec = make_spec(-0.2, 1.0, 2.0, 50);
    const double m = 1.5;
    spec.u0 = sampled(spec.domain, [](double x) { return 2.0 * std::sin(kPi * x); });
    spec.u1 = spec.u0;
    for (double& x : spec.u1.values) x *= m;

    auto run_with = [&](int record_every, double dt) {
        IntegrateOptions opt;
        opt.dt = dt;
        opt.t_max = 0.4;
        opt.record_every = record_every;
        auto [series, report] = integrate(spec, opt);
        const auto psi = transformed_psi_series(series, spec, m, 1.0);
        double worst = 0.0;
        for (std::size_t k = 1; k + 1 < psi.size(); ++k) {
            const double h = psi[k + 1].t - psi[k].t;
            const double h_prev = psi[k].t - psi[k - 1].t;
            if (std::abs(h - h_prev) > 1e-12) continue;
            const double fd = (psi[k + 1].psi - psi[k - 1].psi) / (2.0 * h);
            worst = std::max(worst, std::abs(fd - psi[k].dpsi));
        }
        return worst;
    };

    const double coarse = run_with(8, 1e-3);   // record spacing 8e-3
    const double fine = run_with(4, 1e-3);     // record spacing 4e-3
    CHECK(coarse < 5e-2);
    // O(record spacing^2): halving the spacing should shrink the defect ~4x.
    CHECK(fine < 0.35 * coarse);
}

TEST_CASE("energy residual: zero solution and escaped-free accounting") {
    ProblemSpec spec = make_spec(0.3, 1.0, 2.0, 16);
    IntegrateOptions opt;
    opt.dt = 1e-3;
    opt.t_max = 0.2;
    auto [series, report] = integrate(spec, opt);
    CHECK(energy_residual(series, spec) == doctest::Approx(0.0));
}

TEST_CASE("energy residual: b=0, h=0 run converges at order >= 4 in dt") {
    ProblemSpec spec = make_spec(0.0, 1.0, 2.0, 32);
    spec.u0 = sampled(spec.domain, [](double x) { return 1.5 * std::sin(kPi * x); });
    spec.u1 = sampled(spec.domain, [](double x) { return std::sin(2.0 * kPi * x); });

    auto residual_at = [&](double dt) {
        IntegrateOptions opt;
        opt.dt = dt;
        opt.t_max = 1.0;
        auto [series, report] = integrate(spec, opt);
        REQUIRE(report.status == SimStatus::no_blowup_by_tmax);
        return energy_residual(series, spec);
    };

    const double r_coarse = residual_at(8e-3);
    const double r_fine = residual_at(4e-3);
    CHECK(r_coarse > 1e-13);  // above round-off so the order is measurable
    const double order = std::log2(r_coarse / r_fine);
    CHECK(order >= 3.5);
}

TEST_CASE("transformed energy: constant-field arithmetic and two-route consistency") {
    ProblemSpec spec = make_spec(-1.0, 1.0, 2.0, 20);
    const double m = 2.0;
    const State s{0.0, GridField(spec.domain, 1.0), GridField(spec.domain, 0.0)};
    // -(mb+m^2)/2 - ||u1 - m u0||^2/2 - 0 - gamma trace/2 + F-term
    CHECK(transformed_energy(s, spec, m) == doctest::Approx(-3.75).epsilon(1e-12));

    const State zero{0.0, GridField(spec.domain), GridField(spec.domain)};
    CHECK(transformed_energy(zero, spec, m) == doctest::Approx(0.0));

    // Two routes at t > 0: evaluate from (u,u_t), then from explicitly
    // transformed fields plugged in at t = 0 with the potential corrected.
    const double t = 0.7;
    State late{t, sampled(spec.domain, [](double x) { return std::cos(x) + 0.3; }),
               sampled(spec.domain, [](double x) { return x * x - 0.5; })};
    const double route_a = transformed_energy(late, spec, m);

    const double decay = std::exp(-m * t);
    GridField v = late.u;
    GridField vt = late.u;
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        v.values[i] = decay * late.u.values[i];
        vt.values[i] = decay * (late.ut.values[i] - m * late.u.values[i]);
    }
    const NonlinearitySpec& nl = spec.nonlinearity;
    const double mbm2 = m * spec.b + m * m;
    const double route_b =
        -0.5 * mbm2 * l2_norm_sq(v) - 0.5 * l2_norm_sq(vt) - 0.5 * grad_norm_sq(v) -
        0.5 * spec.gamma * boundary_square_integral(v) +
        decay * decay * integrate_pointwise(late.u, [&nl](double s_) { return nl.F(s_); });
    CHECK(route_a == doctest::Approx(route_b).epsilon(1e-12));
}

TEST_CASE("Schwarz step: 4 ||u_t||^2 Psi >= (Psi')^2 on every record") {
    ProblemSpec spec = make_spec(0.1, 1.0, 2.0, 40);
    spec.u0 = sampled(spec.domain, [](double x) { return std::sin(kPi * x) + 0.2; });
    spec.u1 = sampled(spec.domain, [](double x) { return 0.5 * std::cos(kPi * x); });
    IntegrateOptions opt;
    opt.dt = 5e-4;
    opt.t_max = 0.5;
    auto [series, report] = integrate(spec, opt);

    for (double c0 : {0.0, 1.0, 7.5}) {
        const auto psi = psi_series(series, c0);
        for (std::size_t k = 0; k < psi.size(); ++k) {
            const double lhs = 4.0 * series.records[k].norm_ut_sq * psi[k].psi;
            const double rhs = psi[k].dpsi * psi[k].dpsi;
            const double scale = std::max({1.0, lhs, rhs});
            CHECK(lhs - rhs >= -1e-12 * scale);
        }
    }
}

TEST_CASE("Psi'' consistency: second difference matches 2||u_t||^2 + 2(u,u_tt)") {
    ProblemSpec spec = make_spec(0.15, 1.0, 2.0, 40);
    spec.u0 = sampled(spec.domain, [](double x) { return std::sin(kPi * x) + 0.1; });
    spec.u1 = sampled(spec.domain, [](double x) { return 0.3 * std::sin(2.0 * kPi * x); });

    auto worst_defect = [&](double dt) {
        IntegrateOptions opt;
        opt.dt = dt;
        opt.t_max = 0.3;
        opt.snapshot_times.clear();
        for (double t = 0.0; t <= 0.3 + 1e-12; t += dt) opt.snapshot_times.push_back(t);
        auto [series, report] = integrate(spec, opt);
        REQUIRE(series.snapshots.size() > 10);

        std::vector<double> psi(series.snapshots.size());
        for (std::size_t k = 0; k < psi.size(); ++k)
            psi[k] = l2_norm_sq(series.snapshots[k].u);

        double worst = 0.0;
        for (std::size_t k = 1; k + 1 < series.snapshots.size(); ++k) {
            const State& s = series.snapshots[k];
            const double h1 = series.snapshots[k].t - series.snapshots[k - 1].t;
            const double h2 = series.snapshots[k + 1].t - series.snapshots[k].t;
            if (std::abs(h1 - h2) > 1e-12) continue;
            GridField du(spec.domain), dut(spec.domain);
            rhs_eval(s, spec, du, dut);
            const double expected = 2.0 * l2_norm_sq(s.ut) + 2.0 * l2_inner(s.u, dut);
            const double fd = (psi[k + 1] - 2.0 * psi[k] + psi[k - 1]) / (h1 * h1);
            worst = std::max(worst, std::abs(fd - expected));
        }
        return worst;
    };

    const double coarse = worst_defect(4e-3);
    const double fine = worst_defect(2e-3);
    CHECK(coarse < 5e-2);
    CHECK(fine < 0.35 * coarse);  // second-order in the record spacing
}
