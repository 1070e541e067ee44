#include <gtest/gtest.h>

#include "nlslab/semiclassical.hpp"

using namespace nlslab;

namespace {

WhithamState sech_state(const Grid& g, double lam) {
    WhithamState s;
    s.grid = g;
    s.lambda = lam;
    s.rho.resize(g.n);
    s.mu.assign(g.n, 0.0);
    for (std::size_t j = 0; j < g.n; ++j) {
        const double c = 1.0 / std::cosh(g.x(j) - g.center());
        s.rho[j] = std::max(c * c, 1e-300);
    }
    return s;
}

double sech2(double x) {
    const double c = 1.0 / std::cosh(x);
    return c * c;
}

}  // namespace

TEST(Whitham, FocusingRejected) {
    WhithamState s = sech_state(Grid(64, 20.0), 1.0);
    s.sign = Sign::focusing;
    EXPECT_THROW(whitham_evolve(s, 1e-3, 0.01), std::invalid_argument);
}

TEST(Whitham, ParameterChecks) {
    const WhithamState s = sech_state(Grid(64, 20.0), 1.0);
    WhithamOptions o;
    o.cfl = 0.5;
    EXPECT_THROW(whitham_evolve(s, 1e-3, 0.01, o), std::invalid_argument);
    EXPECT_THROW(whitham_evolve(s, 0.0, 0.01), std::invalid_argument);
    WhithamState bad = s;
    bad.rho[3] = 0.0;
    EXPECT_THROW(whitham_evolve(bad, 1e-3, 0.01), std::invalid_argument);
    bad = s;
    bad.mu.pop_back();
    EXPECT_THROW(whitham_evolve(bad, 1e-3, 0.01), std::invalid_argument);
}

TEST(Whitham, ConstantStateIsStationary) {
    WhithamState s = sech_state(Grid(64, 20.0), 2.0);
    std::fill(s.rho.begin(), s.rho.end(), 1.5);
    std::fill(s.mu.begin(), s.mu.end(), 0.3);
    const auto run = whitham_evolve(s, 0.01, 0.5);
    for (std::size_t j = 0; j < s.grid.n; ++j) {
        EXPECT_NEAR(run.final_state.rho[j], 1.5, 1e-13);
        EXPECT_NEAR(run.final_state.mu[j], 0.3, 1e-13);
    }
    EXPECT_LE(run.max_cfl, 0.4 * (1.0 + 1e-12));
}

TEST(Whitham, ConservesTotalRho) {
    const auto run = whitham_evolve(sech_state(Grid(512, 40.0), 2.0), 0.01, 0.5);
    for (double m : run.total_rho) EXPECT_NEAR(m, run.total_rho.front(), 1e-12 * run.total_rho.front());
    EXPECT_LT(run.blowup_time, 0.0);
}

TEST(Whitham, GradientCatastropheScalesAsOneOverLambda) {
    const Grid g(2048, 40.0);  // at N = 512 the scheme smears the front below the detection factor
    rvec when;
    for (double lam : {2.0, 4.0}) {
        const auto run = whitham_evolve(sech_state(g, lam), 0.01 / lam, 3.0 / lam);
        ASSERT_GT(run.blowup_time, 0.0);
        when.push_back(lam * run.blowup_time);
    }
    EXPECT_NEAR(when[0], when[1], 1e-9);
    EXPECT_NEAR(when[0], 1.6, 0.1);
}

TEST(Whitham, RiemannFanBracketing) {
    const Grid g(1024, 40.0);
    WhithamState s = sech_state(g, 1.0);
    for (std::size_t j = 0; j < g.n; ++j) s.rho[j] = std::abs(g.x(j) - g.center()) < 5.0 ? 2.0 : 1.0;
    const double t = 1.0;
    const auto run = whitham_evolve(s, 0.05, t);
    const double reach = std::sqrt(2.0) * t + 1.0;  // fastest physical speed is sqrt(max rho)
    for (std::size_t j = 0; j < g.n; ++j) {
        const double r = run.final_state.rho[j];
        EXPECT_GE(r, 1.0 - 1e-6);
        EXPECT_LE(r, 2.0 + 1e-6);
        const double d = std::abs(std::abs(g.x(j) - g.center()) - 5.0);
        if (d > reach) {
            EXPECT_NEAR(r, s.rho[j], 1e-6);
            EXPECT_NEAR(run.final_state.mu[j], 0.0, 1e-6);
        }
    }
    EXPECT_NEAR(run.final_state.total_rho(), s.total_rho(), 1e-12 * s.total_rho());
}

TEST(AKS, OriginIsExact) {
    for (AKSVariant v : {AKSVariant::verbatim, AKSVariant::lambda_t, AKSVariant::consistent}) {
        const auto p = aks_solve(0.0, 0.0, 4.0, v);
        EXPECT_TRUE(p.converged);
        EXPECT_EQ(p.rho, 1.0);
        EXPECT_EQ(p.mu, 0.0);
    }
}

TEST(AKS, InitialTime) {
    for (double x : {-2.0, 0.3, 0.7, 1.5}) {
        const auto v = aks_solve(x, 0.0, 2.0, AKSVariant::verbatim);
        EXPECT_TRUE(v.converged);
        EXPECT_NEAR(v.rho, sech2(v.rho * x), 1e-12);
        const auto c = aks_solve(x, 0.0, 2.0, AKSVariant::consistent);
        EXPECT_NEAR(c.rho, sech2(x), 1e-12);
        EXPECT_NEAR(c.mu, 0.0, 1e-15);
    }
}

TEST(AKS, NewtonResidual) {
    for (AKSVariant v : {AKSVariant::verbatim, AKSVariant::lambda_t, AKSVariant::consistent})
        for (double x : {-3.0, -0.4, 0.0, 1.3, 6.0}) {
            const auto p = aks_solve(x, 0.05, 4.0, v);
            EXPECT_TRUE(p.converged);
            EXPECT_LT(p.residual, 1e-12);
            const auto r = aks_residual(p.rho, p.mu, x, 0.05, 4.0, v);
            EXPECT_LT(std::max(std::abs(r[0]), std::abs(r[1])), 1e-12);
        }
    EXPECT_THROW(aks_solve(0.0, 0.1, 0.0), std::invalid_argument);
}

TEST(AKS, VariantNames) {
    for (AKSVariant v : {AKSVariant::verbatim, AKSVariant::lambda_t, AKSVariant::consistent})
        EXPECT_EQ(aks_variant_from_string(to_string(v)), v);
    EXPECT_THROW(aks_variant_from_string("fixed"), std::invalid_argument);
}

TEST(AKS, WhithamResidualByVariant) {
    const Grid g(512, 40.0);
    const auto c = aks_whitham_residual(g, 4.0, 0.05, AKSVariant::consistent, 5e-4);
    EXPECT_EQ(c.failed, 0u);
    EXPECT_LT(c.max(), 1e-6);
    // the other two readings do not solve the system
    EXPECT_GT(aks_whitham_residual(g, 4.0, 0.05, AKSVariant::verbatim, 5e-4).max(), 0.1);
    EXPECT_GT(aks_whitham_residual(g, 4.0, 0.05, AKSVariant::lambda_t, 5e-4).max(), 0.1);
}

TEST(Ansatz, InitialFieldAndMass) {
    const Grid g(512, 40.0);
    const double lam = 3.0;
    const Field u = semiclassical_field(g, lam, 0.0, SemiclassicalSource::aks);
    for (std::size_t j = 0; j < g.n; ++j) EXPECT_NEAR(std::abs(u.values[j] - lam / std::cosh(g.x(j) - g.center())), 0.0, 1e-12);
    const WhithamState s = sech_state(g, lam);
    EXPECT_NEAR(mass(u), lam * lam * s.total_rho(), 1e-10);
    const Field w = semiclassical_field(g, lam, 0.0, SemiclassicalSource::whitham);
    for (std::size_t j = 0; j < g.n; ++j) EXPECT_NEAR(std::abs(w.values[j] - u.values[j]), 0.0, 1e-12);
}

TEST(Ansatz, PhaseFromVelocity) {
    const Grid g(64, 8.0);
    rvec rho(g.n, 1.0), mu(g.n, 0.5);
    const Field u = ansatz_field(g, 2.0, rho, mu);
    // S = 0.5 x from the left gauge point, phase -lambda S
    for (std::size_t j = 0; j < g.n; ++j) EXPECT_NEAR(std::abs(u.values[j] - 2.0 * std::polar(1.0, -g.x(j))), 0.0, 1e-12);
    rho[5] = 0.0;
    EXPECT_THROW(ansatz_field(g, 2.0, rho, mu), std::invalid_argument);
}

TEST(Compare, StartsExactAndFlagsTheCaustic) {
    SemiclassicalCompareOptions o;
    o.grid = Grid(1024, 40.0);
    o.kappa = 4.0;
    o.dt = 2e-5;
    o.t_end = 0.1;
    o.samples = 5;
    const auto rep = semiclassical_compare(o);
    EXPECT_EQ(rep.status, "ok");
    EXPECT_NEAR(rep.lambda, 4.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(rep.caustic_time, 1.0 / (4.0 * rep.lambda), 1e-15);
    ASSERT_EQ(rep.rows.size(), 6u);
    EXPECT_LT(rep.rows[0].rel_distance, 1e-12);
    EXPECT_FALSE(rep.rows[0].past_caustic);
    EXPECT_TRUE(rep.rows.back().past_caustic);
    for (const auto& r : rep.rows)
        if (!r.past_caustic && r.t > 0.0) {
            EXPECT_GT(r.rel_distance, 0.0);
            EXPECT_LT(r.rel_distance, 0.1);
        }
}

TEST(Recurrence, AmplitudeOneIsStationary) {
    RecurrenceOptions o;
    o.grid = Grid(512, 30.0);
    o.periods = 1.0;
    const auto r = satsuma_yajima_run(1, o);
    EXPECT_EQ(r.status, "ok");
    EXPECT_GT(r.min_fidelity, 0.9999);
    EXPECT_TRUE(r.recurrence_times.empty());
    EXPECT_TRUE(std::isnan(r.measured_period));
}

TEST(Recurrence, AmplitudeTwoReturns) {
    RecurrenceOptions o;
    o.grid = Grid(512, 30.0);
    o.periods = 1.5;
    const auto r = satsuma_yajima_run(2, o);
    EXPECT_EQ(r.fidelity.front(), 1.0);
    EXPECT_LT(r.min_fidelity, 0.5);
    ASSERT_EQ(r.recurrence_times.size(), 1u);
    EXPECT_GT(r.recurrence_fidelity[0], 0.99);
    EXPECT_NEAR(r.measured_period, pi / 2.0, 1e-3);
    EXPECT_NEAR(r.predicted_period, pi / 2.0, 1e-15);
    EXPECT_NEAR(r.convention_factor, pi / 4.0, 1e-15);
    EXPECT_NEAR(r.caustic_time, 0.25, 1e-15);
    EXPECT_THROW(satsuma_yajima_run(4, o), std::invalid_argument);
}

TEST(Recurrence, RmsWidth) {
    const Grid g(1024, 40.0);
    Field u(g);
    for (std::size_t j = 0; j < g.n; ++j) {
        const double y = g.x(j) - g.center();
        u.values[j] = std::exp(-y * y / 2.0);  // |u|^2 is a unit-variance Gaussian up to scale, width 1/sqrt 2
    }
    EXPECT_NEAR(rms_width(u), std::sqrt(0.5), 1e-10);
}
