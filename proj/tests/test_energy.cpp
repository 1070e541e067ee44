#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "nlslab/energy.hpp"
#include "nlslab/rng.hpp"

using namespace nlslab;

namespace {

// random data with |k| <= kmax
Spectrum band_spectrum(const Grid& g, long kmax, double amp, std::uint64_t seed) {
    Philox rng(seed);
    Spectrum s(g);
    for (std::size_t i = 0; i < g.n; ++i)
        if (std::labs(g.wavenumber(i)) <= kmax) s.coeffs[i] = amp * g.length * rng.complex_normal();
    return s;
}

double l4_integral(const Field& f) {
    double acc = 0.0;
    for (const auto& v : f.values) acc += std::norm(v) * std::norm(v);
    return acc * f.grid.spacing();
}

Field packet(const Grid& g, double xi0, double x0, double width) {
    Field f(g);
    for (std::size_t j = 0; j < g.n; ++j) {
        const double y = g.x(j) - x0;
        f.values[j] = std::exp(-y * y / (2.0 * width * width)) * std::polar(1.0, xi0 * g.x(j));
    }
    return f;
}

}  // namespace

TEST(CubicSpectrum, MatchesPointwiseProduct) {
    Grid g(64, 2.0 * pi);
    const Spectrum s = band_spectrum(g, 10, 0.1, 1);
    const Field u = inverse(s);
    Field n(g);
    for (std::size_t j = 0; j < g.n; ++j) n.values[j] = std::norm(u.values[j]) * u.values[j];
    const Spectrum a = cubic_spectrum(s), b = forward(n);
    for (std::size_t i = 0; i < g.n; ++i) EXPECT_LT(std::abs(a.coeffs[i] - b.coeffs[i]), 1e-10 * g.length);
}

TEST(E0, BasicValues) {
    Grid g(128, 10.0);
    EXPECT_EQ(e0(Field(g), power_symbol(1.0, 0.1)), 0.0);
    const Spectrum s = band_spectrum(g, 20, 1.0, 2);
    EXPECT_NEAR(e0(s, constant_symbol(1.0, 1.0)), mass(s), 1e-12 * mass(s));
    Spectrum one(g);
    one.at(3) = g.length;
    const Symbol a = power_symbol(2.0, 0.1);
    EXPECT_NEAR(e0(one, a), g.length * a(g.xi(3)), 1e-12);
}

TEST(Quadform, ConstantSymbolIsL4) {
    Grid g(64, 2.0 * pi);
    const Spectrum s = band_spectrum(g, 8, 0.2, 3);
    const P4Fn one = [](double, double, double) { return 1.0; };
    const cplx q = quadform_naive(one, s, s, s, s);
    const double ref = l4_integral(inverse(s));
    EXPECT_NEAR(q.real(), ref, 1e-12 * ref);
    EXPECT_NEAR(q.imag(), 0.0, 1e-12 * ref);
}

TEST(Quadform, ZeroInputs) {
    Grid g(32, 2.0 * pi);
    const P4Fn one = [](double, double, double) { return 1.0; };
    const Spectrum z(g), s = band_spectrum(g, 8, 1.0, 1);
    EXPECT_EQ(std::abs(quadform_naive(one, z, s, s, s)), 0.0);
    EXPECT_EQ(std::abs(quadform_naive(one, s, s, s, z)), 0.0);
}

TEST(Quadform, TableMatchesNaive) {
    Grid g(32, 4.0);
    const Symbol a = power_symbol(2.0, 0.1);
    const P4Fn b = energy_symbol(a, Sign::focusing);
    const Spectrum u = band_spectrum(g, 16, 1.0, 4), v = band_spectrum(g, 16, 1.0, 5);
    const P4Table t(g, b, full_band(g));
    const cplx x = t.apply(u, v, u, v), y = quadform_naive(b, u, v, u, v);
    EXPECT_LT(std::abs(x - y), 1e-12 * std::abs(y));
}

TEST(Quadform, SeparatedMatchesNaive) {
    Grid g(64, 2.0 * pi);
    const Symbol a = power_symbol(4.0, 0.01);
    const P4Fn b = [a](double x0, double x1, double x2) { return b4_diagonal(a, x0, x1, x2); };
    const Band band = full_band(g);
    const SeparationPlan plan(g, b, band);
    EXPECT_GT(plan.stats().boxes, 0u);
    const Spectrum u = band_spectrum(g, 32, 1.0, 6), v = band_spectrum(g, 32, 1.0, 7);
    const cplx x = quadform_separated(plan, u, v, v, u), y = quadform_naive(b, u, v, v, u, band);
    EXPECT_LT(std::abs(x - y), 1e-8 * std::abs(y));
}

TEST(Quadform, SeparablePolynomialSymbolIsExact) {
    Grid g(32, 2.0 * pi);
    const P4Fn b = [](double x0, double x1, double x2) { return x0 * x1 * x1 * (1.0 + x2); };
    const SeparationPlan plan(g, b, full_band(g));
    const Spectrum u = band_spectrum(g, 16, 1.0, 8);
    const cplx x = plan.apply(u, u, u, u), y = quadform_naive(b, u, u, u, u);
    EXPECT_LT(std::abs(x - y), 1e-12 * std::abs(y));
}

TEST(Quadform, BandChecks) {
    Grid g(32, 2.0 * pi);
    const P4Fn one = [](double, double, double) { return 1.0; };
    const Spectrum s(g);
    EXPECT_THROW(quadform_naive(one, s, s, s, s, Band{-20, 3}), std::invalid_argument);
    EXPECT_EQ(symmetric_band(g, 100).kmax, 15);
    EXPECT_THROW(symmetric_band(g, -1), std::invalid_argument);
    EXPECT_THROW(engine_from_string("fast"), std::invalid_argument);
}

TEST(E1, VanishesForConstantSymbol) {
    Grid g(32, 2.0 * pi);
    const Field u = inverse(band_spectrum(g, 8, 0.3, 9));
    EXPECT_NEAR(e1(u, constant_symbol(1.0, 3.0), Sign::focusing, EngineKind::naive), 0.0, 1e-14);
    EXPECT_EQ(e1(Field(g), power_symbol(1.0, 0.1), Sign::focusing, EngineKind::naive), 0.0);
}

TEST(E1, QuadraticSymbolGivesL4) {
    Grid g(64, 2.0 * pi);
    const Field u = inverse(band_spectrum(g, 8, 0.3, 10));
    const double ref = l4_integral(u);
    for (Sign s : {Sign::focusing, Sign::defocusing})
        EXPECT_NEAR(e1(u, quadratic_symbol(1.0), s, EngineKind::naive), -0.5 * sigma(s) * ref, 1e-11 * ref);
}

TEST(E1, QuarticHomogeneity) {
    Grid g(32, 2.0 * pi);
    const Symbol a = power_symbol(2.0, 0.1);
    const Spectrum s = band_spectrum(g, 16, 0.3, 11);
    const QuadEngine eng(g, energy_symbol(a, Sign::focusing), full_band(g), EngineKind::naive);
    Spectrum t = s;
    for (auto& c : t.coeffs) c *= 0.5;
    EXPECT_NEAR(e1(t, eng), e1(s, eng) / 16.0, 1e-13 * std::abs(e1(s, eng)));
}

TEST(R4, ConstantSymbolVanishes) {
    Grid g(64, 2.0 * pi);
    const Field u = inverse(band_spectrum(g, 10, 0.3, 12));
    const double scale = l4_integral(u);
    EXPECT_NEAR(r4(u, constant_symbol(1.0, 2.0), R4Form::inner_product), 0.0, 1e-12 * scale);
    EXPECT_NEAR(r4(u, constant_symbol(1.0, 2.0), R4Form::symmetrized), 0.0, 1e-12 * scale);
}

TEST(R4, FormsAgree) {
    Grid g(64, 2.0 * pi);
    const Field u = inverse(band_spectrum(g, 10, 0.3, 13));
    const Symbol a = power_symbol(2.0, 0.05);
    const double x = r4(u, a, R4Form::inner_product), y = r4(u, a, R4Form::symmetrized);
    EXPECT_GT(std::abs(y), 0.0);
    EXPECT_NEAR(x, y, 1e-10 * std::abs(y));
}

TEST(R6, ZeroAndSexticScaling) {
    Grid g(32, 2.0 * pi);
    const Symbol a = power_symbol(2.0, 0.1);
    const QuadEngine eng(g, energy_symbol(a, Sign::focusing), full_band(g), EngineKind::naive);
    EXPECT_EQ(r6(Spectrum(g), eng), 0.0);
    const Spectrum s = band_spectrum(g, 8, 0.3, 14);
    Spectrum t = s;
    for (auto& c : t.coeffs) c *= 2.0;
    EXPECT_NEAR(r6(t, eng), 64.0 * r6(s, eng), 1e-11 * std::abs(64.0 * r6(s, eng)));
    const QuadEngine flat(g, energy_symbol(constant_symbol(1.0, 1.0), Sign::focusing), full_band(g), EngineKind::naive);
    EXPECT_NEAR(r6(s, flat), 0.0, 1e-14);
}

TEST(QuasiEnergy, LinearFlowKeepsE0) {
    Grid g(64, 8.0 * pi);
    SolverConfig c;
    c.dt = 1e-3;
    c.t_end = 0.02;
    c.nonlinear = false;
    const Symbol a = power_symbol(1.0, 0.01);
    const Trajectory tr = evolve(inverse(band_spectrum(g, 8, 0.01, 15)), c);
    const auto rep = quasi_energy_scan(tr, a, Sign::focusing, EngineKind::naive, symmetric_band(g, 21));
    for (double v : rep.e0) EXPECT_NEAR(v, rep.e0.front(), 1e-12 * std::abs(rep.e0.front()));
    for (double v : rep.de0_dt) EXPECT_LT(std::abs(v), 1e-9 * std::abs(rep.e0.front()));
}

TEST(QuasiEnergy, RelationSignIsMinusSigma) {
    Grid g(64, 8.0 * pi);
    const Symbol a = power_symbol(1.0, 0.01);
    for (Sign s : {Sign::focusing, Sign::defocusing}) {
        SolverConfig c;
        c.sign = s;
        c.dt = 5e-4;
        c.t_end = 0.02;
        const Trajectory tr = evolve(inverse(band_spectrum(g, 6, 0.05, 16)), c);
        const auto rep = quasi_energy_scan(tr, a, s, EngineKind::naive, symmetric_band(g, 21));
        EXPECT_EQ(rep.relation_sign, -sigma(s));
        EXPECT_FALSE(rep.too_coarse);
        EXPECT_LT(rep.max_residual, 1e-3 * rep.max_abs_r6);
        EXPECT_LT(rep.max_residual_r4, 1e-3 * rep.max_abs_r4);
    }
}

TEST(QuasiEnergy, InputChecks) {
    Grid g(32, 2.0 * pi);
    Trajectory tr;
    tr.grid = g;
    for (int i = 0; i < 4; ++i) tr.push(0.1 * i, cvec(g.n));
    const Symbol a = power_symbol(1.0, 0.01);
    EXPECT_THROW(quasi_energy_scan(tr, a, Sign::focusing, EngineKind::naive, full_band(g)), std::invalid_argument);
    tr.push(0.55, cvec(g.n));
    EXPECT_THROW(quasi_energy_scan(tr, a, Sign::focusing, EngineKind::naive, full_band(g)), std::invalid_argument);
}

TEST(QuasiEnergy, CsvHeader) {
    Grid g(32, 2.0 * pi);
    Trajectory tr;
    tr.grid = g;
    for (int i = 0; i < 6; ++i) tr.push(0.1 * i, cvec(g.n));
    const auto rep = quasi_energy_scan(tr, power_symbol(1.0, 0.01), Sign::focusing, EngineKind::naive, full_band(g));
    const auto path = (std::filesystem::temp_directory_path() / "nlslab_qe.csv").string();
    write_quasi_energy_csv(path, rep);
    std::ifstream is(path);
    std::string l1, l2;
    std::getline(is, l1);
    std::getline(is, l2);
    EXPECT_EQ(l1.rfind("# nlslab-csv v1 energy-scan", 0), 0u);
    EXPECT_EQ(l2, "t,E0,E1,Etot,dEtot_dt,R6,residual");
    std::remove(path.c_str());
}

TEST(Weighted, E0TildeIsRealAndSignIndefinite) {
    Grid g(1024, 32.0 * pi);
    const WeightPair w = fejer_weights(g, 1.0);
    const Symbol at = odd_extension(power_symbol(1.0, 0.01));
    EXPECT_EQ(e0_tilde(Field(g), at, w).value, 0.0);
    const auto left = e0_tilde(packet(g, 5.0, w.x0 - 8.0, 1.0), at, w);
    const auto right = e0_tilde(packet(g, 5.0, w.x0 + 8.0, 1.0), at, w);
    EXPECT_LT(left.value, 0.0);
    EXPECT_GT(right.value, 0.0);
    EXPECT_LT(std::abs(left.imag_residual), 1e-10 * std::abs(left.value));
    EXPECT_LT(std::abs(right.imag_residual), 1e-10 * std::abs(right.value));
}

TEST(Weighted, R2TildeForAPacket) {
    Grid g(1024, 32.0 * pi);
    const WeightPair w = fejer_weights(g, 1.0);
    const Symbol at = odd_extension(power_symbol(1.0, 0.01));
    for (double xi0 : {10.0, 20.0}) {
        const Field u = packet(g, xi0, w.x0, 2.0);
        const auto r = r2_tilde(u, at, w);
        double pm = 0.0;
        for (std::size_t j = 0; j < g.n; ++j) pm += w.psi2[j] * std::norm(u.values[j]);
        pm *= g.spacing();
        EXPECT_NEAR(r.value / (xi0 * at(xi0) * pm), 4.0, 0.04);
        EXPECT_NEAR(r.value / principal_part(u, at, w), 4.0, 0.04);
        EXPECT_LT(std::abs(r.imag_residual), 1e-10 * std::abs(r.value));
        // even in the packet frequency
        const auto m = r2_tilde(packet(g, -xi0, w.x0, 2.0), at, w);
        EXPECT_NEAR(m.value, r.value, 1e-10 * std::abs(r.value));
    }
}

TEST(Weighted, LocalEnergyLhs) {
    Grid g(256, 32.0);
    Trajectory tr;
    tr.grid = g;
    for (int i = 0; i < 3; ++i) tr.push(0.1 * i, cvec(g.n));
    EXPECT_EQ(local_energy_lhs(tr, power_symbol(1.0, 0.01), 1.0), 0.0);
    Trajectory tp = tr;
    const Field u = packet(g, 3.0, 16.0, 1.0);
    for (auto& s : tp.snapshots) s = u.values;
    EXPECT_GT(local_energy_lhs(tp, power_symbol(1.0, 0.01), 1.0), 0.0);
}
