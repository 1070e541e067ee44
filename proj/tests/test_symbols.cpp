#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "nlslab/rng.hpp"
#include "nlslab/symbols.hpp"

using namespace nlslab;

namespace {

double uni(Philox& r, double a, double b) { return a + (b - a) * r.uniform(); }
double pm(Philox& r) { return r.uniform() < 0.5 ? -1.0 : 1.0; }

Symbol linear_symbol(double lam) {
    return Symbol(
        lam, [](double xi) { return xi; }, [](double) { return 1.0; }, [](double) { return 0.0; }, "linear");
}

}  // namespace

TEST(PowerSymbol, ValuesAndDomain) {
    const Symbol a = power_symbol(4.0, 0.05);
    EXPECT_NEAR(a(0.0), 0.5, 1e-15);
    EXPECT_NEAR(a(4.0), 0.5 * std::pow(2.0, -0.3), 1e-15);
    EXPECT_EQ(a.lambda(), 4.0);
    EXPECT_THROW(power_symbol(4.0, 0.0), std::invalid_argument);
    EXPECT_THROW(power_symbol(4.0, 0.3), std::invalid_argument);
    EXPECT_THROW(power_symbol(0.0, 0.1), std::invalid_argument);
    EXPECT_NO_THROW(power_symbol(4.0, 0.25));
}

TEST(PowerSymbol, AnalyticDerivativesMatchDifferences) {
    const Symbol a = power_symbol(3.0, 0.1);
    for (double xi : {-20.0, -1.0, 0.3, 2.0, 50.0}) {
        const double h = 1e-4;
        EXPECT_NEAR(a.d1(xi), (a(xi + h) - a(xi - h)) / (2 * h), 1e-8);
        EXPECT_NEAR(a.d2(xi), (a.d1(xi + h) - a.d1(xi - h)) / (2 * h), 1e-7);
    }
}

TEST(ValidateSymbol, ClassMembership) {
    EXPECT_TRUE(validate_symbol(power_symbol(1.0, 0.01)).pass);
    EXPECT_TRUE(validate_symbol(power_symbol(16.0, 0.2)).pass);
    EXPECT_TRUE(validate_symbol(japanese_symbol(2.0, -0.5)).pass);
    EXPECT_TRUE(validate_symbol(constant_symbol(1.0, 1.0)).pass);
    const auto bad = validate_symbol(japanese_symbol(2.0, -1.0));
    EXPECT_FALSE(bad.pass);
    EXPECT_LT(bad.lower_ratio_min, 1.0);
    // decreasing a(xi) <xi> violates monotonicity
    EXPECT_FALSE(validate_symbol(japanese_symbol(2.0, -0.75)).pass);
}

TEST(ValidateSymbol, RegularityConstants) {
    const auto r = validate_symbol(power_symbol(4.0, 0.05));
    EXPECT_LT(r.regularity_1, 1.0);
    EXPECT_LT(r.regularity_2, 2.0);
}

TEST(OddExtension, OddAndAgreesAboveLambda) {
    const Symbol a = power_symbol(4.0, 0.05);
    const Symbol t = odd_extension(a);
    EXPECT_EQ(t(0.0), 0.0);
    for (double xi : {0.1, 1.0, 2.5, 3.9, 4.0, 7.0, 100.0}) {
        EXPECT_EQ(t(-xi), -t(xi));
        EXPECT_GE(xi * t(xi), 0.0);
        if (xi >= 4.0) {
            EXPECT_EQ(t(xi), a(xi));
        }
    }
    EXPECT_NEAR(t(1.0), a(1.0) / 4.0, 1e-15);
}

TEST(OddExtension, TwiceContinuous) {
    const Symbol t = odd_extension(power_symbol(4.0, 0.05));
    for (double x : {2.0, 4.0}) {
        const double e = 1e-9;
        EXPECT_NEAR(t(x - e), t(x + e), 1e-8);
        EXPECT_NEAR(t.d1(x - e), t.d1(x + e), 1e-8);
        EXPECT_NEAR(t.d2(x - e), t.d2(x + e), 1e-7);
    }
    for (double x : {0.5, 2.7, 3.3}) {
        const double h = 1e-5;
        EXPECT_NEAR(t.d1(x), (t(x + h) - t(x - h)) / (2 * h), 1e-8);
        EXPECT_NEAR(t.d2(x), (t.d1(x + h) - t.d1(x - h)) / (2 * h), 1e-6);
    }
}

TEST(DividedDifference, QuadraticAndCoincidence) {
    const Symbol q = quadratic_symbol(1.0);
    EXPECT_NEAR(divided_difference(q, 3.0, -1.5), 1.5, 1e-14);
    EXPECT_NEAR(divided_difference(q, 2.0, 2.0), 4.0, 1e-14);
    EXPECT_NEAR(divided_difference(q, -1.5, 3.0), divided_difference(q, 3.0, -1.5), 0.0);
    const Symbol a = power_symbol(2.0, 0.1);
    EXPECT_NEAR(divided_difference(a, 1.0, 1.0), a.d1(1.0), 1e-15);
}

TEST(B4Diagonal, QuadraticIsMinusOne) {
    const Symbol q = quadratic_symbol(1.0);
    Philox r(1);
    for (int i = 0; i < 200; ++i) {
        const double x0 = uni(r, -10, 10), x1 = uni(r, -10, 10), x2 = uni(r, -10, 10);
        EXPECT_NEAR(b4_diagonal(q, x0, x1, x2), -1.0, 1e-12);
    }
    EXPECT_NEAR(b4_diagonal(q, 2.0, 5.0, 2.0), -1.0, 1e-12);  // xi2 = xi0
    EXPECT_NEAR(b4_diagonal(q, 2.0, 5.0, 5.0), -1.0, 1e-12);  // xi3 = xi0
    EXPECT_NEAR(b4_diagonal(q, 3.0, 3.0, 3.0), -1.0, 1e-12);  // both
}

TEST(B4Diagonal, LinearAndConstantVanish) {
    const Symbol l = linear_symbol(1.0), c = constant_symbol(1.0, 2.0);
    for (auto [x0, x1, x2] : {std::tuple{1.0, 2.0, -3.0}, {4.0, 4.0, 4.0}, {0.5, -7.0, 0.5}}) {
        EXPECT_NEAR(b4_diagonal(l, x0, x1, x2), 0.0, 1e-12);
        EXPECT_NEAR(b4_diagonal(c, x0, x1, x2), 0.0, 1e-12);
    }
}

TEST(B4Diagonal, Symmetries) {
    const Symbol a = power_symbol(4.0, 0.05);
    Philox r(2);
    for (int i = 0; i < 200; ++i) {
        const double x0 = uni(r, -30, 30), x1 = uni(r, -30, 30), x2 = uni(r, -30, 30), x3 = x0 + x1 - x2;
        const double b = b4_diagonal(a, x0, x1, x2);
        const double tol = 1e-9 * std::max(1e-3, std::abs(b));
        EXPECT_NEAR(b4_diagonal(a, x1, x0, x2), b, tol);
        EXPECT_NEAR(b4_diagonal(a, x0, x1, x3), b, tol);
        EXPECT_NEAR(b4_diagonal(a, x2, x3, x0), b, tol);
    }
}

TEST(B4Diagonal, ReconstructsTheSymbolDifference) {
    const Symbol a = power_symbol(4.0, 0.05);
    Philox r(3);
    for (int i = 0; i < 1000; ++i) {
        const double x0 = uni(r, -64, 64), x1 = uni(r, -64, 64), x2 = uni(r, -64, 64), x3 = x0 + x1 - x2;
        const double q = x0 * x0 + x1 * x1 - x2 * x2 - x3 * x3;
        const double fac = 2.0 * (x0 - x2) * (x0 - x3);
        EXPECT_NEAR(q, fac, 1e-12 * (x0 * x0 + x1 * x1 + x2 * x2 + x3 * x3));
        const double da = a(x0) + a(x1) - a(x2) - a(x3);
        EXPECT_NEAR(da, -b4_diagonal(a, x0, x1, x2) * q, 1e-12 * (a(x0) + a(x1) + a(x2) + a(x3)));
    }
}

TEST(B4Diagonal, ContinuousAcrossTheRemovableSet) {
    const Symbol a = power_symbol(4.0, 0.05);
    const double on = b4_diagonal(a, 3.0, -2.0, 3.0);
    const double near = b4_diagonal(a, 3.0, -2.0, 3.0 + 1e-3);
    EXPECT_NEAR(on, near, 1e-3 * std::abs(on) + 1e-6);
}

TEST(B4Energy, CarriesHalfTheSign) {
    const Symbol a = power_symbol(4.0, 0.05);
    const double d = b4_diagonal(a, 1.0, 2.0, 5.0);
    EXPECT_NEAR(b4_energy(a, Sign::focusing, 1.0, 2.0, 5.0), 0.5 * d, 1e-15);
    EXPECT_NEAR(b4_energy(a, Sign::defocusing, 1.0, 2.0, 5.0), -0.5 * d, 1e-15);
}

TEST(OffDiagonal, Classification) {
    EXPECT_EQ(classify_offdiagonal(1.0, 40.0, 8.0, 41.0), OffDiagonalCase::a);
    EXPECT_EQ(classify_offdiagonal(4.0, 40.0, 6.0, 41.0), OffDiagonalCase::b);
    EXPECT_EQ(classify_offdiagonal(10.0, 20.0, 12.0, 22.0), OffDiagonalCase::c);
}

TEST(OffDiagonal, DecompositionIdentityAllCases) {
    const Symbol d = power_symbol(4.0, 0.05);
    Philox r(4);
    struct Region {
        OffDiagonalCase c;
        double lam, alpha, mu;
    };
    for (Region g : {Region{OffDiagonalCase::a, 1, 8, 32}, Region{OffDiagonalCase::b, 4, 4, 64},
                     Region{OffDiagonalCase::c, 16, 16, 16}}) {
        for (int i = 0; i < 1000; ++i) {
            const double x0 = pm(r) * uni(r, g.lam, 2 * g.lam), x2 = pm(r) * uni(r, g.alpha, 2 * g.alpha);
            const double x1 = pm(r) * uni(r, g.mu, 2 * g.mu), x3 = pm(r) * uni(r, g.mu, 2 * g.mu);
            const auto bc = b4c4_offdiagonal(d, g.c, x0, x1, x2, x3);
            const double lhs = d(x0) + d(x1) - d(x2) - d(x3);
            const double rhs = bc.b4 * (x0 * x0 + x1 * x1 - x2 * x2 - x3 * x3) + bc.c4 * (x0 + x1 - x2 - x3);
            const double scale = std::abs(d(x0)) + std::abs(d(x1)) + std::abs(d(x2)) + std::abs(d(x3));
            EXPECT_NEAR(lhs, rhs, 1e-12 * scale);
        }
    }
}

TEST(OffDiagonal, LinearSymbolCaseC) {
    const Symbol l = linear_symbol(1.0);
    const auto bc = b4c4_offdiagonal(l, OffDiagonalCase::c, 10.0, 21.0, -12.0, 17.0);
    EXPECT_NEAR(bc.b4, 0.0, 1e-9);
    EXPECT_NEAR(bc.c4, 1.0, 1e-9);
}

TEST(OffDiagonal, ExcludedSetRejected) {
    const Symbol d = power_symbol(4.0, 0.05);
    EXPECT_THROW(b4c4_offdiagonal(d, OffDiagonalCase::a, 2.0, 5.0, 2.0, 7.0), std::domain_error);
    EXPECT_THROW(b4c4_offdiagonal(d, OffDiagonalCase::b, 2.0, 5.0, 1.0, 2.0), std::domain_error);
}

TEST(Fejer, WeightsBasicProperties) {
    Grid g(1024, 32.0 * pi);
    const WeightPair w = fejer_weights(g, 1.0);
    const std::size_t c = g.n / 2;
    EXPECT_NEAR(w.psi[c], 1.0, 1e-12);
    EXPECT_NEAR(w.phi[c], 0.0, 1e-12);
    for (std::size_t j = 0; j < g.n; ++j) {
        EXPECT_GE(w.psi[j], -1e-12);
        EXPECT_LE(w.psi[j], 1.0 + 1e-12);
    }
    for (std::size_t j = 1; j < c; ++j) EXPECT_NEAR(w.phi[c + j], -w.phi[c - j], 1e-12);
    for (std::size_t i = 0; i < g.n; ++i)
        if (std::abs(g.xi(i)) > 1.0 + 1e-12) {
            EXPECT_EQ(std::abs(w.psi_hat.coeffs[i]), 0.0);
        }
}

TEST(Fejer, PhiDerivativeIsPsiSquared) {
    Grid g(1024, 32.0 * pi);
    const WeightPair w = fejer_weights(g, 0.5, 40.0);
    // remove the linear part and differentiate the periodic remainder spectrally
    Field p(g);
    for (std::size_t j = 0; j < g.n; ++j) {
        double y = g.x(j) - w.x0;
        y -= g.length * std::round(y / g.length);
        p.values[j] = w.phi[j] - w.slope * y;
    }
    const Field dp = inverse(derivative(forward(p)));
    for (std::size_t j = 0; j < g.n; ++j) EXPECT_NEAR(dp.values[j].real() + w.slope, w.psi2[j], 1e-10);
}

TEST(Fejer, RejectsUnresolvedScales) {
    Grid g(64, 2.0 * pi);
    EXPECT_THROW(fejer_weights(g, 1.0), std::invalid_argument);
    EXPECT_THROW(fejer_weights(g, 0.01), std::invalid_argument);
    EXPECT_THROW(fejer_weights(g, -1.0), std::invalid_argument);
}

TEST(Export, SymbolCsv) {
    const auto path = (std::filesystem::temp_directory_path() / "nlslab_symbol.csv").string();
    export_symbol_csv(path, power_symbol(2.0, 0.1), -4.0, 4.0, 9);
    std::ifstream is(path);
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line.rfind("# nlslab-csv v1 symbol", 0), 0u);
    std::getline(is, line);
    EXPECT_EQ(line, "xi,a,da,d2a");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    EXPECT_EQ(rows, 9);
    std::remove(path.c_str());
    EXPECT_THROW(export_symbol_csv(path, power_symbol(2.0, 0.1), 1.0, 0.0, 9), std::invalid_argument);
}

TEST(Resonance, FactorizationAtRandomPoints) {
    Philox r(31);
    for (int i = 0; i < 1000; ++i) {
        const double x0 = uni(r, -40, 40), x1 = uni(r, -40, 40), x2 = uni(r, -40, 40), x3 = uni(r, -40, 40);
        const double lhs = x0 * x0 + x1 * x1 - x2 * x2 - x3 * x3;
        const double rhs = 2.0 * (x0 - x2) * (x0 - x3) - (x0 + x1 - x2 - x3) * (x0 - x1 - x2 - x3);
        EXPECT_NEAR(lhs, rhs, 1e-12 * (x0 * x0 + x1 * x1 + x2 * x2 + x3 * x3));
    }
}
