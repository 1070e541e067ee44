#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "nlslab/dyadic.hpp"
#include "nlslab/rng.hpp"
#include "nlslab/spectral.hpp"

using namespace nlslab;

namespace {

Field random_field(const Grid& g, std::uint64_t seed) {
    Philox rng(seed);
    Field f(g);
    for (auto& v : f.values) v = rng.complex_normal();
    return f;
}

Field plane_wave(const Grid& g, long k) {
    Field f(g);
    for (std::size_t j = 0; j < g.n; ++j) f.values[j] = std::polar(1.0, g.freq_step() * k * g.x(j));
    return f;
}

}  // namespace

TEST(Grid, RejectsNonPowerOfTwo) {
    EXPECT_THROW(Grid(1000, 1.0), std::invalid_argument);
    EXPECT_THROW(Grid(1, 1.0), std::invalid_argument);
    EXPECT_THROW(Grid(64, 0.0), std::invalid_argument);
    EXPECT_NO_THROW(Grid(64, 2.0 * pi));
}

TEST(Grid, WavenumberRoundTrip) {
    Grid g(16, 2.0 * pi);
    for (std::size_t i = 0; i < g.n; ++i) EXPECT_EQ(g.index_of(g.wavenumber(i)), i);
    EXPECT_EQ(g.wavenumber(8), -8);
    EXPECT_THROW(g.index_of(8), std::out_of_range);
}

TEST(Transform, ZeroField) {
    Grid g(64, 2.0 * pi);
    const Spectrum s = forward(Field(g));
    for (const auto& c : s.coeffs) EXPECT_EQ(std::abs(c), 0.0);
    EXPECT_EQ(mass(Field(g)), 0.0);
}

TEST(Transform, SingleModeHasCoefficientL) {
    Grid g(128, 10.0);
    const Spectrum s = forward(plane_wave(g, 3));
    EXPECT_NEAR(std::abs(s.at(3) - cplx(g.length, 0.0)), 0.0, 1e-12);
    for (long k = -64; k < 64; ++k)
        if (k != 3) {
            EXPECT_LT(std::abs(s.at(k)), 1e-12);
        }
}

TEST(Transform, InverseOfSingleCoefficient) {
    Grid g(64, 4.0);
    Spectrum s(g);
    s.at(-5) = g.length;
    const Field f = inverse(s);
    const Field ref = plane_wave(g, -5);
    for (std::size_t j = 0; j < g.n; ++j) EXPECT_LT(std::abs(f.values[j] - ref.values[j]), 1e-13);
}

TEST(Transform, RoundTrip) {
    for (std::size_t n : {16u, 256u, 1024u}) {
        Grid g(n, 3.0);
        const Field f = random_field(g, n);
        const Field h = inverse(forward(f));
        double err = 0.0;
        for (std::size_t j = 0; j < n; ++j) err = std::max(err, std::abs(h.values[j] - f.values[j]));
        EXPECT_LT(err, 1e-12);
    }
}

TEST(Transform, Parseval) {
    Grid g(512, 7.0);
    const Field f = random_field(g, 5);
    const double a = mass(f), b = mass(forward(f));
    EXPECT_NEAR(a, b, 1e-12 * a);
}

TEST(Transform, RejectsNonFinite) {
    Grid g(16, 1.0);
    Field f(g);
    f.values[3] = cplx(std::nan(""), 0.0);
    EXPECT_THROW(forward(f), std::invalid_argument);
}

TEST(Mass, ConstantOneIsLength) {
    Grid g(64, 5.5);
    Field f(g);
    for (auto& v : f.values) v = 1.0;
    EXPECT_NEAR(mass(f), g.length, 1e-12);
}

TEST(HsNorm, ZeroIsL2) {
    Grid g(256, 9.0);
    const Field f = random_field(g, 1);
    EXPECT_NEAR(hs_norm(f, 0.0, 3.0), std::sqrt(mass(f)), 1e-10);
}

TEST(HsNorm, SingleModeClosedForm) {
    Grid g(256, 2.0 * pi);
    for (double s : {-0.25, -0.5, 0.5}) {
        const double lam = 2.0, xi = 7.0;
        const double expect = std::sqrt(g.length * std::pow(lam * lam + xi * xi, s));
        EXPECT_NEAR(hs_norm(plane_wave(g, 7), s, lam), expect, 1e-12 * expect);
    }
}

TEST(HsNorm, RejectsLambdaBelowOne) {
    Grid g(64, 2.0 * pi);
    EXPECT_THROW(hs_norm(Field(g), 0.0, 0.5), std::invalid_argument);
    EXPECT_THROW(hs_norm(Field(g), 0.0, 0.0), std::invalid_argument);
}

TEST(HsNorm, MonotoneInExponent) {
    Grid g(256, 20.0);
    const Field f = random_field(g, 9);
    double prev = 0.0;
    for (double s : {-1.0, -0.5, -0.25, 0.0, 0.25}) {
        const double v = hs_norm(f, s, 1.0);
        EXPECT_GT(v, prev);
        prev = v;
    }
}

// ||v||^2_{H^s_Lambda} against sum over dyadic lambda >= Lambda of lambda^{1/2+2s} ||P_lambda v||^2_{H^{-1/4}_lambda}
TEST(HsNorm, DyadicEquivalence) {
    Grid g(1024, 16.0 * pi);
    for (double s : {-0.25, -0.125, 0.0}) {
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            const Spectrum v = forward(random_field(g, seed));
            const LPBank bank(g, 1.0);
            double rhs = 0.0;
            for (std::size_t i = 0; i < bank.size(); ++i) {
                const double l = bank.block(i).lambda;
                const double p = hs_norm(bank.project(v, i), -0.25, l);
                rhs += std::pow(l, 0.5 + 2.0 * s) * p * p;
            }
            const double lhs = std::pow(hs_norm(v, s, 1.0), 2);
            const double c = std::max(lhs / rhs, rhs / lhs);
            EXPECT_LE(c, 16.0) << "s=" << s;
        }
    }
}

TEST(LinearFlow, IdentityAtZero) {
    Grid g(128, 6.0);
    const Field f = random_field(g, 4);
    const Field h = linear_propagate(f, 0.0);
    for (std::size_t j = 0; j < g.n; ++j) EXPECT_LT(std::abs(h.values[j] - f.values[j]), 1e-13);
}

TEST(LinearFlow, SingleModePhase) {
    Grid g(64, 2.0 * pi);
    const double t = 0.37;
    const Field h = linear_propagate(plane_wave(g, 4), t);
    const Field ref = plane_wave(g, 4);
    for (std::size_t j = 0; j < g.n; ++j) EXPECT_LT(std::abs(h.values[j] - ref.values[j] * std::polar(1.0, 16.0 * t)), 1e-12);
}

TEST(LinearFlow, UnitaryAndGroup) {
    Grid g(256, 11.0);
    const Field f = random_field(g, 8);
    const Field a = linear_propagate(linear_propagate(f, 0.3), 0.45);
    const Field b = linear_propagate(f, 0.75);
    EXPECT_NEAR(mass(a), mass(f), 1e-11 * mass(f));
    for (std::size_t j = 0; j < g.n; ++j) EXPECT_LT(std::abs(a.values[j] - b.values[j]), 1e-11);
}

TEST(PhaseFreeDistance, IgnoresGlobalPhase) {
    Grid g(128, 5.0);
    const Field f = random_field(g, 2);
    Field h = f;
    for (auto& v : h.values) v *= std::polar(1.0, 1.234);
    EXPECT_LT(phase_free_distance(f, h), 1e-6);
    EXPECT_GT(phase_free_distance(f, Field(g)), 0.0);
}

TEST(Snapshot, RoundTripIsBitExact) {
    Grid g(64, 3.25);
    const Field f = random_field(g, 77);
    const auto path = (std::filesystem::temp_directory_path() / "nlslab_snapshot_test.bin").string();
    write_snapshot(path, f, 0.125);
    const auto s = read_snapshot(path);
    EXPECT_EQ(s.time, 0.125);
    EXPECT_EQ(s.field.grid.n, g.n);
    EXPECT_EQ(s.field.grid.length, g.length);
    for (std::size_t j = 0; j < g.n; ++j) EXPECT_EQ(s.field.values[j], f.values[j]);
    EXPECT_EQ(std::filesystem::file_size(path), 4u + 8u * 3u + 16u * g.n);
    std::remove(path.c_str());
}

TEST(Snapshot, RejectsBadMagic) {
    const auto path = (std::filesystem::temp_directory_path() / "nlslab_bad_snapshot.bin").string();
    {
        std::ofstream os(path, std::ios::binary);
        os << "XXXXjunk";
    }
    EXPECT_THROW(read_snapshot(path), std::runtime_error);
    std::remove(path.c_str());
}
