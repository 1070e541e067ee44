#pragma once
// Space-time Fourier analysis of trajectories: modulation shells, X^{s,b}-type
// norms, V^2 variation of the pulled-back flow, and probes for the bilinear and
// quadrilinear estimates.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "nlslab/rng.hpp"
#include "nlslab/solver.hpp"
#include "nlslab/spectral.hpp"

namespace nlslab {

enum class Taper { none, hann };

// u~(tau_m, xi_k) = dt sum_n w_n u^_n(xi_k) exp(-i tau_m t_n),  tau_m = m 2pi/(M dt)
struct SpacetimeBlock {
    Grid grid;
    double dt = 0.0;
    double t0 = 0.0;
    std::size_t m = 0;      // number of time samples
    Taper taper = Taper::hann;
    std::vector<cvec> coeffs;  // coeffs[time-frequency slot][space slot], both FFT order

    double tau_step() const { return 2.0 * pi / (static_cast<double>(m) * dt); }
    double tau(std::size_t j) const {
        long q = static_cast<long>(j);
        if (q >= static_cast<long>(m / 2)) q -= static_cast<long>(m);
        return tau_step() * static_cast<double>(q);
    }
    double tau_period() const { return 2.0 * pi / dt; }
    // |tau - xi^2| measured on the circle of aliased temporal frequencies
    double modulation(std::size_t jt, std::size_t ix) const {
        const double xi = grid.xi(ix);
        double d = tau(jt) - xi * xi;
        const double p = tau_period();
        d -= p * std::round(d / p);
        return std::abs(d);
    }
    // half-width of the taper main lobe in tau
    double taper_bandwidth() const { return (taper == Taper::hann ? 2.0 : 1.0) * tau_step(); }
    // modulations below this belong to the lowest shell
    double modulation_floor() const { return taper_bandwidth() + tau_step(); }

    // space-time L2 norm squared via Parseval
    double norm2() const {
        double acc = 0.0;
        for (const auto& row : coeffs)
            for (const auto& c : row) acc += std::norm(c);
        return acc / (static_cast<double>(m) * dt * grid.length);
    }
};

inline rvec taper_weights(std::size_t m, Taper t) {
    rvec w(m, 1.0);
    if (t == Taper::hann)
        for (std::size_t n = 0; n < m; ++n) w[n] = 0.5 * (1.0 - std::cos(2.0 * pi * static_cast<double>(n) / static_cast<double>(m)));
    return w;
}

inline SpacetimeBlock spacetime_transform(const Trajectory& traj, double ta, double tb, Taper taper = Taper::hann) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < traj.size(); ++i)
        if (traj.times[i] >= ta - 1e-12 && traj.times[i] <= tb + 1e-12) idx.push_back(i);
    if (idx.size() < 16) throw std::invalid_argument("spacetime_transform: fewer than 16 snapshots in the window");
    const double dt = traj.times[idx[1]] - traj.times[idx[0]];
    for (std::size_t q = 1; q < idx.size(); ++q)
        if (std::abs(traj.times[idx[q]] - traj.times[idx[q - 1]] - dt) > 1e-9 * dt)
            throw std::invalid_argument("spacetime_transform: snapshots must be uniformly spaced");
    SpacetimeBlock blk;
    blk.grid = traj.grid;
    blk.dt = dt;
    blk.t0 = traj.times[idx[0]];
    blk.m = idx.size();
    blk.taper = taper;
    const rvec w = taper_weights(blk.m, taper);
    const std::size_t n = traj.grid.n;
    std::vector<cvec> spat(blk.m);
    for (std::size_t q = 0; q < blk.m; ++q) {
        Spectrum s = forward(traj.field(idx[q]));
        for (auto& c : s.coeffs) c *= w[q];
        spat[q] = std::move(s.coeffs);
    }
    blk.coeffs.assign(blk.m, cvec(n));
    cvec col(blk.m);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t q = 0; q < blk.m; ++q) col[q] = spat[q][k];
        dft_forward_inplace(col);
        for (std::size_t j = 0; j < blk.m; ++j) blk.coeffs[j][k] = dt * col[j] * std::polar(1.0, -blk.tau(j) * blk.t0);
    }
    return blk;
}

// keep mu <= |tau - xi^2| < 2 mu; mu <= 0 selects the lowest shell below the floor
inline SpacetimeBlock modulation_project(const SpacetimeBlock& blk, double mu) {
    SpacetimeBlock out = blk;
    const double lo = mu > 0.0 ? mu : 0.0;
    const double hi = mu > 0.0 ? 2.0 * mu : blk.modulation_floor();
    for (std::size_t j = 0; j < blk.m; ++j)
        for (std::size_t k = 0; k < blk.grid.n; ++k) {
            const double d = blk.modulation(j, k);
            if (!(d >= lo && d < hi)) out.coeffs[j][k] = 0.0;
        }
    return out;
}

// dyadic shell edges floor, 2 floor, ... covering all modulations
inline rvec modulation_shells(const SpacetimeBlock& blk) {
    rvec mus;
    for (double mu = blk.modulation_floor(); mu <= blk.tau_period(); mu *= 2.0) mus.push_back(mu);
    return mus;
}

struct XsbReport {
    double value = 0.0;        // sup over shells above the floor of mu^b ||Q_mu u||
    double floor_mass = 0.0;   // ||Q_low u|| below the taper floor
    double total = 0.0;        // ||u|| over the block
    double argmax_mu = 0.0;
};

inline XsbReport xsb_sup_norm(const SpacetimeBlock& blk, double b = 0.5) {
    XsbReport r;
    r.total = std::sqrt(blk.norm2());
    r.floor_mass = std::sqrt(modulation_project(blk, 0.0).norm2());
    for (double mu : modulation_shells(blk)) {
        const double v = std::pow(mu, b) * std::sqrt(modulation_project(blk, mu).norm2());
        if (v > r.value) {
            r.value = v;
            r.argmax_mu = mu;
        }
    }
    return r;
}

// fourth-order first derivative at sample i of a uniform series (centred if possible, else one-sided)
inline cplx time_derivative4(const std::vector<cvec>& y, std::size_t i, std::size_t k, double h) {
    const std::size_t n = y.size();
    if (n < 5) throw std::invalid_argument("time derivative: need five samples");
    if (i >= 2 && i + 2 < n)
        return (-y[i + 2][k] + 8.0 * y[i + 1][k] - 8.0 * y[i - 1][k] + y[i - 2][k]) / (12.0 * h);
    if (i < 2) {
        if (i == 0)
            return (-25.0 * y[0][k] + 48.0 * y[1][k] - 36.0 * y[2][k] + 16.0 * y[3][k] - 3.0 * y[4][k]) / (12.0 * h);
        return (-3.0 * y[0][k] - 10.0 * y[1][k] + 18.0 * y[2][k] - 6.0 * y[3][k] + y[4][k]) / (12.0 * h);
    }
    if (i == n - 1)
        return (25.0 * y[n - 1][k] - 48.0 * y[n - 2][k] + 36.0 * y[n - 3][k] - 16.0 * y[n - 4][k] + 3.0 * y[n - 5][k]) / (12.0 * h);
    return (3.0 * y[n - 1][k] + 10.0 * y[n - 2][k] - 18.0 * y[n - 3][k] + 6.0 * y[n - 4][k] - y[n - 5][k]) / (12.0 * h);
}

// ||phi(t0)||^2 + |I| ||(i d_t - d_xx) phi||^2_{L2(I x T)}
inline double x01_norm(const Trajectory& traj, double t0, double t1) {
    if (!(t1 > t0)) throw std::invalid_argument("x01_norm: empty interval");
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < traj.size(); ++i)
        if (traj.times[i] >= t0 - 1e-12 && traj.times[i] <= t1 + 1e-12) idx.push_back(i);
    if (idx.size() < 5) throw std::invalid_argument("x01_norm: interval too short for the stencil");
    const double h = traj.times[1] - traj.times[0];
    for (std::size_t i = 1; i < traj.size(); ++i)
        if (std::abs(traj.times[i] - traj.times[i - 1] - h) > 1e-9 * h) throw std::invalid_argument("x01_norm: non-uniform times");
    // spectra of all snapshots (the stencil may reach outside I)
    std::vector<cvec> spec(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) spec[i] = forward(traj.field(i)).coeffs;
    const Grid& g = traj.grid;
    rvec vals(idx.size());
    for (std::size_t q = 0; q < idx.size(); ++q) {
        const std::size_t i = idx[q];
        double acc = 0.0;
        for (std::size_t k = 0; k < g.n; ++k) {
            const double xi = g.xi(k);
            // (i d_t - d_xx) in Fourier: i u^_t + xi^2 u^
            const cplx r = cplx(0.0, 1.0) * time_derivative4(spec, i, k, h) + xi * xi * spec[i][k];
            acc += std::norm(r);
        }
        vals[q] = acc / g.length;
    }
    // trapezoid in time over I
    double integral = 0.0;
    for (std::size_t q = 0; q + 1 < idx.size(); ++q) integral += 0.5 * h * (vals[q] + vals[q + 1]);
    const double len = traj.times[idx.back()] - traj.times[idx.front()];
    return mass(traj.field(idx.front())) + len * integral;
}

struct VariationResult {
    double value = 0.0;                 // sqrt of the maximal sum of squared increments
    std::vector<std::size_t> partition;  // sample indices of the maximising partition
};

// sup over partitions of sum ||w(t_k) - w(t_{k-1})||^2 where w(t) = S(-t) u(t) (or u itself).
// With terminal_zero the state after the last sample is 0, as for functions vanishing at infinity.
inline VariationResult v2_variation(const Trajectory& traj, bool pullback = true, bool terminal_zero = false) {
    const std::size_t n = traj.size();
    if (n < 2) throw std::invalid_argument("v2_variation: need at least two samples");
    std::vector<cvec> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        Spectrum s = forward(traj.field(i));
        if (pullback) s = linear_propagate(s, -traj.times[i]);
        w[i] = std::move(s.coeffs);
    }
    if (terminal_zero) w.push_back(cvec(traj.grid.n, 0.0));
    const std::size_t m = w.size();
    const double inv_l = 1.0 / traj.grid.length;
    auto dist2 = [&](std::size_t a, std::size_t b) {
        double acc = 0.0;
        for (std::size_t k = 0; k < w[a].size(); ++k) acc += std::norm(w[b][k] - w[a][k]);
        return acc * inv_l;
    };
    rvec best(m, 0.0);
    std::vector<long> prev(m, -1);
    for (std::size_t j = 1; j < m; ++j)
        for (std::size_t i = 0; i < j; ++i) {
            const double v = best[i] + dist2(i, j);
            if (v > best[j]) {
                best[j] = v;
                prev[j] = static_cast<long>(i);
            }
        }
    std::size_t end = 0;
    for (std::size_t j = 0; j < m; ++j)
        if (best[j] > best[end]) end = j;
    VariationResult r;
    r.value = std::sqrt(best[end]);
    for (long j = static_cast<long>(end); j >= 0; j = prev[static_cast<std::size_t>(j)]) {
        r.partition.push_back(static_cast<std::size_t>(j));
        if (prev[static_cast<std::size_t>(j)] < 0) break;
    }
    std::reverse(r.partition.begin(), r.partition.end());
    return r;
}

// ---- probes

// random spectrum supported in [xi_lo, xi_hi], unit L2 mass
inline Spectrum random_band_spectrum(const Grid& g, double xi_lo, double xi_hi, Philox& rng) {
    Spectrum s(g);
    bool any = false;
    for (std::size_t i = 0; i < g.n; ++i) {
        const double xi = g.xi(i);
        if (xi >= xi_lo && xi <= xi_hi) {
            s.coeffs[i] = rng.complex_normal();
            any = true;
        }
    }
    if (!any) throw std::invalid_argument("random_band_spectrum: band contains no grid frequency");
    const double m = std::sqrt(mass(s));
    for (auto& c : s.coeffs) c /= m;
    return s;
}

// Simpson weights on [0, T] with an even number of intervals
inline rvec simpson_weights(std::size_t intervals, double T) {
    if (intervals % 2) ++intervals;
    rvec w(intervals + 1, 0.0);
    const double h = T / static_cast<double>(intervals);
    for (std::size_t i = 0; i <= intervals; ++i) w[i] = h / 3.0 * (i == 0 || i == intervals ? 1.0 : (i % 2 ? 4.0 : 2.0));
    return w;
}

struct BilinearOptions {
    Grid grid{2048, 16.0 * pi};
    std::size_t trials = 20;
    std::uint64_t seed = 1;
    double shift = 0.0;  // common modulation e^{icx} applied to both inputs
};

struct BilinearResult {
    double lambda = 0.0;
    double window = 0.0;
    rvec constants;  // lambda^{1/2} ||P_{>lambda}(u conj v)|| / (||u0|| ||v0||)
    double max_constant = 0.0;
};

// ||P_{>lambda}(u conj(v))||^2_{L2([0,T] x torus)} for free waves, via Simpson in time
inline double bilinear_norm2(const Spectrum& u0, const Spectrum& v0, double lambda, double T, double rate) {
    const Grid& g = u0.grid;
    const std::size_t intervals = std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(rate * T)));
    const rvec w = simpson_weights(intervals, T);
    const double h = T / static_cast<double>(w.size() - 1);
    double acc = 0.0;
    for (std::size_t q = 0; q < w.size(); ++q) {
        const double t = h * static_cast<double>(q);
        const Field u = inverse(linear_propagate(u0, t));
        const Field v = inverse(linear_propagate(v0, t));
        Field p(g);
        for (std::size_t j = 0; j < g.n; ++j) p.values[j] = u.values[j] * std::conj(v.values[j]);
        Spectrum ps = forward(p);
        double m = 0.0;
        for (std::size_t i = 0; i < g.n; ++i)
            if (std::abs(g.xi(i)) >= lambda * (1.0 - 1e-12)) m += std::norm(ps.coeffs[i]);
        acc += w[q] * m / g.length;
    }
    return acc;
}

// Inputs supported in [-lambda, -lambda/2] and [lambda/2, lambda] (separation >= lambda), window T = L/(4 lambda),
// i.e. one relative traversal of the torus at the fastest relative group velocity.
inline BilinearResult bilinear_probe(double lambda, const BilinearOptions& opt) {
    const Grid& g = opt.grid;
    if (!(lambda > 0.0)) throw std::invalid_argument("bilinear_probe: lambda must be positive");
    if (!(2.0 * lambda + 2.0 * std::abs(opt.shift) < g.nyquist())) throw std::invalid_argument("bilinear_probe: grid too coarse");
    BilinearResult r;
    r.lambda = lambda;
    r.window = g.length / (4.0 * lambda);
    Philox rng(opt.seed, static_cast<std::uint64_t>(std::llround(lambda * 1000.0)));
    // Simpson resolution: temporal frequencies of |u conj v|^2 stay below 2 lambda^2
    const double rate = 16.0 * 2.0 * lambda * lambda / (2.0 * pi);
    for (std::size_t tr = 0; tr < opt.trials; ++tr) {
        Spectrum u0 = random_band_spectrum(g, -lambda, -0.5 * lambda, rng);
        Spectrum v0 = random_band_spectrum(g, 0.5 * lambda, lambda, rng);
        if (opt.shift != 0.0) {
            u0 = forward(galilean_shift(inverse(u0), opt.shift));
            v0 = forward(galilean_shift(inverse(v0), opt.shift));
        }
        // the projector acts on the difference frequency, which the common shift leaves fixed
        const double n2 = bilinear_norm2(u0, v0, lambda, r.window, rate);
        const double c = std::sqrt(lambda * n2 / (mass(u0) * mass(v0)));
        r.constants.push_back(c);
        r.max_constant = std::max(r.max_constant, c);
    }
    return r;
}

// least squares slope of log y against log x
inline double loglog_slope(const rvec& x, const rvec& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need two or more points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double a = std::log(x[i]), b = std::log(y[i]);
        sx += a;
        sy += b;
        sxx += a * a;
        sxy += a * b;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

enum class QuadCase { A2, B };

struct QuadOptions {
    Grid grid{2048, 16.0 * pi};
    std::size_t trials = 10;
    std::uint64_t seed = 1;
};

struct QuadResult {
    QuadCase which = QuadCase::A2;
    double lambdas[4] = {0, 0, 0, 0};
    double window = 0.0;
    rvec constants;  // |J| / bound
    double max_constant = 0.0;
};

// J = int_0^T int u1 conj(u2) u3 conj(u4) dx dt for free waves with spectra on [lambda_i, 2 lambda_i].
// A2 bound: ||u1||_{L2(I x T)} prod ||u_i0||, B bound: lambda4^{-1} prod ||u_i0||.
inline QuadResult quad_J_probe(QuadCase which, const double (&lams)[4], const QuadOptions& opt) {
    const Grid& g = opt.grid;
    double lmax = 0.0;
    for (double l : lams) {
        if (!(l > 0.0)) throw std::invalid_argument("quad_J_probe: frequencies must be positive");
        lmax = std::max(lmax, l);
    }
    if (!(8.0 * lmax < g.nyquist())) throw std::invalid_argument("quad_J_probe: grid too coarse");
    if (which == QuadCase::B && !(lams[0] <= lams[2] && lams[1] <= lams[3]))
        throw std::invalid_argument("quad_J_probe: case B expects lambda1, lambda2 below lambda3, lambda4");
    QuadResult r;
    r.which = which;
    for (int i = 0; i < 4; ++i) r.lambdas[i] = lams[i];
    r.window = g.length / (8.0 * lmax);
    Philox rng(opt.seed, 7);
    const double rate = 16.0 * 8.0 * lmax * lmax / (2.0 * pi);
    const std::size_t intervals = std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(rate * r.window)));
    const rvec w = simpson_weights(intervals, r.window);
    const double h = r.window / static_cast<double>(w.size() - 1);
    for (std::size_t tr = 0; tr < opt.trials; ++tr) {
        Spectrum s[4];
        for (int i = 0; i < 4; ++i) s[i] = random_band_spectrum(g, lams[i], 2.0 * lams[i], rng);
        cplx J(0.0, 0.0);
        for (std::size_t q = 0; q < w.size(); ++q) {
            const double t = h * static_cast<double>(q);
            Field f[4];
            for (int i = 0; i < 4; ++i) f[i] = inverse(linear_propagate(s[i], t));
            cplx acc(0.0, 0.0);
            for (std::size_t j = 0; j < g.n; ++j)
                acc += f[0].values[j] * std::conj(f[1].values[j]) * f[2].values[j] * std::conj(f[3].values[j]);
            J += w[q] * acc * g.spacing();
        }
        const double bound = which == QuadCase::A2 ? std::sqrt(r.window) : 1.0 / lams[3];
        const double c = std::abs(J) / bound;
        r.constants.push_back(c);
        r.max_constant = std::max(r.max_constant, c);
    }
    return r;
}

}  // namespace nlslab
