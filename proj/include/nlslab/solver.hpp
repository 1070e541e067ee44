#pragma once
// Split-step Fourier integrator for i u_t - u_xx -/+ u|u|^2 = 0 on the torus.
// Strang splitting: half linear step, nonlinear phase rotation, half linear step.

#include <cmath>
#include <stdexcept>
#include <string>

#include "nlslab/spectral.hpp"

namespace nlslab {

enum class Dealias { none, two_thirds };

inline Dealias dealias_from_string(const std::string& s) {
    if (s == "none") return Dealias::none;
    if (s == "two_thirds" || s == "2/3") return Dealias::two_thirds;
    throw std::invalid_argument("unknown dealias rule: " + s);
}

struct SolverConfig {
    Sign sign = Sign::focusing;
    double dt = 1e-3;
    double t_end = 1.0;
    std::size_t output_stride = 1;
    Dealias dealias = Dealias::two_thirds;
    double tail_guard_tol = 1e-8;
    bool nonlinear = true;  // false gives the free flow through the same code path
    double phase_guard = 0.5;
};

// numeric failure raised by the integrator guards
class SolverAbort : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline bool dealias_keep(const Grid& g, std::size_t idx, Dealias rule) {
    if (rule == Dealias::none) return true;
    return 3 * static_cast<std::size_t>(std::labs(g.wavenumber(idx))) <= g.n;
}

// largest |xi| surviving the dealiasing rule
inline double retained_xi_max(const Grid& g, Dealias rule) {
    if (rule == Dealias::none) return g.nyquist();
    return g.freq_step() * static_cast<double>(g.n / 3);
}

inline void validate_config(const SolverConfig& cfg, const Grid& g) {
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw std::invalid_argument("solver: dt must be positive");
    if (!(cfg.t_end >= 0.0) || !std::isfinite(cfg.t_end)) throw std::invalid_argument("solver: t_end must be non-negative");
    if (cfg.output_stride == 0) throw std::invalid_argument("solver: output_stride must be >= 1");
    if (!(cfg.tail_guard_tol > 0.0)) throw std::invalid_argument("solver: tail guard tolerance must be positive");
    const double xm = retained_xi_max(g, cfg.dealias);
    if (cfg.dt * xm * xm > cfg.phase_guard * (1.0 + 1e-12))
        throw std::invalid_argument("solver: dt violates the phase guard dt*xi_max^2 <= " + std::to_string(cfg.phase_guard));
}

class SplitStep {
public:
    SplitStep(const Grid& g, const SolverConfig& cfg) : grid_(g), cfg_(cfg) {
        g.validate();
        half_.resize(g.n);
        keep_.resize(g.n);
        set_dt(cfg.dt);
        for (std::size_t i = 0; i < g.n; ++i) keep_[i] = dealias_keep(g, i, cfg.dealias) ? 1.0 : 0.0;
        work_.resize(g.n);
    }

    // dt may be negative here (time reversal); the phase guard applies to |dt|
    void set_dt(double dt) {
        dt_ = dt;
        for (std::size_t i = 0; i < grid_.n; ++i) {
            const double xi = grid_.xi(i);
            half_[i] = std::polar(1.0, 0.5 * xi * xi * dt);
        }
    }

    // one Strang step in place on physical samples
    void step(cvec& u) {
        const std::size_t n = grid_.n;
        dft_forward(u.data(), work_.data(), n);
        for (std::size_t i = 0; i < n; ++i) work_[i] *= half_[i] * keep_[i];
        dft_backward(work_.data(), u.data(), n);
        const double inv_n = 1.0 / static_cast<double>(n);
        const double sg = sigma(cfg_.sign);
        for (auto& v : u) {
            v *= inv_n;
            if (cfg_.nonlinear) v *= std::polar(1.0, -sg * std::norm(v) * dt_);
        }
        dft_forward(u.data(), work_.data(), n);
        for (std::size_t i = 0; i < n; ++i) work_[i] *= half_[i];
        dft_backward(work_.data(), u.data(), n);
        for (auto& v : u) v *= inv_n;
    }

private:
    Grid grid_;
    SolverConfig cfg_;
    double dt_ = 0.0;
    cvec half_;
    rvec keep_;
    cvec work_;
};

inline Field strang_step(const Field& u, const SolverConfig& cfg) {
    if (!std::isfinite(cfg.dt) || cfg.dt == 0.0) throw std::invalid_argument("strang_step: dt must be nonzero");
    SolverConfig c = cfg;
    c.dt = std::abs(cfg.dt);
    validate_config(c, u.grid);
    require_finite(u.values, "strang_step");
    SplitStep ss(u.grid, c);
    ss.set_dt(cfg.dt);
    Field out = u;
    ss.step(out.values);
    return out;
}

inline void check_tail_guard(const Field& u, double tol, double t) {
    const double frac = top_octave_fraction(forward(u));
    if (!(frac < tol))
        throw SolverAbort("tail guard: top-octave mass fraction " + std::to_string(frac) + " at t=" + std::to_string(t));
}

// Evolves to t_end, storing the initial state and every output_stride-th step.
inline Trajectory evolve(const Field& u0, const SolverConfig& cfg) {
    validate_config(cfg, u0.grid);
    require_finite(u0.values, "evolve");
    check_tail_guard(u0, cfg.tail_guard_tol, 0.0);
    const auto steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
    if (std::abs(static_cast<double>(steps) * cfg.dt - cfg.t_end) > 1e-9 * std::max(1.0, cfg.t_end))
        throw std::invalid_argument("evolve: t_end must be an integer multiple of dt");
    Trajectory traj;
    traj.grid = u0.grid;
    traj.push(0.0, u0.values);
    SplitStep ss(u0.grid, cfg);
    cvec u = u0.values;
    for (std::size_t n = 1; n <= steps; ++n) {
        ss.step(u);
        if (n % cfg.output_stride == 0 || n == steps) {
            const double t = static_cast<double>(n) * cfg.dt;
            for (const auto& z : u)
                if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                    throw SolverAbort("evolve: non-finite sample at t=" + std::to_string(t));
            Field f(u0.grid, u);
            check_tail_guard(f, cfg.tail_guard_tol, t);
            if (traj.times.back() != t) traj.push(t, u);
        }
    }
    return traj;
}

// A exp(i w t) sech(b (x - x0)), A = sqrt(2) b, w = -b^2
inline Field soliton_field(const Grid& g, double b, double t, double x0) {
    g.validate();
    if (!(b > 0.0)) throw std::invalid_argument("soliton_field: b must be positive");
    if (!(b * g.spacing() < 0.5)) throw std::invalid_argument("soliton_field: b*dx must be below 0.5");
    Field f(g);
    const double amp = std::sqrt(2.0) * b;
    const cplx ph = std::polar(1.0, -b * b * t);
    const double len = g.length;
    for (std::size_t j = 0; j < g.n; ++j) {
        double y = g.x(j) - x0;
        y -= len * std::round(y / len);
        f.values[j] = amp * ph / std::cosh(b * y);
    }
    return f;
}

inline Field soliton_field(const Grid& g, double b, double t) { return soliton_field(g, b, t, g.center()); }

// e^{icx} f(x); c must be a multiple of the frequency step so the result is periodic
inline Field galilean_shift(const Field& f, double c) {
    const double m = c / f.grid.freq_step();
    if (std::abs(m - std::round(m)) > 1e-9) throw std::invalid_argument("galilean_shift: c must be a multiple of 2pi/L");
    Field out = f;
    const long km = std::lround(m);
    for (std::size_t j = 0; j < f.grid.n; ++j) {
        const double ph = 2.0 * pi * static_cast<double>(km) * static_cast<double>(j) / static_cast<double>(f.grid.n);
        out.values[j] *= std::polar(1.0, ph);
    }
    return out;
}

// u(x) -> u(x + a), exact for band-limited data
inline Field translate(const Field& f, double a) {
    Spectrum s = forward(f);
    return inverse(apply_multiplier(s, [&](double xi) { return std::polar(1.0, xi * a); }));
}

// u -> 2^m u(2^m x), returned on the grid of length L / 2^m with the same N.
// The samples carry over exactly, so no resolution is ever lost in this form.
inline Field dyadic_rescale(const Field& f, int m) {
    if (std::abs(m) > 30) throw std::invalid_argument("dyadic_rescale: exponent out of range");
    const double mu = std::ldexp(1.0, m);
    Grid g(f.grid.n, f.grid.length / mu);
    Field out(g);
    for (std::size_t j = 0; j < g.n; ++j) out.values[j] = mu * f.values[j];
    return out;
}

}  // namespace nlslab
