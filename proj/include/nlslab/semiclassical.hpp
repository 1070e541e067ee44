#pragma once
// Semiclassical regime: the Whitham system (defocusing evolution), the AKS
// implicit solution (focusing), the WKB-type ansatz field, its comparison with
// the full solver, and the integer-amplitude sech recurrence experiment.
//
// Whitham system:  rho_t + lambda mu_x = 0,  mu_t + lambda (mu^2/rho +- rho^2/2)_x = 0
// (+ defocusing, - focusing). Our NLS with u = lambda sqrt(rho) e^{-i lambda S}
// gives the same system after t -> 2t and rho -> 2 rho, which is the map used by
// the comparison routine below.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlslab/solver.hpp"
#include "nlslab/spectral.hpp"

namespace nlslab {

struct WhithamState {
    Grid grid;
    rvec rho, mu;
    Sign sign = Sign::defocusing;
    double lambda = 1.0;

    void validate() const {
        grid.validate();
        if (rho.size() != grid.n || mu.size() != grid.n) throw std::invalid_argument("WhithamState: size mismatch");
        for (std::size_t i = 0; i < grid.n; ++i) {
            if (!(rho[i] > 0.0) || !std::isfinite(rho[i])) throw std::invalid_argument("WhithamState: rho must be positive");
            if (!std::isfinite(mu[i])) throw std::invalid_argument("WhithamState: non-finite mu");
        }
        if (!(lambda > 0.0)) throw std::invalid_argument("WhithamState: lambda must be positive");
    }
    double total_rho() const {
        double acc = 0.0;
        for (double r : rho) acc += r;
        return acc * grid.spacing();
    }
    double max_gradient() const {
        double g = 0.0;
        const double dx = grid.spacing();
        for (std::size_t i = 0; i < grid.n; ++i) {
            const std::size_t ip = (i + 1) % grid.n;
            g = std::max(g, std::abs(rho[ip] - rho[i]) / dx);
        }
        return g;
    }
};

struct WhithamRun {
    WhithamState final_state;
    rvec times, total_rho, max_gradient;
    std::size_t steps = 0;
    double max_cfl = 0.0;
    double blowup_time = -1.0;  // first output time where max|rho_x| exceeds blowup_factor times its initial value
};

struct WhithamOptions {
    double cfl = 0.4;
    double blowup_factor = 5.0;
    double rho_floor = 1e-14;  // only used to form velocities
};

namespace detail {
inline double minmod(double a, double b) {
    if (a * b <= 0.0) return 0.0;
    return std::abs(a) < std::abs(b) ? a : b;
}
inline std::array<double, 2> whitham_flux(double r, double m, double lam, double floor) {
    const double v = m / std::max(r, floor);
    return {lam * m, lam * (m * v + 0.5 * r * r)};
}
inline double whitham_speed(double r, double m, double lam, double floor) {
    const double v = m / std::max(r, floor);
    return lam * (std::abs(v) + std::sqrt(std::max(r, 0.0)));
}
// semi-discrete MUSCL-LLF right-hand side on the periodic grid
inline void whitham_rhs(const rvec& r, const rvec& m, double lam, double dx, double floor, rvec& dr, rvec& dm) {
    const std::size_t n = r.size();
    rvec sr(n), sm(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t ip = (i + 1) % n, im = (i + n - 1) % n;
        sr[i] = minmod(r[ip] - r[i], r[i] - r[im]);
        sm[i] = minmod(m[ip] - m[i], m[i] - m[im]);
    }
    rvec fr(n), fm(n);  // flux at i+1/2
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t ip = (i + 1) % n;
        double rl = r[i] + 0.5 * sr[i], ml = m[i] + 0.5 * sm[i];
        double rr = r[ip] - 0.5 * sr[ip], mr = m[ip] - 0.5 * sm[ip];
        if (rl <= 0.0 || rr <= 0.0) {
            rl = r[i];
            ml = m[i];
            rr = r[ip];
            mr = m[ip];
        }
        const auto fl = whitham_flux(rl, ml, lam, floor), fR = whitham_flux(rr, mr, lam, floor);
        const double a = std::max(whitham_speed(rl, ml, lam, floor), whitham_speed(rr, mr, lam, floor));
        fr[i] = 0.5 * (fl[0] + fR[0]) - 0.5 * a * (rr - rl);
        fm[i] = 0.5 * (fl[1] + fR[1]) - 0.5 * a * (mr - ml);
    }
    dr.resize(n);
    dm.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t im = (i + n - 1) % n;
        dr[i] = -(fr[i] - fr[im]) / dx;
        dm[i] = -(fm[i] - fm[im]) / dx;
    }
}
}  // namespace detail

// Heun (SSP-RK2) steps of at most dt, shortened to keep the CFL number <= opt.cfl;
// outputs every dt. A fixed dt above the CFL bound is therefore never taken.
inline WhithamRun whitham_evolve(const WhithamState& s0, double dt, double t_end, WhithamOptions opt = {}) {
    if (s0.sign == Sign::focusing)
        throw std::invalid_argument("whitham_evolve: the focusing Whitham system is elliptic; evolution rejected");
    s0.validate();
    if (!(dt > 0.0) || !(t_end >= 0.0)) throw std::invalid_argument("whitham_evolve: bad time parameters");
    if (!(opt.cfl > 0.0 && opt.cfl <= 0.4 + 1e-15)) throw std::invalid_argument("whitham_evolve: CFL number must lie in (0, 0.4]");
    WhithamRun run;
    WhithamState s = s0;
    const double dx = s.grid.spacing();
    const double g0 = s.max_gradient();
    auto record = [&](double t) {
        run.times.push_back(t);
        run.total_rho.push_back(s.total_rho());
        run.max_gradient.push_back(s.max_gradient());
        if (run.blowup_time < 0.0 && g0 > 0.0 && run.max_gradient.back() > opt.blowup_factor * g0) run.blowup_time = t;
    };
    record(0.0);
    double t = 0.0;
    const auto outs = static_cast<std::size_t>(std::llround(t_end / dt));
    rvec dr, dm, r1, m1, dr1, dm1;
    for (std::size_t o = 1; o <= outs; ++o) {
        const double target = static_cast<double>(o) * dt;
        while (t < target - 1e-14 * std::max(1.0, target)) {
            double smax = 0.0;
            for (std::size_t i = 0; i < s.grid.n; ++i) smax = std::max(smax, detail::whitham_speed(s.rho[i], s.mu[i], s.lambda, opt.rho_floor));
            double h = std::min(target - t, smax > 0.0 ? opt.cfl * dx / smax : target - t);
            const double cfl_now = h * smax / dx;
            if (cfl_now > opt.cfl * (1.0 + 1e-12)) throw SolverAbort("whitham_evolve: CFL violation");
            run.max_cfl = std::max(run.max_cfl, cfl_now);
            detail::whitham_rhs(s.rho, s.mu, s.lambda, dx, opt.rho_floor, dr, dm);
            r1 = s.rho;
            m1 = s.mu;
            for (std::size_t i = 0; i < s.grid.n; ++i) {
                r1[i] += h * dr[i];
                m1[i] += h * dm[i];
            }
            detail::whitham_rhs(r1, m1, s.lambda, dx, opt.rho_floor, dr1, dm1);
            for (std::size_t i = 0; i < s.grid.n; ++i) {
                s.rho[i] = 0.5 * (s.rho[i] + r1[i] + h * dr1[i]);
                s.mu[i] = 0.5 * (s.mu[i] + m1[i] + h * dm1[i]);
            }
            for (std::size_t i = 0; i < s.grid.n; ++i)
                if (!(s.rho[i] > 0.0) || !std::isfinite(s.mu[i])) throw SolverAbort("whitham_evolve: lost positivity");
            t += h;
            ++run.steps;
        }
        t = target;
        record(t);
    }
    run.final_state = s;
    return run;
}

// ---- AKS implicit solution

// verbatim: tanh((rho x - mu lambda t)/rho) and sech^2(rho x - mu t);
// lambda_t: tanh((rho x - mu lambda t)/rho) and sech^2(rho x - mu lambda t);
// consistent: the argument (rho x - mu lambda t)/rho in both equations.
enum class AKSVariant { verbatim, lambda_t, consistent };

inline const char* to_string(AKSVariant v) {
    switch (v) {
        case AKSVariant::verbatim: return "verbatim";
        case AKSVariant::lambda_t: return "lambda_t";
        case AKSVariant::consistent: return "consistent";
    }
    return "?";
}

inline AKSVariant aks_variant_from_string(const std::string& s) {
    if (s == "verbatim") return AKSVariant::verbatim;
    if (s == "lambda_t") return AKSVariant::lambda_t;
    if (s == "consistent") return AKSVariant::consistent;
    throw std::invalid_argument("unknown AKS variant: " + s);
}

struct AKSPoint {
    double x = 0.0, t = 0.0, lambda = 1.0;
    double rho = 1.0, mu = 0.0;
    double residual = 0.0;
    bool converged = false;
    int iterations = 0;
};

inline std::array<double, 2> aks_residual(double rho, double mu, double x, double t, double lam, AKSVariant v) {
    const double k1 = (rho * x - mu * lam * t) / rho;
    double k2 = k1;
    if (v == AKSVariant::verbatim) k2 = rho * x - mu * t;
    if (v == AKSVariant::lambda_t) k2 = rho * x - mu * lam * t;
    const double sech = 1.0 / std::cosh(k2);
    return {mu + 2.0 * lam * t * rho * rho * std::tanh(k1), rho - (1.0 + lam * lam * t * t * rho * rho) * sech * sech};
}

namespace detail {
inline bool aks_newton(double& rho, double& mu, double x, double t, double lam, AKSVariant v, int max_it, int& used,
                       double& res_out) {
    auto norm = [](const std::array<double, 2>& r) { return std::max(std::abs(r[0]), std::abs(r[1])); };
    auto F = aks_residual(rho, mu, x, t, lam, v);
    double res = norm(F);
    for (int it = 0; it < max_it; ++it) {
        if (res < 1e-13) {
            res_out = res;
            return true;
        }
        ++used;
        const double hr = 1e-7 * std::max(1.0, std::abs(rho)), hm = 1e-7 * std::max(1.0, std::abs(mu));
        const auto fr1 = aks_residual(rho + hr, mu, x, t, lam, v), fr0 = aks_residual(rho - hr, mu, x, t, lam, v);
        const auto fm1 = aks_residual(rho, mu + hm, x, t, lam, v), fm0 = aks_residual(rho, mu - hm, x, t, lam, v);
        const double j00 = (fr1[0] - fr0[0]) / (2 * hr), j10 = (fr1[1] - fr0[1]) / (2 * hr);
        const double j01 = (fm1[0] - fm0[0]) / (2 * hm), j11 = (fm1[1] - fm0[1]) / (2 * hm);
        const double det = j00 * j11 - j01 * j10;
        if (!(std::abs(det) > 1e-300)) break;
        const double dr = (F[0] * j11 - F[1] * j01) / det, dm = (j00 * F[1] - j10 * F[0]) / det;
        double step = 1.0;
        bool moved = false;
        for (int ls = 0; ls < 30; ++ls) {
            const double r2 = rho - step * dr, m2 = mu - step * dm;
            if (r2 > 0.0) {
                const auto F2 = aks_residual(r2, m2, x, t, lam, v);
                if (norm(F2) < res || norm(F2) < 1e-13) {
                    rho = r2;
                    mu = m2;
                    F = F2;
                    res = norm(F2);
                    moved = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!moved) break;
    }
    res_out = res;
    return res < 1e-12;
}
}  // namespace detail

// Damped Newton with continuation in t from 0 starting at (sech^2 x, 0).
inline AKSPoint aks_solve(double x, double t, double lam, AKSVariant v = AKSVariant::verbatim, int substeps = 16) {
    if (!(lam > 0.0)) throw std::invalid_argument("aks_solve: lambda must be positive");
    AKSPoint p;
    p.x = x;
    p.t = t;
    p.lambda = lam;
    const double s = 1.0 / std::cosh(x);
    double rho = s * s, mu = 0.0, res = 0.0;
    bool ok = true;
    for (int k = 0; k <= substeps && ok; ++k) {
        const double tk = t * static_cast<double>(k) / static_cast<double>(substeps);
        ok = detail::aks_newton(rho, mu, x, tk, lam, v, 100, p.iterations, res);
        if (substeps == 0 || t == 0.0) break;
    }
    p.rho = rho;
    p.mu = mu;
    p.residual = res;
    p.converged = ok;
    return p;
}

struct AKSWhithamResidual {
    double mass_eq = 0.0, momentum_eq = 0.0;  // max over the grid
    double newton_residual = 0.0;
    std::size_t failed = 0;
    double max() const { return std::max(mass_eq, momentum_eq); }
};

// Residual of the focusing Whitham system for the AKS profile: spectral x-derivatives,
// 5-point centred t-derivative with step h. Requires t >= 2h.
inline AKSWhithamResidual aks_whitham_residual(const Grid& g, double lam, double t, AKSVariant v, double h = 1e-3);

// ---- ansatz field

enum class SemiclassicalSource { aks, whitham };

// lambda sqrt(rho) exp(-i lambda S), S' = mu/rho, S = 0 at the leftmost grid point
inline Field ansatz_field(const Grid& g, double lam, const rvec& rho, const rvec& mu) {
    if (rho.size() != g.n || mu.size() != g.n) throw std::invalid_argument("ansatz_field: size mismatch");
    for (double r : rho)
        if (!(r > 0.0)) throw std::invalid_argument("ansatz_field: rho must be positive");
    Field f(g);
    double S = 0.0;
    const double dx = g.spacing();
    for (std::size_t j = 0; j < g.n; ++j) {
        if (j > 0) S += 0.5 * dx * (mu[j - 1] / rho[j - 1] + mu[j] / rho[j]);
        f.values[j] = lam * std::sqrt(rho[j]) * std::polar(1.0, -lam * S);
    }
    return f;
}

struct AKSField {
    rvec rho, mu;
    std::size_t failed = 0;  // points where Newton did not converge
    double max_residual = 0.0;
};

// AKS profile on the grid, x measured from the grid centre, AKS coordinates (b x, tA)
inline AKSField aks_profile(const Grid& g, double lam, double tA, AKSVariant v, double b = 1.0) {
    AKSField out;
    out.rho.resize(g.n);
    out.mu.resize(g.n);
    for (std::size_t j = 0; j < g.n; ++j) {
        double y = g.x(j) - g.center();
        const auto p = aks_solve(b * y, tA, lam, v);
        out.rho[j] = p.rho;
        out.mu[j] = p.mu;
        out.max_residual = std::max(out.max_residual, p.residual);
        if (!p.converged) ++out.failed;
    }
    return out;
}

inline Field semiclassical_field(const Grid& g, double lam, double t, SemiclassicalSource src,
                                 AKSVariant v = AKSVariant::consistent) {
    g.validate();
    if (src == SemiclassicalSource::aks) {
        const auto p = aks_profile(g, lam, t, v);
        if (p.failed) throw std::domain_error("semiclassical_field: AKS solve failed at " + std::to_string(p.failed) + " points");
        return ansatz_field(g, lam, p.rho, p.mu);
    }
    WhithamState s;
    s.grid = g;
    s.lambda = lam;
    s.sign = Sign::defocusing;
    s.rho.resize(g.n);
    s.mu.assign(g.n, 0.0);
    for (std::size_t j = 0; j < g.n; ++j) {
        const double c = 1.0 / std::cosh(g.x(j) - g.center());
        s.rho[j] = std::max(c * c, 1e-300);
    }
    if (t == 0.0) return ansatz_field(g, lam, s.rho, s.mu);
    const double dt = std::min(t, 1e-3);
    const auto run = whitham_evolve(s, t / std::ceil(t / dt), t);
    return ansatz_field(g, lam, run.final_state.rho, run.final_state.mu);
}

inline AKSWhithamResidual aks_whitham_residual(const Grid& g, double lam, double t, AKSVariant v, double h) {
    if (!(t >= 2.0 * h) || !(h > 0.0)) throw std::invalid_argument("aks_whitham_residual: need t >= 2h > 0");
    AKSWhithamResidual out;
    std::array<AKSField, 4> side;
    const std::array<double, 4> off{-2.0, -1.0, 1.0, 2.0};
    for (int k = 0; k < 4; ++k) side[k] = aks_profile(g, lam, t + off[k] * h, v);
    const AKSField mid = aks_profile(g, lam, t, v);
    out.failed = mid.failed;
    out.newton_residual = mid.max_residual;
    for (const auto& s : side) {
        out.failed += s.failed;
        out.newton_residual = std::max(out.newton_residual, s.max_residual);
    }
    auto dx = [&](const rvec& q) {
        Field f(g);
        for (std::size_t j = 0; j < g.n; ++j) f.values[j] = q[j];
        const Field d = inverse(derivative(forward(f)));
        rvec r(g.n);
        for (std::size_t j = 0; j < g.n; ++j) r[j] = d.values[j].real();
        return r;
    };
    rvec flux(g.n);
    for (std::size_t j = 0; j < g.n; ++j) flux[j] = mid.mu[j] * mid.mu[j] / mid.rho[j] - 0.5 * mid.rho[j] * mid.rho[j];
    const rvec mux = dx(mid.mu), fx = dx(flux);
    for (std::size_t j = 0; j < g.n; ++j) {
        auto dt = [&](const rvec AKSField::*m) {
            return ((side[0].*m)[j] - 8.0 * (side[1].*m)[j] + 8.0 * (side[2].*m)[j] - (side[3].*m)[j]) / (12.0 * h);
        };
        out.mass_eq = std::max(out.mass_eq, std::abs(dt(&AKSField::rho) + lam * mux[j]));
        out.momentum_eq = std::max(out.momentum_eq, std::abs(dt(&AKSField::mu) + lam * fx[j]));
    }
    return out;
}

// ---- comparison of the ansatz with the full focusing solver

struct SemiclassicalCompareOptions {
    Grid grid{2048, 40.0};
    double kappa = 4.0;  // data kappa sech(b x)
    double b = 1.0;
    double dt = 2e-5;
    double t_end = 0.2;
    std::size_t samples = 20;
    AKSVariant variant = AKSVariant::consistent;
};

struct SemiclassicalCompareRow {
    double t = 0.0;
    double distance = 0.0;      // modulo a global phase
    double rel_distance = 0.0;
    bool past_caustic = false;
    std::size_t aks_failed = 0;
};

struct SemiclassicalCompareReport {
    double lambda = 0.0;        // Whitham parameter kappa / sqrt(2)
    double caustic_time = 0.0;  // in solver time
    std::vector<SemiclassicalCompareRow> rows;
    std::string status = "ok";
};

// Data kappa sech(b x): lambda = kappa/sqrt(2), and u(x,t) ~ sqrt(2) lambda sqrt(rhoA(b x, 2 b t)) e^{-i lambda S}
// with S' = muA/rhoA at (b x, 2 b t). The AKS caustic lambda tA = 1/2 sits at t = 1/(4 b lambda).
inline SemiclassicalCompareReport semiclassical_compare(const SemiclassicalCompareOptions& o) {
    SemiclassicalCompareReport rep;
    const Grid& g = o.grid;
    rep.lambda = o.kappa / std::sqrt(2.0);
    rep.caustic_time = 1.0 / (4.0 * o.b * rep.lambda);
    Field u0(g);
    for (std::size_t j = 0; j < g.n; ++j) u0.values[j] = o.kappa / std::cosh(o.b * (g.x(j) - g.center()));
    SolverConfig cfg;
    cfg.sign = Sign::focusing;
    cfg.dt = o.dt;
    cfg.t_end = o.t_end;
    const auto steps = static_cast<std::size_t>(std::llround(o.t_end / o.dt));
    cfg.output_stride = std::max<std::size_t>(1, steps / std::max<std::size_t>(1, o.samples));
    cfg.tail_guard_tol = 1e-6;
    Trajectory traj;
    try {
        traj = evolve(u0, cfg);
    } catch (const SolverAbort& e) {
        rep.status = std::string("solver abort: ") + e.what();
        return rep;
    }
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double t = traj.times[i];
        const auto p = aks_profile(g, rep.lambda, 2.0 * o.b * t, o.variant, o.b);
        SemiclassicalCompareRow row;
        row.t = t;
        row.past_caustic = t >= rep.caustic_time;
        row.aks_failed = p.failed;
        if (p.failed == 0) {
            rvec r2(g.n), m2(g.n);
            for (std::size_t j = 0; j < g.n; ++j) {
                r2[j] = 2.0 * p.rho[j];
                m2[j] = 2.0 * p.mu[j] * o.b;  // S' = b muA/rhoA in physical x
            }
            const Field v = ansatz_field(g, rep.lambda, r2, m2);
            const Field u = traj.field(i);
            row.distance = phase_free_distance(u, v);
            row.rel_distance = row.distance / std::sqrt(mass(u));
        } else {
            row.distance = row.rel_distance = std::numeric_limits<double>::quiet_NaN();
        }
        rep.rows.push_back(row);
    }
    return rep;
}

// ---- integer-amplitude sech data

struct RecurrenceOptions {
    Grid grid{1024, 30.0};
    double b = 0.70710678118654752440;  // data lambda_int sqrt(2) b sech(b x); b = 2^{-1/2} gives lambda_int sech(x/sqrt 2)
    double dt = 5e-5;
    double periods = 3.0;
    std::size_t output_stride = 20;
    double threshold = 0.99;
};

struct RecurrenceReport {
    int lambda_int = 1;
    double predicted_period = 0.0;  // pi/(4 b^2) in the solver's convention
    double predicted_period_unit_width = pi / 4.0;  // the same for data lambda_int sqrt(2) sech(x)
    double reference_period = 2.0;
    double measured_period = std::numeric_limits<double>::quiet_NaN();
    double convention_factor = 0.0;  // predicted / reference value
    double caustic_time = 0.0;  // semiclassical breaking time 1/(4 lambda_int b^2)
    rvec times, fidelity, width, distance;  // distance is taken modulo a global phase
    rvec recurrence_times, recurrence_fidelity;
    double min_fidelity = 1.0;
    std::string status = "ok";
};

inline double rms_width(const Field& u) {
    const Grid& g = u.grid;
    double m = 0.0, m2 = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) {
        double y = g.x(j) - g.center();
        const double w = std::norm(u.values[j]);
        m += w;
        m2 += w * y * y;
    }
    return m > 0.0 ? std::sqrt(m2 / m) : 0.0;
}

inline RecurrenceReport satsuma_yajima_run(int lambda_int, const RecurrenceOptions& o = {}) {
    if (lambda_int < 1 || lambda_int > 3) throw std::invalid_argument("satsuma_yajima_run: integer amplitude must be 1, 2 or 3");
    RecurrenceReport rep;
    rep.lambda_int = lambda_int;
    rep.predicted_period = pi / (4.0 * o.b * o.b);
    rep.convention_factor = rep.predicted_period / rep.reference_period;
    rep.caustic_time = 1.0 / (4.0 * lambda_int * o.b * o.b);
    const Grid& g = o.grid;
    Field u0(g);
    const double amp = lambda_int * std::sqrt(2.0) * o.b;
    for (std::size_t j = 0; j < g.n; ++j) u0.values[j] = amp / std::cosh(o.b * (g.x(j) - g.center()));
    SolverConfig cfg;
    cfg.sign = Sign::focusing;
    cfg.dt = o.dt;
    const double t_end = o.periods * rep.predicted_period;
    const auto steps = static_cast<std::size_t>(std::ceil(t_end / o.dt / static_cast<double>(o.output_stride))) * o.output_stride;
    cfg.t_end = static_cast<double>(steps) * o.dt;
    cfg.output_stride = o.output_stride;
    Trajectory traj;
    try {
        traj = evolve(u0, cfg);
    } catch (const SolverAbort& e) {
        rep.status = std::string("solver abort: ") + e.what();
        return rep;
    }
    const double m0 = mass(u0);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const Field u = traj.field(i);
        rep.times.push_back(traj.times[i]);
        rep.fidelity.push_back(std::abs(inner(u, u0)) / m0);
        rep.width.push_back(rms_width(u));
        rep.distance.push_back(phase_free_distance(u, u0));
        rep.min_fidelity = std::min(rep.min_fidelity, rep.fidelity.back());
    }
    // excursions above the threshold after the first drop below it
    bool dropped = false;
    std::size_t i = 0;
    const auto& F = rep.fidelity;
    while (i < F.size()) {
        if (F[i] < o.threshold) {
            dropped = true;
            ++i;
            continue;
        }
        if (!dropped) {
            ++i;
            continue;
        }
        std::size_t best = i;
        while (i < F.size() && F[i] >= o.threshold) {
            if (F[i] > F[best]) best = i;
            ++i;
        }
        double tpk = rep.times[best];
        if (best > 0 && best + 1 < F.size()) {
            const double a = F[best - 1], c = F[best], d = F[best + 1];
            const double den = a - 2.0 * c + d;
            if (den < 0.0) tpk += 0.5 * (a - d) / den * (rep.times[best + 1] - rep.times[best]);
        }
        rep.recurrence_times.push_back(tpk);
        rep.recurrence_fidelity.push_back(F[best]);
        dropped = false;
    }
    if (!rep.recurrence_times.empty()) {
        // slope through the origin of recurrence time against its index
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < rep.recurrence_times.size(); ++k) {
            const double n = static_cast<double>(k + 1);
            num += n * rep.recurrence_times[k];
            den += n * n;
        }
        rep.measured_period = num / den;
    }
    return rep;
}

}  // namespace nlslab
