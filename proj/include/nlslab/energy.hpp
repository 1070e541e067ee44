#pragma once
// Energy functionals: E0, the quartic correction E1, the error terms R4/R6,
// the quasi-energy time scan, and the weighted (local energy) functionals.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlslab/dyadic.hpp"
#include "nlslab/quadform.hpp"
#include "nlslab/solver.hpp"
#include "nlslab/symbols.hpp"

namespace nlslab {

// |u|^2 u computed on the doubled grid, so the result is alias free inside the grid band
inline Spectrum cubic_spectrum(const Spectrum& u) {
    const Grid& g = u.grid;
    const std::size_t n = g.n, pn = 2 * n;
    cvec w(pn, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const long k = g.wavenumber(i);
        w[static_cast<std::size_t>(k < 0 ? k + static_cast<long>(pn) : k)] = u.coeffs[i];
    }
    dft_backward_inplace(w);
    const double inv_l = 1.0 / g.length;
    for (auto& v : w) {
        v *= inv_l;
        v = std::norm(v) * v;
    }
    dft_forward_inplace(w);
    const double dx = g.length / static_cast<double>(pn);
    Spectrum out(g);
    for (std::size_t i = 0; i < n; ++i) {
        const long k = g.wavenumber(i);
        out.coeffs[i] = dx * w[static_cast<std::size_t>(k < 0 ? k + static_cast<long>(pn) : k)];
    }
    return out;
}

inline double e0(const Spectrum& s, const Symbol& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < s.grid.n; ++i) acc += a(s.grid.xi(i)) * std::norm(s.coeffs[i]);
    return acc / s.grid.length;
}

inline double e0(const Field& f, const Symbol& a) { return e0(forward(f), a); }

inline P4Fn energy_symbol(const Symbol& a, Sign sign) {
    return [a, sign](double x0, double x1, double x2) { return b4_energy(a, sign, x0, x1, x2); };
}

inline P4Fn delta_symbol(const Symbol& a) {
    return [a](double x0, double x1, double x2) { return a(x0) + a(x1) - a(x2) - a(x0 + x1 - x2); };
}

// E1 = int_{P4} b4 u0 u1 conj(u2 u3) with the engine built from energy_symbol
inline double e1(const Spectrum& s, const QuadEngine& eng) { return eng.apply(s, s, s, s).real(); }

inline double e1(const Field& f, const Symbol& a, Sign sign, EngineKind kind, const Band& band) {
    QuadEngine eng(f.grid, energy_symbol(a, sign), band, kind);
    return e1(forward(f), eng);
}

inline double e1(const Field& f, const Symbol& a, Sign sign, EngineKind kind) {
    return e1(f, a, sign, kind, full_band(f.grid));
}

enum class R4Form { inner_product, symmetrized };

// R4 = 2 Re <i a(D) u, |u|^2 u>
inline double r4_inner(const Spectrum& s, const Symbol& a) {
    const Spectrum nl = cubic_spectrum(s);
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < s.grid.n; ++i) acc += a(s.grid.xi(i)) * s.coeffs[i] * std::conj(nl.coeffs[i]);
    acc /= s.grid.length;
    return 2.0 * (cplx(0.0, 1.0) * acc).real();
}

// R4 = (1/2) Re int_{P4} i (a0 + a1 - a2 - a3) u0 u1 conj(u2 u3)
inline double r4_symmetrized(const Spectrum& s, const Symbol& a, const Band& band) {
    const cplx q = quadform_naive(delta_symbol(a), s, s, s, s, band);
    return 0.5 * (cplx(0.0, 1.0) * q).real();
}

inline double r4(const Field& f, const Symbol& a, R4Form form) {
    const Spectrum s = forward(f);
    return form == R4Form::inner_product ? r4_inner(s, a) : r4_symmetrized(s, a, full_band(f.grid));
}

// R6 = 4 Re [ i int_{P4} b4 N0 u1 conj(u2 u3) ], N = |u|^2 u.
// Along the flow d/dt (E0 + E1) = -sigma R6 with this normalisation.
inline double r6(const Spectrum& s, const QuadEngine& eng) {
    const Spectrum nl = cubic_spectrum(s);
    return 4.0 * (cplx(0.0, 1.0) * eng.apply(nl, s, s, s)).real();
}

inline double r6(const Field& f, const Symbol& a, Sign sign, EngineKind kind, const Band& band) {
    QuadEngine eng(f.grid, energy_symbol(a, sign), band, kind);
    return r6(forward(f), eng);
}

// fourth-order centred first derivative on a uniform series; interior points only
inline rvec centred_derivative4(const rvec& y, double h) {
    rvec d(y.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 2; i + 2 < y.size(); ++i)
        d[i] = (-y[i + 2] + 8.0 * y[i + 1] - 8.0 * y[i - 1] + y[i - 2]) / (12.0 * h);
    return d;
}

struct QuasiEnergyReport {
    rvec t, e0, e1, etot, detot_dt, r6, residual;
    rvec r4, de0_dt, residual_r4;
    double relation_sign = 0.0;     // s in d/dt(E0+E1) = s R6, fitted on the data
    double max_residual = 0.0;
    double max_abs_r6 = 0.0;
    double max_residual_r4 = 0.0;
    double max_abs_r4 = 0.0;
    bool too_coarse = false;        // residual not small against R6
};

inline QuasiEnergyReport quasi_energy_scan(const Trajectory& traj, const Symbol& a, Sign sign, EngineKind kind,
                                           const Band& band) {
    const std::size_t n = traj.size();
    if (n < 5) throw std::invalid_argument("quasi_energy_scan: need at least 5 snapshots");
    const double h = traj.times[1] - traj.times[0];
    if (!(h > 0.0)) throw std::invalid_argument("quasi_energy_scan: times must increase");
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs((traj.times[i] - traj.times[i - 1]) - h) > 1e-9 * h)
            throw std::invalid_argument("quasi_energy_scan: snapshots must be uniformly spaced");
    QuadEngine eng(traj.grid, energy_symbol(a, sign), band, kind);
    rvec E0(n), E1(n), R6(n), R4(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Spectrum s = forward(traj.field(i));
        E0[i] = e0(s, a);
        E1[i] = e1(s, eng);
        R6[i] = r6(s, eng);
        R4[i] = r4_inner(s, a);
    }
    rvec Et(n);
    for (std::size_t i = 0; i < n; ++i) Et[i] = E0[i] + E1[i];
    const rvec dEt = centred_derivative4(Et, h), dE0 = centred_derivative4(E0, h);
    QuasiEnergyReport rep;
    // pick the sign of the relation that the data supports
    double best = std::numeric_limits<double>::infinity();
    for (double s : {-1.0, 1.0}) {
        double mx = 0.0;
        for (std::size_t i = 2; i + 2 < n; ++i) mx = std::max(mx, std::abs(dEt[i] - s * R6[i]));
        if (mx < best) {
            best = mx;
            rep.relation_sign = s;
        }
    }
    const double sg = sigma(sign);
    for (std::size_t i = 2; i + 2 < n; ++i) {
        rep.t.push_back(traj.times[i]);
        rep.e0.push_back(E0[i]);
        rep.e1.push_back(E1[i]);
        rep.etot.push_back(Et[i]);
        rep.detot_dt.push_back(dEt[i]);
        rep.r6.push_back(R6[i]);
        rep.residual.push_back(std::abs(dEt[i] - rep.relation_sign * R6[i]));
        rep.r4.push_back(R4[i]);
        rep.de0_dt.push_back(dE0[i]);
        rep.residual_r4.push_back(std::abs(dE0[i] - sg * R4[i]));
        rep.max_residual = std::max(rep.max_residual, rep.residual.back());
        rep.max_abs_r6 = std::max(rep.max_abs_r6, std::abs(R6[i]));
        rep.max_residual_r4 = std::max(rep.max_residual_r4, rep.residual_r4.back());
        rep.max_abs_r4 = std::max(rep.max_abs_r4, std::abs(R4[i]));
    }
    rep.too_coarse = !(rep.max_residual < 0.1 * rep.max_abs_r6);
    return rep;
}

inline void write_quasi_energy_csv(const std::string& path, const QuasiEnergyReport& r) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << "# nlslab-csv v1 energy-scan relation_sign=" << r.relation_sign << "\n";
    os << "t,E0,E1,Etot,dEtot_dt,R6,residual\n";
    os.precision(17);
    for (std::size_t i = 0; i < r.t.size(); ++i)
        os << r.t[i] << "," << r.e0[i] << "," << r.e1[i] << "," << r.etot[i] << "," << r.detot_dt[i] << "," << r.r6[i]
           << "," << r.residual[i] << "\n";
}

// ---- weighted functionals

namespace detail {
inline Field multiply(const Field& f, const rvec& w) {
    Field out = f;
    for (std::size_t j = 0; j < f.grid.n; ++j) out.values[j] *= w[j];
    return out;
}
inline Field apply_symbol(const Field& f, const Symbol& a) {
    return inverse(apply_multiplier(forward(f), [&](double xi) { return a(xi); }));
}
}  // namespace detail

struct ComplexValue {
    double value = 0.0;
    double imag_residual = 0.0;
};

// (1/2) int (phi a~(D) + a~(D) phi) u conj(u)
inline ComplexValue e0_tilde(const Field& f, const Symbol& at, const WeightPair& w) {
    if (!(f.grid == w.grid)) throw std::invalid_argument("e0_tilde: grid mismatch");
    const Field au = detail::apply_symbol(f, at);
    const cplx t1 = inner(detail::multiply(au, w.phi), f);
    const cplx t2 = inner(detail::apply_symbol(detail::multiply(f, w.phi), at), f);
    const cplx v = 0.5 * (t1 + t2);
    return {v.real(), v.imag()};
}

// <(phi' a~ + a~ phi') D u, u> + <(phi' a~ + a~ phi') u, D u>,  phi' = psi^2, D the multiplier xi
inline ComplexValue r2_tilde(const Field& f, const Symbol& at, const WeightPair& w) {
    if (!(f.grid == w.grid)) throw std::invalid_argument("r2_tilde: grid mismatch");
    const Field du = inverse(apply_multiplier(forward(f), [](double xi) { return cplx(xi, 0.0); }));
    auto op = [&](const Field& g) {
        Field a1 = detail::multiply(detail::apply_symbol(g, at), w.psi2);
        Field a2 = detail::apply_symbol(detail::multiply(g, w.psi2), at);
        for (std::size_t j = 0; j < g.grid.n; ++j) a1.values[j] += a2.values[j];
        return a1;
    };
    const cplx v = inner(op(du), f) + inner(op(f), du);
    return {v.real(), v.imag()};
}

// || psi (D a~(D))^{1/2} u ||^2 with the odd square root sgn(xi) sqrt(xi a~(xi))
inline double principal_part(const Field& f, const Symbol& at, const WeightPair& w) {
    const Field m = inverse(apply_multiplier(forward(f), [&](double xi) {
        const double v = xi * at(xi);
        return (xi >= 0.0 ? 1.0 : -1.0) * std::sqrt(std::max(0.0, v));
    }));
    return mass(detail::multiply(m, w.psi));
}

// sup_j sum_lambda lambda^{-1} a(lambda) || chi_j d_x u_lambda ||^2_{L^2 t,x} over unit windows
inline double local_energy_lhs(const Trajectory& traj, const Symbol& a, double lam) {
    LPBank bank(traj.grid, lam);
    WindowFamily fam(traj.grid, 1.0);
    std::vector<const WindowFamily*> ptrs(bank.size(), &fam);
    const auto acc = windowed_derivative_integrals(traj, bank, ptrs);
    double best = 0.0;
    for (std::size_t j = 0; j < fam.size(); ++j) {
        double s = 0.0;
        for (std::size_t b = 0; b < bank.size(); ++b) {
            const double l = bank.block(b).lambda;
            s += a(l) / l * acc[b][j];
        }
        best = std::max(best, s);
    }
    return best;
}

}  // namespace nlslab
