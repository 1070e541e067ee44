#pragma once
// Symbols of class S_Lambda, their odd extensions, the quartic correction
// symbols built from divided differences, and the (psi, phi) weight pair.

#include <algorithm>
#include <cmath>
#include <functional>
#include <fstream>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlslab/spectral.hpp"

namespace nlslab {

using Fn1 = std::function<double(double)>;

// A real symbol a(xi) with optional analytic first and second derivatives.
class Symbol {
public:
    Symbol() = default;
    Symbol(double lam, Fn1 f, Fn1 d1 = nullptr, Fn1 d2 = nullptr, std::string name = "symbol")
        : lambda_(lam), f_(std::move(f)), d1_(std::move(d1)), d2_(std::move(d2)), name_(std::move(name)) {
        if (!(lam > 0.0)) throw std::invalid_argument("Symbol: Lambda must be positive");
        if (!f_) throw std::invalid_argument("Symbol: empty function");
    }

    double operator()(double xi) const { return f_(xi); }
    double lambda() const { return lambda_; }
    const std::string& name() const { return name_; }
    bool has_analytic_derivatives() const { return static_cast<bool>(d1_) && static_cast<bool>(d2_); }

    double d1(double xi) const {
        if (d1_) return d1_(xi);
        const double h = 1e-5 * std::max(1.0, std::abs(xi));
        return (f_(xi + h) - f_(xi - h)) / (2.0 * h);
    }
    double d2(double xi) const {
        if (d2_) return d2_(xi);
        const double h = 1e-4 * std::max(1.0, std::abs(xi));
        return (f_(xi + h) - 2.0 * f_(xi) + f_(xi - h)) / (h * h);
    }

private:
    double lambda_ = 1.0;
    Fn1 f_, d1_, d2_;
    std::string name_;
};

// a(xi) = mu^{-1/2} (1 + xi^2/mu^2)^{-1/4-eps}; in S_Lambda for Lambda <= mu when mu >= 1.
inline Symbol power_symbol(double mu, double eps, double lam = -1.0) {
    if (!(mu > 0.0)) throw std::invalid_argument("power_symbol: mu must be positive");
    if (!(eps > 0.0 && eps <= 0.25)) throw std::invalid_argument("power_symbol: eps must lie in (0, 1/4]");
    if (lam <= 0.0) lam = mu;
    const double c = std::pow(mu, -0.5), p = -0.25 - eps, m2 = mu * mu;
    auto f = [=](double xi) { return c * std::pow(1.0 + xi * xi / m2, p); };
    auto d1 = [=](double xi) {
        const double w = 1.0 + xi * xi / m2;
        return c * p * std::pow(w, p - 1.0) * 2.0 * xi / m2;
    };
    auto d2 = [=](double xi) {
        const double w = 1.0 + xi * xi / m2;
        return c * p * (2.0 / m2) * (std::pow(w, p - 1.0) + (p - 1.0) * std::pow(w, p - 2.0) * 2.0 * xi * xi / m2);
    };
    return Symbol(lam, f, d1, d2, "power(mu=" + std::to_string(mu) + ",eps=" + std::to_string(eps) + ")");
}

// (Lambda^2 + xi^2)^p
inline Symbol japanese_symbol(double lam, double p) {
    auto f = [=](double xi) { return std::pow(lam * lam + xi * xi, p); };
    auto d1 = [=](double xi) { return p * std::pow(lam * lam + xi * xi, p - 1.0) * 2.0 * xi; };
    auto d2 = [=](double xi) {
        const double w = lam * lam + xi * xi;
        return p * (2.0 * std::pow(w, p - 1.0) + (p - 1.0) * std::pow(w, p - 2.0) * 4.0 * xi * xi);
    };
    return Symbol(lam, f, d1, d2, "japanese");
}

inline Symbol constant_symbol(double lam, double c) {
    return Symbol(
        lam, [=](double) { return c; }, [](double) { return 0.0; }, [](double) { return 0.0; }, "constant");
}

// a(xi) = xi^2: b4 on the resonant set is identically -1 for this one
inline Symbol quadratic_symbol(double lam) {
    return Symbol(
        lam, [](double xi) { return xi * xi; }, [](double xi) { return 2.0 * xi; }, [](double) { return 2.0; },
        "quadratic");
}

struct SymbolReport {
    double lower_ratio_min = 0.0;      // min a(xi) (Lambda^2+xi^2)^{1/2}, must be >= 1
    double monotone_violation = 0.0;   // largest decrease of a(xi) (Lambda^2+xi^2)^{1/2} along xi >= 0
    double regularity_1 = 0.0;         // max |a'| (Lambda^2+xi^2)^{1/2} / a
    double regularity_2 = 0.0;         // max |a''| (Lambda^2+xi^2) / a
    bool pass = false;
};

// samples on xi in [0, xi_max], both signs for the bound, log-spaced plus dyadic points
inline SymbolReport validate_symbol(const Symbol& a, double xi_max = -1.0, double tol = 1e-12) {
    const double lam = a.lambda();
    if (xi_max <= 0.0) xi_max = 1024.0 * lam;
    std::vector<double> xs{0.0};
    const int m = 4000;
    for (int i = 0; i <= m; ++i) xs.push_back(lam * 1e-3 * std::pow(xi_max / (lam * 1e-3), static_cast<double>(i) / m));
    for (double d = lam; d <= xi_max; d *= 2.0) xs.push_back(d);
    std::sort(xs.begin(), xs.end());
    SymbolReport r;
    r.lower_ratio_min = std::numeric_limits<double>::infinity();
    double prev = -std::numeric_limits<double>::infinity();
    for (double x : xs) {
        for (double sx : {x, -x}) {
            const double w = std::sqrt(lam * lam + sx * sx);
            const double v = a(sx);
            r.lower_ratio_min = std::min(r.lower_ratio_min, v * w);
            if (v > 0.0) {
                r.regularity_1 = std::max(r.regularity_1, std::abs(a.d1(sx)) * w / v);
                r.regularity_2 = std::max(r.regularity_2, std::abs(a.d2(sx)) * w * w / v);
            }
        }
        const double g = a(x) * std::sqrt(lam * lam + x * x);
        if (g < prev) r.monotone_violation = std::max(r.monotone_violation, (prev - g) / std::max(1.0, std::abs(prev)));
        prev = std::max(prev, g);
    }
    r.pass = r.lower_ratio_min >= 1.0 - tol && r.monotone_violation <= tol;
    return r;
}

// a~(xi) = a(xi) for xi > Lambda, -a(-xi)... odd; xi a(xi)/Lambda for |xi| < Lambda/2,
// quintic blend on Lambda/2 <= |xi| <= Lambda (C^2).
inline Symbol odd_extension(const Symbol& a) {
    const double lam = a.lambda();
    auto blend = [=](double xi, int order) -> double {
        // returns value (order 0), first or second derivative on xi >= 0
        const double inner0 = xi * a(xi) / lam;
        const double inner1 = (a(xi) + xi * a.d1(xi)) / lam;
        const double inner2 = (2.0 * a.d1(xi) + xi * a.d2(xi)) / lam;
        if (xi <= 0.5 * lam) return order == 0 ? inner0 : (order == 1 ? inner1 : inner2);
        if (xi >= lam) return order == 0 ? a(xi) : (order == 1 ? a.d1(xi) : a.d2(xi));
        const double s = (xi - 0.5 * lam) / (0.5 * lam), ds = 2.0 / lam;
        const double w = s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
        const double w1 = 30.0 * s * s * (1.0 - s) * (1.0 - s) * ds;
        const double w2 = 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s) * ds * ds;
        const double d0 = a(xi) - inner0, d1 = a.d1(xi) - inner1, d2 = a.d2(xi) - inner2;
        if (order == 0) return inner0 + w * d0;
        if (order == 1) return inner1 + w1 * d0 + w * d1;
        return inner2 + w2 * d0 + 2.0 * w1 * d1 + w * d2;
    };
    auto f = [=](double xi) { return xi >= 0.0 ? blend(xi, 0) : -blend(-xi, 0); };
    auto f1 = [=](double xi) { return xi >= 0.0 ? blend(xi, 1) : blend(-xi, 1); };
    auto f2 = [=](double xi) { return xi >= 0.0 ? blend(xi, 2) : -blend(-xi, 2); };
    // the analytic-symmetric part assumes a is even
    return Symbol(lam, f, f1, f2, "odd(" + a.name() + ")");
}

// (d(x) - d(y)) / (x - y), with the derivative as the limit at coincidence
inline double divided_difference(const Symbol& d, double x, double y) {
    const double gap = x - y;
    if (std::abs(gap) < 1e-6 * std::max(1.0, std::abs(x))) return d.d1(0.5 * (x + y));
    return (d(x) - d(y)) / gap;
}

// d/ds of q(x+s, y+s) at s = 0
inline double diagonal_dd_derivative(const Symbol& d, double x, double y) {
    const double gap = x - y;
    if (std::abs(gap) < 1e-4 * std::max(1.0, std::abs(x))) return 0.5 * d.d2(0.5 * (x + y));
    return (d.d1(x) - d.d1(y)) / gap;
}

// [q(x+s, y+s) - q(x, y)] / s, removable at s = 0
inline double shifted_dd_quotient(const Symbol& d, double x, double y, double s) {
    if (std::abs(s) < 1e-4 * std::max(1.0, std::abs(x)))
        return diagonal_dd_derivative(d, x + 0.5 * s, y + 0.5 * s);
    return (divided_difference(d, x + s, y + s) - divided_difference(d, x, y)) / s;
}

// b4 = -(a0 + a1 - a2 - a3) / (xi0^2 + xi1^2 - xi2^2 - xi3^2) on xi0 + xi1 = xi2 + xi3.
// There the denominator factors as 2 (xi0 - xi2)(xi0 - xi3); both zero sets are removable.
inline double b4_diagonal(const Symbol& a, double xi0, double xi1, double xi2) {
    const double xi3 = xi0 + xi1 - xi2;
    const double g2 = xi0 - xi2, g3 = xi0 - xi3;
    const double tol = 1e-4 * std::max(1.0, std::abs(xi0));
    const bool s2 = std::abs(g2) < tol, s3 = std::abs(g3) < tol;
    if (!s2 && !s3) return -(a(xi0) + a(xi1) - a(xi2) - a(xi3)) / (2.0 * g2 * g3);
    if (s2 && !s3) return -(divided_difference(a, xi0, xi2) - divided_difference(a, xi3, xi1)) / (2.0 * g3);
    if (s3 && !s2) return -(divided_difference(a, xi0, xi3) - divided_difference(a, xi2, xi1)) / (2.0 * g2);
    return -0.5 * a.d2(0.25 * (xi0 + xi1 + xi2 + xi3));
}

// the energy-correction symbol: the one that cancels the linear part of dE0/dt
inline double b4_energy(const Symbol& a, Sign sign, double xi0, double xi1, double xi2) {
    return 0.5 * sigma(sign) * b4_diagonal(a, xi0, xi1, xi2);
}

enum class OffDiagonalCase { a, b, c };

struct B4C4 {
    double b4 = 0.0;
    double c4 = 0.0;
    OffDiagonalCase which = OffDiagonalCase::a;
};

// classify |xi0| ~ lambda, |xi2| ~ alpha, |xi1|,|xi3| ~ mu with lambda <= alpha <= mu;
// "much smaller" means a factor of at least `sep`
inline OffDiagonalCase classify_offdiagonal(double xi0, double xi1, double xi2, double xi3, double sep = 4.0) {
    const double l = std::abs(xi0), al = std::abs(xi2), mu = std::min(std::abs(xi1), std::abs(xi3));
    if (sep * l <= al) return OffDiagonalCase::a;
    if (sep * al <= mu) return OffDiagonalCase::b;
    return OffDiagonalCase::c;
}

// d0 + d1 - d2 - d3 = b4 (xi0^2+xi1^2-xi2^2-xi3^2) + c4 (xi0+xi1-xi2-xi3), away from P4.
inline B4C4 b4c4_offdiagonal(const Symbol& d, OffDiagonalCase which, double xi0, double xi1, double xi2, double xi3) {
    B4C4 r;
    r.which = which;
    switch (which) {
        case OffDiagonalCase::a: {
            const double den = 2.0 * (xi0 - xi2) * (xi0 - xi3);
            if (den == 0.0) throw std::domain_error("b4c4 case (a): point on the excluded set");
            r.b4 = (d(xi0) + d(xi1) - d(xi2) - d(xi3)) / den;
            r.c4 = r.b4 * (xi0 - xi1 - xi2 - xi3);
            break;
        }
        case OffDiagonalCase::b: {
            if (xi0 == xi3 || xi1 == xi3) throw std::domain_error("b4c4 case (b): point on the excluded set");
            const double t1 = divided_difference(d, xi0, xi2) / (2.0 * (xi0 - xi3));
            const double t2 = divided_difference(d, xi1, xi3) / (2.0 * (xi3 - xi0));
            r.b4 = t1 + t2;
            r.c4 = t1 * (xi0 - xi1 - xi2 - xi3) + t2 * (xi3 - xi0 - xi1 - xi2);
            break;
        }
        case OffDiagonalCase::c: {
            const double s = xi0 - xi3;
            r.b4 = 0.5 * shifted_dd_quotient(d, xi3, xi1, s);
            r.c4 = r.b4 * (xi3 - xi0 - xi1 - xi2) + divided_difference(d, xi0 + xi1 - xi3, xi2);
            break;
        }
    }
    return r;
}

inline void export_symbol_csv(const std::string& path, const Symbol& a, double xi_min, double xi_max, std::size_t n) {
    if (n < 2 || !(xi_max > xi_min)) throw std::invalid_argument("export_symbol_csv: bad sampling range");
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << "# nlslab-csv v1 symbol " << a.name() << "\n";
    os << "xi,a,da,d2a\n";
    os.precision(17);
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = xi_min + (xi_max - xi_min) * static_cast<double>(i) / static_cast<double>(n - 1);
        os << xi << "," << a(xi) << "," << a.d1(xi) << "," << a.d2(xi) << "\n";
    }
}

// psi: periodised Fejer kernel (triangle spectrum on |xi| <= 1/scale), centred at x0, psi(x0) = 1.
// phi: odd antiderivative of psi^2 about x0, equal to m (x - x0) + P(x) with P periodic
// and m the mean of psi^2, so phi jumps by int psi^2 across x0 + L/2.
struct WeightPair {
    Grid grid;
    double scale = 1.0;
    double x0 = 0.0;
    rvec psi, phi, psi2;
    Spectrum psi_hat;
    double slope = 0.0;  // mean of psi^2
};

inline WeightPair fejer_weights(const Grid& g, double scale, double x0) {
    g.validate();
    if (!(scale > 0.0)) throw std::invalid_argument("fejer_weights: scale must be positive");
    const double kappa = 1.0 / scale;
    if (!(kappa > 2.0 * g.freq_step())) throw std::invalid_argument("fejer_weights: triangle narrower than the frequency grid");
    if (!(2.0 * kappa < g.nyquist())) throw std::invalid_argument("fejer_weights: triangle not resolved by the grid");
    WeightPair w;
    w.grid = g;
    w.scale = scale;
    w.x0 = x0;
    Spectrum s(g);
    for (std::size_t i = 0; i < g.n; ++i) {
        const double xi = g.xi(i);
        const double tri = std::max(0.0, 1.0 - std::abs(xi) / kappa);
        s.coeffs[i] = tri * std::polar(1.0, -xi * x0);
    }
    Field psi = inverse(s);
    const double peak = [&] {
        double acc = 0.0;
        for (std::size_t i = 0; i < g.n; ++i) acc += std::max(0.0, 1.0 - std::abs(g.xi(i)) / kappa);
        return acc / g.length;
    }();
    for (auto& c : s.coeffs) c /= peak;
    w.psi_hat = s;
    w.psi.resize(g.n);
    w.psi2.resize(g.n);
    for (std::size_t j = 0; j < g.n; ++j) {
        w.psi[j] = psi.values[j].real() / peak;
        w.psi2[j] = w.psi[j] * w.psi[j];
    }
    Field p2(g);
    for (std::size_t j = 0; j < g.n; ++j) p2.values[j] = w.psi2[j];
    Spectrum q = forward(p2);
    w.slope = q.coeffs[0].real() / g.length;
    Spectrum per(g);
    for (std::size_t i = 1; i < g.n; ++i) per.coeffs[i] = q.coeffs[i] / cplx(0.0, g.xi(i));
    // the Nyquist mode has no odd antiderivative; psi^2 is band-limited well below it
    per.coeffs[g.n / 2] = 0.0;
    Field pf = inverse(per);
    // gauge P(x0) = 0
    double p_at_x0 = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) p_at_x0 += (per.coeffs[i] * std::polar(1.0, g.xi(i) * x0)).real();
    p_at_x0 /= g.length;
    w.phi.resize(g.n);
    const double len = g.length;
    for (std::size_t j = 0; j < g.n; ++j) {
        double y = g.x(j) - x0;
        y -= len * std::round(y / len);
        w.phi[j] = w.slope * y + pf.values[j].real() - p_at_x0;
    }
    return w;
}

inline WeightPair fejer_weights(const Grid& g, double scale) { return fejer_weights(g, scale, g.center()); }

}  // namespace nlslab
