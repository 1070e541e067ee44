#pragma once
// Periodic grid, fields, spectra and the basic spectral operations.
//
// Conventions (fixed everywhere in the library):
//   x_j   = j * L / N,            j = 0..N-1
//   xi_k  = k * 2 pi / L,         k in [-N/2, N/2)
//   u^_k  = dx * sum_j u_j exp(-i xi_k x_j)
//   u_j   = (1/L) * sum_k u^_k exp(+i xi_k x_j)
// so that sum_j dx |u_j|^2 = (1/2pi) dk sum_k |u^_k|^2.
// Coefficients are stored in FFT order (k >= 0 first, then negative k).

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlslab/fft.hpp"

namespace nlslab {

inline constexpr double pi = std::numbers::pi;

enum class Sign { focusing, defocusing };

// +1 for focusing, -1 for defocusing; the nonlinear substep is u exp(-i sigma |u|^2 dt).
inline double sigma(Sign s) { return s == Sign::focusing ? 1.0 : -1.0; }

inline const char* to_string(Sign s) { return s == Sign::focusing ? "focusing" : "defocusing"; }

inline Sign sign_from_string(const std::string& s) {
    if (s == "focusing") return Sign::focusing;
    if (s == "defocusing") return Sign::defocusing;
    throw std::invalid_argument("unknown sign: " + s);
}

inline bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

struct Grid {
    std::size_t n = 4096;
    double length = 128.0 * pi;

    Grid() = default;
    Grid(std::size_t n_, double length_) : n(n_), length(length_) { validate(); }

    void validate() const {
        if (!is_power_of_two(n)) throw std::invalid_argument("grid size must be a power of two >= 2");
        if (!(length > 0.0) || !std::isfinite(length)) throw std::invalid_argument("grid length must be positive");
    }

    double spacing() const { return length / static_cast<double>(n); }
    double freq_step() const { return 2.0 * pi / length; }
    double x(std::size_t j) const { return static_cast<double>(j) * spacing(); }
    double center() const { return 0.5 * length; }
    // integer wavenumber of storage slot idx
    long wavenumber(std::size_t idx) const {
        long k = static_cast<long>(idx);
        return k < static_cast<long>(n / 2) ? k : k - static_cast<long>(n);
    }
    double xi(std::size_t idx) const { return freq_step() * static_cast<double>(wavenumber(idx)); }
    std::size_t index_of(long k) const {
        long h = static_cast<long>(n / 2);
        if (k < -h || k >= h) throw std::out_of_range("wavenumber outside grid");
        return static_cast<std::size_t>(k < 0 ? k + static_cast<long>(n) : k);
    }
    double nyquist() const { return freq_step() * static_cast<double>(n / 2); }

    bool operator==(const Grid& o) const { return n == o.n && length == o.length; }
};

struct Field {
    Grid grid;
    cvec values;

    Field() = default;
    explicit Field(const Grid& g) : grid(g), values(g.n, cplx(0.0, 0.0)) {}
    Field(const Grid& g, cvec v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.n) throw std::invalid_argument("field size does not match grid");
    }
    cplx& operator[](std::size_t j) { return values[j]; }
    const cplx& operator[](std::size_t j) const { return values[j]; }
};

struct Spectrum {
    Grid grid;
    cvec coeffs;  // FFT order

    Spectrum() = default;
    explicit Spectrum(const Grid& g) : grid(g), coeffs(g.n, cplx(0.0, 0.0)) {}
    Spectrum(const Grid& g, cvec c) : grid(g), coeffs(std::move(c)) {
        if (coeffs.size() != grid.n) throw std::invalid_argument("spectrum size does not match grid");
    }
    cplx& at(long k) { return coeffs[grid.index_of(k)]; }
    const cplx& at(long k) const { return coeffs[grid.index_of(k)]; }
};

inline void require_finite(const cvec& v, const char* what) {
    for (const auto& z : v)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw std::invalid_argument(std::string(what) + ": non-finite sample");
}

inline Spectrum forward(const Field& f) {
    f.grid.validate();
    if (f.values.size() != f.grid.n) throw std::invalid_argument("field size does not match grid");
    require_finite(f.values, "forward");
    Spectrum s(f.grid);
    dft_forward(f.values.data(), s.coeffs.data(), f.grid.n);
    const double dx = f.grid.spacing();
    for (auto& c : s.coeffs) c *= dx;
    return s;
}

inline Field inverse(const Spectrum& s) {
    s.grid.validate();
    if (s.coeffs.size() != s.grid.n) throw std::invalid_argument("spectrum size does not match grid");
    require_finite(s.coeffs, "inverse");
    Field f(s.grid);
    dft_backward(s.coeffs.data(), f.values.data(), s.grid.n);
    const double inv_l = 1.0 / s.grid.length;
    for (auto& v : f.values) v *= inv_l;
    return f;
}

inline double mass(const Field& f) {
    double acc = 0.0;
    for (const auto& v : f.values) acc += std::norm(v);
    return acc * f.grid.spacing();
}

inline double mass(const Spectrum& s) {
    double acc = 0.0;
    for (const auto& c : s.coeffs) acc += std::norm(c);
    return acc / s.grid.length;
}

// sqrt((1/2pi) dk sum (Lambda^2 + xi^2)^s |u^|^2)
inline double hs_norm(const Spectrum& s, double sobolev, double lam) {
    if (!(lam >= 1.0)) throw std::invalid_argument("hs_norm: Lambda must be at least 1");
    double acc = 0.0;
    for (std::size_t i = 0; i < s.grid.n; ++i) {
        const double xi = s.grid.xi(i);
        acc += std::pow(lam * lam + xi * xi, sobolev) * std::norm(s.coeffs[i]);
    }
    return std::sqrt(acc / s.grid.length);
}

inline double hs_norm(const Field& f, double sobolev, double lam) { return hs_norm(forward(f), sobolev, lam); }

// exact linear flow of i u_t - u_xx = 0: u^ -> u^ exp(i xi^2 t)
inline Spectrum linear_propagate(const Spectrum& s, double t) {
    Spectrum out = s;
    for (std::size_t i = 0; i < s.grid.n; ++i) {
        const double xi = s.grid.xi(i);
        out.coeffs[i] *= std::polar(1.0, xi * xi * t);
    }
    return out;
}

inline Field linear_propagate(const Field& f, double t) { return inverse(linear_propagate(forward(f), t)); }

template <class Fn>
Spectrum apply_multiplier(const Spectrum& s, Fn&& m) {
    Spectrum out = s;
    for (std::size_t i = 0; i < s.grid.n; ++i) out.coeffs[i] *= m(s.grid.xi(i));
    return out;
}

inline Spectrum derivative(const Spectrum& s) {
    return apply_multiplier(s, [](double xi) { return cplx(0.0, xi); });
}

// dx * sum f conj(g)
inline cplx inner(const Field& f, const Field& g) {
    if (!(f.grid == g.grid)) throw std::invalid_argument("inner: grid mismatch");
    cplx acc(0.0, 0.0);
    for (std::size_t j = 0; j < f.grid.n; ++j) acc += f.values[j] * std::conj(g.values[j]);
    return acc * f.grid.spacing();
}

// L2 distance minimised over a global phase factor
inline double phase_free_distance(const Field& u, const Field& v) {
    const double a = mass(u), b = mass(v);
    const double c = std::abs(inner(u, v));
    return std::sqrt(std::max(0.0, a + b - 2.0 * c));
}

// fraction of spectral mass in the top octave |k| >= N/4
inline double top_octave_fraction(const Spectrum& s) {
    double tot = 0.0, top = 0.0;
    const long q = static_cast<long>(s.grid.n / 4);
    for (std::size_t i = 0; i < s.grid.n; ++i) {
        const double m = std::norm(s.coeffs[i]);
        tot += m;
        if (std::labs(s.grid.wavenumber(i)) >= q) top += m;
    }
    return tot > 0.0 ? top / tot : 0.0;
}

struct Trajectory {
    Grid grid;
    std::vector<double> times;
    std::vector<cvec> snapshots;  // physical-space samples

    std::size_t size() const { return times.size(); }
    Field field(std::size_t i) const { return Field(grid, snapshots.at(i)); }
    void push(double t, const cvec& v) {
        times.push_back(t);
        snapshots.push_back(v);
    }
};

// ---- binary snapshot format: "RWF1", u64 N, f64 L, f64 t, 2N f64 (re, im), little endian

namespace detail {
template <class T>
void put_le(std::ostream& os, T v) {
    static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    os.write(reinterpret_cast<const char*>(b), sizeof(T));
}
template <class T>
T get_le(std::istream& is) {
    unsigned char b[sizeof(T)];
    is.read(reinterpret_cast<char*>(b), sizeof(T));
    if (!is) throw std::runtime_error("snapshot: truncated file");
    if constexpr (std::endian::native == std::endian::big)
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    T v;
    std::memcpy(&v, b, sizeof(T));
    return v;
}
}  // namespace detail

inline void write_snapshot(const std::string& path, const Field& f, double t) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path);
    os.write("RWF1", 4);
    detail::put_le<std::uint64_t>(os, f.grid.n);
    detail::put_le<double>(os, f.grid.length);
    detail::put_le<double>(os, t);
    for (const auto& v : f.values) {
        detail::put_le<double>(os, v.real());
        detail::put_le<double>(os, v.imag());
    }
    if (!os) throw std::runtime_error("write failed: " + path);
}

struct Snapshot {
    Field field;
    double time = 0.0;
};

inline Snapshot read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "RWF1", 4) != 0) throw std::runtime_error("snapshot: bad magic");
    const auto n = detail::get_le<std::uint64_t>(is);
    const double len = detail::get_le<double>(is);
    const double t = detail::get_le<double>(is);
    Grid g(static_cast<std::size_t>(n), len);
    Field f(g);
    for (std::size_t j = 0; j < g.n; ++j) {
        const double re = detail::get_le<double>(is);
        const double im = detail::get_le<double>(is);
        f.values[j] = cplx(re, im);
    }
    return {f, t};
}

}  // namespace nlslab
