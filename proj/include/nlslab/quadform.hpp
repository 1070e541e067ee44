#pragma once
// Quartic forms on the resonant set xi0 + xi1 = xi2 + xi3:
//   Q_b(v0,v1,v2,v3) = (dk/2pi)^3 sum_{k0+k1=k2+k3} b(xi0,xi1,xi2) v0 v1 conj(v2 v3)
// with all four wavenumbers inside a band (no wrap-around).
//
// Three evaluators: the direct sum, the same sum from a precomputed symbol
// table, and a separated form built from tensor Chebyshev fits on dyadic boxes
// evaluated through FFT products.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <stdexcept>
#include <vector>

#include "nlslab/spectral.hpp"

namespace nlslab {

using P4Fn = std::function<double(double, double, double)>;

struct Band {
    long kmin = 0, kmax = -1;
    long size() const { return kmax - kmin + 1; }
    bool contains(long k) const { return k >= kmin && k <= kmax; }
};

inline Band full_band(const Grid& g) {
    const long h = static_cast<long>(g.n / 2);
    return {-h, h - 1};
}

// |k| <= kcap, clipped to the grid
inline Band symmetric_band(const Grid& g, long kcap) {
    const long h = static_cast<long>(g.n / 2);
    if (kcap < 0) throw std::invalid_argument("symmetric_band: negative cap");
    return {std::max(-h, -kcap), std::min(h - 1, kcap)};
}

inline double p4_measure(const Grid& g) {
    const double c = g.freq_step() / (2.0 * pi);
    return c * c * c;
}

namespace detail {
inline cvec band_slice(const Spectrum& s, const Band& b) {
    cvec out(static_cast<std::size_t>(b.size()));
    for (long k = b.kmin; k <= b.kmax; ++k) out[static_cast<std::size_t>(k - b.kmin)] = s.at(k);
    return out;
}
inline void check_band(const Grid& g, const Band& b) {
    const Band f = full_band(g);
    if (b.size() <= 0 || b.kmin < f.kmin || b.kmax > f.kmax) throw std::invalid_argument("quadform: band outside grid");
}
}  // namespace detail

inline cplx quadform_naive(const P4Fn& b, const Spectrum& v0, const Spectrum& v1, const Spectrum& v2,
                           const Spectrum& v3, const Band& band) {
    const Grid& g = v0.grid;
    if (!(v1.grid == g && v2.grid == g && v3.grid == g)) throw std::invalid_argument("quadform: grid mismatch");
    detail::check_band(g, band);
    const auto s0 = detail::band_slice(v0, band), s1 = detail::band_slice(v1, band);
    const auto s2 = detail::band_slice(v2, band), s3 = detail::band_slice(v3, band);
    const double dk = g.freq_step();
    cplx total(0.0, 0.0);
    for (long k0 = band.kmin; k0 <= band.kmax; ++k0) {
        const cplx a0 = s0[static_cast<std::size_t>(k0 - band.kmin)];
        if (a0 == 0.0) continue;
        for (long k1 = band.kmin; k1 <= band.kmax; ++k1) {
            const cplx a01 = a0 * s1[static_cast<std::size_t>(k1 - band.kmin)];
            if (a01 == 0.0) continue;
            const long lo = std::max(band.kmin, k0 + k1 - band.kmax), hi = std::min(band.kmax, k0 + k1 - band.kmin);
            cplx inner(0.0, 0.0);
            for (long k2 = lo; k2 <= hi; ++k2) {
                const long k3 = k0 + k1 - k2;
                const double w = b(dk * k0, dk * k1, dk * k2);
                inner += w * std::conj(s2[static_cast<std::size_t>(k2 - band.kmin)] * s3[static_cast<std::size_t>(k3 - band.kmin)]);
            }
            total += a01 * inner;
        }
    }
    return total * p4_measure(g);
}

inline cplx quadform_naive(const P4Fn& b, const Spectrum& v0, const Spectrum& v1, const Spectrum& v2,
                           const Spectrum& v3) {
    return quadform_naive(b, v0, v1, v2, v3, full_band(v0.grid));
}

// The direct sum with the symbol values cached once per (grid, symbol, band).
class P4Table {
public:
    P4Table(const Grid& g, const P4Fn& b, const Band& band) : grid_(g), band_(band) {
        detail::check_band(g, band);
        const double dk = g.freq_step();
        const long m = band.size();
        offset_.assign(static_cast<std::size_t>(m * m + 1), 0);
        std::size_t pos = 0;
        for (long k0 = band.kmin; k0 <= band.kmax; ++k0)
            for (long k1 = band.kmin; k1 <= band.kmax; ++k1) {
                offset_[static_cast<std::size_t>((k0 - band.kmin) * m + (k1 - band.kmin))] = pos;
                const long lo = std::max(band.kmin, k0 + k1 - band.kmax), hi = std::min(band.kmax, k0 + k1 - band.kmin);
                for (long k2 = lo; k2 <= hi; ++k2) {
                    values_.push_back(b(dk * k0, dk * k1, dk * k2));
                    ++pos;
                }
            }
        offset_.back() = pos;
    }

    const Grid& grid() const { return grid_; }
    const Band& band() const { return band_; }
    std::size_t entries() const { return values_.size(); }

    cplx apply(const Spectrum& v0, const Spectrum& v1, const Spectrum& v2, const Spectrum& v3) const {
        if (!(v0.grid == grid_ && v1.grid == grid_ && v2.grid == grid_ && v3.grid == grid_))
            throw std::invalid_argument("P4Table: grid mismatch");
        const auto s0 = detail::band_slice(v0, band_), s1 = detail::band_slice(v1, band_);
        const auto s2 = detail::band_slice(v2, band_), s3 = detail::band_slice(v3, band_);
        const long m = band_.size();
        // conj(v2[k2] v3[k0+k1-k2]) is formed on the fly
        cplx total(0.0, 0.0);
        for (long i0 = 0; i0 < m; ++i0) {
            const cplx a0 = s0[static_cast<std::size_t>(i0)];
            if (a0 == 0.0) continue;
            for (long i1 = 0; i1 < m; ++i1) {
                const cplx a01 = a0 * s1[static_cast<std::size_t>(i1)];
                const std::size_t p = offset_[static_cast<std::size_t>(i0 * m + i1)];
                const long ksum = i0 + i1 + 2 * band_.kmin;  // k0 + k1
                const long lo = std::max(band_.kmin, ksum - band_.kmax), hi = std::min(band_.kmax, ksum - band_.kmin);
                double re = 0.0, im = 0.0;
                const double* w = values_.data() + p;
                for (long k2 = lo; k2 <= hi; ++k2) {
                    const cplx z = s2[static_cast<std::size_t>(k2 - band_.kmin)] *
                                   s3[static_cast<std::size_t>(ksum - k2 - band_.kmin)];
                    re += *w * z.real();
                    im -= *w * z.imag();
                    ++w;
                }
                total += a01 * cplx(re, im);
            }
        }
        return total * p4_measure(grid_);
    }

private:
    Grid grid_;
    Band band_;
    std::vector<std::size_t> offset_;
    rvec values_;
};

// ---------------------------------------------------------------------------
// Separated representation.

struct SeparationOptions {
    double rel_tol = 1e-11;      // per-point fit error relative to max |b| on the band
    std::size_t max_degree = 16;  // Chebyshev degree cap per axis before a box is split
    long exact_size = 4;          // axes this short use point (delta) bases
};

struct SeparationStats {
    std::size_t boxes = 0;
    std::size_t terms = 0;
    std::size_t points = 0;
    double max_fit_error = 0.0;  // absolute, over all resonant lattice points
    double b_scale = 0.0;
};

class SeparationPlan {
public:
    struct Axis {
        long lo = 0, hi = 0;
        std::size_t nb = 1;  // number of basis functions
        rvec basis;          // (hi-lo+1) x nb, row major
        long len() const { return hi - lo + 1; }
    };
    struct Box {
        Axis ax[3];
        rvec coef;  // nb0 x nb1 x nb2
    };

    SeparationPlan(const Grid& g, const P4Fn& b, const Band& band, SeparationOptions opt = {})
        : grid_(g), band_(band), opt_(opt), b_(b) {
        detail::check_band(g, band);
        // scale from the lattice
        const double dk = g.freq_step();
        double scale = 0.0;
        for (long k0 = band.kmin; k0 <= band.kmax; ++k0)
            for (long k1 = band.kmin; k1 <= band.kmax; k1 += std::max<long>(1, band.size() / 64)) {
                const long lo = std::max(band.kmin, k0 + k1 - band.kmax), hi = std::min(band.kmax, k0 + k1 - band.kmin);
                for (long k2 = lo; k2 <= hi; k2 += std::max<long>(1, band.size() / 64))
                    scale = std::max(scale, std::abs(b(dk * k0, dk * k1, dk * k2)));
            }
        stats_.b_scale = scale;
        abs_tol_ = opt.rel_tol * std::max(scale, 1e-300);
        const auto iv = dyadic_intervals(band);
        for (const auto& i0 : iv)
            for (const auto& i1 : iv)
                for (const auto& i2 : iv) {
                    if (i0.first + i1.first - i2.second > band.kmax) continue;
                    if (i0.second + i1.second - i2.first < band.kmin) continue;
                    refine({i0, i1, i2});
                }
        stats_.boxes = boxes_.size();
    }

    const SeparationStats& stats() const { return stats_; }
    const Band& band() const { return band_; }
    const Grid& grid() const { return grid_; }

    cplx apply(const Spectrum& v0, const Spectrum& v1, const Spectrum& v2, const Spectrum& v3) const {
        if (!(v0.grid == grid_ && v1.grid == grid_ && v2.grid == grid_ && v3.grid == grid_))
            throw std::invalid_argument("SeparationPlan: grid mismatch");
        const std::size_t pn = 2 * grid_.n;
        // v3 on the padded grid, restricted to the band
        cvec w3(pn, 0.0);
        for (long k = band_.kmin; k <= band_.kmax; ++k) w3[pad_index(k, pn)] = v3.at(k);
        dft_backward_inplace(w3);
        const Spectrum* vs[3] = {&v0, &v1, &v2};
        cplx total(0.0, 0.0);
        std::vector<cvec> w[3];
        cvec buf(pn);
        for (const auto& box : boxes_) {
            for (int d = 0; d < 3; ++d) {
                const Axis& ax = box.ax[d];
                w[d].assign(ax.nb, cvec());
                for (std::size_t p = 0; p < ax.nb; ++p) {
                    std::fill(buf.begin(), buf.end(), cplx(0.0, 0.0));
                    for (long k = ax.lo; k <= ax.hi; ++k)
                        buf[pad_index(k, pn)] = vs[d]->at(k) * ax.basis[static_cast<std::size_t>(k - ax.lo) * ax.nb + p];
                    dft_backward_inplace(buf);
                    w[d][p] = buf;
                }
            }
            // z[p2] = conj(w2[p2] w3)
            const std::size_t n0 = box.ax[0].nb, n1 = box.ax[1].nb, n2 = box.ax[2].nb;
            std::vector<cvec> z(n2, cvec(pn));
            for (std::size_t p2 = 0; p2 < n2; ++p2)
                for (std::size_t m = 0; m < pn; ++m) z[p2][m] = std::conj(w[2][p2][m] * w3[m]);
            cvec y(pn), zc(pn);
            for (std::size_t p0 = 0; p0 < n0; ++p0)
                for (std::size_t p1 = 0; p1 < n1; ++p1) {
                    std::fill(zc.begin(), zc.end(), cplx(0.0, 0.0));
                    bool any = false;
                    for (std::size_t p2 = 0; p2 < n2; ++p2) {
                        const double c = box.coef[(p0 * n1 + p1) * n2 + p2];
                        if (c == 0.0) continue;
                        any = true;
                        for (std::size_t m = 0; m < pn; ++m) zc[m] += c * z[p2][m];
                    }
                    if (!any) continue;
                    cplx acc(0.0, 0.0);
                    for (std::size_t m = 0; m < pn; ++m) acc += w[0][p0][m] * w[1][p1][m] * zc[m];
                    total += acc;
                }
        }
        return total * (p4_measure(grid_) / static_cast<double>(pn));
    }

private:
    using Interval = std::pair<long, long>;

    static std::size_t pad_index(long k, std::size_t pn) {
        return static_cast<std::size_t>(k < 0 ? k + static_cast<long>(pn) : k);
    }

    static std::vector<Interval> dyadic_intervals(const Band& band) {
        std::vector<Interval> out;
        auto clip = [&](long lo, long hi) {
            lo = std::max(lo, band.kmin);
            hi = std::min(hi, band.kmax);
            if (lo <= hi) out.push_back({lo, hi});
        };
        clip(0, 0);
        const long reach = std::max(std::abs(band.kmin), std::abs(band.kmax));
        for (long s = 1; s <= reach; s *= 2) {
            clip(s, 2 * s - 1);
            clip(-(2 * s - 1), -s);
        }
        return out;
    }

    // basis values at integer points of [lo, hi]: delta basis or Chebyshev T_p of the mapped coordinate
    static Axis make_axis(long lo, long hi, std::size_t nb, bool delta) {
        Axis ax;
        ax.lo = lo;
        ax.hi = hi;
        const long len = hi - lo + 1;
        ax.nb = delta ? static_cast<std::size_t>(len) : nb;
        ax.basis.assign(static_cast<std::size_t>(len) * ax.nb, 0.0);
        for (long k = lo; k <= hi; ++k) {
            const std::size_t r = static_cast<std::size_t>(k - lo);
            if (delta) {
                ax.basis[r * ax.nb + r] = 1.0;
                continue;
            }
            const double t = len > 1 ? (2.0 * static_cast<double>(k) - static_cast<double>(lo + hi)) / static_cast<double>(hi - lo) : 0.0;
            double tm = 1.0, tc = t;
            for (std::size_t p = 0; p < ax.nb; ++p) {
                double v = (p == 0) ? 1.0 : (p == 1 ? t : 0.0);
                if (p >= 2) {
                    v = 2.0 * t * tc - tm;
                    tm = tc;
                    tc = v;
                }
                ax.basis[r * ax.nb + p] = v;
            }
        }
        return ax;
    }

    // node coordinates (real wavenumbers) for an axis
    static rvec axis_nodes(long lo, long hi, std::size_t nb, bool delta) {
        rvec x;
        if (delta) {
            for (long k = lo; k <= hi; ++k) x.push_back(static_cast<double>(k));
            return x;
        }
        const double c = 0.5 * static_cast<double>(lo + hi), h = 0.5 * static_cast<double>(hi - lo);
        for (std::size_t j = 0; j < nb; ++j) x.push_back(c + h * std::cos(pi * (static_cast<double>(j) + 0.5) / static_cast<double>(nb)));
        return x;
    }

    // coefficient transform matrix: coef_p = sum_j M[p][j] f(node_j)
    static rvec node_to_coef(std::size_t nb, bool delta) {
        rvec m(nb * nb, 0.0);
        if (delta) {
            for (std::size_t p = 0; p < nb; ++p) m[p * nb + p] = 1.0;
            return m;
        }
        for (std::size_t p = 0; p < nb; ++p)
            for (std::size_t j = 0; j < nb; ++j) {
                const double th = pi * (static_cast<double>(j) + 0.5) / static_cast<double>(nb);
                m[p * nb + j] = (p == 0 ? 1.0 : 2.0) / static_cast<double>(nb) * std::cos(static_cast<double>(p) * th);
            }
        return m;
    }

    bool try_fit(const std::array<Interval, 3>& box, Box& out, double& err) const {
        const double dk = grid_.freq_step();
        bool delta[3];
        std::size_t nb[3];
        rvec nodes[3], tr[3];
        for (int d = 0; d < 3; ++d) {
            const long len = box[d].second - box[d].first + 1;
            delta[d] = len <= opt_.exact_size;
            nb[d] = delta[d] ? static_cast<std::size_t>(len) : std::min<std::size_t>(opt_.max_degree + 1, static_cast<std::size_t>(len));
            nodes[d] = axis_nodes(box[d].first, box[d].second, nb[d], delta[d]);
            tr[d] = node_to_coef(nb[d], delta[d]);
        }
        // samples at tensor nodes
        rvec f(nb[0] * nb[1] * nb[2]);
        for (std::size_t i = 0; i < nb[0]; ++i)
            for (std::size_t j = 0; j < nb[1]; ++j)
                for (std::size_t l = 0; l < nb[2]; ++l)
                    f[(i * nb[1] + j) * nb[2] + l] = b_(dk * nodes[0][i], dk * nodes[1][j], dk * nodes[2][l]);
        // coefficients by three mode products
        rvec c = mode_product(f, nb, tr);
        // trim negligible trailing degrees on Chebyshev axes
        std::size_t keep[3] = {nb[0], nb[1], nb[2]};
        for (int d = 0; d < 3; ++d) {
            if (delta[d]) continue;
            while (keep[d] > 1) {
                double mx = 0.0;
                const std::size_t p = keep[d] - 1;
                for (std::size_t i = 0; i < nb[0]; ++i)
                    for (std::size_t j = 0; j < nb[1]; ++j)
                        for (std::size_t l = 0; l < nb[2]; ++l) {
                            const std::size_t idx[3] = {i, j, l};
                            if (idx[d] != p) continue;
                            mx = std::max(mx, std::abs(c[(i * nb[1] + j) * nb[2] + l]));
                        }
                if (mx > 1e-3 * abs_tol_) break;
                --keep[d];
            }
        }
        Box bx;
        for (int d = 0; d < 3; ++d) bx.ax[d] = make_axis(box[d].first, box[d].second, keep[d], delta[d]);
        bx.coef.assign(keep[0] * keep[1] * keep[2], 0.0);
        for (std::size_t i = 0; i < keep[0]; ++i)
            for (std::size_t j = 0; j < keep[1]; ++j)
                for (std::size_t l = 0; l < keep[2]; ++l)
                    bx.coef[(i * keep[1] + j) * keep[2] + l] = c[(i * nb[1] + j) * nb[2] + l];
        // verify on the resonant lattice points of the box
        const std::size_t len[3] = {static_cast<std::size_t>(bx.ax[0].len()), static_cast<std::size_t>(bx.ax[1].len()),
                                    static_cast<std::size_t>(bx.ax[2].len())};
        rvec basisT[3];
        std::size_t kb[3] = {keep[0], keep[1], keep[2]};
        for (int d = 0; d < 3; ++d) {
            // rows: points, cols: basis -> as transform from coef to values
            basisT[d] = bx.ax[d].basis;
        }
        rvec vals = mode_product_rect(bx.coef, kb, len, basisT);
        err = 0.0;
        for (long k0 = box[0].first; k0 <= box[0].second; ++k0)
            for (long k1 = box[1].first; k1 <= box[1].second; ++k1) {
                const long lo = std::max({box[2].first, k0 + k1 - band_.kmax}), hi = std::min({box[2].second, k0 + k1 - band_.kmin});
                for (long k2 = lo; k2 <= hi; ++k2) {
                    const double exact = b_(dk * k0, dk * k1, dk * k2);
                    const std::size_t id = (static_cast<std::size_t>(k0 - box[0].first) * len[1] + static_cast<std::size_t>(k1 - box[1].first)) * len[2] +
                                           static_cast<std::size_t>(k2 - box[2].first);
                    err = std::max(err, std::abs(vals[id] - exact));
                }
            }
        out = std::move(bx);
        return err <= abs_tol_;
    }

    // c[p] = sum_j M_d[p][j] f[j] along each axis, square transforms
    static rvec mode_product(const rvec& f, const std::size_t nb[3], const rvec tr[3]) {
        rvec cur = f;
        std::size_t dims[3] = {nb[0], nb[1], nb[2]};
        for (int d = 0; d < 3; ++d) {
            rvec nxt(cur.size(), 0.0);
            for (std::size_t i = 0; i < dims[0]; ++i)
                for (std::size_t j = 0; j < dims[1]; ++j)
                    for (std::size_t l = 0; l < dims[2]; ++l) {
                        const std::size_t idx[3] = {i, j, l};
                        const std::size_t p = idx[d];
                        double acc = 0.0;
                        for (std::size_t q = 0; q < dims[d]; ++q) {
                            std::size_t id2[3] = {i, j, l};
                            id2[d] = q;
                            acc += tr[d][p * dims[d] + q] * cur[(id2[0] * dims[1] + id2[1]) * dims[2] + id2[2]];
                        }
                        nxt[(i * dims[1] + j) * dims[2] + l] = acc;
                    }
            cur.swap(nxt);
        }
        return cur;
    }

    // values[k] = sum_p basis_d[k][p] coef[p] along each axis (rectangular)
    static rvec mode_product_rect(const rvec& coef, const std::size_t kb[3], const std::size_t len[3], const rvec basis[3]) {
        rvec cur = coef;
        std::size_t dims[3] = {kb[0], kb[1], kb[2]};
        for (int d = 0; d < 3; ++d) {
            std::size_t nd[3] = {dims[0], dims[1], dims[2]};
            nd[d] = len[d];
            rvec nxt(nd[0] * nd[1] * nd[2], 0.0);
            for (std::size_t i = 0; i < nd[0]; ++i)
                for (std::size_t j = 0; j < nd[1]; ++j)
                    for (std::size_t l = 0; l < nd[2]; ++l) {
                        const std::size_t idx[3] = {i, j, l};
                        const std::size_t k = idx[d];
                        double acc = 0.0;
                        for (std::size_t p = 0; p < dims[d]; ++p) {
                            std::size_t id2[3] = {i, j, l};
                            id2[d] = p;
                            acc += basis[d][k * dims[d] + p] * cur[(id2[0] * dims[1] + id2[1]) * dims[2] + id2[2]];
                        }
                        nxt[(i * nd[1] + j) * nd[2] + l] = acc;
                    }
            cur.swap(nxt);
            dims[d] = len[d];
        }
        return cur;
    }

    void refine(const std::array<Interval, 3>& box) {
        Box bx;
        double err = 0.0;
        const bool ok = try_fit(box, bx, err);
        bool all_delta = true;
        for (int d = 0; d < 3; ++d)
            if (box[d].second - box[d].first + 1 > opt_.exact_size) all_delta = false;
        if (ok || all_delta) {
            stats_.max_fit_error = std::max(stats_.max_fit_error, err);
            stats_.terms += bx.coef.size();
            for (long k0 = box[0].first; k0 <= box[0].second; ++k0)
                for (long k1 = box[1].first; k1 <= box[1].second; ++k1) {
                    const long lo = std::max(box[2].first, k0 + k1 - band_.kmax), hi = std::min(box[2].second, k0 + k1 - band_.kmin);
                    if (hi >= lo) stats_.points += static_cast<std::size_t>(hi - lo + 1);
                }
            boxes_.push_back(std::move(bx));
            return;
        }
        // split the longest axis
        int d = 0;
        for (int e = 1; e < 3; ++e)
            if (box[e].second - box[e].first > box[d].second - box[d].first) d = e;
        const long mid = box[d].first + (box[d].second - box[d].first) / 2;
        auto lo = box, hi = box;
        lo[d].second = mid;
        hi[d].first = mid + 1;
        for (const auto& part : {lo, hi}) {
            if (part[0].first + part[1].first - part[2].second > band_.kmax) continue;
            if (part[0].second + part[1].second - part[2].first < band_.kmin) continue;
            refine(part);
        }
    }

    Grid grid_;
    Band band_;
    SeparationOptions opt_;
    P4Fn b_;
    double abs_tol_ = 0.0;
    std::vector<Box> boxes_;
    SeparationStats stats_;
};

inline cplx quadform_separated(const SeparationPlan& plan, const Spectrum& v0, const Spectrum& v1, const Spectrum& v2,
                               const Spectrum& v3) {
    return plan.apply(v0, v1, v2, v3);
}

enum class EngineKind { naive, separated };

inline EngineKind engine_from_string(const std::string& s) {
    if (s == "naive") return EngineKind::naive;
    if (s == "separated") return EngineKind::separated;
    throw std::invalid_argument("unknown quadform engine: " + s);
}

// One evaluator object for repeated quartic forms with a fixed symbol.
class QuadEngine {
public:
    QuadEngine(const Grid& g, const P4Fn& b, const Band& band, EngineKind kind, SeparationOptions opt = {})
        : kind_(kind) {
        if (kind == EngineKind::naive)
            table_ = std::make_shared<P4Table>(g, b, band);
        else
            plan_ = std::make_shared<SeparationPlan>(g, b, band, opt);
    }
    EngineKind kind() const { return kind_; }
    cplx apply(const Spectrum& v0, const Spectrum& v1, const Spectrum& v2, const Spectrum& v3) const {
        return kind_ == EngineKind::naive ? table_->apply(v0, v1, v2, v3) : plan_->apply(v0, v1, v2, v3);
    }
    const SeparationPlan* plan() const { return plan_.get(); }

private:
    EngineKind kind_;
    std::shared_ptr<P4Table> table_;
    std::shared_ptr<SeparationPlan> plan_;
};

}  // namespace nlslab
