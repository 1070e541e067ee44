#pragma once
// Littlewood-Paley bank, smooth spatial window families, frequency envelopes
// and the energy / local-energy norms built from them.

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "nlslab/spectral.hpp"

namespace nlslab {

namespace detail {
inline double exp_ramp(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
// C-infinity step: 0 for t <= 0, 1 for t >= 1
inline double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = exp_ramp(t), b = exp_ramp(1.0 - t);
    return a / (a + b);
}
}  // namespace detail

// m = 1 on [-1,1], 0 outside [-2,2], smooth in between
inline double lp_bump(double x) { return 1.0 - detail::smooth_step(std::abs(x) - 1.0); }

struct DyadicBlock {
    double lambda = 1.0;
    enum class Kind { low, annulus, top } kind = Kind::annulus;

    double multiplier(double xi) const {
        switch (kind) {
            case Kind::low: return lp_bump(xi / lambda);
            case Kind::annulus: return lp_bump(xi / lambda) - lp_bump(2.0 * xi / lambda);
            case Kind::top: return 1.0 - lp_bump(2.0 * xi / lambda);
        }
        return 0.0;
    }
};

// Blocks Lambda, 2 Lambda, ... up to the first lambda with 2 lambda >= Nyquist.
// The lowest block carries everything below Lambda and the top block
// everything above its lower edge, so the multipliers sum to one.
class LPBank {
public:
    LPBank(const Grid& grid, double lam) : grid_(grid), big_lambda_(lam) {
        grid.validate();
        if (!(lam > 0.0)) throw std::invalid_argument("LPBank: Lambda must be positive");
        if (!(2.0 * lam < grid.nyquist())) throw std::invalid_argument("LPBank: 2*Lambda must be below Nyquist");
        double l = lam;
        while (2.0 * l < grid.nyquist()) {
            blocks_.push_back({l, DyadicBlock::Kind::annulus});
            l *= 2.0;
        }
        blocks_.push_back({l, DyadicBlock::Kind::top});
        blocks_.front().kind = DyadicBlock::Kind::low;
        if (blocks_.size() == 1) throw std::invalid_argument("LPBank: grid too coarse for Lambda");
    }

    const Grid& grid() const { return grid_; }
    double base() const { return big_lambda_; }
    std::size_t size() const { return blocks_.size(); }
    const DyadicBlock& block(std::size_t i) const { return blocks_.at(i); }
    const std::vector<DyadicBlock>& blocks() const { return blocks_; }

    Spectrum project(const Spectrum& s, std::size_t i) const {
        if (!(s.grid == grid_)) throw std::invalid_argument("LPBank: grid mismatch");
        const auto& b = blocks_.at(i);
        return apply_multiplier(s, [&](double xi) { return b.multiplier(xi); });
    }

    double multiplier_sum(double xi) const {
        double acc = 0.0;
        for (const auto& b : blocks_) acc += b.multiplier(xi);
        return acc;
    }

private:
    Grid grid_;
    double big_lambda_;
    std::vector<DyadicBlock> blocks_;
};

inline LPBank lp_bank(const Grid& grid, double lam) { return LPBank(grid, lam); }

// chi_j(x) = chi(x/delta - j), chi = g / sum_j g(. - j), g(y) = exp(-1/(1-y^2)).
// On the torus delta is snapped to L/M with M = round(L/delta) so the family is periodic.
class WindowFamily {
public:
    WindowFamily(const Grid& grid, double scale) : grid_(grid) {
        grid.validate();
        if (!(scale >= 2.0 * grid.spacing())) throw std::invalid_argument("WindowFamily: scale below 2 grid spacings");
        if (!(scale <= grid.length)) throw std::invalid_argument("WindowFamily: scale exceeds the torus");
        count_ = static_cast<std::size_t>(std::max(1.0, std::round(grid.length / scale)));
        scale_ = grid.length / static_cast<double>(count_);
        if (count_ < 2) throw std::invalid_argument("WindowFamily: need at least two windows");
        build();
    }

    static double profile(double y) {
        if (std::abs(y) >= 1.0) return 0.0;
        return std::exp(-1.0 / (1.0 - y * y));
    }
    // chi(y) on the line
    static double chi(double y) {
        const double f = std::floor(y);
        const double g0 = profile(y - f), g1 = profile(y - f - 1.0);
        const double den = g0 + g1;
        return den > 0.0 ? profile(y) / den : 0.0;
    }

    double scale() const { return scale_; }
    std::size_t size() const { return count_; }
    const Grid& grid() const { return grid_; }

    // periodised chi_j at an arbitrary point
    double value(std::size_t j, double x) const {
        const double y = x / scale_ - static_cast<double>(j);
        const double m = static_cast<double>(count_);
        const double yr = y - m * std::round(y / m);
        return chi(yr);
    }

    struct Support {
        std::size_t window;
        std::vector<std::size_t> idx;
        std::vector<double> val;
    };
    const Support& support(std::size_t j) const { return supports_.at(j); }

private:
    void build() {
        supports_.resize(count_);
        for (std::size_t j = 0; j < count_; ++j) {
            supports_[j].window = j;
            for (std::size_t i = 0; i < grid_.n; ++i) {
                const double v = value(j, grid_.x(i));
                if (v > 0.0) {
                    supports_[j].idx.push_back(i);
                    supports_[j].val.push_back(v);
                }
            }
        }
    }

    Grid grid_;
    double scale_ = 1.0;
    std::size_t count_ = 0;
    std::vector<Support> supports_;
};

inline WindowFamily window_family(const Grid& grid, double scale) { return WindowFamily(grid, scale); }

// weights indexed by block lambda
struct FrequencyEnvelope {
    std::map<double, double> weights;

    double at(double lam) const {
        auto it = weights.find(lam);
        return it == weights.end() ? 0.0 : it->second;
    }
    double l2() const {
        double acc = 0.0;
        for (auto& kv : weights) acc += kv.second * kv.second;
        return std::sqrt(acc);
    }
    bool slowly_varying(double tol = 1e-12) const {
        for (auto it = weights.begin(); it != weights.end(); ++it) {
            auto nx = std::next(it);
            if (nx == weights.end()) break;
            const double a = it->second, b = nx->second;
            if (b > 2.0 * a * (1.0 + tol) || a > 2.0 * b * (1.0 + tol)) return false;
        }
        return true;
    }
};

inline std::vector<double> block_norms(const Spectrum& s, const LPBank& bank) {
    std::vector<double> out(bank.size());
    for (std::size_t i = 0; i < bank.size(); ++i) {
        const auto& b = bank.block(i);
        double acc = 0.0;
        for (std::size_t k = 0; k < s.grid.n; ++k) acc += std::norm(b.multiplier(s.grid.xi(k)) * s.coeffs[k]);
        out[i] = std::sqrt(acc / s.grid.length);
    }
    return out;
}

// Smallest slowly varying majorant of lambda^s ||P_lambda f||:
// c_lambda = max_mu mu^s ||P_mu f|| 2^{-|log2(lambda/mu)|}.
inline FrequencyEnvelope envelope_of(const Field& f, double sobolev, const LPBank& bank) {
    const auto norms = block_norms(forward(f), bank);
    std::vector<double> raw(bank.size());
    for (std::size_t i = 0; i < bank.size(); ++i) raw[i] = std::pow(bank.block(i).lambda, sobolev) * norms[i];
    FrequencyEnvelope env;
    for (std::size_t i = 0; i < bank.size(); ++i) {
        double c = 0.0;
        for (std::size_t j = 0; j < bank.size(); ++j) {
            const double d = std::abs(static_cast<double>(i) - static_cast<double>(j));
            c = std::max(c, raw[j] * std::pow(2.0, -d));
        }
        env.weights[bank.block(i).lambda] = c;
    }
    return env;
}

// sqrt(sum_lambda lambda^{2s} sup_t ||P_lambda u(t)||^2)
inline double energy_norm(const Trajectory& traj, double sobolev, const LPBank& bank) {
    if (traj.size() == 0) throw std::invalid_argument("energy_norm: empty trajectory");
    std::vector<double> sup(bank.size(), 0.0);
    for (std::size_t n = 0; n < traj.size(); ++n) {
        const auto norms = block_norms(forward(traj.field(n)), bank);
        for (std::size_t i = 0; i < bank.size(); ++i) sup[i] = std::max(sup[i], norms[i] * norms[i]);
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < bank.size(); ++i) acc += std::pow(bank.block(i).lambda, 2.0 * sobolev) * sup[i];
    return std::sqrt(acc);
}

// trapezoid weights for the sample times
inline std::vector<double> trapezoid_weights(const std::vector<double>& t) {
    std::vector<double> w(t.size(), 0.0);
    if (t.size() < 2) return w;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        const double h = t[i + 1] - t[i];
        w[i] += 0.5 * h;
        w[i + 1] += 0.5 * h;
    }
    return w;
}

// For each block: the space-time integrals int ||chi_j d_x P_lambda u||^2 dt for every window j.
inline std::vector<std::vector<double>> windowed_derivative_integrals(const Trajectory& traj, const LPBank& bank,
                                                                     const std::vector<const WindowFamily*>& fams) {
    if (traj.size() < 2) throw std::invalid_argument("local energy: need at least two snapshots");
    if (fams.size() != bank.size()) throw std::invalid_argument("local energy: one window family per block");
    const auto wt = trapezoid_weights(traj.times);
    std::vector<std::vector<double>> acc(bank.size());
    for (std::size_t b = 0; b < bank.size(); ++b) acc[b].assign(fams[b]->size(), 0.0);
    const double dx = traj.grid.spacing();
    for (std::size_t n = 0; n < traj.size(); ++n) {
        const Spectrum s = forward(traj.field(n));
        for (std::size_t b = 0; b < bank.size(); ++b) {
            const auto& blk = bank.block(b);
            Spectrum d = apply_multiplier(s, [&](double xi) { return cplx(0.0, xi) * blk.multiplier(xi); });
            const Field w = inverse(d);
            const auto& fam = *fams[b];
            for (std::size_t j = 0; j < fam.size(); ++j) {
                const auto& sp = fam.support(j);
                double loc = 0.0;
                for (std::size_t q = 0; q < sp.idx.size(); ++q) loc += sp.val[q] * sp.val[q] * std::norm(w.values[sp.idx[q]]);
                acc[b][j] += wt[n] * loc * dx;
            }
        }
    }
    return acc;
}

// sqrt(sum_lambda lambda^{-2s-2} sup_j int ||chi_j d_x P_lambda u||^2 dt), windows at scale lambda^{1+4s}
inline double local_energy_norm(const Trajectory& traj, double sobolev, const LPBank& bank) {
    std::vector<WindowFamily> fams;
    fams.reserve(bank.size());
    for (const auto& b : bank.blocks()) fams.emplace_back(traj.grid, std::pow(b.lambda, 1.0 + 4.0 * sobolev));
    std::vector<const WindowFamily*> ptrs;
    for (auto& f : fams) ptrs.push_back(&f);
    const auto acc = windowed_derivative_integrals(traj, bank, ptrs);
    double total = 0.0;
    for (std::size_t b = 0; b < bank.size(); ++b) {
        const double sup = *std::max_element(acc[b].begin(), acc[b].end());
        total += std::pow(bank.block(b).lambda, -2.0 * sobolev - 2.0) * sup;
    }
    return std::sqrt(total);
}

}  // namespace nlslab
