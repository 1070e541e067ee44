#pragma once
// Experiment drivers, rough-data generation, and all file output.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <fftw3.h>

#include "nlslab/config.hpp"
#include "nlslab/dyadic.hpp"
#include "nlslab/energy.hpp"
#include "nlslab/rng.hpp"
#include "nlslab/semiclassical.hpp"
#include "nlslab/solver.hpp"
#include "nlslab/spacetime.hpp"
#include "nlslab/spectral.hpp"
#include "nlslab/symbols.hpp"

namespace nlslab {

inline constexpr const char* version_string = "0.1.0";

// ---- results

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    static std::string cell(double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }
    static std::string cell(bool b) { return b ? "1" : "0"; }
    static std::string cell(std::size_t v) { return std::to_string(v); }
    static std::string cell(int v) { return std::to_string(v); }

    template <class... T>
    void add(const T&... v) {
        std::vector<std::string> r{cell(v)...};
        if (r.size() != columns.size()) throw std::logic_error("Table " + name + ": row width mismatch");
        rows.push_back(std::move(r));
    }
};

struct RunRecord {
    std::string experiment;
    std::uint64_t config_hash = 0;
    std::vector<std::pair<std::string, double>> scalars;
    std::string status = "pass";
    bool pass = true;

    void scalar(const std::string& k, double v) { scalars.emplace_back(k, v); }
    double get(const std::string& k) const {
        for (const auto& kv : scalars)
            if (kv.first == k) return kv.second;
        throw std::out_of_range("RunRecord: no scalar " + k);
    }
    void fail(const std::string& why) {
        pass = false;
        status = why;
    }
};

struct ExperimentResult {
    RunRecord record;
    std::vector<Table> tables;
    std::vector<std::pair<std::string, Snapshot>> snapshots;
};

// ---- configuration

struct ExperimentConfig {
    std::string experiment;
    Grid grid{1024, 8.0 * pi};
    SolverConfig solver;
    double s = -0.25, lambda = 8.0, eps = 0.05;
    std::size_t ensemble = 20;
    std::size_t threads = 0;  // 0: hardware concurrency
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    Config raw;

    std::uint64_t hash() const { return raw.hash(); }
};

inline const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{"simulate",  "energy-scan",    "local-energy", "probe-bilinear",
                                                "probe-quad", "variation",      "semiclassical", "satsuma-yajima",
                                                "theorem1",  "saturation",     "rescale-check"};
    return names;
}

inline ExperimentConfig experiment_config(const Config& c) {
    ExperimentConfig e;
    e.experiment = c.string("experiment");
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), e.experiment) == names.end()) {
        std::string list;
        for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
        throw ConfigError("unknown experiment '" + e.experiment + "'; available: " + list, "experiment");
    }
    const long n = c.integer("grid.n", 1024);
    if (n < 8) throw ConfigError("grid size must be at least 8", "grid.n");
    double len = 8.0 * pi;
    if (c.has("grid.length") && c.has("grid.length_pi")) throw ConfigError("give grid.length or grid.length_pi, not both", "grid.length");
    if (c.has("grid.length")) len = c.number("grid.length");
    if (c.has("grid.length_pi")) len = c.number("grid.length_pi") * pi;
    if (!(len > 0.0)) throw ConfigError("grid length must be positive", "grid.length");
    e.grid = Grid(static_cast<std::size_t>(n), len);

    try {
        e.solver.sign = sign_from_string(c.string("solver.sign", "focusing"));
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(ex.what(), "solver.sign");
    }
    e.solver.dt = c.number("solver.dt", 5e-5);
    e.solver.t_end = c.number("solver.t_end", 1.0);
    e.solver.output_stride = c.count("solver.output_stride", 100);
    try {
        e.solver.dealias = dealias_from_string(c.string("solver.dealias", "two_thirds"));
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(ex.what(), "solver.dealias");
    }
    e.solver.tail_guard_tol = c.number("solver.tail_guard_tol", 1e-8);
    e.solver.nonlinear = c.boolean("solver.nonlinear", true);
    e.solver.phase_guard = c.number("solver.phase_guard", 0.5);
    try {
        validate_config(e.solver, e.grid);
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(ex.what(), "solver.dt");
    }

    e.s = c.number("symbol.s", -0.25);
    e.lambda = c.number("symbol.lambda", 8.0);
    e.eps = c.number("symbol.eps", 0.05);
    if (!(e.lambda > 0.0)) throw ConfigError("Lambda must be positive", "symbol.lambda");
    if (!(e.eps > 0.0)) throw ConfigError("epsilon must be positive", "symbol.eps");
    e.ensemble = c.count("ensemble.size", 20);
    e.threads = c.count("ensemble.threads", 0);
    e.seed = c.seed("seed", 1);
    e.out_dir = c.string("output.dir", "out");
    e.raw = c;  // after the reads above, so their keys count as used
    return e;
}

// ---- initial data

// Independent complex Gaussian coefficients shaped by the envelope:
// u^(xi) = z(xi) sum_lambda m_lambda(xi) w_lambda lambda^{-s} / sqrt(n_lambda), then rescaled to ||u||_{H^s_Lambda} = eps.
inline Field rough_data(const Grid& g, const FrequencyEnvelope& env, double eps, std::uint64_t seed, double s,
                        double lam, std::uint64_t stream = 0) {
    if (!(eps > 0.0)) throw std::invalid_argument("rough_data: eps must be positive");
    if (env.weights.empty()) throw std::invalid_argument("rough_data: empty envelope");
    const LPBank bank(g, lam);
    std::vector<double> w(bank.size(), 0.0);
    bool any = false;
    for (const auto& kv : env.weights) {
        if (!(kv.second >= 0.0) || !std::isfinite(kv.second)) throw std::invalid_argument("rough_data: envelope weights must be finite and >= 0");
        bool found = false;
        for (std::size_t i = 0; i < bank.size(); ++i)
            if (std::abs(bank.block(i).lambda - kv.first) <= 1e-12 * kv.first) {
                w[i] = kv.second;
                found = true;
            }
        if (!found) throw std::invalid_argument("rough_data: envelope frequency " + std::to_string(kv.first) + " is not a block of the bank");
        any = any || kv.second > 0.0;
    }
    if (!any) throw std::invalid_argument("rough_data: envelope is identically zero");
    std::vector<double> nb(bank.size(), 0.0);
    for (std::size_t i = 0; i < bank.size(); ++i)
        for (std::size_t k = 0; k < g.n; ++k) {
            const double m = bank.block(i).multiplier(g.xi(k));
            nb[i] += m * m;
        }
    Philox rng(seed, stream);
    Spectrum sp(g);
    for (std::size_t k = 0; k < g.n; ++k) {
        const cplx z = rng.complex_normal();  // drawn for every mode so the stream layout does not depend on the envelope
        double shape = 0.0;
        for (std::size_t i = 0; i < bank.size(); ++i)
            if (w[i] > 0.0 && nb[i] > 0.0)
                shape += bank.block(i).multiplier(g.xi(k)) * w[i] * std::pow(bank.block(i).lambda, -s) / std::sqrt(nb[i]);
        sp.coeffs[k] = shape * z;
    }
    const double nrm = hs_norm(sp, s, lam);
    if (!(nrm > 0.0)) throw std::domain_error("rough_data: generated field vanished");
    for (auto& c : sp.coeffs) c *= eps / nrm;
    return inverse(sp);
}

// flat envelope on the blocks of the bank with lambda <= lambda_max
inline FrequencyEnvelope flat_envelope(const Grid& g, double lam, double lambda_max) {
    const LPBank bank(g, lam);
    FrequencyEnvelope env;
    for (const auto& b : bank.blocks())
        if (b.lambda <= lambda_max * (1.0 + 1e-12) && b.kind != DyadicBlock::Kind::top) env.weights[b.lambda] = 1.0;
    if (env.weights.empty()) throw std::invalid_argument("flat_envelope: no block below lambda_max");
    return env;
}

// smooth band-limited random data on |xi| <= xi_max, normalised in H^s_Lambda
inline Field band_data(const Grid& g, double xi_max, double eps, double s, double lam, std::uint64_t seed,
                       std::uint64_t stream = 0) {
    if (!(xi_max > 0.0)) throw std::invalid_argument("band_data: xi_max must be positive");
    Philox rng(seed, stream);
    Spectrum sp(g);
    for (std::size_t k = 0; k < g.n; ++k) {
        const cplx z = rng.complex_normal();
        const double xi = g.xi(k);
        if (std::abs(xi) <= xi_max) sp.coeffs[k] = z * lp_bump(2.0 * xi / xi_max);
    }
    const double nrm = hs_norm(sp, s, lam);
    if (!(nrm > 0.0)) throw std::invalid_argument("band_data: no modes inside the band");
    for (auto& c : sp.coeffs) c *= eps / nrm;
    return inverse(sp);
}

// data.kind = soliton | sech | rough | band
inline Field initial_data(const ExperimentConfig& e, std::uint64_t stream = 0) {
    const Config& c = e.raw;
    const std::string kind = c.string("data.kind", "rough");
    const Grid& g = e.grid;
    if (kind == "soliton") {
        const double b = c.number("data.b", std::sqrt(0.5));
        Field f = soliton_field(g, b, 0.0, g.center() + c.number("data.x0", 0.0));
        const double v = c.number("data.velocity", 0.0);
        return v == 0.0 ? f : galilean_shift(f, v);
    }
    if (kind == "sech") {
        const double amp = c.number("data.amplitude", 1.0), b = c.number("data.b", std::sqrt(0.5));
        Field f(g);
        for (std::size_t j = 0; j < g.n; ++j) f.values[j] = amp / std::cosh(b * (g.x(j) - g.center()));
        return f;
    }
    if (kind == "rough") {
        FrequencyEnvelope env;
        if (c.has("data.envelope")) {
            const auto w = c.array("data.envelope");
            const LPBank bank(g, e.lambda);
            if (w.size() > bank.size()) throw ConfigError("more envelope weights than blocks", "data.envelope");
            for (std::size_t i = 0; i < w.size(); ++i) env.weights[bank.block(i).lambda] = w[i];
        } else {
            env = flat_envelope(g, e.lambda, c.number("data.lambda_max", 16.0));
        }
        return rough_data(g, env, e.eps, e.seed, e.s, e.lambda, stream);
    }
    if (kind == "band") return band_data(g, c.number("data.xi_max", 16.0), e.eps, e.s, e.lambda, e.seed, stream);
    throw ConfigError("unknown data kind '" + kind + "' (soliton, sech, rough, band)", "data.kind");
}

// ---- work pool: members run concurrently, results land in their own slot

template <class Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mu;
    for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(err_mu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

// ---- experiments

struct EnsembleMember {
    std::size_t index = 0;
    double initial_norm = 0.0;
    double max_ratio = 0.0;
    double final_time = 0.0;
    std::string status = "ok";
};

// sup_t ||u(t)||_{H^s_Lambda} / ||u0||_{H^s_Lambda} over the stored snapshots
inline EnsembleMember ensemble_member(const Field& u0, const SolverConfig& cfg, double s, double lam) {
    EnsembleMember m;
    m.initial_norm = hs_norm(u0, s, lam);
    try {
        const Trajectory traj = evolve(u0, cfg);
        for (std::size_t i = 0; i < traj.size(); ++i) m.max_ratio = std::max(m.max_ratio, hs_norm(traj.field(i), s, lam) / m.initial_norm);
        m.final_time = traj.times.back();
    } catch (const SolverAbort& ex) {
        m.status = std::string("abort: ") + ex.what();
        m.max_ratio = std::numeric_limits<double>::quiet_NaN();
    }
    return m;
}

inline ExperimentResult theorem1_ensemble(const ExperimentConfig& e) {
    if (!(e.s >= -0.25 && e.s < 0.0)) throw ConfigError("theorem1 needs s in [-1/4, 0)", "symbol.s");
    if (!(e.lambda >= 1.0)) throw ConfigError("theorem1 needs Lambda >= 1", "symbol.lambda");
    const double eps_max = e.raw.number("theorem1.eps_max", 1.0);
    const double bound = e.raw.number("theorem1.bound", 2.0);
    if (e.eps > eps_max) throw ConfigError("epsilon above the configured threshold theorem1.eps_max", "symbol.eps");
    if (e.ensemble == 0) throw ConfigError("ensemble must not be empty", "ensemble.size");
    initial_data(e, 0);  // surface data errors before launching the pool
    std::vector<EnsembleMember> members(e.ensemble);
    parallel_for(e.ensemble, e.threads, [&](std::size_t i) {
        members[i] = ensemble_member(initial_data(e, i), e.solver, e.s, e.lambda);
        members[i].index = i;
    });
    ExperimentResult r;
    Table t{"theorem1", {"member", "initial_norm", "max_ratio", "final_time", "status"}, {}};
    double worst = 0.0;
    std::size_t aborted = 0;
    for (const auto& m : members) {
        t.add(m.index, m.initial_norm, m.max_ratio, m.final_time, m.status);
        if (m.status != "ok") ++aborted;
        else worst = std::max(worst, m.max_ratio);
    }
    r.tables.push_back(t);
    r.record.scalar("max_ratio", worst);
    r.record.scalar("margin", bound - worst);
    r.record.scalar("aborted", static_cast<double>(aborted));
    if (aborted) r.record.fail("numeric failure: " + std::to_string(aborted) + " members aborted");
    else if (!(worst <= bound)) r.record.fail("numeric failure: ratio above bound");
    return r;
}

struct SaturationRow {
    double exponent = 0.0, lambda = 0.0, sigma = 0.0, b = 0.0;
    double le_norm = 0.0, data_norm = 0.0, value = 0.0;
};

// zero-speed soliton Q_sigma = sigma sech(sigma x / sqrt 2), sigma = Lambda^p. The norm is homogeneous, so the
// exact soliton is evolved and its local-energy norm divided by its H^s_Lambda size.
inline SaturationRow saturation_point(const Grid& g, double lam, double p, double s, const SolverConfig& cfg) {
    SaturationRow row;
    row.exponent = p;
    row.lambda = lam;
    row.sigma = std::pow(lam, p);
    row.b = row.sigma / std::sqrt(2.0);
    const Field q = soliton_field(g, row.b, 0.0);
    const Trajectory traj = evolve(q, cfg);
    row.le_norm = local_energy_norm(traj, s, LPBank(g, lam));
    row.data_norm = hs_norm(q, s, lam);
    row.value = row.le_norm / row.data_norm;
    return row;
}

inline ExperimentResult soliton_saturation(const ExperimentConfig& e) {
    if (e.solver.sign != Sign::focusing) throw ConfigError("saturation needs the focusing sign", "solver.sign");
    const auto lams = e.raw.array("saturation.lambdas", {4.0, 16.0, 64.0});
    const auto exps = e.raw.array("saturation.exponents", {0.5, 0.25});
    const double tol = e.raw.number("saturation.slope_tol", 0.15);
    if (lams.size() < 2) throw ConfigError("need at least two Lambda values", "saturation.lambdas");
    std::vector<SaturationRow> rows(lams.size() * exps.size());
    parallel_for(rows.size(), e.threads, [&](std::size_t i) {
        rows[i] = saturation_point(e.grid, lams[i % lams.size()], exps[i / lams.size()], e.s, e.solver);
    });
    ExperimentResult r;
    Table t{"saturation", {"exponent", "Lambda", "sigma", "b", "le_norm", "data_norm", "value"}, {}};
    for (const auto& x : rows) t.add(x.exponent, x.lambda, x.sigma, x.b, x.le_norm, x.data_norm, x.value);
    r.tables.push_back(t);
    Table sl{"saturation_slopes", {"exponent", "slope"}, {}};
    for (std::size_t k = 0; k < exps.size(); ++k) {
        rvec x, y;
        for (std::size_t i = 0; i < lams.size(); ++i) {
            x.push_back(lams[i]);
            y.push_back(rows[k * lams.size() + i].value);
        }
        const double slope = loglog_slope(x, y);
        sl.add(exps[k], slope);
        r.record.scalar("slope_p" + Table::cell(exps[k]), slope);
        if (exps[k] == 0.5 && !(std::abs(slope) <= tol)) r.record.fail("numeric failure: saturating slope off zero");
        if (exps[k] < 0.5 && !(slope < 0.0)) r.record.fail("numeric failure: sub-saturating slope not negative");
    }
    r.tables.push_back(sl);
    return r;
}

inline ExperimentResult rescale_corollary_check(const ExperimentConfig& e) {
    const auto ms = e.raw.array("rescale.exponents", {0.0, -1.0, -2.0});
    const double tol = e.raw.number("rescale.tol", 1e-10);
    const double bound = e.raw.number("theorem1.bound", 2.0);
    const std::size_t members = e.raw.count("rescale.members", std::min<std::size_t>(e.ensemble, 4));
    if (members == 0) throw ConfigError("need at least one member", "rescale.members");
    for (double m : ms)
        if (m != std::round(m) || std::abs(m) > 10) throw ConfigError("exponents must be small integers", "rescale.exponents");
    struct Row {
        std::size_t member = 0;
        int m = 0;
        double mu = 1, norm_err = 0, commute_err = 0, ratio = 0;
        std::string status = "ok";
    };
    std::vector<Row> rows(members * ms.size());
    parallel_for(rows.size(), e.threads, [&](std::size_t i) {
        Row& row = rows[i];
        row.member = i / ms.size();
        row.m = static_cast<int>(ms[i % ms.size()]);
        row.mu = std::ldexp(1.0, row.m);
        const Field u0 = initial_data(e, row.member);
        const Field v0 = dyadic_rescale(u0, row.m);
        // ||u_mu||_{H^s_{mu Lambda}} = mu^{1/2+s} ||u||_{H^s_Lambda}
        const double lhs = hs_norm(v0, e.s, row.mu * e.lambda), rhs = std::pow(row.mu, 0.5 + e.s) * hs_norm(u0, e.s, e.lambda);
        row.norm_err = std::abs(lhs - rhs) / rhs;
        SolverConfig c = e.solver, cm = e.solver;
        cm.dt = c.dt / (row.mu * row.mu);
        cm.t_end = c.t_end / (row.mu * row.mu);
        try {
            const Trajectory a = evolve(u0, c), b = evolve(v0, cm);
            const Field ua = dyadic_rescale(a.field(a.size() - 1), row.m), ub = b.field(b.size() - 1);
            double d = 0.0;
            for (std::size_t j = 0; j < ua.grid.n; ++j) d += std::norm(ua.values[j] - ub.values[j]);
            row.commute_err = std::sqrt(d * ua.grid.spacing() / mass(ub));
            const double n0 = hs_norm(v0, e.s, e.lambda);
            for (std::size_t k = 0; k < b.size(); ++k) row.ratio = std::max(row.ratio, hs_norm(b.field(k), e.s, e.lambda) / n0);
        } catch (const SolverAbort& ex) {
            row.status = std::string("abort: ") + ex.what();
        }
    });
    ExperimentResult r;
    Table t{"rescale", {"member", "m", "mu", "T_window", "norm_identity_err", "commute_err", "max_ratio", "window_pass", "status"}, {}};
    double worst_norm = 0, worst_comm = 0;
    bool ok = true;
    for (const auto& x : rows) {
        const bool wp = x.status == "ok" && x.ratio <= bound;
        t.add(x.member, x.m, x.mu, e.solver.t_end / (x.mu * x.mu), x.norm_err, x.commute_err, x.ratio, wp, x.status);
        worst_norm = std::max(worst_norm, x.norm_err);
        if (x.status == "ok") worst_comm = std::max(worst_comm, x.commute_err);
        else ok = false;
    }
    r.tables.push_back(t);
    r.record.scalar("max_norm_identity_err", worst_norm);
    r.record.scalar("max_commute_err", worst_comm);
    if (!ok) r.record.fail("numeric failure: solver abort");
    else if (!(worst_norm < tol && worst_comm < tol)) r.record.fail("numeric failure: scaling identity");
    return r;
}

inline ExperimentResult simulate_experiment(const ExperimentConfig& e) {
    const Field u0 = initial_data(e);
    ExperimentResult r;
    Trajectory traj;
    try {
        traj = evolve(u0, e.solver);
    } catch (const SolverAbort& ex) {
        r.record.fail(std::string("numeric failure: ") + ex.what());
        return r;
    }
    Table t{"simulate", {"t", "mass", "hs_norm", "top_octave_fraction"}, {}};
    const double m0 = mass(u0);
    double drift = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const Field f = traj.field(i);
        const Spectrum s = forward(f);
        t.add(traj.times[i], mass(f), hs_norm(s, e.s, e.lambda), top_octave_fraction(s));
        drift = std::max(drift, std::abs(mass(f) - m0) / m0);
    }
    r.tables.push_back(t);
    r.record.scalar("max_relative_mass_drift", drift);
    if (e.raw.boolean("output.snapshots", false))
        for (std::size_t i = 0; i < traj.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof name, "snap_%05zu.rwf", i);
            r.snapshots.push_back({name, Snapshot{traj.field(i), traj.times[i]}});
        }
    return r;
}

inline ExperimentResult energy_scan_experiment(const ExperimentConfig& e) {
    const Config& c = e.raw;
    const Symbol a = power_symbol(c.number("energy.mu", 1.0), c.number("energy.symbol_eps", 0.01));
    const long cap = c.integer("energy.band", static_cast<long>(e.grid.n / 3));
    const Band band = symmetric_band(e.grid, cap);
    EngineKind kind;
    try {
        kind = engine_from_string(c.string("energy.engine", "naive"));
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(ex.what(), "energy.engine");
    }
    const double tol = c.number("energy.tol", 1e-6);
    const bool halving = c.boolean("energy.halving", true);
    const Field u0 = initial_data(e);
    ExperimentResult r;
    std::vector<double> spacings{e.solver.dt * static_cast<double>(e.solver.output_stride)};
    if (halving) spacings.push_back(0.5 * spacings[0]);
    Table sum{"energy_summary", {"spacing", "max_residual", "max_abs_R6", "relation_sign", "max_residual_R4", "too_coarse"}, {}};
    rvec res;
    for (std::size_t k = 0; k < spacings.size(); ++k) {
        SolverConfig cfg = e.solver;
        if (k) cfg.dt = 0.5 * e.solver.dt;  // same stride, half the output spacing
        Trajectory traj;
        try {
            traj = evolve(u0, cfg);
        } catch (const SolverAbort& ex) {
            r.record.fail(std::string("numeric failure: ") + ex.what());
            return r;
        }
        const auto rep = quasi_energy_scan(traj, a, cfg.sign, kind, band);
        res.push_back(rep.max_residual);
        sum.add(spacings[k], rep.max_residual, rep.max_abs_r6, rep.relation_sign, rep.max_residual_r4, rep.too_coarse);
        Table t{k ? "energy_scan_half" : "energy_scan", {"t", "E0", "E1", "Etot", "dEtot_dt", "R6", "residual"}, {}};
        for (std::size_t i = 0; i < rep.t.size(); ++i) t.add(rep.t[i], rep.e0[i], rep.e1[i], rep.etot[i], rep.detot_dt[i], rep.r6[i], rep.residual[i]);
        r.tables.push_back(t);
        if (k == 0) {
            r.record.scalar("relation_sign", rep.relation_sign);
            r.record.scalar("max_abs_r6", rep.max_abs_r6);
        }
    }
    r.tables.push_back(sum);
    r.record.scalar("max_residual", res[0]);
    if (halving) r.record.scalar("halving_ratio", res[0] / res[1]);
    if (!(res[0] < tol)) r.record.fail("numeric failure: residual above tolerance");
    return r;
}

inline ExperimentResult local_energy_experiment(const ExperimentConfig& e) {
    const Field u0 = initial_data(e);
    ExperimentResult r;
    Trajectory traj;
    try {
        traj = evolve(u0, e.solver);
    } catch (const SolverAbort& ex) {
        r.record.fail(std::string("numeric failure: ") + ex.what());
        return r;
    }
    const LPBank bank(e.grid, e.lambda);
    const double le = local_energy_norm(traj, e.s, bank), en = energy_norm(traj, e.s, bank);
    const double d0 = hs_norm(u0, e.s, e.lambda);
    const Symbol a = power_symbol(e.lambda, e.raw.number("local.symbol_eps", 0.01));
    const double lhs = local_energy_lhs(traj, a, e.lambda);
    Table t{"local_energy", {"quantity", "value"}, {}};
    t.add("data_norm", d0);
    t.add("energy_norm", en);
    t.add("local_energy_norm", le);
    t.add("local_energy_lhs", lhs);
    r.tables.push_back(t);
    r.record.scalar("local_energy_norm", le);
    r.record.scalar("energy_norm", en);
    r.record.scalar("local_energy_lhs", lhs);
    return r;
}

inline ExperimentResult bilinear_experiment(const ExperimentConfig& e) {
    BilinearOptions o;
    o.grid = e.grid;
    o.trials = e.raw.count("probe.trials", 20);
    o.seed = e.seed;
    o.shift = e.raw.number("probe.shift", 0.0);
    const auto lams = e.raw.array("probe.lambdas", {4.0, 8.0, 16.0, 32.0});
    const double tol = e.raw.number("probe.slope_tol", 0.1);
    if (lams.size() < 2) throw ConfigError("need at least two frequencies", "probe.lambdas");
    std::vector<BilinearResult> res(lams.size());
    parallel_for(lams.size(), e.threads, [&](std::size_t i) { res[i] = bilinear_probe(lams[i], o); });
    ExperimentResult r;
    Table t{"bilinear", {"lambda", "window", "max_constant", "mean_constant"}, {}};
    rvec y;
    for (const auto& x : res) {
        double mean = 0.0;
        for (double c : x.constants) mean += c;
        mean /= static_cast<double>(x.constants.size());
        t.add(x.lambda, x.window, x.max_constant, mean);
        y.push_back(x.max_constant);
    }
    r.tables.push_back(t);
    const double slope = loglog_slope(lams, y);
    r.record.scalar("slope", slope);
    r.record.scalar("max_constant", *std::max_element(y.begin(), y.end()));
    if (!(std::abs(slope) <= tol)) r.record.fail("numeric failure: slope outside tolerance");
    return r;
}

inline ExperimentResult quad_experiment(const ExperimentConfig& e) {
    QuadOptions o;
    o.grid = e.grid;
    o.trials = e.raw.count("probe.trials", 10);
    o.seed = e.seed;
    const std::string cs = e.raw.string("probe.case", "A2");
    QuadCase which;
    if (cs == "A2") which = QuadCase::A2;
    else if (cs == "B") which = QuadCase::B;
    else throw ConfigError("case must be A2 or B", "probe.case");
    const auto l = e.raw.array("probe.lambdas", {4.0, 4.0, 8.0, 8.0});
    if (l.size() != 4) throw ConfigError("exactly four frequencies", "probe.lambdas");
    const double lams[4] = {l[0], l[1], l[2], l[3]};
    const auto q = quad_J_probe(which, lams, o);
    ExperimentResult r;
    Table t{"quad", {"trial", "constant"}, {}};
    for (std::size_t i = 0; i < q.constants.size(); ++i) t.add(i, q.constants[i]);
    r.tables.push_back(t);
    r.record.scalar("window", q.window);
    r.record.scalar("max_constant", q.max_constant);
    return r;
}

inline ExperimentResult variation_experiment(const ExperimentConfig& e) {
    const Field u0 = initial_data(e);
    ExperimentResult r;
    Trajectory traj;
    try {
        traj = evolve(u0, e.solver);
    } catch (const SolverAbort& ex) {
        r.record.fail(std::string("numeric failure: ") + ex.what());
        return r;
    }
    const auto v = v2_variation(traj, e.raw.boolean("variation.pullback", true), e.raw.boolean("variation.terminal_zero", false));
    Table t{"variation_partition", {"index", "t"}, {}};
    for (std::size_t i : v.partition) t.add(i, i < traj.size() ? traj.times[i] : std::numeric_limits<double>::infinity());
    r.tables.push_back(t);
    r.record.scalar("v2", v.value);
    r.record.scalar("data_l2", std::sqrt(mass(u0)));
    return r;
}

inline ExperimentResult semiclassical_experiment(const ExperimentConfig& e) {
    const Config& c = e.raw;
    SemiclassicalCompareOptions o;
    o.grid = e.grid;
    o.kappa = c.number("semi.kappa", 4.0);
    o.b = c.number("semi.b", 1.0);
    o.dt = e.solver.dt;
    o.t_end = e.solver.t_end;
    o.samples = c.count("semi.samples", 20);
    try {
        o.variant = aks_variant_from_string(c.string("semi.variant", "consistent"));
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(ex.what(), "semi.variant");
    }
    const auto rep = semiclassical_compare(o);
    ExperimentResult r;
    Table t{"semiclassical", {"t", "distance", "rel_distance", "past_caustic", "aks_failed"}, {}};
    for (const auto& x : rep.rows) t.add(x.t, x.distance, x.rel_distance, x.past_caustic, x.aks_failed);
    r.tables.push_back(t);
    Table w{"aks_variants", {"variant", "newton_residual", "whitham_mass_eq", "whitham_momentum_eq"}, {}};
    const double lam = c.number("semi.check_lambda", 4.0), tc = c.number("semi.check_t", 0.05);
    for (AKSVariant v : {AKSVariant::verbatim, AKSVariant::lambda_t, AKSVariant::consistent}) {
        const auto q = aks_whitham_residual(Grid(512, 40.0), lam, tc, v, 5e-4);
        w.add(to_string(v), q.newton_residual, q.mass_eq, q.momentum_eq);
        if (v == o.variant) r.record.scalar("whitham_residual", q.max());
    }
    r.tables.push_back(w);
    r.record.scalar("lambda", rep.lambda);
    r.record.scalar("caustic_time", rep.caustic_time);
    if (rep.status != "ok") r.record.fail("numeric failure: " + rep.status);
    return r;
}

inline ExperimentResult satsuma_yajima_experiment(const ExperimentConfig& e) {
    const Config& c = e.raw;
    RecurrenceOptions o;
    o.grid = e.grid;
    o.b = c.number("sy.b", o.b);
    o.dt = e.solver.dt;
    o.periods = c.number("sy.periods", 3.0);
    o.output_stride = e.solver.output_stride;
    o.threshold = c.number("sy.threshold", 0.99);
    const long n = c.integer("sy.lambda_int", 2);
    if (n < 1 || n > 3) throw ConfigError("integer amplitude must be 1, 2 or 3", "sy.lambda_int");
    const auto rep = satsuma_yajima_run(static_cast<int>(n), o);
    ExperimentResult r;
    Table t{"satsuma_yajima", {"t", "fidelity", "width", "L2_distance", "caustic_flag"}, {}};
    for (std::size_t i = 0; i < rep.times.size(); ++i)
        t.add(rep.times[i], rep.fidelity[i], rep.width[i], rep.distance[i], rep.times[i] >= rep.caustic_time);
    r.tables.push_back(t);
    Table rec{"recurrences", {"t", "fidelity"}, {}};
    for (std::size_t i = 0; i < rep.recurrence_times.size(); ++i) rec.add(rep.recurrence_times[i], rep.recurrence_fidelity[i]);
    r.tables.push_back(rec);
    r.record.scalar("predicted_period", rep.predicted_period);
    r.record.scalar("predicted_period_unit_width", rep.predicted_period_unit_width);
    r.record.scalar("measured_period", rep.measured_period);
    r.record.scalar("reference_period", rep.reference_period);
    r.record.scalar("convention_factor", rep.convention_factor);
    r.record.scalar("min_fidelity", rep.min_fidelity);
    if (rep.status != "ok") r.record.fail("numeric failure: " + rep.status);
    else if (n >= 2 && rep.recurrence_times.empty()) r.record.fail("numeric failure: no recurrence detected");
    return r;
}

inline ExperimentResult run_experiment(const ExperimentConfig& e) {
    static const std::map<std::string, std::function<ExperimentResult(const ExperimentConfig&)>> table{
        {"simulate", simulate_experiment},          {"energy-scan", energy_scan_experiment},
        {"local-energy", local_energy_experiment},  {"probe-bilinear", bilinear_experiment},
        {"probe-quad", quad_experiment},            {"variation", variation_experiment},
        {"semiclassical", semiclassical_experiment}, {"satsuma-yajima", satsuma_yajima_experiment},
        {"theorem1", theorem1_ensemble},            {"saturation", soliton_saturation},
        {"rescale-check", rescale_corollary_check}};
    ExperimentResult r;
    try {
        r = table.at(e.experiment)(e);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(ex.what());
    }
    r.record.experiment = e.experiment;
    r.record.config_hash = e.hash();
    const auto unused = e.raw.unused();
    if (!unused.empty()) throw ConfigError("unknown or unused field", unused.front());
    return r;
}

// ---- output (single writer)

inline std::string hex64(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline void write_table_csv(const std::string& path, const Table& t, std::uint64_t hash) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << "# nlslab-csv v1 " << t.name << " config=" << hex64(hash) << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << "\n";
    }
}

inline std::string manifest_text(const ExperimentConfig& e, const RunRecord& rec) {
    std::ostringstream os;
    os << "# nlslab manifest v1\n";
    os << "experiment = \"" << e.experiment << "\"\n";
    os << "config_hash = \"" << hex64(e.hash()) << "\"\n";
    os << "version = \"" << version_string << "\"\n";
    os << "fftw = \"" << fftw_version << "\"\n";
#ifdef __VERSION__
    os << "compiler = \"" << __VERSION__ << "\"\n";
#endif
    os << "rng = \"philox4x32-10, key = seed, counter = (draw, member)\"\n";
    os << "convention.equation = \"i u_t - u_xx + sign u|u|^2 = 0, focusing sign -\"\n";
    os << "convention.sign = \"" << to_string(e.solver.sign) << "\"\n";
    os << "convention.transform = \"u^(xi) = dx sum u_j exp(-i xi x_j)\"\n";
    os << "convention.modulation = \"|tau - xi^2| wrapped on the sampled tau circle\"\n";
    os << "convention.aks_variant = \"" << e.raw.string("semi.variant", "consistent") << "\"\n";
    os << "status = \"" << rec.status << "\"\n";
    for (const auto& kv : rec.scalars) os << "result." << kv.first << " = " << Table::cell(kv.second) << "\n";
    os << "\n[config]\n" << e.raw.canonical();
    return os.str();
}

inline void write_outputs(const ExperimentConfig& e, const ExperimentResult& r) {
    namespace fs = std::filesystem;
    fs::create_directories(e.out_dir);
    for (const auto& t : r.tables) write_table_csv((fs::path(e.out_dir) / (t.name + ".csv")).string(), t, e.hash());
    Table rec{"record", {"key", "value"}, {}};
    rec.add("status", r.record.status);
    for (const auto& kv : r.record.scalars) rec.add(kv.first, kv.second);
    write_table_csv((fs::path(e.out_dir) / "record.csv").string(), rec, e.hash());
    for (const auto& s : r.snapshots) write_snapshot((fs::path(e.out_dir) / s.first).string(), s.second.field, s.second.time);
    std::ofstream os(fs::path(e.out_dir) / "manifest.txt", std::ios::binary);
    if (!os) throw std::runtime_error("cannot write manifest in " + e.out_dir);
    os << manifest_text(e, r.record);
}

enum ExitCode { exit_pass = 0, exit_numeric = 1, exit_config = 2 };

// load, override, run, write; returns the process exit status
inline int run(const Config& cfg, std::ostream& log) {
    try {
        const ExperimentConfig e = experiment_config(cfg);
        const ExperimentResult r = run_experiment(e);
        write_outputs(e, r);
        log << e.experiment << ": " << r.record.status << "\n";
        for (const auto& kv : r.record.scalars) log << "  " << kv.first << " = " << Table::cell(kv.second) << "\n";
        return r.record.pass ? exit_pass : exit_numeric;
    } catch (const ConfigError& ex) {
        log << "error: " << ex.what() << "\n";
        return exit_config;
    } catch (const SolverAbort& ex) {
        log << "numeric failure: " << ex.what() << "\n";
        return exit_numeric;
    } catch (const std::domain_error& ex) {
        log << "numeric failure: " << ex.what() << "\n";
        return exit_numeric;
    }
}

inline int run(const std::string& path, std::ostream& log) {
    try {
        return run(Config::load(path), log);
    } catch (const ConfigError& ex) {
        log << "error: " << ex.what() << "\n";
        return exit_config;
    }
}

}  // namespace nlslab
