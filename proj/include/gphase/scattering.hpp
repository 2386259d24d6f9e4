#pragma once

// Coulomb scattering checks: classical trajectory integration against the
// closed-form deflection law, a Monte Carlo differential cross section, the
// perturbative far-field exponent ledger, and the symbolic homogeneity count
// behind it.

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include <gphase/expr.hpp>
#include <gphase/rng.hpp>

namespace gphase {

// kappa is the coefficient in V = -kappa/r, so kappa > 0 attracts
struct TrajectoryOptions {
    double kappa = 1.0;
    double mu = 1.0;
    double start_radius = 1e8;
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
};

struct TrajectoryResult {
    double theta = 0.0;
    double energy_drift = 0.0;  // relative
    long n_steps = 0;
};

inline TrajectoryResult trajectory(double b, double p0, const TrajectoryOptions& opt = {}) {
    if (!(b > 0.0)) throw std::invalid_argument("impact parameter must be positive");
    if (!(p0 > 0.0)) throw std::invalid_argument("incoming momentum must be positive");
    const double big_l = opt.start_radius;
    if (!(b < big_l)) throw std::invalid_argument("impact parameter exceeds the start radius");

    using State = std::array<double, 4>;  // x, y, px, py in the scattering plane
    const double mu = opt.mu, kappa = opt.kappa;
    auto sys = [mu, kappa](const State& s, State& d, double) {
        const double r2 = s[0] * s[0] + s[1] * s[1];
        const double inv_r3 = 1.0 / (r2 * std::sqrt(r2));
        d[0] = s[2] / mu;
        d[1] = s[3] / mu;
        d[2] = -kappa * s[0] * inv_r3;
        d[3] = -kappa * s[1] * inv_r3;
    };
    auto energy = [mu, kappa](const State& s) {
        return (s[2] * s[2] + s[3] * s[3]) / (2.0 * mu) -
               kappa / std::sqrt(s[0] * s[0] + s[1] * s[1]);
    };

    State s{-std::sqrt(big_l * big_l - b * b), b, p0, 0.0};
    const double e0 = energy(s);

    namespace ode = boost::numeric::odeint;
    auto stepper = ode::make_controlled(opt.abs_tol, opt.rel_tol,
                                        ode::runge_kutta_dopri5<State>());
    const double t_scale = big_l * mu / p0;
    double t = 0.0, dt = 1e-2 * t_scale;
    const double t_max = 16.0 * t_scale;
    TrajectoryResult res;
    while (true) {
        const double r2 = s[0] * s[0] + s[1] * s[1];
        if (r2 > big_l * big_l && s[0] * s[2] + s[1] * s[3] > 0.0) break;
        if (t > t_max) throw std::runtime_error("trajectory failed to leave the interaction region");
        if (!(dt > 1e-14 * t_scale) || res.n_steps > 50000000)
            throw std::runtime_error("step-size collapse in trajectory integration");
        if (ode::fail != stepper.try_step(sys, s, t, dt)) ++res.n_steps;
    }

    res.theta = std::atan2(std::fabs(s[3]), s[2]);
    res.energy_drift = std::fabs(energy(s) - e0) / std::fabs(e0);
    return res;
}

inline double trajectory_angle(double b, double p0, const TrajectoryOptions& opt = {}) {
    return trajectory(b, p0, opt).theta;
}

// closed-form deflection law, the oracle for the integrator
inline double impact_parameter(double theta, double p0, double kappa = 1.0, double mu = 1.0) {
    return std::fabs(kappa) * mu / (p0 * p0 * std::tan(0.5 * theta));
}

inline double rutherford(double theta, double p0, double kappa = 1.0, double mu = 1.0) {
    const double s = std::sin(0.5 * theta);
    return kappa * kappa * mu * mu / (4.0 * p0 * p0 * p0 * p0 * s * s * s * s);
}

struct ScatterConfig {
    double p0 = 1.0;
    double kappa = 1.0;
    double mu = 1.0;
    double b_max = 4.0;
    long n_particles = 1000000;
    int n_bins = 12;
    double theta_min_deg = 30.0;
    double theta_max_deg = 150.0;
    std::uint64_t seed = 1;
    int threads = 1;
    // far-field truncation; the bending beyond radius R falls off like 1/R^2
    double start_radius = 1e4;
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
};

struct CrossSectionBin {
    double theta_lo_deg = 0.0;
    double theta_mid_deg = 0.0;
    double theta_hi_deg = 0.0;
    long count = 0;
    double estimate = 0.0;
    double std_error = 0.0;
    double formula = 0.0;  // Rutherford value averaged over the bin's solid angle
    double ratio = 0.0;
    bool empty = true;
};

struct CrossSectionResult {
    std::vector<CrossSectionBin> bins;
    double chi2 = 0.0;
    int dof = 0;
    std::uint64_t seed = 0;
    double nu = 0.0;
    long n_below = 0;
    long n_above = 0;
    bool any_empty = false;
};

inline CrossSectionResult cross_section(const ScatterConfig& cfg) {
    if (cfg.n_bins < 1) throw std::invalid_argument("need at least one bin");
    if (!(cfg.theta_min_deg > 0.0 && cfg.theta_max_deg < 180.0 &&
          cfg.theta_min_deg < cfg.theta_max_deg))
        throw std::invalid_argument("bins must lie strictly inside (0, 180) degrees");
    if (cfg.n_particles < 1) throw std::invalid_argument("need at least one particle");

    const double deg = std::acos(-1.0) / 180.0;
    const double th_lo = cfg.theta_min_deg * deg, th_hi = cfg.theta_max_deg * deg;
    const double bin_w = (th_hi - th_lo) / cfg.n_bins;

    TrajectoryOptions opt;
    opt.kappa = cfg.kappa;
    opt.mu = cfg.mu;
    opt.start_radius = cfg.start_radius;
    opt.rel_tol = cfg.rel_tol;
    opt.abs_tol = cfg.abs_tol;

    int nt = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
    nt = std::max(1, nt);
    std::vector<std::vector<long>> tallies(static_cast<std::size_t>(nt),
                                           std::vector<long>(static_cast<std::size_t>(cfg.n_bins), 0));
    std::vector<long> below(static_cast<std::size_t>(nt), 0), above(static_cast<std::size_t>(nt), 0);

    auto work = [&](int w) {
        std::vector<long>& local = tallies[static_cast<std::size_t>(w)];
        for (long i = w; i < cfg.n_particles; i += nt) {
            Rng rng = Rng::for_sample(cfg.seed, static_cast<std::uint64_t>(i));
            const double b = cfg.b_max * std::sqrt(rng.uniform_pos());
            const double th = trajectory_angle(b, cfg.p0, opt);
            if (th < th_lo) {
                ++below[static_cast<std::size_t>(w)];
            } else if (th >= th_hi) {
                ++above[static_cast<std::size_t>(w)];
            } else {
                int j = static_cast<int>((th - th_lo) / bin_w);
                j = std::min(j, cfg.n_bins - 1);
                ++local[static_cast<std::size_t>(j)];
            }
        }
    };
    if (nt == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nt));
        for (int w = 0; w < nt; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }

    CrossSectionResult res;
    res.seed = cfg.seed;
    res.nu = static_cast<double>(cfg.n_particles) / (std::acos(-1.0) * cfg.b_max * cfg.b_max);
    for (int w = 0; w < nt; ++w) {
        res.n_below += below[static_cast<std::size_t>(w)];
        res.n_above += above[static_cast<std::size_t>(w)];
    }

    const double pref = cfg.kappa * cfg.kappa * cfg.mu * cfg.mu /
                        (4.0 * cfg.p0 * cfg.p0 * cfg.p0 * cfg.p0);
    res.bins.resize(static_cast<std::size_t>(cfg.n_bins));
    for (int j = 0; j < cfg.n_bins; ++j) {
        CrossSectionBin& bin = res.bins[static_cast<std::size_t>(j)];
        const double lo = th_lo + j * bin_w, hi = lo + bin_w;
        bin.theta_lo_deg = lo / deg;
        bin.theta_hi_deg = hi / deg;
        bin.theta_mid_deg = 0.5 * (lo + hi) / deg;
        for (int w = 0; w < nt; ++w) bin.count += tallies[static_cast<std::size_t>(w)][static_cast<std::size_t>(j)];
        const double d_omega = 2.0 * std::acos(-1.0) * (std::cos(lo) - std::cos(hi));
        const double slo = std::sin(0.5 * lo), shi = std::sin(0.5 * hi);
        bin.formula = pref * 4.0 * std::acos(-1.0) * (1.0 / (slo * slo) - 1.0 / (shi * shi)) / d_omega;
        bin.estimate = static_cast<double>(bin.count) / (res.nu * d_omega);
        bin.std_error = std::sqrt(static_cast<double>(bin.count)) / (res.nu * d_omega);
        bin.ratio = bin.estimate / bin.formula;
        bin.empty = bin.count == 0;
        if (bin.empty) {
            res.any_empty = true;
        } else {
            const double z = (bin.estimate - bin.formula) / bin.std_error;
            res.chi2 += z * z;
            ++res.dof;
        }
    }
    return res;
}

// Far-field order bookkeeping for the perturbative expansion in hbar^2 and
// the potential strength: the density at order (n, k) decays like
// |q|^-alpha(n,k), built from alpha(n,k) = 2(n - m) + 1 + alpha(m, k-1),
// which must come out the same for every split m.
struct ExponentLedger {
    int n_max = 0;
    std::vector<std::vector<int>> alpha;              // [n][k], -1 where the term vanishes
    std::vector<std::pair<int, int>> candidates;      // alpha <= 2, would survive |q|^2 D
    std::vector<std::pair<int, int>> survivors;       // candidates with nonvanishing density
    bool classical_only = false;
};

inline ExponentLedger exponent_table(int n) {
    if (n < 2) throw std::invalid_argument("exponent table needs N >= 2");
    ExponentLedger led;
    led.n_max = n;
    led.alpha.assign(static_cast<std::size_t>(n + 1),
                     std::vector<int>(static_cast<std::size_t>(n + 1), -1));
    led.alpha[0][0] = 0;  // the incoming state carries no |q| falloff
    for (int k = 1; k <= n; ++k) {
        for (int row = 0; row <= n; ++row) {
            int val = -1;
            for (int m = 0; m <= row; ++m) {
                if (led.alpha[static_cast<std::size_t>(m)][static_cast<std::size_t>(k - 1)] < 0)
                    continue;  // vanishing parent constrains nothing
                const int cand = 2 * (row - m) + 1 +
                                 led.alpha[static_cast<std::size_t>(m)][static_cast<std::size_t>(k - 1)];
                if (val < 0) {
                    val = cand;
                } else if (cand != val) {
                    throw std::logic_error("exponent recursion branches disagree at (" +
                                           std::to_string(row) + ", " + std::to_string(k) + ")");
                }
            }
            led.alpha[static_cast<std::size_t>(row)][static_cast<std::size_t>(k)] = val;
        }
    }
    for (int row = 0; row <= n; ++row) {
        for (int k = 0; k <= n; ++k) {
            if (2 * row + k > 2) continue;
            led.candidates.emplace_back(row, k);
            if (led.alpha[static_cast<std::size_t>(row)][static_cast<std::size_t>(k)] >= 0)
                led.survivors.emplace_back(row, k);
        }
    }
    led.classical_only = true;
    for (const auto& [srow, sk] : led.survivors)
        if (srow > 0) led.classical_only = false;
    return led;
}

struct HomogeneityCheck {
    int order = 0;
    int degree = 0;  // common homogeneity degree of every term
    long terms_checked = 0;
};

// applies `order` position derivatives to 1/r in every direction multiset
// and confirms each resulting term is homogeneous of degree -1-order
inline HomogeneityCheck kernel_homogeneity_check(int order) {
    if (order < 1) throw std::invalid_argument("order must be positive");
    HomogeneityCheck out;
    out.order = order;
    out.degree = -1 - order;
    for (int d1 = 0; d1 <= order; ++d1) {
        for (int d2 = 0; d2 + d1 <= order; ++d2) {
            const int d3 = order - d1 - d2;
            PhaseExpr e = PhaseExpr::r_power(-1);
            for (int i = 0; i < d1; ++i) e = e.dq(1);
            for (int i = 0; i < d2; ++i) e = e.dq(2);
            for (int i = 0; i < d3; ++i) e = e.dq(3);
            if (e.is_zero())
                throw std::logic_error("Coulomb derivative vanished unexpectedly");
            for (const auto& [m, c] : e.terms()) {
                const int deg = m.qdeg() + m.rodd - 2 * static_cast<int>(e.qden());
                if (deg != out.degree)
                    throw std::logic_error("inhomogeneous term in Coulomb derivative of order " +
                                           std::to_string(order));
                ++out.terms_checked;
            }
        }
    }
    return out;
}

} // namespace gphase
