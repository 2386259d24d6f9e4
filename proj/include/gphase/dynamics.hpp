#pragma once

// Finite-difference evolution of a one-degree-of-freedom quasi-density
//
//   d rho / dt = -p d_q rho + V'(q,t) d_p rho + a1 hbar^2 V'''(q,t) d_p^3 rho
//
// with V(q,t) = k2 q^2/2 + lambda(t) q^4/2 in oscillator units.  The quartic
// potential has no fifth or higher q-derivative, so the single a1 term is
// the entire bracket correction for this Hamiltonian.  Spatial stencils are
// 4th-order central for first derivatives and 2nd-order central for the
// third derivative; cells outside the domain read as zero.  Time stepping
// is classic 4-stage explicit Runge-Kutta.

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gphase {

struct PhaseGrid {
    double q_min = -8.0, q_max = 8.0;
    double p_min = -8.0, p_max = 8.0;
    int n_q = 512, n_p = 512;
    double time = 0.0;
    std::vector<double> values; // row-major, q index outer

    double dq() const { return (q_max - q_min) / n_q; }
    double dp() const { return (p_max - p_min) / n_p; }
    double q_at(int i) const { return q_min + dq() * i; }
    double p_at(int j) const { return p_min + dp() * j; }
    double& at(int i, int j) { return values[static_cast<std::size_t>(i) * n_p + j]; }
    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * n_p + j]; }
};

inline PhaseGrid make_grid(double qmin, double qmax, double pmin, double pmax,
                           int nq, int np) {
    if (!(qmin < qmax) || !(pmin < pmax)) throw std::invalid_argument("empty domain");
    if (nq < 8 || np < 8)
        throw std::invalid_argument("grid too small for the difference stencils");
    PhaseGrid g;
    g.q_min = qmin;
    g.q_max = qmax;
    g.p_min = pmin;
    g.p_max = pmax;
    g.n_q = nq;
    g.n_p = np;
    g.values.assign(static_cast<std::size_t>(nq) * np, 0.0);
    return g;
}

template <class F>
void fill(PhaseGrid& g, const F& f) {
    for (int i = 0; i < g.n_q; ++i)
        for (int j = 0; j < g.n_p; ++j) g.at(i, j) = f(g.q_at(i), g.p_at(j));
}

// harmonic ground state exp(-(q^2 + p^2)) / pi
inline void fill_ground_state(PhaseGrid& g) {
    fill(g, [](double q, double p) {
        return std::exp(-(q * q + p * p)) / 3.14159265358979323846;
    });
}

// quartic coupling ramp: closed wedge over [0, pi/4], peak 1/3 at pi/8
inline double wedge_lambda(double t) {
    const double tau = 4.0 * t / 3.14159265358979323846;
    return std::max(0.0, 1.0 - std::fabs(1.0 - 2.0 * tau)) / 3.0;
}

struct EvolutionSpec {
    double a1 = 0.0;
    double hbar = 1.0;
    double harmonic = 1.0; // k2 coefficient of q^2/2
    double t_end = 0.25 * 3.14159265358979323846;
    double cfl = 0.8;
    int record_every = 1;
    // The plain per-term transport bounds alone admit unstable steps when
    // advection and dispersion are both active; the von Neumann cap below
    // closes that gap.  Disabling it selects the permissive transport-only
    // rule and relies on the runtime instability detector.
    bool enforce_von_neumann = true;
    std::function<double(double)> lambda_of_t; // defaults to wedge_lambda
};

namespace detail {

inline double lambda_at(const EvolutionSpec& spec, double t) {
    return spec.lambda_of_t ? spec.lambda_of_t(t) : wedge_lambda(t);
}

// peak quartic coupling over the run, for step-size planning
inline double lambda_peak(const EvolutionSpec& spec) {
    double peak = 0.0;
    for (int k = 0; k <= 256; ++k)
        peak = std::max(peak, std::fabs(lambda_at(spec, spec.t_end * k / 256.0)));
    return peak;
}

} // namespace detail

// time-derivative field at time t; out-of-domain neighbors read as zero
inline void rhs(const PhaseGrid& g, const EvolutionSpec& spec, double t,
                const std::vector<double>& rho, std::vector<double>& out) {
    const int nq = g.n_q, np = g.n_p;
    if (nq < 8 || np < 8)
        throw std::invalid_argument("grid too small for the difference stencils");
    if (rho.size() != static_cast<std::size_t>(nq) * np)
        throw std::invalid_argument("field size does not match the grid");
    out.resize(rho.size());
    const double lam = detail::lambda_at(spec, t);
    const double inv12dq = 1.0 / (12.0 * g.dq());
    const double inv12dp = 1.0 / (12.0 * g.dp());
    const double a1h2_dp3 = spec.a1 * spec.hbar * spec.hbar /
                            (g.dp() * g.dp() * g.dp());
    const double* f = rho.data();
    auto cell = [&](int i, int j) -> double {
        return (i < 0 || i >= nq || j < 0 || j >= np)
                   ? 0.0
                   : f[static_cast<std::size_t>(i) * np + j];
    };
    for (int i = 0; i < nq; ++i) {
        const double q = g.q_at(i);
        const double vp = spec.harmonic * q + 2.0 * lam * q * q * q;
        const double vppp = 12.0 * lam * q;
        double* o = out.data() + static_cast<std::size_t>(i) * np;
        const bool q_interior = (i >= 2 && i + 2 < nq);
        if (q_interior) {
            const double* fm2 = f + static_cast<std::size_t>(i - 2) * np;
            const double* fm1 = f + static_cast<std::size_t>(i - 1) * np;
            const double* fp1 = f + static_cast<std::size_t>(i + 1) * np;
            const double* fp2 = f + static_cast<std::size_t>(i + 2) * np;
            const double* fc = f + static_cast<std::size_t>(i) * np;
            for (int j = 2; j + 2 < np; ++j) {
                const double p = g.p_at(j);
                const double dfdq =
                    (-fp2[j] + 8.0 * fp1[j] - 8.0 * fm1[j] + fm2[j]) * inv12dq;
                const double dfdp =
                    (-fc[j + 2] + 8.0 * fc[j + 1] - 8.0 * fc[j - 1] + fc[j - 2]) *
                    inv12dp;
                const double d3fdp =
                    (0.5 * fc[j + 2] - fc[j + 1] + fc[j - 1] - 0.5 * fc[j - 2]) *
                    a1h2_dp3;
                o[j] = -p * dfdq + vp * dfdp + vppp * d3fdp;
            }
        }
        for (int j = 0; j < np; ++j) {
            if (q_interior && j >= 2 && j + 2 < np) continue;
            const double p = g.p_at(j);
            const double dfdq = (-cell(i + 2, j) + 8.0 * cell(i + 1, j) -
                                 8.0 * cell(i - 1, j) + cell(i - 2, j)) *
                                inv12dq;
            const double dfdp = (-cell(i, j + 2) + 8.0 * cell(i, j + 1) -
                                 8.0 * cell(i, j - 1) + cell(i, j - 2)) *
                                inv12dp;
            const double d3fdp = (0.5 * cell(i, j + 2) - cell(i, j + 1) +
                                  cell(i, j - 1) - 0.5 * cell(i, j - 2)) *
                                 a1h2_dp3;
            o[j] = -p * dfdq + vp * dfdp + vppp * d3fdp;
        }
    }
}

struct MomentSample {
    double t = 0.0;
    double mean_q = 0.0;
    double mean_p = 0.0;
    double mean_p2 = 0.0;
    double mass = 0.0;
    double mean_force = 0.0; // <-V'(q, t)>, for the Ehrenfest check
    double mean_q2 = 0.0;
    double mean_q4 = 0.0;
};

namespace detail {

inline MomentSample moments_at(const PhaseGrid& g, const EvolutionSpec& spec, double t,
                               double* max_abs, double* boundary_max) {
    const double lam = lambda_at(spec, t);
    long double mass = 0, sq = 0, sp = 0, sp2 = 0, sf = 0, sq2 = 0, sq4 = 0;
    double mx = 0.0;
    for (int i = 0; i < g.n_q; ++i) {
        const double q = g.q_at(i);
        const double force = -(spec.harmonic * q + 2.0 * lam * q * q * q);
        const double q2 = q * q;
        long double row = 0, rowp = 0, rowp2 = 0;
        const double* f = g.values.data() + static_cast<std::size_t>(i) * g.n_p;
        for (int j = 0; j < g.n_p; ++j) {
            const double v = f[j];
            const double p = g.p_at(j);
            row += v;
            rowp += v * p;
            rowp2 += v * p * p;
            mx = std::max(mx, std::fabs(v));
        }
        mass += row;
        sq += row * q;
        sq2 += row * q2;
        sq4 += row * q2 * q2;
        sf += row * force;
        sp += rowp;
        sp2 += rowp2;
    }
    const double cellw = g.dq() * g.dp();
    MomentSample m;
    m.t = t;
    m.mass = static_cast<double>(mass) * cellw;
    const double inv = mass != 0 ? 1.0 / static_cast<double>(mass) : 0.0;
    m.mean_q = static_cast<double>(sq) * inv;
    m.mean_p = static_cast<double>(sp) * inv;
    m.mean_p2 = static_cast<double>(sp2) * inv;
    m.mean_force = static_cast<double>(sf) * inv;
    m.mean_q2 = static_cast<double>(sq2) * inv;
    m.mean_q4 = static_cast<double>(sq4) * inv;
    if (max_abs) *max_abs = mx;
    if (boundary_max) {
        double bm = 0.0;
        for (int i = 0; i < g.n_q; ++i) {
            bm = std::max(bm, std::fabs(g.at(i, 0)));
            bm = std::max(bm, std::fabs(g.at(i, g.n_p - 1)));
        }
        for (int j = 0; j < g.n_p; ++j) {
            bm = std::max(bm, std::fabs(g.at(0, j)));
            bm = std::max(bm, std::fabs(g.at(g.n_q - 1, j)));
        }
        *boundary_max = bm;
    }
    return m;
}

} // namespace detail

struct StepPlan {
    double dt = 0.0;
    long long n_steps = 0;
    double advective_limit = 0.0;  // cfl * min of the per-term transport bounds
    double dispersive_limit = 0.0; // additive von Neumann bound for RK4
};

// Step size: the classic per-term transport bounds scaled by the CFL factor,
// intersected with the additive von Neumann bound for 4-stage Runge-Kutta
// (imaginary-axis radius 2*sqrt(2); symbol maxima 1.372/dx for the 4th-order
// first derivative and 2.598/dx^3 for the 2nd-order third derivative).  The
// additive form is required because the advective and dispersive spectra
// overlap; the naive min() of separate bounds is unstable when both terms
// are active.
inline StepPlan plan_steps(const PhaseGrid& g, const EvolutionSpec& spec) {
    if (!(spec.cfl > 0.0) || !(spec.cfl <= 1.0))
        throw std::invalid_argument("cfl must lie in (0, 1]");
    if (!(spec.t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
    const double pmax = std::max(std::fabs(g.p_min), std::fabs(g.p_max));
    const double qmax = std::max(std::fabs(g.q_min), std::fabs(g.q_max));
    const double lpk = detail::lambda_peak(spec);
    const double vpmax = std::fabs(spec.harmonic) * qmax + 2.0 * lpk * qmax * qmax * qmax;
    const double vpppmax = 12.0 * lpk * qmax;
    const double disp = std::fabs(spec.a1) * spec.hbar * spec.hbar * vpppmax;

    double transport = g.dq() / pmax;
    if (vpmax > 0.0) transport = std::min(transport, g.dp() / vpmax);
    if (disp > 0.0)
        transport = std::min(transport, g.dp() * g.dp() * g.dp() / disp);

    const double denom = 1.372 * (pmax / g.dq() + vpmax / g.dp()) +
                         2.598 * disp / (g.dp() * g.dp() * g.dp());
    const double von_neumann = 0.95 * 2.8284271247461903 / denom;

    StepPlan plan;
    plan.advective_limit = spec.cfl * transport;
    plan.dispersive_limit = von_neumann;
    const double dt = spec.enforce_von_neumann
                          ? std::min(plan.advective_limit, von_neumann)
                          : plan.advective_limit;
    plan.n_steps = static_cast<long long>(std::ceil(spec.t_end / dt));
    plan.dt = spec.t_end / static_cast<double>(plan.n_steps);
    return plan;
}

struct EvolveResult {
    PhaseGrid grid;
    std::vector<MomentSample> moments;
    long long n_steps = 0;
    double dt = 0.0;
    double boundary_ratio_max = 0.0; // worst boundary |rho| / max |rho|
};

inline EvolveResult evolve(const PhaseGrid& initial, const EvolutionSpec& spec) {
    EvolveResult res;
    res.grid = initial;
    PhaseGrid& g = res.grid;
    const StepPlan plan = plan_steps(g, spec);
    res.dt = plan.dt;
    res.n_steps = plan.n_steps;
    const double dt = plan.dt;
    const std::size_t n = g.values.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);

    double max0 = 0.0, bmax = 0.0;
    res.moments.push_back(detail::moments_at(g, spec, g.time, &max0, &bmax));
    if (max0 > 0.0) res.boundary_ratio_max = bmax / max0;
    const double abort_level = 10.0 * (max0 > 0.0 ? max0 : 1.0);
    const int record_every = std::max(1, spec.record_every);

    for (long long step = 0; step < plan.n_steps; ++step) {
        const double t = g.time;
        rhs(g, spec, t, g.values, k1);
        for (std::size_t c = 0; c < n; ++c) tmp[c] = g.values[c] + 0.5 * dt * k1[c];
        rhs(g, spec, t + 0.5 * dt, tmp, k2);
        for (std::size_t c = 0; c < n; ++c) tmp[c] = g.values[c] + 0.5 * dt * k2[c];
        rhs(g, spec, t + 0.5 * dt, tmp, k3);
        for (std::size_t c = 0; c < n; ++c) tmp[c] = g.values[c] + dt * k3[c];
        rhs(g, spec, t + dt, tmp, k4);
        for (std::size_t c = 0; c < n; ++c)
            g.values[c] += dt / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        g.time = spec.t_end * static_cast<double>(step + 1) /
                 static_cast<double>(plan.n_steps);

        if ((step + 1) % record_every == 0 || step + 1 == plan.n_steps) {
            double mx = 0.0;
            res.moments.push_back(detail::moments_at(g, spec, g.time, &mx, &bmax));
            if (mx > 0.0)
                res.boundary_ratio_max = std::max(res.boundary_ratio_max, bmax / mx);
            if (!(mx <= abort_level) || !std::isfinite(res.moments.back().mass))
                throw std::runtime_error(
                    "instability: max|rho| = " + std::to_string(mx) + " at t = " +
                    std::to_string(g.time) + " (step " + std::to_string(step + 1) +
                    " of " + std::to_string(plan.n_steps) + ", dt = " +
                    std::to_string(dt) + ")");
        }
    }
    return res;
}

struct EhrenfestResidual {
    double position = 0.0; // max |d<q>/dt - <p>|
    double momentum = 0.0; // max |d<p>/dt - <F>|
};

// Centered differences on the recorded series; requires uniform recording.
inline EhrenfestResidual ehrenfest_residual(const std::vector<MomentSample>& m) {
    if (m.size() < 3)
        throw std::invalid_argument("need at least three moment samples");
    EhrenfestResidual r;
    for (std::size_t k = 1; k + 1 < m.size(); ++k) {
        const double two_dt = m[k + 1].t - m[k - 1].t;
        const double dq_dt = (m[k + 1].mean_q - m[k - 1].mean_q) / two_dt;
        const double dp_dt = (m[k + 1].mean_p - m[k - 1].mean_p) / two_dt;
        r.position = std::max(r.position, std::fabs(dq_dt - m[k].mean_p));
        r.momentum = std::max(r.momentum, std::fabs(dp_dt - m[k].mean_force));
    }
    return r;
}

} // namespace gphase
