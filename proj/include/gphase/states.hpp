#pragma once

// Isotropic Gaussian phase-space states and the expectation engine for
// rotation-invariant observables f(|q|, |p|).  The 6D integral reduces to
//
//   <f> = 16 pi^2 N  int q^2 p^2 f(q, p) exp(-q^2/2sq^2 - p^2/2sp^2) dq dp,
//
// with N = (2 pi)^-3 sq^-3 sp^-3, handled by kink-aware Gauss-Kronrod
// panels; sigma_p = 0 is the exact zero-momentum limit with a 1D radial
// integral.  A counter-seeded Monte Carlo estimator serves as an
// independent oracle for every quadrature result.

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include <gphase/quadrature.hpp>
#include <gphase/rng.hpp>
#include <gphase/spectral.hpp>

namespace gphase {

struct GaussianState {
    double sigma_q = 1.0;
    double sigma_p = 1.0; // 0 selects the exact zero-momentum limit
};

inline void validate(const GaussianState& s) {
    if (!(s.sigma_q > 0.0)) throw std::invalid_argument("sigma_q must be positive");
    if (!(s.sigma_p >= 0.0)) throw std::invalid_argument("sigma_p must be nonnegative");
}

struct RadialObservable {
    std::function<double(double, double)> f;             // value at (|q|, |p|)
    std::vector<double> q_kinks;                         // radii where a p-branch appears
    std::function<std::vector<double>(double)> p_kinks;  // inner kinks at fixed |q|; may be empty
};

inline RadialObservable obs_unit() {
    return {[](double, double) { return 1.0; }, {}, {}};
}

inline RadialObservable obs_hamiltonian() {
    return {[](double q, double p) { return 0.5 * p * p - 1.0 / q; }, {}, {}};
}

namespace detail {

// levels whose crossing curves are kinks of t_h(n, H(q,p))
inline std::vector<int> cell_kink_levels(int n) {
    if (n == 1) return {2};
    if (n == 2) return {2, 3};
    return {n - 1, n, n + 1};
}

} // namespace detail

inline RadialObservable obs_energy_cell(int n) {
    if (n < 1) throw std::invalid_argument("level index must be >= 1");
    const auto levels = detail::cell_kink_levels(n);
    RadialObservable obs;
    obs.f = [n](double q, double p) {
        const double h = 0.5 * p * p - 1.0 / q;
        if (!(h < 0.0)) return 0.0;
        return spectral::t_h(n, h);
    };
    for (int k : levels) obs.q_kinks.push_back(2.0 * k * k);
    obs.p_kinks = [levels](double q) {
        std::vector<double> ks;
        for (int k : levels) {
            const double s = 2.0 * (spectral::level_energy(k) + 1.0 / q);
            if (s > 0.0) ks.push_back(std::sqrt(s));
        }
        return ks;
    };
    return obs;
}

inline constexpr double pi_v = 3.14159265358979323846;

inline QuadResult expect(const RadialObservable& obs, const GaussianState& st,
                         double tol = 1e-10) {
    validate(st);
    const double sq = st.sigma_q;
    const double qmax = 12.0 * sq;
    if (st.sigma_p == 0.0) {
        const double norm = std::sqrt(2.0 / pi_v) / (sq * sq * sq);
        auto g = [&](double q) {
            return q * q * obs.f(q, 0.0) * std::exp(-0.5 * q * q / (sq * sq));
        };
        const QuadResult r = gk_segmented(g, make_panels(0.0, qmax, obs.q_kinks), tol);
        return {norm * r.value, norm * r.error};
    }
    const double sp = st.sigma_p;
    const double pmax = 12.0 * sp;
    const double norm = (2.0 / pi_v) / (sq * sq * sq * sp * sp * sp);
    auto f2 = [&](double q, double p) {
        return q * q * p * p * obs.f(q, p) *
               std::exp(-0.5 * (q * q / (sq * sq) + p * p / (sp * sp)));
    };
    auto ybounds = [&](double q) {
        return make_panels(0.0, pmax, obs.p_kinks ? obs.p_kinks(q) : std::vector<double>{});
    };
    const QuadResult r = gk_2d(f2, 0.0, qmax, obs.q_kinks, ybounds, tol);
    return {norm * r.value, norm * r.error};
}

struct McResult {
    double value = 0.0;
    double std_error = 0.0;
};

// Importance sampling with the state itself: each phase-space sample is
// drawn from the Gaussian, so the estimator is the plain sample mean of f.
// Sample i is generated from (seed, i) alone, making the result independent
// of evaluation order and bit-identical for a fixed seed.
inline McResult expect_mc(const RadialObservable& obs, const GaussianState& st,
                          std::uint64_t n_samples, std::uint64_t seed) {
    validate(st);
    if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
    long double sum = 0.0L, sum2 = 0.0L;
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        Rng g = Rng::for_sample(seed, i);
        const double x = g.normal(), y = g.normal(), z = g.normal();
        const double q = st.sigma_q * std::sqrt(x * x + y * y + z * z);
        double p = 0.0;
        if (st.sigma_p > 0.0) {
            const double u = g.normal(), v = g.normal(), w = g.normal();
            p = st.sigma_p * std::sqrt(u * u + v * v + w * w);
        }
        const double val = obs.f(q, p);
        sum += val;
        sum2 += static_cast<long double>(val) * val;
    }
    const long double n = static_cast<long double>(n_samples);
    const long double mean = sum / n;
    const long double var = std::max(0.0L, sum2 / n - mean * mean);
    return {static_cast<double>(mean), static_cast<double>(std::sqrt(var / n))};
}

struct SigmaRoot {
    double sigma = 0.0;
    double value = 0.0; // residual of the defining integral at the root
    int iterations = 0;
};

// Width of the zero-momentum Gaussian that zeroes <t_h(2, -1/q)>: bisection
// on [1.0, 2.5], where the defining integrand is piecewise smooth with
// branch radii q = 8 and q = 18.
inline SigmaRoot find_sigma_gnd(double tol = 1e-9) {
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    const RadialObservable obs = obs_energy_cell(2);
    auto F = [&](double s) { return expect(obs, {s, 0.0}, 1e-13).value; };
    double a = 1.0, b = 2.5;
    double fa = F(a);
    if (!(fa < 0.0) || !(F(b) > 0.0))
        throw std::runtime_error("no sign change on [1.0, 2.5]");
    int it = 0;
    while (b - a > tol && it < 200) {
        const double mid = 0.5 * (a + b);
        const double fm = F(mid);
        if (fm < 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
        ++it;
    }
    const double root = 0.5 * (a + b);
    return {root, F(root), it};
}

// argmax of the radial position density q^2 exp(-q^2 / 2 sigma^2)
inline double most_probable_radius(const GaussianState& st) {
    validate(st);
    if (st.sigma_p != 0.0)
        throw std::invalid_argument("defined for the zero-momentum family only");
    return std::sqrt(2.0) * st.sigma_q;
}

struct ScanCell {
    double sigma_q = 0.0;
    double sigma_p = 0.0;
    double value = 0.0;
    double error = 0.0;
    int sign = 0; // 0 flags |value| <= error (boundary cell)
};

// Sign map of <t_h(2, H)> over a grid of state widths
inline std::vector<ScanCell> positivity_scan(const std::vector<double>& sigma_q_grid,
                                             const std::vector<double>& sigma_p_grid,
                                             double tol = 1e-9) {
    const RadialObservable obs = obs_energy_cell(2);
    std::vector<ScanCell> out;
    out.reserve(sigma_q_grid.size() * sigma_p_grid.size());
    for (double sq : sigma_q_grid)
        for (double sp : sigma_p_grid) {
            const QuadResult r = expect(obs, {sq, sp}, tol);
            const int sign = std::fabs(r.value) <= r.error ? 0 : (r.value > 0.0 ? 1 : -1);
            out.push_back({sq, sp, r.value, r.error, sign});
        }
    return out;
}

// Sum of <t_h(n, H)> over levels.  For sigma_p = 0 the energy H = -1/|q| is
// negative almost surely and the family sums to one pointwise, so the total
// is 1 up to quadrature error; level n contributes nothing once its support
// radius 2(n-1)^2 passes the 12 sigma cutoff.
inline double energy_probability_sum(const GaussianState& st, int n_max = 64,
                                     double tol = 1e-10) {
    validate(st);
    double total = 0.0;
    const double qmax = 12.0 * st.sigma_q;
    for (int n = 1; n <= n_max; ++n) {
        total += expect(obs_energy_cell(n), st, tol).value;
        if (st.sigma_p == 0.0 && n >= 3 && 2.0 * (n - 1) * (n - 1) > qmax) break;
    }
    return total;
}

} // namespace gphase
