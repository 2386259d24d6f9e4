#pragma once

// Sawtooth spectral families for the Kepler ladder E_n = -1/(2 n^2) and for
// integer angular-momentum cells.  Each family is a pointwise partition of
// unity whose first moment reproduces the underlying observable exactly; the
// piecewise-linear members are evaluated in long double with exact level-gap
// formulas so the partition and moment identities hold to ~1e-18 even close
// to the accumulation point at zero energy.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gphase::spectral {

inline long double level_energy_l(long long n) {
    const long double nn = static_cast<long double>(n);
    return -0.5L / (nn * nn);
}

// E_n = -1/(2 n^2)
inline double level_energy(int n) {
    if (n < 1) throw std::invalid_argument("level index must be >= 1");
    return static_cast<double>(level_energy_l(n));
}

// E_{n+1} - E_n = (2n + 1) / (2 n^2 (n+1)^2), evaluated without cancellation
inline long double level_gap_l(long long n) {
    const long double nn = static_cast<long double>(n);
    const long double np = static_cast<long double>(n + 1);
    return (2.0L * nn + 1.0L) / (2.0L * nn * nn * np * np);
}

// Interval of the ladder containing x: returns (n, n+1) with
// E_n <= x < E_{n+1}, or the sentinel (0, 1) when x < E_1.  Kink points
// belong to the interval on their right.
inline std::pair<int, int> locate_interval(double x) {
    if (!(x < 0.0))
        throw std::domain_error("energy must be negative, got " + std::to_string(x));
    const long double xl = x;
    if (xl < -0.5L) return {0, 1};
    if (xl > -2e-19L)
        throw std::domain_error("energy too close to the continuum edge");
    long long n = static_cast<long long>(std::floor(1.0 / std::sqrt(-2.0 * x)));
    if (n < 1) n = 1;
    while (level_energy_l(n) > xl) --n;
    while (level_energy_l(n + 1) <= xl) ++n;
    return {static_cast<int>(n), static_cast<int>(n + 1)};
}

namespace detail {

// Members T_1 and T_2 extend linearly over the whole tail x < E_1, so their
// only kinks are at E_2 (and E_3); members n >= 3 are triangles with kinks
// at E_{n-1}, E_n, E_{n+1}.
inline long double t_h_l(long long n, long double x) {
    if (n < 1) throw std::invalid_argument("level index must be >= 1");
    if (!(x < 0.0L)) throw std::domain_error("t_h requires a negative energy");
    if (x >= level_energy_l(n + 1)) return 0.0L;
    if (n <= 2) {
        if (n == 1) return (level_energy_l(2) - x) / level_gap_l(1);
        if (x <= -0.5L) return (x + 0.5L) / level_gap_l(1);
        if (x < level_energy_l(2)) return (x + 0.5L) / level_gap_l(1);
        return (level_energy_l(3) - x) / level_gap_l(2);
    }
    if (x <= level_energy_l(n - 1)) return 0.0L;
    if (x < level_energy_l(n)) return (x - level_energy_l(n - 1)) / level_gap_l(n - 1);
    return (level_energy_l(n + 1) - x) / level_gap_l(n);
}

} // namespace detail

// Energy-family member T_n evaluated at x < 0.
inline double t_h(int n, double x) {
    return static_cast<double>(detail::t_h_l(n, static_cast<long double>(x)));
}

// Angular-momentum family member: unit triangle of half-width hbar = 1
// centred on the integer m.
inline double t_l(long long m, double x) {
    const long double d = std::fabs(static_cast<long double>(x) - static_cast<long double>(m));
    if (d >= 1.0L) return 0.0;
    return static_cast<double>(1.0L - d);
}

// |sum_n T_n(x) - 1| using the two members active at x
inline double partition_residual_h(double x) {
    const long double xl = x;
    long double s;
    if (xl < -0.5L) {
        s = detail::t_h_l(1, xl) + detail::t_h_l(2, xl);
    } else {
        const auto iv = locate_interval(x);
        s = detail::t_h_l(iv.first, xl) + detail::t_h_l(iv.second, xl);
    }
    return static_cast<double>(std::fabs(s - 1.0L));
}

// |sum_n E_n T_n(x) - x| over the active members
inline double moment_residual_h(double x) {
    const long double xl = x;
    long double s;
    if (xl < -0.5L) {
        s = level_energy_l(1) * detail::t_h_l(1, xl) + level_energy_l(2) * detail::t_h_l(2, xl);
    } else {
        const auto iv = locate_interval(x);
        s = level_energy_l(iv.first) * detail::t_h_l(iv.first, xl) +
            level_energy_l(iv.second) * detail::t_h_l(iv.second, xl);
    }
    return static_cast<double>(std::fabs(s - xl));
}

inline double partition_residual_l(double x) {
    const long long m = static_cast<long long>(std::floor(x));
    const long double s = static_cast<long double>(t_l(m, x)) + static_cast<long double>(t_l(m + 1, x));
    return static_cast<double>(std::fabs(s - 1.0L));
}

inline double moment_residual_l(double x) {
    const long long m = static_cast<long long>(std::floor(x));
    const long double s = static_cast<long double>(m) * static_cast<long double>(t_l(m, x)) +
                          static_cast<long double>(m + 1) * static_cast<long double>(t_l(m + 1, x));
    return static_cast<double>(std::fabs(s - static_cast<long double>(x)));
}

inline double norm3(const std::array<double, 3>& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

// Energy-cell weight at a phase-space point: t_h(n, H) with
// H = |p|^2/2 - 1/|q|.  Points with H >= 0 lie outside every member's
// support, so the value is zero there.
inline double g_h(int n, const std::array<double, 3>& q, const std::array<double, 3>& p) {
    const double r = norm3(q);
    if (r == 0.0) throw std::domain_error("g_h is singular at |q| = 0");
    const long double h = 0.5L * (static_cast<long double>(p[0]) * p[0] +
                                  static_cast<long double>(p[1]) * p[1] +
                                  static_cast<long double>(p[2]) * p[2]) -
                          1.0L / static_cast<long double>(r);
    if (!(h < 0.0L)) return 0.0;
    return static_cast<double>(detail::t_h_l(n, h));
}

struct ZeemanValue {
    double value;         // t_h(n, H) * t_l(m, L3)
    double shifted_level; // E_n + B m
};

// Joint energy / L3 cell weight in a uniform field B along axis 3
inline ZeemanValue g_hb(int n, long long m, const std::array<double, 3>& q,
                        const std::array<double, 3>& p, double B) {
    const double l3 = q[0] * p[1] - q[1] * p[0];
    const double th = g_h(n, q, p);
    const double tl = t_l(m, l3);
    return {th * tl, level_energy(n) + B * static_cast<double>(m)};
}

struct ZeemanWitness {
    long long m = 0;
    std::array<double, 3> q{};
    std::array<double, 3> p{};
    double value = 0.0;
};

struct ZeemanSupport {
    int level = 0;
    long long naive_bound = 0;   // 2(n+1), from counting both triangle flanks
    long long observed_max = 0;  // largest |m| with a verified witness point
    std::vector<long long> feasible_m;
    std::vector<ZeemanWitness> witnesses;
};

namespace detail {

// Search for a phase-space point with t_h(n, H) * t_l(m, L3) > 0.  Along the
// two-parameter family q = (a, 0, 0), p = (0, s/a, 0) the observables are
// L3 = s and H = s^2/(2a^2) - 1/a, and for fixed s the map a -> H covers
// [-1/(2 s^2), +inf).  Sweeping s over the open support of t_l(m) and
// solving H(a) = target for energies inside the support of T_n makes the
// search deterministic; every reported witness is re-verified numerically.
inline bool zeeman_witness(int n, long long m, ZeemanWitness& out) {
    const long double hi = level_energy_l(n + 1);
    const long double lo = (n >= 3) ? level_energy_l(n - 1) : -1.0e6L;
    const double s_lo = std::max(1e-4, static_cast<double>(m) - 1.0 + 1e-4);
    const double s_hi = static_cast<double>(m) + 1.0 - 1e-4;
    if (!(s_lo < s_hi)) return false;
    const int ns = 160, nh = 48;
    for (int i = 0; i <= ns; ++i) {
        const double s = s_lo + (s_hi - s_lo) * i / ns;
        const long double hmin = -0.5L / (static_cast<long double>(s) * s);
        const long double a_lo = std::max(lo, hmin) ;
        if (!(a_lo < hi)) continue;
        for (int j = 1; j < nh; ++j) {
            const long double target = a_lo + (hi - a_lo) * j / nh;
            // solve s^2/(2 a^2) - 1/a = target for 1/a
            const long double disc = 1.0L + 2.0L * static_cast<long double>(s) * s * target;
            if (disc < 0.0L) continue;
            const long double inv_a = (1.0L + std::sqrt(disc)) / (static_cast<long double>(s) * s);
            if (!(inv_a > 0.0L)) continue;
            const double a = static_cast<double>(1.0L / inv_a);
            const std::array<double, 3> q{a, 0.0, 0.0};
            const std::array<double, 3> p{0.0, s / a, 0.0};
            const double v = g_hb(n, m, q, p, 0.0).value;
            if (v > 0.0) {
                out = {m, q, p, v};
                return true;
            }
        }
    }
    return false;
}

} // namespace detail

// Which magnetic cells m have support inside energy cell n.  Counting the
// flanks of both triangles suggests |m| <= 2(n+1); the actual constraint is
// the centrifugal bound H >= -1/(2 L3^2), which cuts the feasible set to
// |m| <= n + 1.  The search covers every m up to the naive bound plus two.
inline ZeemanSupport zeeman_support(int n) {
    if (n < 1) throw std::invalid_argument("level index must be >= 1");
    ZeemanSupport out;
    out.level = n;
    out.naive_bound = 2LL * (n + 1);
    for (long long m = 0; m <= out.naive_bound + 2; ++m) {
        ZeemanWitness w;
        if (detail::zeeman_witness(n, m, w)) {
            out.witnesses.push_back(w);
            out.feasible_m.push_back(m);
            if (m > 0) out.feasible_m.push_back(-m); // mirror under p -> -p
            out.observed_max = m;
        }
    }
    std::sort(out.feasible_m.begin(), out.feasible_m.end());
    return out;
}

} // namespace gphase::spectral
