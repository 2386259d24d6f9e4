#pragma once
// Adaptive Gauss-Kronrod quadrature wrappers: single panels, segmented
// integration with explicit interior breakpoints (for piecewise-linear
// integrands whose kink locations are known), and a tensor-product 2D
// driver whose inner breakpoints may depend on the outer variable.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace gphase {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
};

template <class F>
QuadResult gk_integrate(const F& f, double a, double b,
                        double tol = 1e-10, int max_depth = 12) {
    if (!(a < b)) return {};
    double err = 0.0;
    double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, max_depth, tol, &err);
    return {v, err};
}

// Panel boundary list over [a, b] with the interior breakpoints clipped
// into the open interval, sorted and deduplicated.
inline std::vector<double> make_panels(double a, double b,
                                       const std::vector<double>& interior) {
    std::vector<double> bs{a, b};
    for (double x : interior)
        if (x > a && x < b) bs.push_back(x);
    std::sort(bs.begin(), bs.end());
    bs.erase(std::unique(bs.begin(), bs.end()), bs.end());
    return bs;
}

template <class F>
QuadResult gk_segmented(const F& f, const std::vector<double>& boundaries,
                        double tol = 1e-10, int max_depth = 12) {
    if (boundaries.size() < 2)
        throw std::invalid_argument("segmented quadrature needs >= 2 boundaries");
    QuadResult acc;
    for (std::size_t i = 0; i + 1 < boundaries.size(); ++i) {
        QuadResult r = gk_integrate(f, boundaries[i], boundaries[i + 1], tol, max_depth);
        acc.value += r.value;
        acc.error += r.error;
    }
    return acc;
}

// 2D integral of f(x, y).  The inner y-domain and its interior kinks may
// depend on x: ybounds(x) must return the full inner boundary list.  The
// outer integral carries the error estimate; the inner runs at a tighter
// tolerance so its error is subdominant.
template <class F, class YBounds>
QuadResult gk_2d(const F& f, double ax, double bx,
                 const std::vector<double>& xbreaks_interior,
                 const YBounds& ybounds,
                 double tol = 1e-9, int max_depth = 12) {
    auto inner = [&](double x) {
        return gk_segmented([&](double y) { return f(x, y); },
                            ybounds(x), 0.1 * tol, max_depth).value;
    };
    return gk_segmented(inner, make_panels(ax, bx, xbreaks_interior), tol, max_depth);
}

} // namespace gphase
