#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include <gphase/field.hpp>
#include <gphase/rng.hpp>

using namespace gphase;

namespace {

// independent reduction of prob_level_su: the angular integral of the
// displaced Gaussian is sinh(r s / sigma^2) * sigma^2 / (r s) in closed form,
// leaving a one-dimensional radial quadrature
double prob_level_radial_oracle(double s, double u, double sigma, int n) {
    const double half_u2 = 0.5 * u * u;
    std::vector<double> panels{0.0};
    for (int k : detail::cell_kink_levels(n))
        panels.push_back(1.0 / (half_u2 - spectral::level_energy(k)));
    panels.push_back(1.0 / (half_u2 - spectral::level_energy(n + 1)));
    const double norm = std::pow(2.0 * pi_v * sigma * sigma, -1.5);
    const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    auto f = [&](double r) {
        const double a = r * s / (sigma * sigma);
        const double sinhc = a < 1e-6 ? 1.0 + a * a / 6.0 : std::sinh(a) / a;
        return r * r * spectral::t_h(n, half_u2 - 1.0 / r) *
               std::exp(-(r * r + s * s) * inv2s2) * sinhc;
    };
    return 4.0 * pi_v * norm * gk_segmented(f, panels, 1e-12).value;
}

} // namespace

TEST_CASE("drive displacement") {
    DriveSpec d;
    CHECK(d.omega == 0.375);
    CHECK(d.ee == 0.140625);

    const Shift z = shift(d, 0.0);
    CHECK(z.s == 0.0);
    CHECK(z.u == 0.0);
    CHECK_THROWS_AS(shift(d, -0.1), std::invalid_argument);

    // u is extremal half a drive period in
    const double t_half = pi_v / d.omega;
    CHECK(shift(d, t_half).u == Catch::Approx(-4.0 * d.ee / d.omega).epsilon(1e-12));

    // cubic onset of the position displacement
    const double t = 1e-3;
    const double lead = 2.0 * d.ee / (d.mu * d.omega * d.omega) * std::pow(d.omega * t, 3) / 3.0;
    CHECK(shift(d, t).s == Catch::Approx(lead).epsilon(1e-5));

    for (int i = 0; i <= 100; ++i) {
        const Shift sh = shift(d, 6.0 * i / 100.0);
        CHECK(std::fabs(sh.u) <= 4.0 * d.ee / d.omega + 1e-15);
    }
}

TEST_CASE("effective generator from the Liouvillian commutator") {
    const PhaseExpr g = commutator_g();
    const PhaseExpr want = PhaseExpr::integer(-2) * PhaseExpr::param("eE") *
                           PhaseExpr::param("sinwt") * PhaseExpr::param("mu", -1) * PhaseExpr::p(3);
    CHECK((g - want).is_zero());
    CHECK(g.subst_param("eE", Rational(0)).is_zero());
}

TEST_CASE("level probabilities of the displaced state") {
    const double sig = find_sigma_gnd().sigma;

    SECTION("undisplaced state") {
        CHECK(std::fabs(prob_level_su(0.0, 0.0, sig, 2)) <= 1e-8);
        const double p1 = prob_level_su(0.0, 0.0, sig, 1);
        CHECK(p1 > 0.99);
        CHECK(p1 <= 1.0);
    }

    SECTION("agrees with the radial expectation engine at zero displacement") {
        for (int n : {1, 2, 3}) {
            GaussianState st;
            st.sigma_q = 1.2;
            st.sigma_p = 0.0;
            const double via_expect = expect(obs_energy_cell(n), st).value;
            const double via_field = prob_level_su(0.0, 0.0, 1.2, n);
            CHECK(via_field == Catch::Approx(via_expect).margin(2e-9));
        }
    }

    SECTION("independent angular reduction") {
        for (int n : {1, 2}) {
            const double a = prob_level_su(2.1, -0.9, sig, n, 1e-10);
            const double b = prob_level_radial_oracle(2.1, -0.9, sig, n);
            CHECK(a == Catch::Approx(b).margin(1e-8));
        }
    }

    SECTION("axial parity") {
        const double a = prob_level_su(1.7, -1.1, sig, 2);
        const double b = prob_level_su(-1.7, 1.1, sig, 2);
        CHECK(a == Catch::Approx(b).margin(1e-9));
    }

    SECTION("validation") {
        CHECK_THROWS_AS(prob_level_su(0.0, 0.0, sig, 0), std::invalid_argument);
        CHECK_THROWS_AS(prob_level_su(0.0, 0.0, -1.0, 1), std::invalid_argument);
    }
}

TEST_CASE("wave-mechanics overlaps") {
    SECTION("orthonormal start") {
        CHECK(prob_level_qt_su(0.0, 0.0, 1) == Catch::Approx(1.0).margin(1e-9));
        CHECK(std::fabs(prob_level_qt_su(0.0, 0.0, 2)) <= 1e-12);
        CHECK_THROWS_AS(prob_level_qt_su(0.0, 0.0, 3), std::invalid_argument);
    }

    SECTION("pure boost matches the closed form") {
        for (double u : {-0.3, -1.0, -1.5}) {
            const double want = std::pow(1.0 + u * u / 4.0, -4.0);
            CHECK(prob_level_qt_su(0.0, u, 1) == Catch::Approx(want).margin(1e-8));
        }
    }

    SECTION("pure displacement matches the closed form") {
        for (double s : {0.5, 2.0, 4.0}) {
            const double amp = std::exp(-s) * (1.0 + s + s * s / 3.0);
            CHECK(prob_level_qt_su(s, 0.0, 1) == Catch::Approx(amp * amp).margin(1e-8));
        }
    }

    SECTION("Monte Carlo cross-check of the mixed case") {
        const double s = 1.2, u = -0.8;
        // sample y from the 1s density and weight by psi_f(y - s e3) e^{-i u y3} / psi_100(|y|);
        // the second moment of the weight is bounded by 1, so the error is well behaved
        const long n_samples = 2000000;
        long double re1 = 0, im1 = 0, re2 = 0, im2 = 0, n21re = 0, n21im = 0;
        long double sq1 = 0, sq2 = 0, sq21 = 0;
        for (long i = 0; i < n_samples; ++i) {
            Rng rng = Rng::for_sample(4242, static_cast<std::uint64_t>(i));
            const double r = 0.5 * (-std::log(rng.uniform_pos()) - std::log(rng.uniform_pos()) -
                                    std::log(rng.uniform_pos()));
            const double c = 2.0 * rng.uniform01() - 1.0;
            const double y3 = r * c;
            const double xr = std::sqrt(std::max(0.0, r * r + s * s - 2.0 * r * s * c));
            const double x3 = y3 - s;
            const double inv_psi = 1.0 / detail::psi_100(r);
            const double cosp = std::cos(u * y3), sinp = std::sin(u * y3);
            const double w1 = detail::psi_100(xr) * inv_psi;
            const double w2 = detail::psi_200(xr) * inv_psi;
            const double w21 = (xr > 0 ? detail::psi_210(xr, x3 / xr) : 0.0) * inv_psi;
            re1 += w1 * cosp;
            im1 -= w1 * sinp;
            re2 += w2 * cosp;
            im2 -= w2 * sinp;
            n21re += w21 * cosp;
            n21im -= w21 * sinp;
            sq1 += w1 * w1;
            sq2 += w2 * w2;
            sq21 += w21 * w21;
        }
        auto finish = [&](long double re, long double im, long double sq, double& pr, double& err) {
            const double mre = static_cast<double>(re / n_samples);
            const double mim = static_cast<double>(im / n_samples);
            const double second = static_cast<double>(sq / n_samples);
            const double var = std::max(0.0, second - mre * mre - mim * mim);
            const double amp_err = std::sqrt(var / n_samples);
            pr = mre * mre + mim * mim;
            err = 2.0 * std::sqrt(pr) * amp_err + amp_err * amp_err;
        };
        double p1, e1, p2, e2, p21, e21;
        finish(re1, im1, sq1, p1, e1);
        finish(re2, im2, sq2, p2, e2);
        finish(n21re, n21im, sq21, p21, e21);

        const double q1 = prob_level_qt_su(s, u, 1);
        const double q2 = prob_level_qt_su(s, u, 2);
        CHECK(std::fabs(q1 - p1) <= 3.0 * e1);
        CHECK(std::fabs(q2 - (p2 + p21)) <= 3.0 * (e2 + e21));
        CHECK(q1 <= 1.0);
    }
}

TEST_CASE("excitation curve") {
    DriveSpec d;
    d.n_samples = 13;
    const double sig = find_sigma_gnd().sigma;

    const std::vector<ExcitationPoint> curve = excitation_curve(d, sig, 1e-8);
    REQUIRE(curve.size() == 13u);
    CHECK(curve.front().t == 0.0);
    CHECK(curve.back().t == Catch::Approx(6.0));

    CHECK(curve.front().pr1 > 0.99);
    CHECK(std::fabs(curve.front().pr2) <= 1e-8);
    CHECK(curve.front().qt1 == Catch::Approx(1.0).margin(1e-8));

    double max_gap = 0.0;
    for (const ExcitationPoint& e : curve) {
        CHECK(e.pr1 + e.pr2 <= 1.0 + 1e-8);
        CHECK(e.qt1 + e.qt2 <= 1.0 + 1e-8);
        CHECK(e.pr1 >= -1e-8);
        CHECK(e.pr2 >= -1e-8);
        max_gap = std::max(max_gap, std::fabs(e.pr1 - e.qt1));
    }
    INFO("max |pr1 - qt1| over the window: " << max_gap);
    CHECK(max_gap <= 0.1);

    // the pulse excites the second level and depletes the first
    const ExcitationPoint& far = curve[curve.size() / 2];
    CHECK(far.pr2 > 0.0);
    CHECK(far.qt2 > 0.0);
    CHECK(curve.back().pr1 < 0.1);

    const std::vector<ExcitationPoint> threaded = excitation_curve(d, sig, 1e-8, 3);
    for (std::size_t i = 0; i < curve.size(); ++i) {
        CHECK(threaded[i].pr1 == curve[i].pr1);
        CHECK(threaded[i].qt2 == curve[i].qt2);
    }
}
