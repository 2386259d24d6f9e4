#pragma once

// End-to-end acceptance checks: fourteen numbered criteria covering the
// ground state, the spectral families, the symbolic bracket engine, the
// transport experiment, the driven-atom curves, and the scattering suite.
// The CLI `verify` subcommand and the acceptance test binary both run these
// and print one pass/fail line per criterion.  Tolerances are pinned here.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <gphase/bracket.hpp>
#include <gphase/dynamics.hpp>
#include <gphase/expr.hpp>
#include <gphase/field.hpp>
#include <gphase/hydrogen.hpp>
#include <gphase/rng.hpp>
#include <gphase/scattering.hpp>
#include <gphase/spectral.hpp>
#include <gphase/states.hpp>

namespace gphase::verify {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct Options {
    int threads = 0;        // 0 = all available cores
    std::vector<int> only;  // empty = every criterion
};

inline const char* criterion_name(int id) {
    switch (id) {
        case 1: return "ground-state width";
        case 2: return "ground-state energy and radius";
        case 3: return "sawtooth identities";
        case 4: return "symbolic conservation";
        case 5: return "exact bidifferential identities";
        case 6: return "five-step anharmonic coefficient";
        case 7: return "anharmonic transport experiment";
        case 8: return "transport conservation, convergence";
        case 9: return "positivity map";
        case 10: return "magnetic cell support";
        case 11: return "driven excitation curves";
        case 12: return "Rutherford cross section";
        case 13: return "far-field exponent ledger";
        case 14: return "bracket property suite";
        default: return "unknown";
    }
}

namespace detail {

struct Stopwatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

inline std::string g6(double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%.6g", v);
    return b;
}

inline std::string g2(double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%.2g", v);
    return b;
}

struct TransportRun {
    double mean_p2 = 0.0;
    double mass_drift = 0.0;
    double ehr_q = 0.0;
    double ehr_p = 0.0;
};

inline TransportRun transport_run(double a1, int n) {
    PhaseGrid g = make_grid(-8.0, 8.0, -8.0, 8.0, n, n);
    fill_ground_state(g);
    EvolutionSpec spec;
    spec.a1 = a1;
    spec.record_every = 64;
    const EvolveResult res = evolve(g, spec);
    TransportRun out;
    out.mean_p2 = res.moments.back().mean_p2;
    const double m0 = res.moments.front().mass;
    for (const auto& m : res.moments)
        out.mass_drift = std::max(out.mass_drift, std::fabs(m.mass / m0 - 1.0));
    const EhrenfestResidual e = ehrenfest_residual(res.moments);
    out.ehr_q = e.position;
    out.ehr_p = e.momentum;
    return out;
}

struct PdeData {
    std::array<double, 3> a1{0.0, -1.0 / 48.0, -1.0 / 24.0};
    std::array<TransportRun, 3> fine;  // 512^2
    double p2_coarse = 0.0;            // 256^2 classical
    double seconds = 0.0;
};

struct Context {
    Options opts;
    std::optional<SigmaRoot> sigma_cache;
    double sigma_seconds = 0.0;
    std::optional<PdeData> pde_cache;

    int threads() const {
        if (opts.threads > 0) return opts.threads;
        const unsigned hc = std::thread::hardware_concurrency();
        return hc > 0 ? static_cast<int>(hc) : 1;
    }

    const SigmaRoot& sigma() {
        if (!sigma_cache) {
            Stopwatch sw;
            sigma_cache = find_sigma_gnd(1e-9);
            sigma_seconds = sw.elapsed();
        }
        return *sigma_cache;
    }

    const PdeData& pde() {
        if (!pde_cache) {
            Stopwatch sw;
            PdeData d;
            for (std::size_t i = 0; i < d.a1.size(); ++i)
                d.fine[i] = transport_run(d.a1[i], 512);
            d.p2_coarse = transport_run(0.0, 256).mean_p2;
            d.seconds = sw.elapsed();
            pde_cache = std::move(d);
        }
        return *pde_cache;
    }
};

// deterministic polynomial soup shared by the property-suite criteria
inline PhaseExpr random_poly(std::uint64_t& state, int dof, int nterms, int max_exp) {
    auto next = [&state] {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<int>((state >> 33) & 0x7fffffff);
    };
    PhaseExpr out;
    for (int t = 0; t < nterms; ++t) {
        PhaseExpr term = PhaseExpr::integer(next() % 7 - 3);
        for (int i = 1; i <= dof; ++i)
            term = term * PhaseExpr::q(i).pow(next() % (max_exp + 1)) *
                   PhaseExpr::p(i).pow(next() % (max_exp + 1));
        out += term;
    }
    return out;
}

inline Rational factorial_r(int n) {
    Rational f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

inline void c1(Context& cx, CriterionResult& r) {
    const SigmaRoot& root = cx.sigma();
    const double target = 1.59577048804;
    const double err = std::fabs(root.sigma - target);
    r.pass = err <= 1e-6 && cx.sigma_seconds < 10.0;
    std::ostringstream os;
    os << "sigma = " << g6(root.sigma) << ", |sigma - " << target << "| = " << g2(err)
       << " (tol 1e-6), solved in " << g2(cx.sigma_seconds) << " s (< 10 s)";
    r.detail = os.str();
}

inline void c2(Context& cx, CriterionResult& r) {
    const GaussianState st{cx.sigma().sigma, 0.0};
    const double mean_h = expect(obs_hamiltonian(), st, 1e-13).value;
    const double ratio = mean_h / spectral::level_energy(1);
    const double gap = 1.0 - ratio;
    const double radius = most_probable_radius(st);
    const bool ratio_ok = gap > 0.0 && gap <= 1e-5;
    const bool radius_ok = std::fabs(radius - 2.257) <= 1e-3;
    r.pass = ratio_ok && radius_ok;
    std::ostringstream os;
    os << "1 - <H>/E_1 = " << g2(gap) << " (in (0, 1e-5]), peak radius = " << g6(radius)
       << " (2.257 +- 0.001)";
    r.detail = os.str();
}

inline void c3(Context&, CriterionResult& r) {
    double worst_ph = 0.0, worst_mh = 0.0, worst_pl = 0.0, worst_ml = 0.0;
    Rng rng(9001);
    const double lo = 2.0 * spectral::level_energy(1), hi = -1e-6;
    for (int i = 0; i < 1000000; ++i) {
        const double x = lo + (hi - lo) * rng.uniform01();
        worst_ph = std::max(worst_ph, spectral::partition_residual_h(x));
        worst_mh = std::max(worst_mh, spectral::moment_residual_h(x));
        const double y = -10.0 + 20.0 * rng.uniform01();
        worst_pl = std::max(worst_pl, spectral::partition_residual_l(y));
        worst_ml = std::max(worst_ml, spectral::moment_residual_l(y));
    }
    const double worst = std::max({worst_ph, worst_mh, worst_pl, worst_ml});
    r.pass = worst <= 1e-12;
    std::ostringstream os;
    os << "10^6 points/family: partition residuals " << g2(worst_ph) << " / " << g2(worst_pl)
       << ", moment residuals " << g2(worst_mh) << " / " << g2(worst_ml) << " (all <= 1e-12)";
    r.detail = os.str();
}

inline void c4(Context&, CriterionResult& r) {
    Stopwatch sw;
    const PhaseExpr h = hydrogen::hamiltonian();
    std::vector<PhaseExpr> conserved{h};
    for (int i = 1; i <= 3; ++i) conserved.push_back(hydrogen::angular_momentum(i));
    for (int i = 1; i <= 3; ++i) conserved.push_back(hydrogen::runge_lenz(i));
    bool all = true;
    for (const PhaseExpr& f : conserved) all = all && check_zero_orderwise(h, f, 3).all_zero;
    const double secs = sw.elapsed();
    r.pass = all && secs < 60.0;
    std::ostringstream os;
    os << "H, L_1..L_3, A_1..A_3 all vanish order-wise at D^1, D^3, D^5, D^7 in " << g2(secs)
       << " s (< 60 s)" << (all ? "" : " [nonzero order found]");
    r.detail = os.str();
}

inline void c5(Context&, CriterionResult& r) {
    bool ok = true;
    for (int n = 1; n <= 4; ++n) {
        const PhaseExpr qp = (PhaseExpr::q(1) * PhaseExpr::p(1)).pow(n);
        Rational expect = factorial_r(2 * n) * factorial_r(n) * factorial_r(n);
        if (n % 2) expect = -expect;
        ok = ok && d_omega_pow(qp, qp, 2 * n) == PhaseExpr::rational(expect);
    }
    for (int n = 1; n <= 3; ++n) {
        const PhaseExpr f = PhaseExpr::q(1).pow(n) * PhaseExpr::p(1).pow(n + 1);
        const PhaseExpr g = PhaseExpr::q(1).pow(2 * n) * PhaseExpr::p(1).pow(2 * n + 2);
        Rational c = factorial_r(2 * n) * factorial_r(2 * n + 1) * factorial_r(2 * n + 2) /
                     (factorial_r(n - 1) * factorial_r(n + 2));
        if (n % 2 == 0) c = -c;
        ok = ok && d_omega_pow(f, g, 2 * n + 1) ==
                       PhaseExpr::rational(c) * PhaseExpr::q(1).pow(n - 1) *
                           PhaseExpr::p(1).pow(n + 2);
    }
    r.pass = ok;
    r.detail = "(qp)^n D^2n (qp)^n for n = 1..4 and the q^n p^(n+1) family for n = 1..3, "
               "exact rational equality";
}

inline void c6(Context&, CriterionResult& r) {
    using PE = PhaseExpr;
    const PE m = PE::param("m"), om = PE::param("omega");
    const PE w = PE::param("t") * PE::param("n", -1);
    auto h_k = [&](int k) {
        return Rational(1, 2) * PE::param("m", -1) * PE::p(1) * PE::p(1) +
               Rational(1, 2) * m * om * om * PE::q(1) * PE::q(1) +
               Rational(1, 2) * PE::param("lambda" + std::to_string(k)) * PE::param("m", 2) *
                   PE::param("omega", 3) * PE::param("hbar", -1) * PE::q(1).pow(4);
    };
    std::vector<LiouvillianStep> steps;
    for (int k = 4; k >= 0; --k) steps.push_back({h_k(k), w});
    const PE res = liouvillian_product(steps, PE::p(1) * PE::p(1), BracketSpec::symbolic(1));
    const PE res0 = res.subst_param("lambda0", 0);
    const PE delta = res0 - res0.subst_param("a1", 0);
    const PE expect = PE::integer(1728) * PE::param("a1") * PE::param("lambda1") *
                      PE::param("lambda4") * PE::param("m", 2) * PE::param("n", -4) *
                      PE::param("omega", 6) * PE::param("t", 4) * PE::q(1).pow(2);
    r.pass = delta == expect;
    r.detail = "a1 lambda1 lambda4 q^2 t^4 coefficient = 1728/n^4 m^2 omega^6, exact "
               "(lambda0 = 0 symbolic)";
}

inline void c7(Context& cx, CriterionResult& r) {
    const PdeData& pd = cx.pde();
    const double p2_cl = pd.fine[0].mean_p2;
    const double p2_a1 = pd.fine[2].mean_p2;
    const double target_cl = 0.6795;
    const double target_a1 = 0.6795 + 0.0823 * (-1.0 / 24.0);
    double xb = 0.0, yb = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        xb += pd.a1[i] / 3.0;
        yb += pd.fine[i].mean_p2 / 3.0;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        sxy += (pd.a1[i] - xb) * (pd.fine[i].mean_p2 - yb);
        sxx += (pd.a1[i] - xb) * (pd.a1[i] - xb);
    }
    const double slope = sxy / sxx;
    const bool cl_ok = std::fabs(p2_cl - target_cl) <= 5e-3;
    const bool a1_ok = std::fabs(p2_a1 - target_a1) <= 5e-3;
    const bool slope_ok = std::fabs(slope - 0.0823) <= 0.1 * 0.0823;
    const bool time_ok = pd.seconds <= 600.0;
    r.pass = cl_ok && a1_ok && slope_ok && time_ok;
    std::ostringstream os;
    os << "<p^2>(t*) = " << g6(p2_cl) << " (0.6795 +- 0.005), " << g6(p2_a1) << " ("
       << g6(target_a1) << " +- 0.005 at a1 = -1/24); fitted slope " << g6(slope)
       << " (0.0823 +- 10%); 512^2 sweep in " << g6(pd.seconds) << " s (<= 600 s)";
    r.detail = os.str();
}

inline void c8(Context& cx, CriterionResult& r) {
    const PdeData& pd = cx.pde();
    double mass = 0.0, ehr = 0.0;
    for (const TransportRun& run : pd.fine) {
        mass = std::max(mass, run.mass_drift);
        ehr = std::max({ehr, run.ehr_q, run.ehr_p});
    }
    const double conv = std::fabs(pd.fine[0].mean_p2 - pd.p2_coarse);
    r.pass = mass <= 1e-6 && ehr <= 1e-3 && conv <= 2e-3;
    std::ostringstream os;
    os << "mass drift " << g2(mass) << " (<= 1e-6), Ehrenfest residual " << g2(ehr)
       << " (<= 1e-3), 256^2 vs 512^2 shift " << g2(conv) << " (<= 2e-3)";
    r.detail = os.str();
}

inline void c9(Context&, CriterionResult& r) {
    const RadialObservable obs = obs_energy_cell(2);
    const GaussianState narrow{0.5, 0.5}, wide{2.0, 0.5};
    const QuadResult qn = expect(obs, narrow, 1e-9);
    const QuadResult qw = expect(obs, wide, 1e-9);
    const McResult mn = expect_mc(obs, narrow, 10000000, 424242);
    const McResult mw = expect_mc(obs, wide, 10000000, 424243);
    const bool neg_ok = qn.value < 0.0 && -qn.value > qn.error;
    const bool pos_ok = qw.value >= -qw.error;
    const bool mc_ok = std::fabs(qn.value - mn.value) <= 3.0 * mn.std_error &&
                       std::fabs(qw.value - mw.value) <= 3.0 * mw.std_error;
    bool monotone = true;
    for (double sp : {0.25, 0.5, 0.75, 1.0}) {
        bool seen_nonneg = false;
        for (int i = 0; i < 12; ++i) {
            const double sq = 0.25 * (i + 1);
            const QuadResult c = expect(obs, {sq, sp}, 1e-7);
            const bool negative = c.value < 0.0 && -c.value > c.error;
            if (!negative)
                seen_nonneg = true;
            else if (seen_nonneg)
                monotone = false;
        }
    }
    r.pass = neg_ok && pos_ok && mc_ok && monotone;
    std::ostringstream os;
    os << "<T_2> = " << g6(qn.value) << " < 0 at (0.5, 0.5), " << g6(qw.value)
       << " >= 0 at (2.0, 0.5); 10^7-sample checks off by " << g2(std::fabs(qn.value - mn.value) / mn.std_error)
       << " / " << g2(std::fabs(qw.value - mw.value) / mw.std_error)
       << " sigma (<= 3); sign change monotone on all 4 slices: " << (monotone ? "yes" : "NO");
    r.detail = os.str();
}

inline void c10(Context&, CriterionResult& r) {
    bool ok = true;
    std::ostringstream os;
    os << "observed max |m|: ";
    for (int n = 1; n <= 4; ++n) {
        const spectral::ZeemanSupport sup = spectral::zeeman_support(n);
        long long worst = 0;
        for (long long m : sup.feasible_m) worst = std::max(worst, std::llabs(m));
        ok = ok && worst <= sup.naive_bound && sup.observed_max == n + 1;
        os << "n=" << n << " -> " << sup.observed_max << (n < 4 ? ", " : "");
    }
    os << " (oracle n+1, bound 2(n+1))";
    r.pass = ok;
    r.detail = os.str();
}

inline void c11(Context& cx, CriterionResult& r) {
    const DriveSpec d;
    const std::vector<ExcitationPoint> curve =
        excitation_curve(d, cx.sigma().sigma, 1e-8, cx.threads());
    const bool start_ok = curve.front().pr2 <= 1e-8;
    bool positive_ok = true;
    double gap1 = 0.0, sum_max = 0.0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const ExcitationPoint& pt = curve[i];
        if (i > 0 && !(pt.pr2 > 0.0)) positive_ok = false;
        gap1 = std::max(gap1, std::fabs(pt.pr1 - pt.qt1));
        sum_max = std::max(sum_max, pt.pr1 + pt.pr2);
    }
    const bool agree_ok = gap1 <= 1e-2;
    const bool sum_ok = sum_max <= 1.0 + 1e-8;
    r.pass = start_ok && positive_ok && agree_ok && sum_ok;
    std::ostringstream os;
    os << "Pr[E_2](0) = " << g2(curve.front().pr2) << " (<= 1e-8), Pr[E_2](t>0) > 0: "
       << (positive_ok ? "yes" : "NO") << ", max |Pr[E_1] - wave mechanics| = " << g6(gap1)
       << " (<= 0.01): " << (agree_ok ? "yes" : "NO") << ", max Pr_1+Pr_2 = " << g6(sum_max)
       << " (<= 1 + 1e-8)";
    r.detail = os.str();
}

inline void c12(Context& cx, CriterionResult& r) {
    Stopwatch sw;
    TrajectoryOptions prec;
    prec.start_radius = 1e8;
    prec.rel_tol = 1e-12;
    prec.abs_tol = 1e-14;
    double worst_angle = 0.0;
    for (double deg : {30.0, 60.0, 90.0, 120.0}) {
        const double theta = deg * std::acos(-1.0) / 180.0;
        const double got = trajectory_angle(impact_parameter(theta, 1.0), 1.0, prec);
        worst_angle = std::max(worst_angle, std::fabs(got - theta));
    }
    ScatterConfig cfg;
    cfg.seed = 20260817;
    cfg.threads = cx.threads();
    const CrossSectionResult res = cross_section(cfg);
    const double reduced = res.chi2 / res.dof;
    double worst_ratio = 0.0;
    for (const CrossSectionBin& b : res.bins)
        worst_ratio = std::max(worst_ratio, std::fabs(b.ratio - 1.0));
    const double secs = sw.elapsed();
    r.pass = worst_angle <= 1e-6 && reduced <= 2.0 && worst_ratio <= 0.05 && !res.any_empty &&
             secs <= 300.0;
    std::ostringstream os;
    os << "deflection oracle off by " << g2(worst_angle) << " rad (<= 1e-6); 10^6 trajectories: "
       << "reduced chi^2 = " << g6(reduced) << " (<= 2), worst bin ratio off by "
       << g2(worst_ratio) << " (<= 0.05), in " << g6(secs) << " s (<= 300 s)";
    r.detail = os.str();
}

inline void c13(Context&, CriterionResult& r) {
    ExponentLedger led;
    try {
        led = exponent_table(20);
    } catch (const std::logic_error& e) {
        r.pass = false;
        r.detail = std::string("recursion branches disagreed: ") + e.what();
        return;
    }
    bool ok = led.alpha[0][0] == 0;
    for (int n = 1; n <= 20; ++n) ok = ok && led.alpha[n][0] == -1;
    for (int n = 0; n <= 20; ++n)
        for (int k = 1; k <= 20; ++k) ok = ok && led.alpha[n][k] == 2 * n + k;
    using P = std::pair<int, int>;
    ok = ok && led.survivors == std::vector<P>{{0, 0}, {0, 1}, {0, 2}} && led.classical_only;
    r.pass = ok;
    r.detail = "alpha(n, k) = 2n + k for all n, k <= 20, every split branch agreeing; "
               "survivors {(0,0), (0,1), (0,2)} after removing the vanishing (1,0) term";
}

inline void c14(Context&, CriterionResult& r) {
    using PE = PhaseExpr;
    bool ok = true;
    std::vector<std::string> fails;

    {
        std::uint64_t s = 777;
        const PE f1 = random_poly(s, 2, 5, 2), f2 = random_poly(s, 2, 5, 2);
        const PE g = random_poly(s, 2, 5, 2);
        const BracketSpec spec = BracketSpec::moyal(2);
        const Rational alpha(2, 3), beta(-5);
        if (!(gmb(alpha * f1 + beta * f2, g, spec).value ==
              alpha * gmb(f1, g, spec).value + beta * gmb(f2, g, spec).value)) {
            ok = false;
            fails.push_back("bilinearity");
        }
    }
    {
        std::uint64_t s = 12345;
        const PE f = random_poly(s, 2, 6, 2), g = random_poly(s, 2, 6, 2);
        for (int k = 1; k <= 4; ++k) {
            const PE lhs = d_omega_pow(f, g, k), rhs = d_omega_pow(g, f, k);
            if (!(k % 2 ? lhs == -rhs : lhs == rhs)) {
                ok = false;
                fails.push_back("parity");
            }
        }
    }
    {
        std::uint64_t s = 999;
        const PE f = random_poly(s, 3, 6, 3) + PE::r_power(-1) * PE::q(2);
        const PE p2 = PE::q(1) * PE::q(1) + PE::p(1) * PE::q(2) - PE::integer(3) * PE::p(3) +
                      PE::integer(2);
        for (const BracketSpec& spec :
             {BracketSpec::moyal(3), BracketSpec::symbolic(2), BracketSpec::poisson()}) {
            const BracketResult br = gmb(f, p2, spec);
            if (!(br.value == d_omega_pow(f, p2, 1)) || !br.truncation_complete) {
                ok = false;
                fails.push_back("second-order reduction");
            }
        }
    }
    double res_quad = 0.0, res_quartic = 0.0;
    {
        const GaussTestFn f{PE::q(1) + PE::rational(Rational(1, 2)) * PE::p(1) * PE::q(1), 1};
        const GaussTestFn g{PE::p(1) * PE::p(1) - PE::q(1), 1};
        const BracketSpec m1 = BracketSpec::moyal(1, PE::rational(1));
        res_quad = adjointness_check(PE::q(1).pow(2), f, g, m1);
        res_quartic = std::max(adjointness_check(PE::q(1).pow(4), f, g, m1),
                               adjointness_check(PE::q(1).pow(4) + PE::p(1).pow(4), f, g, m1));
        if (!(res_quad <= 1e-8 && res_quartic <= 1e-6 &&
              adjointness_check(PE::integer(7), f, g, m1) == 0.0)) {
            ok = false;
            fails.push_back("adjointness");
        }
    }
    {
        const PE f = PE::q(1).pow(4), g = PE::p(1).pow(4), h = PE::q(1).pow(4) * PE::p(1).pow(2);
        auto jac = [&](const BracketSpec& spec) {
            return gmb(f, gmb(g, h, spec).value, spec).value +
                   gmb(g, gmb(h, f, spec).value, spec).value +
                   gmb(h, gmb(f, g, spec).value, spec).value;
        };
        const PE sym = jac(BracketSpec::symbolic(1));
        const PE trunc = jac(BracketSpec::moyal(1));
        const bool jac_ok =
            sym == PE::integer(-82944) * PE::param("a1", 2) * PE::param("hbar", 4) *
                       PE::q(1).pow(2) &&
            !trunc.is_zero() &&
            trunc == PE::integer(-144) * PE::param("hbar", 4) * PE::q(1).pow(2) &&
            jac(BracketSpec::moyal(3)).is_zero();
        if (!jac_ok) {
            ok = false;
            fails.push_back("Jacobi witness");
        }
    }
    {
        const BracketSpec spec = BracketSpec::symbolic(1);
        const PE defect = gmb(PE::q(1).pow(3), PE::p(1).pow(4), spec).value -
                          gmb(PE::q(1).pow(3), PE::p(1), spec).value * PE::p(1).pow(3) -
                          PE::p(1) * gmb(PE::q(1).pow(3), PE::p(1).pow(3), spec).value;
        const bool leib_ok =
            defect == PE::integer(108) * PE::param("a1") * PE::param("hbar", 2) * PE::p(1) &&
            !defect.subst_param("a1", Rational(-1, 24)).subst_param("hbar", 1).is_zero();
        if (!leib_ok) {
            ok = false;
            fails.push_back("Leibniz witness");
        }
    }

    r.pass = ok;
    if (ok) {
        std::ostringstream os;
        os << "bilinearity, parity, second-order reduction, Jacobi and Leibniz defect "
           << "witnesses all exact; adjointness residuals " << g2(res_quad) << " (quadratic), "
           << g2(res_quartic) << " (quartic, <= 1e-6)";
        r.detail = os.str();
    } else {
        std::string msg = "failed:";
        for (const std::string& f : fails) msg += " " + f;
        r.detail = msg;
    }
}

using CriterionFn = void (*)(Context&, CriterionResult&);

inline constexpr std::array<CriterionFn, 14> criterion_fns{
    &c1, &c2, &c3, &c4, &c5, &c6, &c7, &c8, &c9, &c10, &c11, &c12, &c13, &c14};

} // namespace detail

inline std::vector<CriterionResult> run(const Options& opts = {}) {
    detail::Context cx;
    cx.opts = opts;
    std::vector<CriterionResult> out;
    for (int id = 1; id <= 14; ++id) {
        if (!opts.only.empty() &&
            std::find(opts.only.begin(), opts.only.end(), id) == opts.only.end())
            continue;
        detail::Stopwatch sw;
        CriterionResult r;
        r.id = id;
        r.name = criterion_name(id);
        try {
            detail::criterion_fns[static_cast<std::size_t>(id - 1)](cx, r);
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("unexpected exception: ") + e.what();
        }
        r.seconds = sw.elapsed();
        out.push_back(std::move(r));
    }
    return out;
}

inline bool all_passed(const std::vector<CriterionResult>& rows) {
    for (const CriterionResult& r : rows)
        if (!r.pass) return false;
    return !rows.empty();
}

inline void print_table(std::ostream& os, const std::vector<CriterionResult>& rows) {
    int npass = 0;
    for (const CriterionResult& r : rows) {
        char head[80];
        std::snprintf(head, sizeof head, "[%2d] %s  %-34s ", r.id, r.pass ? "PASS" : "FAIL",
                      r.name.c_str());
        char tail[32];
        std::snprintf(tail, sizeof tail, "  (%.1f s)", r.seconds);
        os << head << r.detail << tail << "\n";
        npass += r.pass ? 1 : 0;
    }
    os << npass << " of " << rows.size() << " criteria passed\n";
}

} // namespace gphase::verify
