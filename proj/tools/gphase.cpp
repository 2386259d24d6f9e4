// Command-line front end.  Every subcommand resolves its configuration from
// defaults, an optional TOML config file, and command-line flags (flags win),
// writes a manifest.json recording the resolved values next to its outputs,
// and emits data as CSV/JSON with locale-independent full-precision numbers.
//
// Exit codes: 0 success, 1 domain error (bad flags, bad config, unparsable
// expression, unwritable output), 2 numerical failure (instability,
// non-convergence, failed verification).

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <gphase/bracket.hpp>
#include <gphase/dynamics.hpp>
#include <gphase/field.hpp>
#include <gphase/io.hpp>
#include <gphase/parse.hpp>
#include <gphase/scattering.hpp>
#include <gphase/spectral.hpp>
#include <gphase/states.hpp>
#include <gphase/verify.hpp>
#include <gphase/version.hpp>

namespace {

using gphase::io::format_double;
using gphase::io::json;

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 1) throw std::invalid_argument("grid needs at least one point");
    std::vector<double> out(static_cast<std::size_t>(n));
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return out;
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

std::string prepare_out_dir(const std::string& out) {
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    if (ec) throw gphase::io::IoError("cannot create output directory '" + out + "'");
    return out;
}

struct Common {
    std::string out = ".";
    int threads = 0;
    std::vector<std::string> argv;
};

void manifest(const Common& c, const std::string& subcommand, const json& cfg) {
    gphase::io::write_manifest(c.out, subcommand, cfg, gphase::version_string, c.argv);
}

// ---------------------------------------------------------------------- bracket

struct BracketOpts {
    std::string f, g;
    std::string form = "moyal";
    int order = 3;
    int raw_k = -1;
    double hbar = 0.0;
    bool hbar_set = false;
    double a1 = 0.0;
    bool a1_set = false;
};

int run_bracket(const Common& c, const BracketOpts& o) {
    const gphase::PhaseExpr f = gphase::parse_expr(o.f);
    const gphase::PhaseExpr g = gphase::parse_expr(o.g);

    json cfg{{"f", o.f}, {"g", o.g}, {"form", o.form}, {"order", o.order}};
    if (o.raw_k >= 0) cfg["raw_k"] = o.raw_k;
    if (o.hbar_set) cfg["hbar"] = o.hbar;
    if (o.a1_set) cfg["a1"] = o.a1;
    manifest(c, "bracket", cfg);

    json out;
    if (o.raw_k >= 0) {
        const gphase::PhaseExpr res = gphase::d_omega_pow(f, g, o.raw_k);
        std::cout << "D^" << o.raw_k << "(f, g) = " << res.str() << "\n";
        out["raw_k"] = o.raw_k;
        out["result"] = res.str();
        out["result_terms"] = gphase::io::expr_to_json(res);
    } else {
        gphase::BracketSpec spec;
        if (o.form == "poisson")
            spec = gphase::BracketSpec::poisson();
        else if (o.form == "moyal")
            spec = gphase::BracketSpec::moyal(o.order);
        else if (o.form == "symbolic")
            spec = gphase::BracketSpec::symbolic(o.order);
        else
            throw std::invalid_argument("unknown bracket form '" + o.form + "'");

        auto reduce = [&](gphase::PhaseExpr e) {
            if (o.hbar_set) e = e.subst_param("hbar", gphase::Rational(o.hbar));
            if (o.a1_set) e = e.subst_param("a1", gphase::Rational(o.a1));
            return e;
        };

        const gphase::BracketResult res = gphase::gmb(f, g, spec);
        json orders = json::array();
        for (int n = 0; n <= spec.max_order(); ++n) {
            const int k = 2 * n + 1;
            gphase::PhaseExpr term = gphase::d_omega_pow(f, g, k);
            if (n > 0) term = spec.coeffs[static_cast<std::size_t>(n - 1)] *
                              spec.hbar.pow(2 * n) * term;
            term = reduce(term);
            std::cout << "order D^" << k << ": " << term.str() << "\n";
            orders.push_back({{"k", k}, {"term", term.str()}});
        }
        const gphase::PhaseExpr total = reduce(res.value);
        std::cout << "bracket = " << total.str() << "\n";
        std::cout << "truncation complete: " << (res.truncation_complete ? "yes" : "no") << "\n";
        out["orders"] = orders;
        out["bracket"] = total.str();
        out["bracket_terms"] = gphase::io::expr_to_json(total);
        out["truncation_complete"] = res.truncation_complete;
    }
    gphase::io::write_json(c.out + "/bracket.json", out);
    return 0;
}

// ---------------------------------------------------------------------- spectra

struct SpectraOpts {
    std::string family = "energy";
    int levels = 8;
    int samples = 512;
    double x_min = 0.0, x_max = 0.0;
    bool x_min_set = false, x_max_set = false;
};

int run_spectra(const Common& c, const SpectraOpts& o) {
    const bool energy = o.family == "energy";
    if (!energy && o.family != "angular")
        throw std::invalid_argument("family must be 'energy' or 'angular'");
    if (o.levels < 1) throw std::invalid_argument("levels must be >= 1");
    const double lo = o.x_min_set ? o.x_min : (energy ? 2.0 * gphase::spectral::level_energy(1) : -10.0);
    const double hi = o.x_max_set ? o.x_max : (energy ? -1e-6 : 10.0);
    if (energy && !(lo < 0.0 && hi < 0.0 && lo < hi))
        throw std::invalid_argument("energy family needs x_min < x_max < 0");

    manifest(c, "spectra",
             json{{"family", o.family},
                  {"levels", o.levels},
                  {"samples", o.samples},
                  {"x_min", lo},
                  {"x_max", hi}});

    std::vector<std::string> header{"x"};
    if (energy)
        for (int n = 1; n <= o.levels; ++n) header.push_back("t(" + std::to_string(n) + ")");
    else
        for (int m = -o.levels; m <= o.levels; ++m)
            header.push_back("t(" + std::to_string(m) + ")");
    header.push_back("partition_residual");
    header.push_back("moment_residual");

    std::vector<std::vector<double>> rows;
    for (double x : linspace(lo, hi, o.samples)) {
        std::vector<double> row{x};
        if (energy) {
            for (int n = 1; n <= o.levels; ++n) row.push_back(gphase::spectral::t_h(n, x));
            row.push_back(gphase::spectral::partition_residual_h(x));
            row.push_back(gphase::spectral::moment_residual_h(x));
        } else {
            for (int m = -o.levels; m <= o.levels; ++m)
                row.push_back(gphase::spectral::t_l(m, x));
            row.push_back(gphase::spectral::partition_residual_l(x));
            row.push_back(gphase::spectral::moment_residual_l(x));
        }
        rows.push_back(std::move(row));
    }
    gphase::io::write_csv(c.out + "/spectra.csv", header, rows);
    std::cout << "wrote " << rows.size() << " samples of the " << o.family << " family to "
              << c.out << "/spectra.csv\n";
    return 0;
}

// ---------------------------------------------------------------------- scan

struct ScanOpts {
    double sq_min = 0.25, sq_max = 3.0;
    int sq_steps = 12;
    double sp_min = 0.0, sp_max = 1.0;
    int sp_steps = 5;
    double tol = 1e-7;
};

int run_scan(const Common& c, const ScanOpts& o) {
    manifest(c, "scan",
             json{{"sq_min", o.sq_min},
                  {"sq_max", o.sq_max},
                  {"sq_steps", o.sq_steps},
                  {"sp_min", o.sp_min},
                  {"sp_max", o.sp_max},
                  {"sp_steps", o.sp_steps},
                  {"tol", o.tol}});
    const std::vector<gphase::ScanCell> cells = gphase::positivity_scan(
        linspace(o.sq_min, o.sq_max, o.sq_steps), linspace(o.sp_min, o.sp_max, o.sp_steps),
        o.tol);
    std::vector<std::vector<double>> rows;
    int negatives = 0;
    for (const gphase::ScanCell& cell : cells) {
        rows.push_back({cell.sigma_q, cell.sigma_p, cell.value, cell.error,
                        static_cast<double>(cell.sign)});
        negatives += cell.sign < 0 ? 1 : 0;
    }
    gphase::io::write_csv(c.out + "/scan.csv",
                          {"sigma_q", "sigma_p", "value", "error", "sign"}, rows);
    std::cout << "scanned " << cells.size() << " states, " << negatives
              << " with a negative second-level weight; wrote " << c.out << "/scan.csv\n";
    return 0;
}

// ---------------------------------------------------------------------- ground

struct GroundOpts {
    double tol = 1e-9;
};

int run_ground(const Common& c, const GroundOpts& o) {
    manifest(c, "ground", json{{"tol", o.tol}});
    const gphase::SigmaRoot root = gphase::find_sigma_gnd(o.tol);
    const gphase::GaussianState st{root.sigma, 0.0};
    const double mean_h = gphase::expect(gphase::obs_hamiltonian(), st, 1e-13).value;
    const double e1 = gphase::spectral::level_energy(1);
    const double radius = gphase::most_probable_radius(st);
    const double prob_sum = gphase::energy_probability_sum(st);

    json out{{"sigma_gnd", root.sigma},
             {"objective", root.value},
             {"iterations", root.iterations},
             {"mean_energy", mean_h},
             {"level1_energy", e1},
             {"energy_ratio_gap", 1.0 - mean_h / e1},
             {"most_probable_radius", radius},
             {"energy_probability_sum", prob_sum}};
    gphase::io::write_json(c.out + "/ground.json", out);

    std::cout << "sigma_gnd = " << format_double(root.sigma) << " (" << root.iterations
              << " bisection steps)\n"
              << "<H> = " << format_double(mean_h) << ", 1 - <H>/E_1 = "
              << format_double(1.0 - mean_h / e1) << "\n"
              << "most probable radius = " << format_double(radius) << "\n"
              << "energy probability sum = " << format_double(prob_sum) << "\n";
    return 0;
}

// ---------------------------------------------------------------------- zeeman

struct ZeemanOpts {
    int n_max = 4;
};

int run_zeeman(const Common& c, const ZeemanOpts& o) {
    if (o.n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    manifest(c, "zeeman", json{{"n_max", o.n_max}});
    json levels = json::array();
    for (int n = 1; n <= o.n_max; ++n) {
        const gphase::spectral::ZeemanSupport sup = gphase::spectral::zeeman_support(n);
        json witnesses = json::array();
        for (const gphase::spectral::ZeemanWitness& w : sup.witnesses)
            witnesses.push_back({{"m", w.m},
                                 {"q", {w.q[0], w.q[1], w.q[2]}},
                                 {"p", {w.p[0], w.p[1], w.p[2]}},
                                 {"value", w.value}});
        levels.push_back({{"level", sup.level},
                          {"naive_bound", sup.naive_bound},
                          {"observed_max", sup.observed_max},
                          {"feasible_m", sup.feasible_m},
                          {"witnesses", witnesses}});
        std::cout << "n = " << n << ": max |m| with support = " << sup.observed_max
                  << " (counting bound " << sup.naive_bound << ")\n";
    }
    gphase::io::write_json(c.out + "/zeeman.json", json{{"levels", levels}});
    return 0;
}

// ---------------------------------------------------------------------- evolve

struct EvolveOpts {
    double a1 = 0.0;
    double hbar = 1.0;
    double harmonic = 1.0;
    double t_end = 0.25 * 3.14159265358979323846;
    double cfl = 0.8;
    int record_every = 1;
    int nq = 512, np = 512;
    double q_min = -8.0, q_max = 8.0, p_min = -8.0, p_max = 8.0;
    double lambda_const = 0.0;
    bool lambda_const_set = false;
    bool no_step_guard = false;
};

int run_evolve(const Common& c, const EvolveOpts& o) {
    json cfg{{"a1", o.a1},         {"hbar", o.hbar},
             {"harmonic", o.harmonic}, {"t_end", o.t_end},
             {"cfl", o.cfl},       {"record_every", o.record_every},
             {"nq", o.nq},         {"np", o.np},
             {"q_min", o.q_min},   {"q_max", o.q_max},
             {"p_min", o.p_min},   {"p_max", o.p_max},
             {"step_guard", !o.no_step_guard},
             {"lambda", o.lambda_const_set ? json(o.lambda_const) : json("wedge")}};
    manifest(c, "evolve", cfg);

    gphase::PhaseGrid grid = gphase::make_grid(o.q_min, o.q_max, o.p_min, o.p_max, o.nq, o.np);
    gphase::fill_ground_state(grid);
    gphase::EvolutionSpec spec;
    spec.a1 = o.a1;
    spec.hbar = o.hbar;
    spec.harmonic = o.harmonic;
    spec.t_end = o.t_end;
    spec.cfl = o.cfl;
    spec.record_every = o.record_every;
    spec.enforce_von_neumann = !o.no_step_guard;
    if (o.lambda_const_set) {
        const double lam = o.lambda_const;
        spec.lambda_of_t = [lam](double) { return lam; };
    }

    const gphase::EvolveResult res = gphase::evolve(grid, spec);

    std::vector<std::vector<double>> rows;
    for (const gphase::MomentSample& m : res.moments)
        rows.push_back({m.t, m.mean_q, m.mean_p, m.mean_p2, m.mean_q2, m.mean_q4, m.mean_force,
                        m.mass});
    gphase::io::write_csv(
        c.out + "/moments.csv",
        {"t", "mean_q", "mean_p", "mean_p2", "mean_q2", "mean_q4", "mean_force", "mass"}, rows);
    gphase::io::write_grid_binary(c.out + "/state.bin",
                                  static_cast<std::uint32_t>(res.grid.n_q),
                                  static_cast<std::uint32_t>(res.grid.n_p), res.grid.q_min,
                                  res.grid.q_max, res.grid.p_min, res.grid.p_max,
                                  res.grid.values.data());

    const double mass0 = res.moments.front().mass;
    double mass_drift = 0.0;
    for (const gphase::MomentSample& m : res.moments)
        mass_drift = std::max(mass_drift, std::fabs(m.mass / mass0 - 1.0));
    json out{{"n_steps", res.n_steps},
             {"dt", res.dt},
             {"boundary_ratio_max", res.boundary_ratio_max},
             {"mass_drift", mass_drift},
             {"final_t", res.moments.back().t},
             {"final_mean_p2", res.moments.back().mean_p2}};
    if (res.moments.size() >= 3) {
        const gphase::EhrenfestResidual ehr = gphase::ehrenfest_residual(res.moments);
        out["ehrenfest_position"] = ehr.position;
        out["ehrenfest_momentum"] = ehr.momentum;
    }
    gphase::io::write_json(c.out + "/evolve.json", out);

    std::cout << "evolved to t = " << format_double(res.moments.back().t) << " in "
              << res.n_steps << " steps (dt = " << format_double(res.dt) << ")\n"
              << "<p^2>(t_end) = " << format_double(res.moments.back().mean_p2)
              << ", mass drift = " << format_double(mass_drift) << "\n";
    return 0;
}

// ---------------------------------------------------------------------- excite

struct ExciteOpts {
    double sigma = 0.0; // 0 = solve for the ground width first
    double omega = 3.0 / 8.0;
    double field = 9.0 / 64.0;
    double mu = 1.0;
    double hbar = 1.0;
    double t_end = 6.0;
    int samples = 200;
    double tol = 1e-8;
};

int run_excite(const Common& c, const ExciteOpts& o) {
    const double sigma = o.sigma > 0.0 ? o.sigma : gphase::find_sigma_gnd(1e-9).sigma;
    const int threads = resolve_threads(c.threads);
    manifest(c, "excite",
             json{{"sigma", sigma},
                  {"omega", o.omega},
                  {"field", o.field},
                  {"mu", o.mu},
                  {"hbar", o.hbar},
                  {"t_end", o.t_end},
                  {"samples", o.samples},
                  {"tol", o.tol},
                  {"threads", threads}});

    gphase::DriveSpec d;
    d.omega = o.omega;
    d.ee = o.field;
    d.mu = o.mu;
    d.hbar = o.hbar;
    d.t_end = o.t_end;
    d.n_samples = o.samples;
    const std::vector<gphase::ExcitationPoint> curve =
        gphase::excitation_curve(d, sigma, o.tol, threads);

    std::vector<std::vector<double>> rows;
    double gap1 = 0.0, sum_max = 0.0;
    for (const gphase::ExcitationPoint& pt : curve) {
        rows.push_back({pt.t, pt.s, pt.u, pt.pr1, pt.pr2, pt.qt1, pt.qt2});
        gap1 = std::max(gap1, std::fabs(pt.pr1 - pt.qt1));
        sum_max = std::max(sum_max, pt.pr1 + pt.pr2);
    }
    gphase::io::write_csv(c.out + "/excite.csv",
                          {"t", "shift_q", "shift_p", "pr_level1", "pr_level2",
                           "pr_wave_level1", "pr_wave_level2"},
                          rows);
    gphase::io::write_json(c.out + "/excite.json",
                           json{{"sigma", sigma},
                                {"pr_level2_at_0", curve.front().pr2},
                                {"max_gap_level1", gap1},
                                {"max_prob_sum", sum_max}});
    std::cout << "sampled " << curve.size() << " drive times to t = " << format_double(o.t_end)
              << "; max |Pr_1 - wave-mechanics Pr_1| = " << format_double(gap1) << "\n";
    return 0;
}

// ---------------------------------------------------------------------- scatter

struct ScatterOpts {
    double b = 0.0; // > 0 selects single-trajectory mode
    double p0 = 1.0;
    double kappa = 1.0;
    double mu = 1.0;
    double b_max = 4.0;
    long long n_particles = 1000000;
    int n_bins = 12;
    double theta_min = 30.0, theta_max = 150.0;
    std::uint64_t seed = 1;
    double start_radius = 0.0; // 0 = mode default
    double rel_tol = 0.0;
    double abs_tol = 0.0;
};

int run_scatter(const Common& c, const ScatterOpts& o) {
    if (o.b > 0.0) {
        gphase::TrajectoryOptions opt;
        opt.kappa = o.kappa;
        opt.mu = o.mu;
        if (o.start_radius > 0.0) opt.start_radius = o.start_radius;
        if (o.rel_tol > 0.0) opt.rel_tol = o.rel_tol;
        if (o.abs_tol > 0.0) opt.abs_tol = o.abs_tol;
        manifest(c, "scatter",
                 json{{"mode", "trajectory"},
                      {"b", o.b},
                      {"p0", o.p0},
                      {"kappa", o.kappa},
                      {"mu", o.mu},
                      {"start_radius", opt.start_radius},
                      {"rel_tol", opt.rel_tol},
                      {"abs_tol", opt.abs_tol}});
        const gphase::TrajectoryResult res = gphase::trajectory(o.b, o.p0, opt);
        const double oracle =
            2.0 * std::atan(std::fabs(o.kappa) * o.mu / (o.p0 * o.p0 * o.b));
        gphase::io::write_json(c.out + "/scatter.json",
                               json{{"b", o.b},
                                    {"theta", res.theta},
                                    {"theta_oracle", oracle},
                                    {"energy_drift", res.energy_drift},
                                    {"n_steps", res.n_steps}});
        std::cout << "theta(b = " << format_double(o.b) << ") = " << format_double(res.theta)
                  << " rad (closed form " << format_double(oracle)
                  << "), relative energy drift = " << format_double(res.energy_drift) << "\n";
        return 0;
    }

    gphase::ScatterConfig cfg;
    cfg.p0 = o.p0;
    cfg.kappa = o.kappa;
    cfg.mu = o.mu;
    cfg.b_max = o.b_max;
    cfg.n_particles = o.n_particles;
    cfg.n_bins = o.n_bins;
    cfg.theta_min_deg = o.theta_min;
    cfg.theta_max_deg = o.theta_max;
    cfg.seed = o.seed;
    cfg.threads = resolve_threads(c.threads);
    if (o.start_radius > 0.0) cfg.start_radius = o.start_radius;
    if (o.rel_tol > 0.0) cfg.rel_tol = o.rel_tol;
    if (o.abs_tol > 0.0) cfg.abs_tol = o.abs_tol;
    manifest(c, "scatter",
             json{{"mode", "cross-section"},
                  {"p0", cfg.p0},
                  {"kappa", cfg.kappa},
                  {"mu", cfg.mu},
                  {"b_max", cfg.b_max},
                  {"n_particles", cfg.n_particles},
                  {"n_bins", cfg.n_bins},
                  {"theta_min_deg", cfg.theta_min_deg},
                  {"theta_max_deg", cfg.theta_max_deg},
                  {"seed", cfg.seed},
                  {"threads", cfg.threads},
                  {"start_radius", cfg.start_radius},
                  {"rel_tol", cfg.rel_tol},
                  {"abs_tol", cfg.abs_tol}});

    const gphase::CrossSectionResult res = gphase::cross_section(cfg);
    std::vector<std::vector<double>> rows;
    for (const gphase::CrossSectionBin& b : res.bins)
        rows.push_back({b.theta_lo_deg, b.theta_mid_deg, b.theta_hi_deg,
                        static_cast<double>(b.count), b.estimate, b.std_error, b.formula,
                        b.ratio});
    gphase::io::write_csv(c.out + "/scatter.csv",
                          {"theta_lo_deg", "theta_mid_deg", "theta_hi_deg", "count", "estimate",
                           "std_error", "rutherford", "ratio"},
                          rows);
    gphase::io::write_json(c.out + "/scatter.json",
                           json{{"chi2", res.chi2},
                                {"dof", res.dof},
                                {"reduced_chi2", res.chi2 / res.dof},
                                {"seed", res.seed},
                                {"flux_density", res.nu},
                                {"n_below_range", res.n_below},
                                {"n_above_range", res.n_above},
                                {"any_empty", res.any_empty}});
    if (res.any_empty)
        std::cerr << "warning: empty angular bins; increase n_particles or widen bins\n";
    std::cout << res.bins.size() << " bins from " << o.n_particles
              << " trajectories: reduced chi^2 vs Rutherford = "
              << format_double(res.chi2 / res.dof) << " (" << res.dof << " dof)\n";
    return 0;
}

// ---------------------------------------------------------------------- verify

struct VerifyOpts {
    std::vector<int> only;
};

int run_verify(const Common& c, const VerifyOpts& o) {
    json cfg{{"threads", resolve_threads(c.threads)}};
    if (!o.only.empty()) cfg["only"] = o.only;
    manifest(c, "verify", cfg);

    gphase::verify::Options opts;
    opts.threads = c.threads;
    opts.only = o.only;
    const std::vector<gphase::verify::CriterionResult> rows = gphase::verify::run(opts);
    gphase::verify::print_table(std::cout, rows);

    json jrows = json::array();
    for (const gphase::verify::CriterionResult& r : rows)
        jrows.push_back({{"id", r.id},
                         {"name", r.name},
                         {"pass", r.pass},
                         {"detail", r.detail},
                         {"seconds", r.seconds}});
    gphase::io::write_json(c.out + "/verify.json", json{{"criteria", jrows}});
    return gphase::verify::all_passed(rows) ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"phase-space hydrogen: brackets, spectra, transport, scattering"};
    app.set_version_flag("--version", gphase::version_string);
    app.set_config("--config", "", "TOML config file; command-line flags override it");
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    app.add_option("--out", common.out, "output directory (also via GPHASE_OUT)")
        ->envname("GPHASE_OUT")
        ->capture_default_str();
    app.add_option("--threads", common.threads,
                   "worker threads; 0 = all available cores (results do not depend on this)")
        ->capture_default_str();

    BracketOpts bo;
    CLI::App* bracket = app.add_subcommand("bracket", "evaluate a generalized bracket symbolically");
    bracket->fallthrough();
    bracket->add_option("--f", bo.f, "left operand expression")->required();
    bracket->add_option("--g", bo.g, "right operand expression")->required();
    bracket->add_option("--form", bo.form, "poisson | moyal | symbolic")->capture_default_str();
    bracket->add_option("--order", bo.order, "highest correction order N")->capture_default_str();
    bracket->add_option("--raw-k", bo.raw_k, "print the bare order-k bidifferential instead");
    bracket->add_option("--hbar", bo.hbar, "substitute a numeric value for hbar")
        ->each([&bo](const std::string&) { bo.hbar_set = true; });
    bracket->add_option("--a1", bo.a1, "substitute a numeric value for a1")
        ->each([&bo](const std::string&) { bo.a1_set = true; });

    SpectraOpts so;
    CLI::App* spectra = app.add_subcommand("spectra", "sample the sawtooth spectral families");
    spectra->fallthrough();
    spectra->add_option("--family", so.family, "energy | angular")->capture_default_str();
    spectra->add_option("--levels", so.levels, "levels per side to tabulate")->capture_default_str();
    spectra->add_option("--samples", so.samples, "number of x samples")->capture_default_str();
    spectra->add_option("--x-min", so.x_min, "lower end of the x range")
        ->each([&so](const std::string&) { so.x_min_set = true; });
    spectra->add_option("--x-max", so.x_max, "upper end of the x range")
        ->each([&so](const std::string&) { so.x_max_set = true; });

    ScanOpts co;
    CLI::App* scan = app.add_subcommand("scan", "map the sign of the second-level weight");
    scan->fallthrough();
    scan->add_option("--sq-min", co.sq_min)->capture_default_str();
    scan->add_option("--sq-max", co.sq_max)->capture_default_str();
    scan->add_option("--sq-steps", co.sq_steps)->capture_default_str();
    scan->add_option("--sp-min", co.sp_min)->capture_default_str();
    scan->add_option("--sp-max", co.sp_max)->capture_default_str();
    scan->add_option("--sp-steps", co.sp_steps)->capture_default_str();
    scan->add_option("--tol", co.tol, "quadrature tolerance")->capture_default_str();

    GroundOpts go;
    CLI::App* ground = app.add_subcommand("ground", "solve for the minimal-energy state width");
    ground->fallthrough();
    ground->add_option("--tol", go.tol, "bisection tolerance on sigma")->capture_default_str();

    ZeemanOpts zo;
    CLI::App* zeeman = app.add_subcommand("zeeman", "search magnetic sublevel support");
    zeeman->fallthrough();
    zeeman->add_option("--n-max", zo.n_max, "highest principal level")->capture_default_str();

    EvolveOpts eo;
    CLI::App* evolve = app.add_subcommand("evolve", "integrate the phase-space transport equation");
    evolve->fallthrough();
    evolve->add_option("--a1", eo.a1, "first correction coefficient")->capture_default_str();
    evolve->add_option("--hbar", eo.hbar)->capture_default_str();
    evolve->add_option("--harmonic", eo.harmonic, "quadratic confinement strength")
        ->capture_default_str();
    evolve->add_option("--t-end", eo.t_end)->capture_default_str();
    evolve->add_option("--cfl", eo.cfl, "step-size safety factor")->capture_default_str();
    evolve->add_option("--record-every", eo.record_every, "moment recording stride")
        ->capture_default_str();
    evolve->add_option("--nq", eo.nq)->capture_default_str();
    evolve->add_option("--np", eo.np)->capture_default_str();
    evolve->add_option("--q-min", eo.q_min)->capture_default_str();
    evolve->add_option("--q-max", eo.q_max)->capture_default_str();
    evolve->add_option("--p-min", eo.p_min)->capture_default_str();
    evolve->add_option("--p-max", eo.p_max)->capture_default_str();
    evolve->add_option("--lambda-const", eo.lambda_const,
                       "hold the quartic coupling constant instead of the wedge profile")
        ->each([&eo](const std::string&) { eo.lambda_const_set = true; });
    evolve->add_flag("--no-step-guard", eo.no_step_guard,
                     "drop the von Neumann step cap (transport bounds only)");

    ExciteOpts xo;
    CLI::App* excite = app.add_subcommand("excite", "drive the atom with an oscillating field");
    excite->fallthrough();
    excite->add_option("--sigma", xo.sigma, "state width; 0 = solve for the ground width")
        ->capture_default_str();
    excite->add_option("--omega", xo.omega, "drive frequency")->capture_default_str();
    excite->add_option("--field", xo.field, "drive amplitude")->capture_default_str();
    excite->add_option("--mu", xo.mu)->capture_default_str();
    excite->add_option("--hbar", xo.hbar)->capture_default_str();
    excite->add_option("--t-end", xo.t_end)->capture_default_str();
    excite->add_option("--samples", xo.samples)->capture_default_str();
    excite->add_option("--tol", xo.tol, "quadrature tolerance")->capture_default_str();

    ScatterOpts sco;
    CLI::App* scatter = app.add_subcommand("scatter", "Coulomb scattering trajectories");
    scatter->fallthrough();
    scatter->add_option("--b", sco.b, "impact parameter; > 0 integrates one trajectory");
    scatter->add_option("--p0", sco.p0, "asymptotic momentum")->capture_default_str();
    scatter->add_option("--kappa", sco.kappa, "potential strength, > 0 attractive")
        ->capture_default_str();
    scatter->add_option("--mu", sco.mu)->capture_default_str();
    scatter->add_option("--b-max", sco.b_max, "largest sampled impact parameter")
        ->capture_default_str();
    scatter->add_option("--n-particles", sco.n_particles)->capture_default_str();
    scatter->add_option("--n-bins", sco.n_bins)->capture_default_str();
    scatter->add_option("--theta-min", sco.theta_min, "first bin edge, degrees")
        ->capture_default_str();
    scatter->add_option("--theta-max", sco.theta_max, "last bin edge, degrees")
        ->capture_default_str();
    scatter->add_option("--seed", sco.seed)->capture_default_str();
    scatter->add_option("--start-radius", sco.start_radius,
                        "launch distance; 0 = 1e4 for ensembles, 1e8 for one trajectory");
    scatter->add_option("--rel-tol", sco.rel_tol, "integrator relative tolerance; 0 = mode default");
    scatter->add_option("--abs-tol", sco.abs_tol, "integrator absolute tolerance; 0 = mode default");

    VerifyOpts vo;
    CLI::App* verify = app.add_subcommand("verify", "run the acceptance criteria");
    verify->fallthrough();
    verify->add_option("--only", vo.only, "comma-separated criterion ids")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    for (int i = 0; i < argc; ++i) common.argv.emplace_back(argv[i]);

    try {
        common.out = prepare_out_dir(common.out);
        if (*bracket) return run_bracket(common, bo);
        if (*spectra) return run_spectra(common, so);
        if (*scan) return run_scan(common, co);
        if (*ground) return run_ground(common, go);
        if (*zeeman) return run_zeeman(common, zo);
        if (*evolve) return run_evolve(common, eo);
        if (*excite) return run_excite(common, xo);
        if (*scatter) return run_scatter(common, sco);
        if (*verify) return run_verify(common, vo);
    } catch (const gphase::ParseError& e) {
        std::cerr << "gphase: expression error: " << e.what() << "\n";
        return 1;
    } catch (const gphase::io::IoError& e) {
        std::cerr << "gphase: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "gphase: invalid argument: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "gphase: domain error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "gphase: numerical failure: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
