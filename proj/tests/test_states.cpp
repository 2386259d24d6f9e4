#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <gphase/states.hpp>

using namespace gphase;

TEST_CASE("state validation") {
    CHECK_THROWS_AS(expect(obs_unit(), {0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(expect(obs_unit(), {-1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(expect(obs_unit(), {1.0, -0.5}), std::invalid_argument);
    CHECK_THROWS_AS(expect_mc(obs_unit(), {1.0, 1.0}, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(obs_energy_cell(0), std::invalid_argument);
}

TEST_CASE("normalization") {
    for (GaussianState st : {GaussianState{1.0, 1.0}, GaussianState{0.5, 2.0},
                             GaussianState{1.6, 0.0}, GaussianState{3.0, 0.1}}) {
        const QuadResult r = expect(obs_unit(), st);
        CHECK(r.value == Catch::Approx(1.0).margin(1e-10));
    }
    const McResult m = expect_mc(obs_unit(), {1.0, 1.0}, 1000, 7);
    CHECK(m.value == 1.0);
    CHECK(m.std_error == 0.0);
}

TEST_CASE("mean energy of the zero-momentum Gaussian") {
    // <H> = -<1/q> = -sqrt(2/pi)/sigma in the zero-momentum limit
    const double sigma = 1.5957704880362;
    const QuadResult r = expect(obs_hamiltonian(), {sigma, 0.0});
    CHECK(r.value == Catch::Approx(-std::sqrt(2.0 / pi_v) / sigma).margin(1e-12));
    const double ratio = 1.0 - r.value / (-0.5);
    CHECK(ratio > 0.0);
    CHECK(ratio <= 1e-5);
    CHECK(ratio == Catch::Approx(8.562826e-7).epsilon(1e-3));
}

TEST_CASE("ground-width determination") {
    const SigmaRoot root = find_sigma_gnd(1e-9);
    CHECK(root.sigma == Catch::Approx(1.59577048804).margin(1e-6));
    CHECK(std::fabs(root.value) < 1e-9);
    CHECK(most_probable_radius({root.sigma, 0.0}) == Catch::Approx(2.25676027).margin(1e-6));

    SECTION("mode of the radial density by ternary search") {
        const double sigma = root.sigma;
        auto density = [&](double q) { return q * q * std::exp(-0.5 * q * q / (sigma * sigma)); };
        double a = 0.0, b = 5.0 * sigma;
        while (b - a > 1e-9) {
            const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
            (density(m1) < density(m2) ? a : b) = (density(m1) < density(m2) ? m1 : m2);
        }
        CHECK(0.5 * (a + b) == Catch::Approx(most_probable_radius({sigma, 0.0})).margin(1e-6));
    }

    CHECK_THROWS_AS(most_probable_radius({1.0, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(find_sigma_gnd(-1.0), std::invalid_argument);
}

TEST_CASE("second-cell expectation across the width plane") {
    struct Cell {
        double sq, sp, want;
    };
    const Cell cells[] = {
        {0.5, 0.5, -2.006309878},
        {2.0, 0.5, +0.1879690228},
        {1.0, 0.1, -0.7543588683},
    };
    const RadialObservable obs = obs_energy_cell(2);
    for (const auto& c : cells) {
        const QuadResult r = expect(obs, {c.sq, c.sp}, 1e-10);
        INFO("cell (" << c.sq << ", " << c.sp << ")");
        CHECK(r.value == Catch::Approx(c.want).margin(5e-7));

        const McResult m = expect_mc(obs, {c.sq, c.sp}, 2000000, 99);
        CHECK(std::fabs(m.value - r.value) <= 3.0 * m.std_error);
    }
}

TEST_CASE("positivity scan") {
    const auto cells = positivity_scan({0.5, 2.0}, {0.5}, 1e-9);
    REQUIRE(cells.size() == 2);
    CHECK(cells[0].sign == -1);
    CHECK(cells[1].sign == +1);
    CHECK(cells[0].value < 0.0);
    CHECK(cells[1].value > 0.0);

    // widening the zero-momentum state drains mass out of the support of
    // the second cell entirely, so the value decays to zero from above
    const auto wide = positivity_scan({6.0, 30.0, 100.0}, {0.0}, 1e-10);
    CHECK(wide[0].value > wide[1].value);
    CHECK(wide[1].value > wide[2].value);
    CHECK(wide[2].value > 0.0);
    CHECK(wide[2].value < 1e-3);
}

TEST_CASE("Monte Carlo determinism and cross-oracle agreement") {
    const RadialObservable obs = obs_energy_cell(1);
    const GaussianState gnd{1.5957704880362, 0.0};

    const McResult a = expect_mc(obs, gnd, 500000, 2026);
    const McResult b = expect_mc(obs, gnd, 500000, 2026);
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);

    const QuadResult q = expect(obs, gnd);
    CHECK(std::fabs(a.value - q.value) <= 3.0 * a.std_error);

    const McResult c = expect_mc(obs, gnd, 500000, 2027);
    CHECK(c.value != a.value); // different seed, different draw
}

TEST_CASE("energy probabilities of zero-momentum states sum to one") {
    for (double sigma : {1.0, 1.5957704880362, 2.5}) {
        const double total = energy_probability_sum({sigma, 0.0}, 64, 1e-12);
        INFO("sigma " << sigma);
        CHECK(total == Catch::Approx(1.0).margin(1e-8));
    }

    SECTION("nonnegative entries inside the positive region") {
        for (int n = 1; n <= 6; ++n) {
            const QuadResult r = expect(obs_energy_cell(n), {2.0, 0.5}, 1e-10);
            INFO("level " << n);
            CHECK(r.value >= -1e-10);
        }
    }

    SECTION("moving-mass sum stays below one with momentum spread") {
        double total = 0.0;
        for (int n = 1; n <= 40; ++n) total += expect(obs_energy_cell(n), {2.0, 0.5}, 1e-10).value;
        CHECK(total <= 1.0 + 1e-8);
        CHECK(total > 0.5); // most mass is still bound
    }
}
