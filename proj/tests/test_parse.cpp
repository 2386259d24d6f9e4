#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>

#include <gphase/io.hpp>
#include <gphase/parse.hpp>

using namespace gphase;
using Catch::Matchers::ContainsSubstring;

namespace {
PhaseExpr q(int i) { return PhaseExpr::q(i); }
PhaseExpr p(int i) { return PhaseExpr::p(i); }
} // namespace

TEST_CASE("expression text syntax") {
    SECTION("products, powers, rational literals") {
        CHECK(parse_expr("q1^2*p3 - 2/3*r^-1") ==
              q(1).pow(2) * p(3) - PhaseExpr::rational(Rational(2, 3)) * PhaseExpr::r_power(-1));
        CHECK(parse_expr("q1*p1^2") == q(1) * p(1) * p(1));
        CHECK(parse_expr("5") == PhaseExpr::integer(5));
        CHECK(parse_expr("2/3") == PhaseExpr::rational(Rational(2, 3)));
        CHECK(parse_expr("-q1 + p2") == p(2) - q(1));
        CHECK(parse_expr(" q1 * p2 ^ 3 ") == q(1) * p(2).pow(3));
    }

    SECTION("parenthesized subexpressions") {
        CHECK(parse_expr("(q1 + p1)^2") == q(1) * q(1) + PhaseExpr::integer(2) * q(1) * p(1) + p(1) * p(1));
        CHECK(parse_expr("3*(q2 - p3)") == PhaseExpr::integer(3) * q(2) - PhaseExpr::integer(3) * p(3));
    }

    SECTION("radial powers and parameters") {
        CHECK(parse_expr("r") == PhaseExpr::r_power(1));
        CHECK(parse_expr("r^2") == q(1) * q(1) + q(2) * q(2) + q(3) * q(3));
        CHECK(parse_expr("r^-1*q1") == PhaseExpr::r_power(-1) * q(1));
        CHECK(parse_expr("a1*hbar^2*q3") ==
              PhaseExpr::param("a1", 1) * PhaseExpr::param("hbar", 2) * q(3));
        CHECK(parse_expr("lambda^-2") == PhaseExpr::param("lambda", -2));
    }

    SECTION("kinetic minus Coulomb round trip") {
        const PhaseExpr h =
            PhaseExpr::rational(Rational(1, 2)) * (p(1) * p(1) + p(2) * p(2) + p(3) * p(3)) -
            PhaseExpr::r_power(-1);
        CHECK(parse_expr("1/2*p1^2 + 1/2*p2^2 + 1/2*p3^2 - r^-1") == h);
    }

    SECTION("printed polynomials re-parse to the same expression") {
        const PhaseExpr exprs[] = {
            q(1).pow(2) * p(3) - PhaseExpr::rational(Rational(2, 3)) * p(2),
            PhaseExpr::param("a1", 1) * PhaseExpr::param("hbar", 2) * q(1).pow(3),
            PhaseExpr::integer(-7) * q(2) * p(2) + PhaseExpr::rational(Rational(5, 4)),
        };
        for (const auto& e : exprs) CHECK(parse_expr(e.str()) == e);
    }

    SECTION("actionable errors") {
        CHECK_THROWS_WITH(parse_expr("q1/2"), ContainsSubstring("division"));
        CHECK_THROWS_WITH(parse_expr("q4"), ContainsSubstring("unknown phase-space variable"));
        CHECK_THROWS_WITH(parse_expr("q1^-2"), ContainsSubstring("negative exponents"));
        CHECK_THROWS_WITH(parse_expr("p1^-1"), ContainsSubstring("negative exponents"));
        CHECK_THROWS_WITH(parse_expr("2/0"), ContainsSubstring("zero denominator"));
        CHECK_THROWS_AS(parse_expr("q1 +"), ParseError);
        CHECK_THROWS_WITH(parse_expr("q1 )"), ContainsSubstring("trailing"));
        CHECK_THROWS_AS(parse_expr(""), ParseError);
        CHECK_THROWS_AS(parse_expr("(q1"), ParseError);
    }
}

TEST_CASE("expression JSON round trip") {
    const PhaseExpr cases[] = {
        PhaseExpr{},
        q(1).pow(2) * p(3) - PhaseExpr::rational(Rational(2, 3)) * p(2),
        PhaseExpr::rational(Rational(1, 2)) * (p(1) * p(1) + p(2) * p(2) + p(3) * p(3)) -
            PhaseExpr::r_power(-1),
        PhaseExpr::param("a1", 2) * PhaseExpr::param("hbar", 4) * q(1).pow(3) * p(2),
        PhaseExpr::r_power(-3) * q(1) * q(2) + PhaseExpr::r_power(-5) * p(3),
        q(2) * p(3) - q(3) * p(2),
    };
    for (const auto& e : cases) {
        const io::json j = io::expr_to_json(e);
        CHECK(io::expr_from_json(j) == e);
    }
}

TEST_CASE("number formatting round-trips doubles") {
    const double values[] = {0.1,       -1.0 / 3.0, 3.141592653589793, 1e-300,
                             -6.02e23,  0.0,        12345678.90123456, 5e-324};
    for (double v : values) {
        const std::string s = io::format_double(v);
        double back = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), back);
        REQUIRE(ec == std::errc{});
        CHECK(back == v);
        CHECK(s.find(',') == std::string::npos);
    }
    CHECK(io::format_double(0.1) == "0.10000000000000001"); // full 17 digits
    CHECK(io::format_double(1.0) == "1");
}

TEST_CASE("CSV round trip") {
    const auto path = (std::filesystem::temp_directory_path() / "gphase_test_csv.csv").string();
    const std::vector<std::string> header{"t", "value", "error"};
    const std::vector<std::vector<double>> rows{
        {0.0, 3.141592653589793, 1e-16},
        {0.25, -2.0 / 3.0, 5e-324},
        {0.5, 6.02e23, -0.0},
    };
    io::write_csv(path, header, rows);
    const auto back = io::read_csv(path);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        REQUIRE(back[i].size() == rows[i].size());
        for (std::size_t c = 0; c < rows[i].size(); ++c) CHECK(back[i][c] == rows[i][c]);
    }
    CHECK_THROWS_AS(io::write_csv(path, header, {{1.0, 2.0}}), std::invalid_argument);
    std::filesystem::remove(path);
}

TEST_CASE("binary grid round trip") {
    const auto path = (std::filesystem::temp_directory_path() / "gphase_test_grid.bin").string();
    const std::uint32_t nq = 3, np = 2;
    const double vals[nq * np] = {1.0, -2.5, 3e-7, 4.0, 0.0, -1e300};
    io::write_grid_binary(path, nq, np, -8.0, 8.0, -4.0, 4.0, vals);

    const io::GridFile g = io::read_grid_binary(path);
    CHECK(g.nq == nq);
    CHECK(g.np == np);
    CHECK(g.qmin == -8.0);
    CHECK(g.qmax == 8.0);
    CHECK(g.pmin == -4.0);
    CHECK(g.pmax == 4.0);
    REQUIRE(g.values.size() == nq * np);
    for (std::size_t i = 0; i < nq * np; ++i) CHECK(g.values[i] == vals[i]);

    {
        std::ofstream bad(path, std::ios::binary);
        bad << "NOPE";
    }
    CHECK_THROWS_WITH(io::read_grid_binary(path), ContainsSubstring("magic"));
    std::filesystem::remove(path);
}

TEST_CASE("run manifest") {
    const auto dir = std::filesystem::temp_directory_path() / "gphase_test_manifest";
    std::filesystem::create_directories(dir);
    io::json cfg{{"seed", 42}, {"sigma_q", 1.5}};
    io::write_manifest(dir.string(), "ground", cfg, "0.1.0", {"gphase", "ground", "--seed", "42"});

    std::ifstream in(dir / "manifest.json");
    REQUIRE(in.good());
    io::json m = io::json::parse(in);
    CHECK(m.at("tool") == "gphase");
    CHECK(m.at("subcommand") == "ground");
    CHECK(m.at("version") == "0.1.0");
    CHECK(m.at("config").at("seed") == 42);
    CHECK(m.at("argv").size() == 4);
    std::filesystem::remove_all(dir);
}
