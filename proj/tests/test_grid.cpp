#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "support.hpp"
#include "vlp/field_io.hpp"
#include "vlp/grid.hpp"
#include "vlp/operators.hpp"
#include "vlp/varexp.hpp"

using namespace vlp;

TEST_SUITE("grid") {
  TEST_CASE("spacing and coordinates") {
    const Grid g(1, 1.0, 4);
    CHECK(g.spacing() == 0.5);
    CHECK(g.coordinate(0) == -1.0);
    CHECK(g.coordinate(3) == 0.5);
    CHECK(g.size() == 4);
    const Grid g2(2, 3.0, 8);
    CHECK(g2.size() == 64);
    CHECK(g2.spacing() * 8 == 6.0);
    CHECK(g2.measure() == doctest::Approx(36.0));
  }

  TEST_CASE("invalid grids") {
    CHECK_ERRC(Grid(1, 1.0, 6), Errc::InvalidGrid);
    CHECK_ERRC(Grid(1, 1.0, 1), Errc::InvalidGrid);
    CHECK_ERRC(Grid(4, 1.0, 4), Errc::InvalidGrid);
    CHECK_ERRC(Grid(1, 0.0, 4), Errc::InvalidGrid);
    CHECK_ERRC(Grid(3, 1.0, std::size_t{1} << 40), Errc::InvalidGrid);
  }

  TEST_CASE("flatten round trip, axis 0 slowest") {
    const Grid g(3, 1.0, 4);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(g.flatten(g.unflatten(i)) == i);
    CHECK(g.unflatten(1)[2] == 1);
    CHECK(g.unflatten(16)[0] == 1);
  }

  TEST_CASE("fields reject bad samples") {
    const Grid g(1, 1.0, 4);
    CHECK_ERRC(Field(g, {1, 2, 3}), Errc::GridMismatch);
    CHECK_ERRC(Field(g, {1, 2, 3, std::nan("")}), Errc::NonFiniteSample);
    CHECK_ERRC(sample(g, [](const Point& x) { return 1.0 / x[0]; }), Errc::NonFiniteSample);
  }

  TEST_CASE("integrate: constants and single modes") {
    const Grid g(2, 2.0, 16);
    CHECK(integrate(Field::constant(g, 3.0)) == doctest::Approx(3.0 * 16.0));
    const Field mode = sample(g, [](const Point& x) { return std::cos(std::numbers::pi * x[0]); });
    CHECK(std::abs(integrate(mode)) < 1e-12);
    CHECK(integrate(mode) == doctest::Approx(reference::integrate(mode)).epsilon(1e-12));
  }

  TEST_CASE("deterministic sum is independent of blocking position") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> v(3 * kSumBlock + 17);
    for (double& x : v) x = u(rng);
    const double a = deterministic_sum(v);
    const double b = deterministic_sum(v);
    CHECK(a == b);
    double naive = 0;
    for (double x : v) naive += x;
    CHECK(a == doctest::Approx(naive).epsilon(1e-12));
  }

  TEST_CASE("space-time fields") {
    const Grid g(1, 1.0, 4);
    const auto t = uniform_times(1.0, 4);
    REQUIRE(t.size() == 5);
    CHECK(t[4] == 1.0);
    const SpaceTimeField u = constant_in_time(Field::constant(g, -2.0), t);
    CHECK(u.steps() == 4);
    CHECK(max_abs(u) == 2.0);
    CHECK(max_abs(sup_over_time(u)) == 2.0);
    CHECK_ERRC(SpaceTimeField({0.0, 0.0}, {Field::zeros(g), Field::zeros(g)}), Errc::LatticeMismatch);
    const SpaceTimeField w = constant_in_time(Field::zeros(g), uniform_times(2.0, 4));
    CHECK_ERRC(u - w, Errc::LatticeMismatch);
  }

  TEST_CASE("sup over time matches the serial reference") {
    const Grid g(2, 1.0, 8);
    std::vector<Field> frames;
    for (int i = 0; i < 5; ++i) frames.push_back(random_smooth_field(g, 40 + i));
    const SpaceTimeField u(uniform_times(1.0, 4), frames);
    CHECK(max_abs_difference(sup_over_time(u), reference::sup_over_time(u)) == 0.0);
  }
}

TEST_SUITE("field_io") {
  TEST_CASE("field round trip is exact") {
    const Grid g(2, 1.5, 4);
    const Field f = random_smooth_field(g, 9);
    std::stringstream s;
    write_field(s, f);
    const Field back = read_field(s);
    CHECK(back.grid() == g);
    CHECK(max_abs_difference(back, f) == 0.0);
  }

  TEST_CASE("header and body errors") {
    std::stringstream bad_tag("vlp-field v2; n=1; L=1; N=2\n0\n0\n");
    CHECK_ERRC(read_field(bad_tag), Errc::Parse);
    std::stringstream short_body("vlp-field v1; n=1; L=1; N=4\n0\n0\n");
    CHECK_ERRC(read_field(short_body), Errc::Parse);
    std::stringstream trailing("vlp-field v1; n=1; L=1; N=2\n0\n0\n5\n");
    CHECK_ERRC(read_field(trailing), Errc::Parse);
    std::stringstream bad_grid("vlp-field v1; n=1; L=1; N=3\n0\n0\n0\n");
    CHECK_ERRC(read_field(bad_grid), Errc::InvalidGrid);
    CHECK_ERRC(load_field("/nonexistent/x.field"), Errc::IO);
  }

  TEST_CASE("numbers are locale independent and round trip") {
    for (double v : {0.1, -2.5e-300, 1.0 / 3.0, 12345.0}) CHECK(parse_number(format_number(v)) == v);
    CHECK(format_number(0.5) == "0.5");
    CHECK_ERRC(parse_number("1,5"), Errc::Parse);
  }

  TEST_CASE("exponent files keep p_inf") {
    const Grid g(1, 1.0, 4);
    std::stringstream s;
    write_exponent(s, Field::constant(g, 2.5), 3.0);
    const auto e = read_exponent(s);
    CHECK(e.p_inf == 3.0);
    CHECK(e.samples[2] == 2.5);
    std::stringstream t;
    write_time_exponent(t, {3.0, 3.5, 4.0});
    CHECK(read_time_exponent(t) == std::vector<double>{3.0, 3.5, 4.0});
  }
}
