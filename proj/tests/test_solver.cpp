#include <cmath>
#include <numbers>

#include "support.hpp"
#include "vlp/solver.hpp"

using namespace vlp;

namespace {

constexpr double kPi = std::numbers::pi;

// u*(t, x) = a e^{-t} sin(pi x / 2) on [-2, 2) solves
// du/dt - u_xx + |u| u = f with f = (pi^2/4 - 1) u* + |u*| u*.
double exact(double a, double t, double x) { return a * std::exp(-t) * std::sin(kPi * x / 2); }

ProblemSpec manufactured(std::size_t N, std::size_t M, double a) {
  const Grid g(1, 2.0, N);
  const auto times = uniform_times(1.0, M);
  std::vector<Field> f;
  for (double t : times) {
    f.push_back(sample(g, [&](const Point& x) {
      const double u = exact(a, t, x[0]);
      return (kPi * kPi / 4 - 1) * u + std::abs(u) * u;
    }));
  }
  return {.alpha = 1.0,
          .b = 1,
          .gamma = 0,
          .grid = g,
          .u0 = sample(g, [&](const Point& x) { return exact(a, 0, x[0]); }),
          .force = {ForceForm::Direct, SpaceTimeField(times, f)},
          .T = 1.0,
          .M = M,
          .space = LocalSpace{VariableExponent::constant_in_time(M + 1, 3.0), 2.0, VariableExponent::constant(g, 2.0)}};
}

SpaceTimeField exact_field(std::size_t N, std::size_t M, double a) {
  const Grid g(1, 2.0, N);
  const auto times = uniform_times(1.0, M);
  std::vector<Field> frames;
  for (double t : times) frames.push_back(sample(g, [&](const Point& x) { return exact(a, t, x[0]); }));
  return SpaceTimeField(times, frames);
}

// Global setting with gamma = 1: n = 1, alpha = 0.6, b = 1, q = 5.
ProblemSpec global_case(double a, double potential = 0.0) {
  const Grid g(1, 16.0, 128);
  const auto times = uniform_times(1.0, 16);
  const VariableExponent p(sample(g, [](const Point& x) { return 3.25 + 0.25 * std::cos(kPi * x[0] / 16); }));
  return {.alpha = 0.6,
          .b = 1,
          .gamma = 1,
          .grid = g,
          .u0 = sample(g, [&](const Point& x) { return a * std::exp(-x[0] * x[0]); }),
          .force = {ForceForm::Potential,
                    constant_in_time(sample(g, [&](const Point& x) { return potential * std::exp(-x[0] * x[0] / 4); }),
                                     times)},
          .T = 1.0,
          .M = 16,
          .space = GlobalSpace{MixedSpaceParams{p, 5.0}}};
}

bool is_even(const Field& f, double tol) {
  const std::size_t n = f.grid().points_per_axis();
  for (std::size_t k = 1; k < n; ++k) {
    if (std::abs(f[k] - f[n - k]) > tol) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("gamma bracket and nonlinearity") {
    CHECK(gamma_bracket(1.0, 0) == 0.0);
    CHECK(gamma_bracket(1.0, 1) == 1.0);
    CHECK(gamma_bracket(0.5, 1) == 0.5);
    CHECK(critical_exponent(1, 1, 0.6, 1) == doctest::Approx(5.0));
    const Grid g(1, 1.0, 8);
    CHECK(max_abs(nonlinearity(Field::zeros(g), 1, 0)) == 0.0);
    CHECK(max_abs_difference(nonlinearity(Field::constant(g, -2.0), 2, 0), Field::constant(g, -8.0)) == 0.0);
    CHECK(max_abs(nonlinearity(Field::constant(g, 3.0), 1, 1)) <= 1e-14);
  }

  TEST_CASE("validation") {
    auto spec = manufactured(16, 8, 0.1);
    spec.alpha = 0.5;
    CHECK_ERRC(validate(spec), Errc::InvalidSpec);
    spec = manufactured(16, 8, 0.1);
    std::get<LocalSpace>(spec.space).p_time = VariableExponent::constant_in_time(9, 2.0);
    CHECK_ERRC(validate(spec), Errc::InvalidSpec);
    spec = manufactured(16, 8, 0.1);
    spec.M = 4;
    CHECK_ERRC(validate(spec), Errc::LatticeMismatch);
    auto g = global_case(1.0);
    std::get<GlobalSpace>(g.space).params.q_const = 4.0;
    CHECK_ERRC(validate(g), Errc::InvalidSpec);
  }

  TEST_CASE("Duhamel map: zero fixed point and heat eigenfunction") {
    auto spec = manufactured(32, 16, 0.0);
    const auto zero = constant_in_time(Field::zeros(spec.grid), uniform_times(1.0, 16));
    CHECK(max_abs(duhamel_map(zero, spec)) == 0.0);
    spec.u0 = sample(spec.grid, [](const Point& x) { return std::sin(kPi * x[0]); });
    const auto out = duhamel_map(zero, spec);
    for (std::size_t i = 0; i <= 16; ++i) {
      const double decay = std::exp(-out.times()[i] * kPi * kPi);
      CHECK(max_abs_difference(out.frame(i), decay * spec.u0) <= 1e-10);
    }
    const auto wrong = constant_in_time(Field::zeros(spec.grid), uniform_times(2.0, 16));
    CHECK_ERRC(duhamel_map(wrong, spec), Errc::LatticeMismatch);
  }

  TEST_CASE("Duhamel map consistency error is second order in M") {
    double prev = 0;
    for (std::size_t M : {16, 32, 64}) {
      const auto spec = manufactured(64, M, 0.25);
      const auto u = exact_field(64, M, 0.25);
      const double e = max_abs_difference(duhamel_map(u, spec), u);
      if (prev > 0) CHECK(std::log2(prev / e) >= 1.8);
      prev = e;
    }
  }

  TEST_CASE("Picard: zero data and manufactured solution") {
    const auto z = picard_solve(manufactured(32, 16, 0.0), 10, 1e-12);
    CHECK(z.trace.iterations == 1);
    CHECK(z.trace.converged);
    CHECK(max_abs(z.solution) == 0.0);
    CHECK_FALSE(z.trace.steps[0].ratio.has_value());

    const double tol = 1e-10;
    const auto r = picard_solve(manufactured(128, 64, 0.25), 50, tol);
    CHECK(r.trace.converged);
    CHECK(max_abs_difference(r.solution, exact_field(128, 64, 0.25)) <= 1e-3);
    CHECK(r.trace.residual <= 2 * tol);
    for (const auto& s : r.trace.steps) CHECK(s.increment >= 0);
  }

  TEST_CASE("strong-form residual") {
    double prev = 0;
    for (std::size_t M : {16, 32, 64}) {
      const double res = residual(exact_field(64, M, 0.25), manufactured(64, M, 0.25));
      if (prev > 0) CHECK(std::log2(prev / res) >= 1.8);
      prev = res;
    }
    const auto z = manufactured(16, 8, 0.0);
    CHECK(residual(constant_in_time(Field::zeros(z.grid), uniform_times(1.0, 8)), z) == 0.0);
  }

  TEST_CASE("contraction: passing smallness gives ratios below 1/2") {
    const auto spec = global_case(0.4);
    const auto rep = check_smallness_global(spec);
    CHECK(rep.pass);
    CHECK(rep.R == doctest::Approx(2 * rep.B));
    CHECK(rep.product == doctest::Approx(rep.C * rep.R));
    const auto r = picard_solve(spec, 60, 1e-10);
    REQUIRE(r.trace.converged);
    const auto& steps = r.trace.steps;
    for (std::size_t i = steps.size() - 3; i < steps.size(); ++i) CHECK(*steps[i].ratio <= 0.55);
  }

  TEST_CASE("Picard divergence is reported") {
    CHECK_ERRC(picard_solve(global_case(6.0), 60, 1e-10), Errc::Diverged);
  }

  TEST_CASE("uniqueness from different starting iterates") {
    const auto spec = global_case(0.4);
    const double tol = 1e-10;
    const auto a = picard_solve(spec, 80, tol);
    const auto start = 0.5 * linear_part(spec);
    const auto b = picard_solve(spec, 80, tol, start);
    REQUIRE(a.trace.converged);
    REQUIRE(b.trace.converged);
    CHECK(active_norm(a.solution - b.solution, spec) <= 4 * tol);
  }

  TEST_CASE("linear limit and parity") {
    auto spec = manufactured(64, 32, 0.25);
    const auto lin = linear_part(spec);
    double prev = 0;
    for (double eps : {1e-3, 5e-4}) {
      spec.nonlinear_scale = eps;
      const auto r = picard_solve(spec, 40, 1e-13);
      const double d = active_norm(r.solution - lin, spec);
      if (prev > 0) CHECK(prev / d == doctest::Approx(2.0).epsilon(0.02));
      prev = d;
    }
    // Even data and gamma = 0 keep every iterate even.
    auto even = manufactured(64, 16, 0.0);
    even.u0 = sample(even.grid, [](const Point& x) { return 0.5 * std::cos(kPi * x[0] / 2) + 0.2; });
    const auto r = picard_solve(even, 30, 1e-12);
    for (const auto& f : r.solution.frames()) CHECK(is_even(f, 1e-13));
  }

  TEST_CASE("global smallness report") {
    const auto zero = check_smallness_global(global_case(0.0));
    CHECK(zero.B == 0.0);
    CHECK(zero.pass);
    const auto one = check_smallness_global(global_case(0.3, 0.2));
    const auto two = check_smallness_global(global_case(0.6, 0.4));
    CHECK(two.B == doctest::Approx(2 * one.B).epsilon(1e-9));
    CHECK(two.product == doctest::Approx(2 * one.product).epsilon(1e-9));
    CHECK_ERRC(check_smallness_global(manufactured(16, 8, 0.1)), Errc::WrongMode);
    auto direct = global_case(0.3);
    direct.force.form = ForceForm::Direct;
    CHECK_ERRC(check_smallness_global(direct), Errc::WrongForceForm);
  }

  TEST_CASE("contraction estimate is reproducible and seed-stable") {
    const auto spec = global_case(1.0);
    const double a = estimate_contraction(spec, 1.0, 64, 1);
    CHECK(a == estimate_contraction(spec, 1.0, 64, 1));
    const double b = estimate_contraction(spec, 1.0, 64, 2);
    CHECK(std::abs(b / a - 1) <= 0.2);
    // The ratio is invariant under a common rescaling of the ball.
    CHECK(estimate_contraction(spec, 3.0, 8, 5) == doctest::Approx(estimate_contraction(spec, 1.0, 8, 5)).epsilon(1e-8));
  }

  TEST_CASE("local existence horizon") {
    const auto zero = check_local_existence(manufactured(32, 16, 0.0));
    CHECK(zero.T_suggested == 1.0);
    CHECK(zero.smallness.pass);
    double last_T = 2.0;
    for (double a : {0.1, 0.25, 0.5, 1.0}) {
      const auto rep = check_local_existence(manufactured(32, 16, a));
      CHECK(rep.T_suggested <= last_T);
      last_T = rep.T_suggested;
      for (std::size_t i = 1; i < rep.scan.size(); ++i) CHECK(rep.scan[i].B < rep.scan[i - 1].B);
    }
    CHECK_ERRC(check_local_existence(manufactured(32, 16, 1e4)), Errc::NoAdmissibleT);
    CHECK_ERRC(check_local_existence(global_case(0.1)), Errc::WrongMode);
  }
}
