#include <cmath>
#include <random>

#include "oracles.hpp"
#include "support.hpp"
#include "vlp/varexp.hpp"

using namespace vlp;

namespace {

// Hand-rolled generator: random smooth field plus a random exponent field
// with values in [lo, hi].
struct Sample {
  Field f;
  VariableExponent p;
};

Sample draw(const Grid& g, std::mt19937_64& rng, double lo = 1.2, double hi = 4.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double base = lo + (hi - lo) * u(rng);
  const double amp = std::min(base - lo, hi - base) * u(rng);
  const double phase = 6.28 * u(rng);
  const double L = g.half_length();
  Field p = sample(g, [&](const Point& x) { return base + amp * std::sin(std::numbers::pi * x[0] / L + phase); });
  const double scale = std::exp(6.0 * (u(rng) - 0.5));
  return {scale * random_smooth_field(g, rng()), VariableExponent(p)};
}

std::vector<double> exps(const VariableExponent& p) { return {p.values().begin(), p.values().end()}; }

}  // namespace

TEST_SUITE("varexp") {
  TEST_CASE("exponent validation and limits") {
    const Grid g(1, 1.0, 8);
    CHECK_ERRC(VariableExponent(Field::constant(g, 1.0)), Errc::InvalidExponent);
    CHECK_ERRC(VariableExponent(std::vector<double>{2.0, 0.5}), Errc::InvalidExponent);
    CHECK_ERRC(VariableExponent(Field::constant(g, 2.0), 1.0), Errc::InvalidExponent);
    const VariableExponent p(sample(g, [](const Point& x) { return 3.0 + x[0]; }));
    const auto [lo, hi] = limit_exponents(p);
    CHECK(lo == doctest::Approx(2.0));
    CHECK(hi == doctest::Approx(3.75));
  }

  TEST_CASE("Luxemburg norm matches a direct bisection oracle") {
    std::mt19937_64 rng(11);
    for (int dim : {1, 2}) {
      const Grid g(dim, 3.0, dim == 1 ? 64 : 16);
      for (int k = 0; k < 20; ++k) {
        const auto s = draw(g, rng);
        const double ours = luxemburg_norm(s.f, s.p);
        CHECK(ours == doctest::Approx(oracle::luxemburg(s.f, exps(s.p))).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("constant exponents reduce to classical L^p") {
    std::mt19937_64 rng(5);
    const Grid g(1, 2.0, 128);
    for (double p : {1.1, 2.0, 3.7, 8.0}) {
      const Field f = random_smooth_field(g, rng());
      const double exact = oracle::lp_norm(f, p);
      CHECK(std::abs(luxemburg_norm(f, VariableExponent::constant(g, p)) - exact) <= 1e-10 * exact);
      CHECK(std::abs(lebesgue_norm(f, p) - exact) <= 1e-12 * exact);
    }
    const Field f = random_smooth_field(g, 1);
    CHECK(lebesgue_norm(f, INFINITY) == oracle::max_norm(f));
  }

  TEST_CASE("norm axioms on random samples") {
    std::mt19937_64 rng(21);
    const Grid g(1, 4.0, 64);
    std::uniform_real_distribution<double> c(-5, 5);
    for (int k = 0; k < 25; ++k) {
      const auto s = draw(g, rng);
      const auto t = draw(g, rng);
      const Field f2 = random_smooth_field(g, rng());
      const double nf = luxemburg_norm(s.f, s.p);
      const double lambda = c(rng);
      CHECK(luxemburg_norm(lambda * s.f, s.p) == doctest::Approx(std::abs(lambda) * nf).epsilon(1e-9));
      CHECK(luxemburg_norm(s.f + f2, s.p) <= (nf + luxemburg_norm(f2, s.p)) * (1 + 1e-9));
      // Unit ball: m(f / ||f||) = 1 and m(f / (0.999 ||f||)) > 1.
      CHECK(modular((1.0 / nf) * s.f, s.p) == doctest::Approx(1.0).epsilon(1e-8));
      CHECK(modular((1.0 / (0.999 * nf)) * s.f, s.p) > 1.0);
      // Lattice property: |g| <= |f| pointwise implies ||g|| <= ||f||.
      CHECK(luxemburg_norm(0.5 * s.f, t.p) <= luxemburg_norm(s.f, t.p));
    }
    CHECK(luxemburg_norm(Field::zeros(g), VariableExponent::constant(g, 2.0)) == 0.0);
  }

  TEST_CASE("mixed norm is the larger of the two") {
    const Grid g(1, 4.0, 64);
    const Field f = random_smooth_field(g, 4);
    const VariableExponent p = VariableExponent::constant(g, 2.0);
    const double m = mixed_norm(f, {p, 5.0});
    CHECK(m == doctest::Approx(std::max(oracle::lp_norm(f, 2.0), oracle::lp_norm(f, 5.0))).epsilon(1e-9));
  }

  TEST_CASE("conjugate exponent") {
    const Grid g(1, 1.0, 8);
    const VariableExponent p(sample(g, [](const Point& x) { return 3.0 + x[0]; }));
    const VariableExponent q = conjugate_exponent(p);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(1 / p.values()[i] + 1 / q.values()[i] == doctest::Approx(1.0));
  }

  TEST_CASE("Holder defect is bounded and checks exponents") {
    std::mt19937_64 rng(8);
    const Grid g(1, 4.0, 64);
    for (int k = 0; k < 20; ++k) {
      const auto a = draw(g, rng, 2.1, 5.0);
      const auto b = draw(g, rng, 2.1, 5.0);
      std::vector<double> p1(g.size());
      for (std::size_t i = 0; i < p1.size(); ++i) p1[i] = 1 / (1 / a.p.values()[i] + 1 / b.p.values()[i]);
      const double d = holder_defect(a.f, b.f, VariableExponent(Field(g, p1)), a.p, b.p);
      CHECK(d <= 2.0);
      CHECK(d > 0.0);
    }
    const VariableExponent two = VariableExponent::constant(g, 2.0);
    CHECK_ERRC(holder_defect(Field::zeros(g), Field::zeros(g), two, two, two), Errc::ExponentMismatch);
    const VariableExponent four = VariableExponent::constant(g, 4.0);
    CHECK(holder_defect(Field::zeros(g), Field::zeros(g), two, four, four) == 0.0);
  }

  TEST_CASE("duality: the extremal test function attains the norm") {
    std::mt19937_64 rng(2);
    const Grid g(1, 4.0, 64);
    for (int k = 0; k < 10; ++k) {
      const auto s = draw(g, rng);
      const auto d = norm_duality_defect(s.f, s.p, 8, rng());
      CHECK(d.upper <= 2.0);
      CHECK(d.lower <= 2.0);
      CHECK(d.upper >= 0.5);
    }
  }

  TEST_CASE("log-Holder constants") {
    const Grid g(1, 4.0, 256);
    CHECK(local_log_holder_constant(VariableExponent::constant(g, 3.0)) == 0.0);
    const VariableExponent smooth(sample(g, [](const Point& x) { return 2.5 + 0.5 * std::cos(x[0]); }));
    const double c = local_log_holder_constant(smooth);
    CHECK(std::isfinite(c));
    CHECK(c < 1.0);
    // A jump in 1/p makes the constant grow like log(1/h) under refinement.
    auto jump = [](const Grid& gg) {
      return VariableExponent(sample(gg, [](const Point& x) { return x[0] < 0 ? 2.0 : 4.0; }));
    };
    const double coarse = local_log_holder_constant(jump(Grid(1, 4.0, 64)));
    const double fine = local_log_holder_constant(jump(Grid(1, 4.0, 1024)));
    CHECK(fine > coarse * 1.3);
    CHECK_ERRC(decay_log_holder_constant(smooth), Errc::MissingPInf);
    const VariableExponent with_inf(sample(g, [](const Point& x) { return 3.0 + 1.0 / (1.0 + x[0] * x[0]); }), 3.0);
    CHECK(std::isfinite(decay_log_holder_constant(with_inf)));
    CHECK(check_log_holder(with_inf, 1.0).pass);
    CHECK_ERRC(check_log_holder(smooth, 1.0), Errc::MissingPInf);
  }

  TEST_CASE("embedding-class proxy") {
    const Grid g(1, 4.0, 64);
    CHECK(check_emb_class(VariableExponent::constant(g, 2.0), 2.0));
    CHECK_FALSE(check_emb_class(VariableExponent::constant(g, 2.0), 3.0));
  }

  TEST_CASE("space-time norms") {
    const Grid g(1, 4.0, 64);
    const Field f = random_smooth_field(g, 6);
    const auto times = uniform_times(2.0, 8);
    const SpaceTimeField u = constant_in_time(f, times);
    // Constant in time: ||u||_{L^p_t L^q_x} = T^{1/p} ||f||_q.
    const double et = ET_norm(u, VariableExponent::constant_in_time(9, 3.0), 2.0);
    CHECK(et == doctest::Approx(std::pow(2.0, 1.0 / 3.0) * oracle::lp_norm(f, 2.0)).epsilon(1e-9));
    const MixedSpaceParams params{VariableExponent::constant(g, 3.0), 5.0};
    CHECK(E_norm(u, params) == doctest::Approx(mixed_norm(f, params)).epsilon(1e-12));
    CHECK_ERRC(ET_norm(u, VariableExponent::constant_in_time(5, 3.0), 2.0), Errc::LatticeMismatch);
  }
}
