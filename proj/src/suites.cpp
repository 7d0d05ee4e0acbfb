#include "vlp/suites.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "vlp/field_io.hpp"
#include "vlp/kernel.hpp"
#include "vlp/operators.hpp"
#include "vlp/varexp.hpp"

namespace vlp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string tag(std::initializer_list<std::pair<const char*, double>> parts) {
  std::string s;
  for (const auto& [k, v] : parts) {
    if (!s.empty()) s += ';';
    s += k;
    s += '=';
    s += format_number(v);
  }
  return s;
}

ReportRow at_most(std::string check, std::string name, double value, double bound) {
  return {std::move(check), std::move(name), value, bound, std::isfinite(value) && value <= bound};
}

ReportRow at_least(std::string check, std::string name, double value, double bound) {
  return {std::move(check), std::move(name), value, bound, std::isfinite(value) && value >= bound};
}

double relative_error_inner_half(const Field& g, const PointFunction& exact) {
  const Grid& grid = g.grid();
  double err = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (grid.radius(i) > 0.5 * grid.half_length()) continue;
    const double e = exact(grid.point(i));
    err = std::max(err, std::abs(g[i] - e));
    peak = std::max(peak, std::abs(e));
  }
  return err / peak;
}

void decay_rows(std::vector<ReportRow>& rows, const KernelEstimateReport& r) {
  double lo = kInf;
  for (double c : r.per_time_constant) lo = std::min(lo, c);
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    rows.push_back(at_most(std::string(to_string(r.id)), tag({{"alpha", r.alpha}, {"t", r.times[i]}}),
                           r.per_time_constant[i] / lo, 1.1));
  }
}

}  // namespace

void write_report(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << "check,name,value,bound,pass\n";
  for (const auto& r : rows) {
    out << r.check << ',' << r.name << ',' << format_number(r.value) << ',' << format_number(r.bound) << ','
        << (r.pass ? 1 : 0) << '\n';
  }
}

void write_trace(std::ostream& out, const PicardTrace& trace) {
  out << "k,norm,increment,ratio\n";
  for (const auto& s : trace.steps) {
    out << s.k << ',' << format_number(s.norm) << ',' << format_number(s.increment) << ',';
    if (s.ratio) out << format_number(*s.ratio);
    out << '\n';
  }
}

bool all_pass(const std::vector<ReportRow>& rows) {
  return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass; });
}

std::vector<ReportRow> kernel_rows(double alpha, const Grid& grid, double t) {
  std::vector<ReportRow> rows;
  const int n = grid.dim();
  const double L = grid.half_length();

  if (alpha == 1.0) {
    const Field g = heat_kernel(alpha, t, grid);
    const double err = relative_error_inner_half(
        g, [&](const Point& x) { return closed_form::periodic_gaussian(x, n, t, L); });
    rows.push_back(at_most("closed-form", "gaussian;" + tag({{"t", t}}), err, 1e-6));
  }
  if (alpha == 0.5 && n == 1) {
    const Field g = heat_kernel(alpha, t, grid);
    const double err =
        relative_error_inner_half(g, [&](const Point& x) { return closed_form::periodic_poisson(x[0], t, L); });
    rows.push_back(at_most("closed-form", "poisson;" + tag({{"t", t}}), err, 1e-6));
  }

  const Field probe = random_smooth_field(grid, 7);
  for (double s : {0.1, t}) {
    const double mass = integrate(heat_kernel(alpha, s, grid));
    rows.push_back(at_most("mass", tag({{"alpha", alpha}, {"t", s}}), std::abs(mass - 1.0), 1e-10));
    const double gap = max_abs_difference(semigroup_apply(alpha, s, semigroup_apply(alpha, s, probe)),
                                          semigroup_apply(alpha, 2.0 * s, probe));
    rows.push_back(at_most("semigroup", tag({{"alpha", alpha}, {"t", s}}), gap, 1e-12));
  }

  const auto sweep = admissible_sweep(alpha, grid, 6);
  decay_rows(rows, verify_pointwise_decay(alpha, sweep, grid));
  decay_rows(rows, verify_gradient_decay(alpha, sweep, grid));

  const auto smooth = smoothing_sweep(alpha, grid, 8);
  struct Cell {
    double p, q, nu;
  };
  for (const Cell c : {Cell{2, 2, 0}, Cell{1, 2, 0}, Cell{2, 2, 1}, Cell{1, kInf, 0}, Cell{2, 4, 0.5},
                       Cell{1, kInf, 1}}) {
    const auto r = verify_smoothing(alpha, c.p, c.q, c.nu, smooth, grid);
    const double bound = r.theoretical_exponent == 0.0 ? 0.02 : 0.03 * std::abs(r.theoretical_exponent);
    rows.push_back(at_most("smoothing", tag({{"alpha", alpha}, {"p", c.p}, {"q", c.q}, {"nu", c.nu}}),
                           std::abs(r.fitted_exponent - r.theoretical_exponent), bound));
  }

  if (alpha > 0.5) {
    for (int dim : {1, 2}) {
      for (int gamma : {1, 0}) {
        const std::string check = gamma == 1 ? "integral-3.5" : "integral-3.10";
        const double power = gamma == 1 ? dim + 1.0 - 2.0 * alpha : dim - 2.0 * alpha;
        if (time_integral(alpha, dim, 1.0, gamma).divergent) {
          const double a = time_integral_tail_exponent(alpha, dim, gamma);
          rows.push_back({check, tag({{"alpha", alpha}, {"n", dim}}) + ";divergent", a, 1.0, a <= 1.0});
          continue;
        }
        double lo = kInf, hi = 0.0;
        for (double r : {0.5, 1.0, 2.0}) {
          const double c = time_integral(alpha, dim, r, gamma).value * std::pow(r, power);
          lo = std::min(lo, c);
          hi = std::max(hi, c);
        }
        rows.push_back(at_most(check, tag({{"alpha", alpha}, {"n", dim}}), (hi - lo) / hi, 1e-6));
      }
    }
  }
  return rows;
}

std::vector<ReportRow> operator_rows(const Grid& grid, std::uint64_t seed) {
  std::vector<ReportRow> rows;
  const double L = grid.half_length();
  auto exponent_on = [&](const Grid& g) {
    return VariableExponent(
        sample(g, [&](const Point& x) { return 2.5 + 0.5 * std::sin(std::numbers::pi * x[0] / L); }));
  };
  const VariableExponent p = exponent_on(grid);
  const Field f = random_smooth_field(grid, seed);
  const Field g = random_smooth_field(grid, seed + 1);

  const double classical = lebesgue_norm(f, 3.0);
  rows.push_back(at_most("luxemburg", "constant-p=3",
                         std::abs(luxemburg_norm(f, VariableExponent::constant(grid, 3.0)) - classical) / classical,
                         1e-10));
  const double nf = luxemburg_norm(f, p);
  rows.push_back(at_most("luxemburg", "homogeneity", std::abs(luxemburg_norm(3.0 * f, p) - 3.0 * nf) / (3.0 * nf),
                         1e-9));
  rows.push_back(at_most("luxemburg", "unit-ball", std::abs(modular((1.0 / nf) * f, p) - 1.0), 1e-8));

  const VariableExponent p3 = VariableExponent::constant(grid, 4.0);
  std::vector<double> p1(grid.size());
  for (std::size_t i = 0; i < p1.size(); ++i) p1[i] = 1.0 / (1.0 / p.values()[i] + 0.25);
  rows.push_back(at_most("holder", "p2=p;p3=4",
                         holder_defect(f, g, VariableExponent(Field(grid, std::move(p1))), p, p3), 2.0));
  const auto dual = norm_duality_defect(f, p, 16, seed);
  rows.push_back(at_most("duality", "upper", dual.upper, 2.0));
  rows.push_back(at_most("duality", "lower", dual.lower, 2.0));

  const Field mf = maximal_function(f);
  const double scale = max_abs(mf);
  rows.push_back(at_most("maximal", "homogeneity", max_abs_difference(maximal_function(3.0 * f), 3.0 * mf) / scale,
                         1e-12));
  const Field sum = maximal_function(f + g) - (mf + maximal_function(g));
  double excess = 0.0;
  for (std::size_t i = 0; i < sum.size(); ++i) excess = std::max(excess, sum[i]);
  rows.push_back(at_most("maximal", "sublinearity", excess / scale, 1e-12));
  rows.push_back(
      at_most("maximal", "parallel-vs-reference", max_abs_difference(mf, reference::maximal_function(f)) / scale,
              1e-12));
  const Grid fine(grid.dim(), L, 2 * grid.points_per_axis());
  const double coarse_ratio = luxemburg_norm(mf, p) / nf;
  const Field f_fine = random_smooth_field(fine, seed);
  const VariableExponent p_fine = exponent_on(fine);
  const double fine_ratio = luxemburg_norm(maximal_function(f_fine), p_fine) / luxemburg_norm(f_fine, p_fine);
  rows.push_back(at_most("maximal", "refinement-stability", std::abs(fine_ratio / coarse_ratio - 1.0), 0.1));

  Field riesz_sum = Field::zeros(grid);
  for (int j = 0; j < grid.dim(); ++j) riesz_sum = riesz_sum + riesz_transform(riesz_transform(f, j), j);
  const double mean = integrate(f) / grid.measure();
  const Field centred = f - Field::constant(grid, mean);
  rows.push_back(at_most("riesz", "sum-of-squares", max_abs(riesz_sum + centred) / max_abs(centred), 1e-10));

  const double beta = 0.5 * grid.dim();
  const Field ip = riesz_potential(f, beta);
  rows.push_back(at_most("riesz-potential", "parallel-vs-reference",
                         max_abs_difference(ip, reference::riesz_potential(f, beta)) / max_abs(ip), 1e-12));
  return rows;
}

std::vector<ReportRow> smallness_rows(const SmallnessReport& r) {
  return {
      {"smallness", "B", r.B, kInf, true},
      {"smallness", "R", r.R, kInf, true},
      {"smallness", "C", r.C, kInf, true},
      at_most("smallness", "C*R^b", r.product, 0.5),
  };
}

std::vector<ReportRow> local_existence_rows(const LocalExistenceReport& r) {
  std::vector<ReportRow> rows;
  rows.push_back({"local-existence", "embedding-constant", r.embedding_constant, kInf, true});
  for (const auto& s : r.scan) rows.push_back(at_most("local-existence", tag({{"T", s.T}}), s.product, 0.5));
  rows.push_back({"local-existence", "T_suggested", r.T_suggested, kInf, true});
  return rows;
}

ProblemSpec manufactured_problem(std::size_t N, std::size_t M, double amplitude) {
  const double L = 2.0;
  const double T = 1.0;
  const Grid grid(1, L, N);
  const double k = std::numbers::pi / L;
  const auto times = uniform_times(T, M);
  std::vector<Field> force;
  for (double t : times) {
    force.push_back(sample(grid, [&](const Point& x) {
      const double u = amplitude * std::exp(-t) * std::sin(k * x[0]);
      return (k * k - 1.0) * u + std::abs(u) * u;
    }));
  }
  return ProblemSpec{
      .alpha = 1.0,
      .b = 1,
      .gamma = 0,
      .grid = grid,
      .u0 = sample(grid, [&](const Point& x) { return amplitude * std::sin(k * x[0]); }),
      .force = Force{ForceForm::Direct, SpaceTimeField(times, std::move(force))},
      .T = T,
      .M = M,
      .space = LocalSpace{VariableExponent::constant_in_time(M + 1, 3.0), 2.0, VariableExponent::constant(grid, 2.0)},
  };
}

SpaceTimeField manufactured_solution(std::size_t N, std::size_t M, double amplitude) {
  const double L = 2.0;
  const Grid grid(1, L, N);
  const auto times = uniform_times(1.0, M);
  std::vector<Field> frames;
  for (double t : times) {
    frames.push_back(sample(
        grid, [&](const Point& x) { return amplitude * std::exp(-t) * std::sin(std::numbers::pi * x[0] / L); }));
  }
  return SpaceTimeField(times, std::move(frames));
}

std::vector<ReportRow> solver_rows() {
  std::vector<ReportRow> rows;
  const double amplitude = 0.25;
  {
    ProblemSpec zero = manufactured_problem(32, 16, 0.0);
    const auto res = picard_solve(zero, 5, 1e-12);
    rows.push_back(at_most("picard", "zero-data;iterations", res.trace.iterations, 1.0));
    rows.push_back(at_most("picard", "zero-data;max", max_abs(res.solution), 0.0));
  }
  double previous = 0.0;
  for (std::size_t level = 0; level < 4; ++level) {
    const std::size_t N = 32u << level;
    const std::size_t M = 16u << level;
    const auto res = picard_solve(manufactured_problem(N, M, amplitude), 60, 1e-12);
    const double err = max_abs_difference(res.solution, manufactured_solution(N, M, amplitude));
    const std::string name = tag({{"N", static_cast<double>(N)}, {"M", static_cast<double>(M)}});
    rows.push_back(at_most("manufactured", name + ";error", err, N == 128 ? 1e-3 : kInf));
    if (level > 0) rows.push_back(at_least("manufactured", name + ";slope", std::log2(previous / err), 1.8));
    previous = err;
  }
  return rows;
}

}  // namespace vlp
