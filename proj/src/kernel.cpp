#include "vlp/kernel.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "vlp/error.hpp"
#include "vlp/spectral.hpp"
#include "vlp/varexp.hpp"

namespace vlp {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error(Errc::AlphaOutOfRange, "alpha must lie in (0, 1], got " + std::to_string(alpha));
  }
}

void check_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(Errc::InvalidSpec, "kernel time must be positive");
}

double heat_symbol(const SpectralPlan& plan, std::size_t k, double alpha, double t) {
  return std::exp(-t * std::pow(plan.xi_norm(k), 2.0 * alpha));
}

std::vector<double> geometric(double lo, double hi, int count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double s = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    out[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, s);
  }
  return out;
}

// Restricts the sweep to the resolved window and rejects empty sweeps.
std::vector<double> admissible_only(double alpha, const Grid& grid, std::span<const double> times) {
  const double lo = std::pow(grid.spacing(), 2.0 * alpha) * (1.0 - 1e-12);
  const double hi = std::pow(grid.half_length() / 4.0, 2.0 * alpha) * (1.0 + 1e-12);
  std::vector<double> kept;
  for (double t : times) {
    if (t >= lo && t <= hi) kept.push_back(t);
  }
  if (kept.empty()) throw Error(Errc::DegenerateSweep, "no sweep time inside the resolved window");
  return kept;
}

template <class ConstantAt>
KernelEstimateReport decay_report(EstimateId id, double alpha, std::vector<double> times, double budget,
                                  ConstantAt&& constant_at) {
  KernelEstimateReport r;
  r.id = id;
  r.alpha = alpha;
  r.per_time_constant.assign(times.size(), 0.0);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < times.size(); ++i) r.per_time_constant[i] = constant_at(times[i]);
  r.times = std::move(times);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  bool finite = true;
  for (double c : r.per_time_constant) {
    finite = finite && std::isfinite(c);
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  r.constant = hi;
  r.pass = finite && lo > 0.0 && hi / lo <= 1.0 + budget;
  return r;
}

double norm_or_max(const Field& f, double p) { return lebesgue_norm(f, p); }

}  // namespace

std::string_view to_string(EstimateId id) noexcept {
  switch (id) {
    case EstimateId::Pointwise: return "pointwise";
    case EstimateId::Gradient: return "gradient";
    case EstimateId::Smoothing: return "smoothing";
    case EstimateId::Integral35: return "integral-3.5";
    case EstimateId::Integral310: return "integral-3.10";
  }
  return "unknown";
}

Field heat_kernel(double alpha, double t, const Grid& grid) {
  check_alpha(alpha);
  check_time(t);
  const auto plan = SpectralPlan::for_grid(grid);
  const double scale = 1.0 / grid.cell_volume();
  Spectrum s(grid.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    s[k] = heat_symbol(*plan, k, alpha, t) * plan->centring_sign(k) * scale;
  }
  double imag = 0.0;
  std::vector<double> values = plan->inverse(std::move(s), &imag);
  double peak = 0.0;
  for (double v : values) peak = std::max(peak, std::abs(v));
  if (imag > 1e-12 * peak) {
    throw Error(Errc::SymmetryViolation, "heat kernel has imaginary residue " + std::to_string(imag));
  }
  return Field(grid, std::move(values));
}

std::vector<Field> heat_kernel_gradient(double alpha, double t, const Grid& grid) {
  check_alpha(alpha);
  check_time(t);
  const auto plan = SpectralPlan::for_grid(grid);
  const double scale = 1.0 / grid.cell_volume();
  std::vector<Field> out;
  for (int axis = 0; axis < grid.dim(); ++axis) {
    Spectrum s(grid.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (plan->nyquist(axis, k)) continue;
      s[k] = std::complex<double>(0.0, plan->xi(axis, k)) * heat_symbol(*plan, k, alpha, t) *
             plan->centring_sign(k) * scale;
    }
    out.emplace_back(grid, plan->inverse(std::move(s)));
  }
  return out;
}

Field semigroup_apply(double alpha, double t, const Field& f) {
  check_alpha(alpha);
  if (!(t >= 0.0)) throw Error(Errc::InvalidSpec, "semigroup time must be non-negative");
  if (t == 0.0) return f;
  const auto plan = SpectralPlan::for_grid(f.grid());
  return plan->apply(f, [&](std::size_t k) { return std::complex<double>(heat_symbol(*plan, k, alpha, t)); });
}

std::vector<double> admissible_sweep(double alpha, const Grid& grid, int count) {
  if (count < 1) throw Error(Errc::DegenerateSweep, "sweep needs at least one time");
  return geometric(std::pow(2.0 * grid.spacing(), 2.0 * alpha), std::pow(grid.half_length() / 8.0, 2.0 * alpha),
                   count);
}

std::vector<double> smoothing_sweep(double alpha, const Grid& grid, int count) {
  if (count < 1) throw Error(Errc::DegenerateSweep, "sweep needs at least one time");
  return geometric(std::pow(4.0 * grid.spacing(), 2.0 * alpha), std::pow(grid.half_length() / 8.0, 2.0 * alpha),
                   count);
}

KernelEstimateReport verify_pointwise_decay(double alpha, std::span<const double> times, const Grid& grid,
                                            double budget) {
  check_alpha(alpha);
  const double power = grid.dim() + 2.0 * alpha;
  return decay_report(EstimateId::Pointwise, alpha, admissible_only(alpha, grid, times), budget, [&](double t) {
    const Field g = heat_kernel(alpha, t, grid);
    const double width = std::pow(t, 0.5 / alpha);
    double c = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double r = grid.radius(i);
      if (r > 0.5 * grid.half_length()) continue;
      c = std::max(c, std::abs(g[i]) * std::pow(width + r, power) / t);
    }
    return c;
  });
}

KernelEstimateReport verify_gradient_decay(double alpha, std::span<const double> times, const Grid& grid,
                                           double budget) {
  check_alpha(alpha);
  const double power = grid.dim() + 1.0;
  return decay_report(EstimateId::Gradient, alpha, admissible_only(alpha, grid, times), budget, [&](double t) {
    const auto grad = heat_kernel_gradient(alpha, t, grid);
    const double width = std::pow(t, 0.5 / alpha);
    double c = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double r = grid.radius(i);
      if (r > 0.5 * grid.half_length()) continue;
      double sq = 0.0;
      for (const Field& comp : grad) sq += comp[i] * comp[i];
      c = std::max(c, std::sqrt(sq) * std::pow(width + r, power));
    }
    return c;
  });
}

KernelEstimateReport verify_smoothing(double alpha, double p, double q, double nu, std::span<const double> times,
                                      const Grid& grid, double relative_budget, double zero_budget) {
  check_alpha(alpha);
  if (!(p >= 1.0 && q >= p) || !(nu >= 0.0)) {
    throw Error(Errc::InvalidSpec, "smoothing estimate needs 1 <= p <= q <= inf and nu >= 0");
  }
  if (times.size() < 4) throw Error(Errc::DegenerateSweep, "smoothing regression needs at least 4 sweep points");
  const int n = grid.dim();
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;

  KernelEstimateReport r;
  r.id = EstimateId::Smoothing;
  r.alpha = alpha;
  r.times.assign(times.begin(), times.end());
  r.theoretical_exponent = -nu / (2.0 * alpha) - n / (2.0 * alpha) * (inv_p - inv_q);
  std::vector<double> ratio(times.size(), 0.0);
  const auto plan = SpectralPlan::for_grid(grid);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    const double width = std::pow(t, 0.5 / alpha);
    // -w^2 Laplacian of exp(-|x|^2 / w^2): mean zero, so the fractional
    // derivative of the smoothed probe has fast-decaying tails and the
    // periodic box does not bias the slope.
    const Field probe = sample(grid, [&](const Point& x) {
      const double s = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (width * width);
      return (2.0 * n - 4.0 * s) * std::exp(-s);
    });
    const Field smoothed = plan->apply(probe, [&](std::size_t k) {
      const double mult = k == 0 ? (nu == 0.0 ? 1.0 : 0.0) : std::pow(plan->xi_norm(k), nu);
      return std::complex<double>(mult * heat_symbol(*plan, k, alpha, t));
    });
    ratio[i] = norm_or_max(smoothed, q) / norm_or_max(probe, p);
  }

  // Least-squares fit of log(ratio) = a + slope * log(t).
  const double m = static_cast<double>(times.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double x = std::log(times[i]);
    const double y = std::log(ratio[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double cov = sxy - sx * sy / m;
  const double var_x = sxx - sx * sx / m;
  const double var_y = syy - sy * sy / m;
  r.fitted_exponent = cov / var_x;
  r.r_squared = var_y > 0.0 ? std::max(0.0, cov * cov / (var_x * var_y)) : 1.0;

  r.per_time_constant.resize(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    r.per_time_constant[i] = ratio[i] * std::pow(times[i], -r.theoretical_exponent);
    r.constant = std::max(r.constant, r.per_time_constant[i]);
  }
  const double err = std::abs(r.fitted_exponent - r.theoretical_exponent);
  r.pass = r.theoretical_exponent == 0.0 ? err <= zero_budget
                                         : err <= relative_budget * std::abs(r.theoretical_exponent);
  return r;
}

double time_integral_tail_exponent(double alpha, int dim, int gamma) {
  if (gamma == 1) return (dim + 1.0) / (2.0 * alpha);
  if (gamma == 0) return dim / (2.0 * alpha);
  throw Error(Errc::InvalidSpec, "gamma must be 0 or 1");
}

TimeIntegral time_integral(double alpha, int dim, double r, int gamma) {
  if (!(alpha > 0.5 && alpha <= 1.0)) {
    throw Error(Errc::AlphaOutOfRange, "time integral needs alpha in (1/2, 1]");
  }
  if (!(r > 0.0)) throw Error(Errc::InvalidSpec, "time integral needs r > 0");
  const double tail = time_integral_tail_exponent(alpha, dim, gamma);
  TimeIntegral out;
  if (tail <= 1.0 + 1e-12) {
    out.divergent = true;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  const double inv = 0.5 / alpha;
  const double power = gamma == 1 ? dim + 1.0 : dim + 2.0 * alpha;
  // log F(s) for s = exp(ls), written to stay finite for very large s.
  auto log_integrand = [&](double ls) {
    const double lroot = ls * inv;
    const double log_den = power * (lroot + std::log1p(r * std::exp(-lroot)));
    return (gamma == 0 ? ls : 0.0) - log_den;
  };

  const double split = std::pow(r, 2.0 * alpha);
  boost::math::quadrature::tanh_sinh<double> quad;
  double head_err = 0.0, tail_err = 0.0;
  const double head = quad.integrate(
      [&](double s) {
        if (s <= 0.0) return gamma == 0 ? 0.0 : std::pow(r, -power);
        return std::exp(log_integrand(std::log(s)));
      },
      0.0, split, 1e-12, &head_err);

  // s = split * v^{-m} with m = 1/(tail - 1) turns the algebraic tail into
  // a bounded integrand on (0, 1].
  const double m = 1.0 / (tail - 1.0);
  const double log_split = std::log(split);
  const double tail_part = quad.integrate(
      [&](double v) {
        if (v <= 0.0) {
          // Limit of m s F(s) / v as v -> 0.
          return m * std::exp((1.0 - tail) * log_split);
        }
        const double ls = log_split - m * std::log(v);
        return m * std::exp(log_integrand(ls) + ls - std::log(v));
      },
      0.0, 1.0, 1e-12, &tail_err);

  out.value = head + tail_part;
  out.error_estimate = std::abs(head_err * head) + std::abs(tail_err * tail_part);
  return out;
}

namespace closed_form {

double periodic_gaussian(const Point& x, int dim, double t, double half_length) {
  const double norm = std::pow(4.0 * std::numbers::pi * t, -0.5 * dim);
  const int reach = 2;
  double total = 0.0;
  std::array<int, kMaxDim> j{0, 0, 0};
  const int r0 = reach, r1 = dim > 1 ? reach : 0, r2 = dim > 2 ? reach : 0;
  for (j[0] = -r0; j[0] <= r0; ++j[0]) {
    for (j[1] = -r1; j[1] <= r1; ++j[1]) {
      for (j[2] = -r2; j[2] <= r2; ++j[2]) {
        double sq = 0.0;
        for (int d = 0; d < dim; ++d) {
          const double y = x[d] + 2.0 * half_length * j[d];
          sq += y * y;
        }
        total += std::exp(-sq / (4.0 * t));
      }
    }
  }
  return norm * total;
}

double periodic_poisson(double x, double t, double half_length) {
  const double a = std::numbers::pi * t / half_length;
  return std::sinh(a) / (2.0 * half_length * (std::cosh(a) - std::cos(std::numbers::pi * x / half_length)));
}

}  // namespace closed_form

}  // namespace vlp
