#include "vlp/varexp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "vlp/error.hpp"

namespace vlp {

namespace {

constexpr int kMaxBracketSteps = 1000;

void require_spatial_match(const Field& f, const VariableExponent& p) {
  if (!p.grid() || !(*p.grid() == f.grid())) {
    throw Error(Errc::GridMismatch, "exponent is not sampled on the field's grid");
  }
}

// Nonzero samples pre-folded into log form: term_i(s) = w_i exp(e_i (a_i - s))
// with s = log(lambda).
struct LogTerms {
  std::vector<double> log_abs;
  std::vector<double> exponent;
  std::vector<double> weight;
};

template <class WeightAt>
LogTerms fold(std::span<const double> values, std::span<const double> exponents, WeightAt&& weight_at) {
  LogTerms t;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double w = weight_at(i);
    if (values[i] == 0.0 || w == 0.0) continue;
    t.log_abs.push_back(std::log(std::abs(values[i])));
    t.exponent.push_back(exponents[i]);
    t.weight.push_back(w);
  }
  return t;
}

double modular_at(const LogTerms& t, double log_lambda) {
  return blocked_sum(t.log_abs.size(), [&](std::size_t i) {
    return t.weight[i] * std::exp(t.exponent[i] * (t.log_abs[i] - log_lambda));
  });
}

double solve_luxemburg(const LogTerms& t, double tol) {
  if (t.log_abs.empty()) return 0.0;
  if (!(tol > 0.0)) throw Error(Errc::InvalidSpec, "norm tolerance must be positive");
  const double step = std::numbers::ln2;
  // Invariant once bracketed: modular(lo) > 1 >= modular(hi).
  double lo = 0.0, hi = 0.0;
  if (modular_at(t, 0.0) > 1.0) {
    lo = 0.0;
    hi = step;
    int k = 0;
    while (modular_at(t, hi) > 1.0) {
      lo = hi;
      hi += step;
      if (++k > kMaxBracketSteps) throw Error(Errc::BracketFailure, "no upper bracket for the Luxemburg norm");
    }
  } else {
    hi = 0.0;
    lo = -step;
    int k = 0;
    while (modular_at(t, lo) <= 1.0) {
      hi = lo;
      lo -= step;
      if (++k > kMaxBracketSteps) throw Error(Errc::BracketFailure, "no lower bracket for the Luxemburg norm");
    }
  }
  const double log_tol = std::log1p(tol);
  while (hi - lo > log_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket at machine resolution
    if (modular_at(t, mid) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::exp(0.5 * (lo + hi));
}

std::vector<double> trapezoid_weights(std::span<const double> times) {
  std::vector<double> w(times.size(), 0.0);
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double half = 0.5 * (times[i + 1] - times[i]);
    w[i] += half;
    w[i + 1] += half;
  }
  return w;
}

}  // namespace

VariableExponent::VariableExponent(const Field& samples, std::optional<double> p_inf)
    : grid_(samples.grid()), values_(samples.values().begin(), samples.values().end()), p_inf_(p_inf) {
  validate();
}

VariableExponent::VariableExponent(std::vector<double> samples, std::optional<double> p_inf)
    : values_(std::move(samples)), p_inf_(p_inf) {
  validate();
}

VariableExponent VariableExponent::constant(const Grid& grid, double p) {
  return VariableExponent(Field::constant(grid, p));
}

VariableExponent VariableExponent::constant_in_time(std::size_t count, double p) {
  return VariableExponent(std::vector<double>(count, p));
}

void VariableExponent::validate() {
  if (values_.empty()) throw Error(Errc::InvalidExponent, "exponent has no samples");
  lower_ = std::numeric_limits<double>::infinity();
  upper_ = -std::numeric_limits<double>::infinity();
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(Errc::InvalidExponent, "exponent sample is not finite");
    lower_ = std::min(lower_, v);
    upper_ = std::max(upper_, v);
  }
  if (!(lower_ > 1.0)) {
    throw Error(Errc::InvalidExponent, "exponent lower limit must exceed 1, got " + std::to_string(lower_));
  }
  if (p_inf_ && !(std::isfinite(*p_inf_) && *p_inf_ > 1.0)) {
    throw Error(Errc::InvalidExponent, "p_inf must be finite and exceed 1");
  }
}

std::pair<double, double> limit_exponents(const VariableExponent& p) { return {p.lower(), p.upper()}; }

double local_log_holder_constant(const VariableExponent& p, bool* strided) {
  if (!p.grid()) throw Error(Errc::GridMismatch, "log-Hölder scan needs a spatial exponent");
  const Grid& g = *p.grid();
  std::size_t stride = 1;
  auto count_for = [&](std::size_t s) {
    std::size_t per_axis = (g.points_per_axis() + s - 1) / s;
    std::size_t c = 1;
    for (int d = 0; d < g.dim(); ++d) c *= per_axis;
    return c;
  };
  while (count_for(stride) > kLogHolderScanPoints) stride *= 2;
  if (strided) *strided = stride > 1;

  std::vector<Point> pts;
  std::vector<double> inv;
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    const Index idx = g.unflatten(flat);
    bool keep = true;
    for (int d = 0; d < g.dim(); ++d) keep = keep && (idx[d] % stride == 0);
    if (!keep) continue;
    pts.push_back(g.point(flat));
    inv.push_back(1.0 / p.values()[flat]);
  }
  const std::size_t count = pts.size();
  double best = 0.0;
#pragma omp parallel for schedule(dynamic, 16) reduction(max : best)
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      const double diff = std::abs(inv[i] - inv[j]);
      if (diff == 0.0) continue;
      double d2 = 0.0;
      for (int d = 0; d < kMaxDim; ++d) d2 += (pts[i][d] - pts[j][d]) * (pts[i][d] - pts[j][d]);
      best = std::max(best, diff * std::log(std::numbers::e + 1.0 / std::sqrt(d2)));
    }
  }
  return best;
}

double decay_log_holder_constant(const VariableExponent& p) {
  if (!p.p_inf()) throw Error(Errc::MissingPInf, "decay condition requested without p_inf");
  if (!p.grid()) throw Error(Errc::GridMismatch, "decay scan needs a spatial exponent");
  const Grid& g = *p.grid();
  const double inv_inf = 1.0 / *p.p_inf();
  double best = 0.0;
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    best = std::max(best, std::abs(1.0 / p.values()[flat] - inv_inf) *
                              std::log(std::numbers::e + g.radius(flat)));
  }
  return best;
}

LogHolderReport check_log_holder(const VariableExponent& p, double budget) {
  LogHolderReport r;
  r.decay_constant = decay_log_holder_constant(p);
  r.local_constant = local_log_holder_constant(p, &r.strided);
  r.pass = r.local_constant <= budget && r.decay_constant <= budget;
  return r;
}

bool check_emb_class(const VariableExponent& qbar, double q, double threshold) {
  if (!qbar.grid()) throw Error(Errc::GridMismatch, "embedding check needs a spatial exponent");
  if (q > qbar.lower()) return false;
  const Grid& g = *qbar.grid();
  const double h = g.spacing();
  const auto shells = static_cast<std::size_t>(std::floor(g.half_length() / h)) + 1;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> shell_min(shells, inf);
  std::vector<bool> occupied(shells, false);
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    const double r = g.radius(flat);
    if (r > g.half_length()) continue;
    const auto s = std::min(shells - 1, static_cast<std::size_t>(std::floor(r / h)));
    const double qb = qbar.values()[flat];
    const double gap = qb - q;
    const double value = gap <= 1e-14 * q ? inf : q * qb / gap;
    shell_min[s] = std::min(shell_min[s], value);
    occupied[s] = true;
  }
  double previous = -inf;
  double last = -inf;
  for (std::size_t s = 0; s < shells; ++s) {
    if (!occupied[s]) continue;
    const double v = shell_min[s];
    if (v != inf && previous != inf && v < previous * (1.0 - 1e-12)) return false;
    if (v != inf && previous == inf) return false;
    previous = v;
    last = v;
  }
  return last >= threshold;
}

double modular(const Field& f, const VariableExponent& p) {
  require_spatial_match(f, p);
  const auto v = f.values();
  const auto e = p.values();
  return f.grid().cell_volume() * blocked_sum(v.size(), [&](std::size_t i) {
           return v[i] == 0.0 ? 0.0 : std::pow(std::abs(v[i]), e[i]);
         });
}

namespace detail {

double luxemburg(std::span<const double> values, std::span<const double> exponents,
                 std::span<const double> weights, double tol) {
  return solve_luxemburg(fold(values, exponents, [&](std::size_t i) { return weights[i]; }), tol);
}

double luxemburg(std::span<const double> values, std::span<const double> exponents, double weight,
                 double tol) {
  return solve_luxemburg(fold(values, exponents, [&](std::size_t) { return weight; }), tol);
}

}  // namespace detail

double luxemburg_norm(const Field& f, const VariableExponent& p, double tol) {
  require_spatial_match(f, p);
  return detail::luxemburg(f.values(), p.values(), f.grid().cell_volume(), tol);
}

double lebesgue_norm(const Field& f, double q) {
  const double top = max_abs(f);
  if (std::isinf(q)) return top;
  if (!(q > 0.0)) throw Error(Errc::InvalidExponent, "Lebesgue exponent must be positive");
  if (top == 0.0) return 0.0;
  const auto v = f.values();
  const double s = blocked_sum(v.size(), [&](std::size_t i) { return std::pow(std::abs(v[i]) / top, q); });
  return top * std::pow(f.grid().cell_volume() * s, 1.0 / q);
}

double mixed_norm(const Field& f, const MixedSpaceParams& params, double tol) {
  if (!(params.q_const > 1.0)) throw Error(Errc::InvalidExponent, "mixed-space q must exceed 1");
  return std::max(luxemburg_norm(f, params.p, tol), lebesgue_norm(f, params.q_const));
}

VariableExponent conjugate_exponent(const VariableExponent& p) {
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = p.values()[i] / (p.values()[i] - 1.0);
  std::optional<double> inf;
  if (p.p_inf()) inf = *p.p_inf() / (*p.p_inf() - 1.0);
  if (p.grid()) return VariableExponent(Field(*p.grid(), std::move(out)), inf);
  return VariableExponent(std::move(out), inf);
}

double holder_defect(const Field& f, const Field& g, const VariableExponent& p1,
                     const VariableExponent& p2, const VariableExponent& p3, double tol) {
  require_spatial_match(f, p1);
  require_spatial_match(f, p2);
  require_spatial_match(g, p3);
  for (std::size_t i = 0; i < p1.size(); ++i) {
    const double lhs = 1.0 / p1.values()[i];
    const double rhs = 1.0 / p2.values()[i] + 1.0 / p3.values()[i];
    if (std::abs(lhs - rhs) > 1e-12) {
      throw Error(Errc::ExponentMismatch, "1/p1 != 1/p2 + 1/p3 at sample " + std::to_string(i));
    }
  }
  std::vector<double> prod(f.size());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = f[i] * g[i];
  const double num = luxemburg_norm(Field(f.grid(), std::move(prod)), p1, tol);
  const double den = luxemburg_norm(f, p2, tol) * luxemburg_norm(g, p3, tol);
  if (den == 0.0) return 0.0;
  return num / den;
}

double E_norm(const SpaceTimeField& u, const MixedSpaceParams& params, double tol) {
  return mixed_norm(sup_over_time(u), params, tol);
}

double ET_norm(const SpaceTimeField& u, const VariableExponent& p_time, double q_space, double tol) {
  if (p_time.size() != u.times().size()) {
    throw Error(Errc::LatticeMismatch, "temporal exponent must have one sample per time instant");
  }
  if (!(q_space > 1.0)) throw Error(Errc::InvalidExponent, "spatial exponent q must exceed 1");
  std::vector<double> trace(u.frames().size());
  for (std::size_t i = 0; i < trace.size(); ++i) trace[i] = lebesgue_norm(u.frame(i), q_space);
  const auto w = trapezoid_weights(u.times());
  return detail::luxemburg(trace, p_time.values(), w, tol);
}

Field random_smooth_field(const Grid& grid, std::uint64_t seed, int modes, int max_mode) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> amp(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_int_distribution<int> wave(-max_mode, max_mode);
  struct Mode {
    std::array<int, kMaxDim> k{};
    double a = 0.0;
    double phi = 0.0;
  };
  std::vector<Mode> ms(static_cast<std::size_t>(modes));
  for (auto& m : ms) {
    for (int d = 0; d < grid.dim(); ++d) m.k[d] = wave(rng);
    m.a = amp(rng);
    m.phi = phase(rng);
  }
  const double offset = amp(rng);
  const double base = std::numbers::pi / grid.half_length();
  return sample(grid, [&](const Point& x) {
    double v = offset;
    for (const auto& m : ms) {
      double arg = m.phi;
      for (int d = 0; d < grid.dim(); ++d) arg += base * m.k[d] * x[d];
      v += m.a * std::cos(arg);
    }
    return v;
  });
}

DualityDefect norm_duality_defect(const Field& f, const VariableExponent& p, int trials,
                                  std::uint64_t seed) {
  if (trials < 1) throw Error(Errc::InvalidSpec, "duality probe needs at least one trial");
  const double norm_f = luxemburg_norm(f, p);
  if (norm_f == 0.0) return {};
  const VariableExponent dual = conjugate_exponent(p);
  const Field abs_f = abs(f);

  auto pairing = [&](const Field& g) {
    const double ng = luxemburg_norm(g, dual);
    if (ng == 0.0) return 0.0;
    const auto gv = g.values();
    const auto fv = abs_f.values();
    const double s = blocked_sum(fv.size(), [&](std::size_t i) { return fv[i] * std::abs(gv[i]); });
    return f.grid().cell_volume() * s / ng;
  };

  std::vector<double> extremal(f.size());
  for (std::size_t i = 0; i < extremal.size(); ++i) {
    extremal[i] = std::pow(abs_f[i] / norm_f, p.values()[i] - 1.0);
  }
  double best = pairing(Field(f.grid(), std::move(extremal)));
  std::mt19937_64 seeds(seed);
  for (int k = 0; k < trials; ++k) best = std::max(best, pairing(random_smooth_field(f.grid(), seeds())));
  return {best / norm_f, norm_f / best};
}

}  // namespace vlp
