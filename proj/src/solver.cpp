#include "vlp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <string>

#include "vlp/error.hpp"
#include "vlp/operators.hpp"
#include "vlp/spectral.hpp"

namespace vlp {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(Errc::InvalidSpec, what);
}

void require_lattice(const SpaceTimeField& u, const ProblemSpec& spec, const char* what) {
  if (!(u.grid() == spec.grid)) throw Error(Errc::GridMismatch, std::string(what) + " is not on the problem grid");
  const auto expected = uniform_times(spec.T, spec.M);
  bool ok = u.times().size() == expected.size();
  for (std::size_t i = 0; ok && i < expected.size(); ++i) {
    ok = std::abs(u.times()[i] - expected[i]) <= 1e-12 * spec.T;
  }
  if (!ok) throw Error(Errc::LatticeMismatch, std::string(what) + " is not sampled on t_i = i T / M");
}

// Spectral multiplier of grad^gamma: 1 or i (xi_1 + ... + xi_n).
std::complex<double> grad_symbol(const SpectralPlan& plan, int dim, int gamma, std::size_t k) {
  if (gamma == 0) return 1.0;
  double s = 0.0;
  for (int d = 0; d < dim; ++d) {
    if (!plan.nyquist(d, k)) s += plan.xi(d, k);
  }
  return {0.0, s};
}

Field pointwise_power(const Field& u, int b) {
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double v = u[i];
    out[i] = std::pow(std::abs(v), b) * v;
  }
  return Field(u.grid(), std::move(out));
}

// Exact semigroup factors exp(-d dt |xi|^{2 alpha}) for lags d = 0..M and
// the trapezoid assembly S_i = E_i a + sum_j w_ij E_{i-j} s_j.
class Propagator {
 public:
  explicit Propagator(const ProblemSpec& spec)
      : plan_(SpectralPlan::for_grid(spec.grid)), M_(spec.M), dt_(spec.T / static_cast<double>(spec.M)) {
    const std::size_t size = spec.grid.size();
    decay_.assign((M_ + 1) * size, 0.0);
    for (std::size_t k = 0; k < size; ++k) {
      const double rate = std::pow(plan_->xi_norm(k), 2.0 * spec.alpha);
      for (std::size_t d = 0; d <= M_; ++d) decay_[d * size + k] = std::exp(-static_cast<double>(d) * dt_ * rate);
    }
  }

  const SpectralPlan& plan() const { return *plan_; }

  SpaceTimeField run(const Spectrum* initial, const std::vector<Spectrum>* sources) const {
    const std::size_t size = plan_->size();
    const auto times = uniform_times(static_cast<double>(M_) * dt_, M_);
    std::vector<std::vector<double>> frames(M_ + 1);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i <= M_; ++i) {
      Spectrum acc(size, 0.0);
      if (initial) {
        const double* e = decay_.data() + i * size;
        for (std::size_t k = 0; k < size; ++k) acc[k] = e[k] * (*initial)[k];
      }
      if (sources && i > 0) {
        for (std::size_t j = 0; j <= i; ++j) {
          const double w = (j == 0 || j == i) ? 0.5 * dt_ : dt_;
          const double* e = decay_.data() + (i - j) * size;
          const Spectrum& s = (*sources)[j];
          for (std::size_t k = 0; k < size; ++k) acc[k] += (w * e[k]) * s[k];
        }
      }
      frames[i] = plan_->inverse(std::move(acc));
    }
    std::vector<Field> out;
    out.reserve(M_ + 1);
    for (auto& f : frames) out.emplace_back(plan_->grid(), std::move(f));
    return SpaceTimeField(times, std::move(out));
  }

 private:
  std::shared_ptr<const SpectralPlan> plan_;
  std::size_t M_;
  double dt_;
  std::vector<double> decay_;
};

// Spectra of grad^gamma(|u|^b u) at each frame, times `scale`.
std::vector<Spectrum> nonlinear_sources(const SpaceTimeField& u, const ProblemSpec& spec, const SpectralPlan& plan,
                                        double scale) {
  std::vector<Spectrum> out(u.frames().size());
  const int dim = spec.grid.dim();
#pragma omp parallel for schedule(dynamic)
  for (std::size_t j = 0; j < out.size(); ++j) {
    Spectrum s = plan.forward(pointwise_power(u.frame(j), spec.b).values());
    for (std::size_t k = 0; k < s.size(); ++k) s[k] *= scale * grad_symbol(plan, dim, spec.gamma, k);
    out[j] = std::move(s);
  }
  return out;
}

std::vector<Spectrum> force_sources(const ProblemSpec& spec, const SpectralPlan& plan) {
  const SpaceTimeField& f = spec.force.values;
  std::vector<Spectrum> out(f.frames().size());
  const int dim = spec.grid.dim();
  const bool potential = spec.force.form == ForceForm::Potential;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t j = 0; j < out.size(); ++j) {
    Spectrum s = plan.forward(f.frame(j).values());
    if (potential) {
      for (std::size_t k = 0; k < s.size(); ++k) s[k] *= grad_symbol(plan, dim, spec.gamma, k);
    }
    out[j] = std::move(s);
  }
  return out;
}

SpaceTimeField time_linear(const Field& a, const Field& b, std::span<const double> times, double T) {
  std::vector<Field> frames;
  for (double t : times) frames.push_back(a + (t / T) * b);
  return SpaceTimeField(std::vector<double>(times.begin(), times.end()), std::move(frames));
}

Field band_limited_field(const Grid& grid, std::mt19937_64& rng) {
  const auto plan = SpectralPlan::for_grid(grid);
  const long n = static_cast<long>(grid.points_per_axis());
  const long limit = std::max<long>(1, n / 8);
  std::normal_distribution<double> normal;
  Spectrum s(grid.size(), 0.0);
  for (std::size_t k = 0; k < s.size(); ++k) {
    const Index idx = grid.unflatten(k);
    bool inside = true;
    for (int d = 0; d < grid.dim(); ++d) {
      long m = static_cast<long>(idx[d]);
      if (m >= n / 2) m -= n;
      inside = inside && std::abs(m) <= limit;
    }
    if (!inside) continue;
    const double re = normal(rng);
    const double im = normal(rng);
    s[k] = {re, im};
  }
  return Field(grid, plan->inverse(std::move(s)));
}

double force_quasi_norm(const Field& sup, const MixedSpaceParams& params, int b, double tol) {
  const double scale = 1.0 / (b + 1.0);
  std::vector<double> p(params.p.values().begin(), params.p.values().end());
  for (double& v : p) v *= scale;
  const std::vector<double> q(sup.size(), params.q_const * scale);
  const double h = sup.grid().cell_volume();
  return std::max(detail::luxemburg(sup.values(), p, h, tol), detail::luxemburg(sup.values(), q, h, tol));
}

}  // namespace

double gamma_bracket(double s, int gamma) { return gamma == 1 ? s : 0.0; }

double critical_exponent(int dim, int b, double alpha, int gamma) {
  return dim * b / (2.0 * alpha - gamma_bracket(1.0, gamma));
}

void validate(const ProblemSpec& spec) {
  require(spec.alpha > 0.5 && spec.alpha <= 1.0, "alpha must lie in (1/2, 1]");
  require(spec.b >= 1, "b must be a positive integer");
  require(spec.gamma == 0 || spec.gamma == 1, "gamma must be 0 or 1");
  require(spec.T > 0.0 && std::isfinite(spec.T), "horizon T must be positive");
  require(spec.M >= 1, "M must be at least 1");
  require(std::isfinite(spec.nonlinear_scale), "nonlinear scale must be finite");
  if (!(spec.u0.grid() == spec.grid)) throw Error(Errc::GridMismatch, "u0 is not on the problem grid");
  require_lattice(spec.force.values, spec, "force");

  const int n = spec.grid.dim();
  const double crit = critical_exponent(n, spec.b, spec.alpha, spec.gamma);
  if (const auto* g = std::get_if<GlobalSpace>(&spec.space)) {
    if (!g->params.p.grid() || !(*g->params.p.grid() == spec.grid)) {
      throw Error(Errc::GridMismatch, "space exponent is not on the problem grid");
    }
    require(std::abs(g->params.q_const - crit) <= 1e-9 * crit,
            "global mode needs q_const = n b / (2 alpha - <1>_gamma) = " + std::to_string(crit));
  } else {
    const auto& l = std::get<LocalSpace>(spec.space);
    require(!l.p_time.grid() && l.p_time.size() == spec.M + 1, "p_time needs one sample per time node");
    require(l.p_time.lower() > spec.b + 1.0, "local mode needs p_time^- > b + 1");
    require(l.q_space > crit, "local mode needs q > n b / (2 alpha - <1>_gamma) = " + std::to_string(crit));
    const double rhs = spec.alpha - gamma_bracket(0.5, spec.gamma);
    for (double p : l.p_time.values()) {
      require(spec.alpha * spec.b / p + n * spec.b / (2.0 * l.q_space) < rhs,
              "local mode needs alpha b / p + n b / (2 q) < alpha - <1/2>_gamma");
    }
    if (!l.qbar.grid() || !(*l.qbar.grid() == spec.grid)) {
      throw Error(Errc::GridMismatch, "qbar is not on the problem grid");
    }
  }
}

Field nonlinearity(const Field& u, int b, int gamma) {
  if (b < 1) throw Error(Errc::InvalidSpec, "b must be a positive integer");
  Field p = pointwise_power(u, b);
  return gamma == 1 ? grad_dot_ones(p) : p;
}

SpaceTimeField effective_force(const ProblemSpec& spec) {
  if (spec.force.form == ForceForm::Direct || spec.gamma == 0) return spec.force.values;
  std::vector<Field> frames;
  for (const Field& f : spec.force.values.frames()) frames.push_back(grad_dot_ones(f));
  const auto t = spec.force.values.times();
  return SpaceTimeField(std::vector<double>(t.begin(), t.end()), std::move(frames));
}

SpaceTimeField duhamel_map(const SpaceTimeField& u, const ProblemSpec& spec) {
  require_lattice(u, spec, "iterate");
  const Propagator prop(spec);
  const SpectralPlan& plan = prop.plan();
  std::vector<Spectrum> sources = force_sources(spec, plan);
  const std::vector<Spectrum> nl = nonlinear_sources(u, spec, plan, spec.nonlinear_scale);
  for (std::size_t j = 0; j < sources.size(); ++j) {
    for (std::size_t k = 0; k < sources[j].size(); ++k) sources[j][k] -= nl[j][k];
  }
  const Spectrum initial = plan.forward(spec.u0.values());
  return prop.run(&initial, &sources);
}

SpaceTimeField linear_part(const ProblemSpec& spec) {
  const Propagator prop(spec);
  const std::vector<Spectrum> sources = force_sources(spec, prop.plan());
  const Spectrum initial = prop.plan().forward(spec.u0.values());
  return prop.run(&initial, &sources);
}

SpaceTimeField nonlinear_term(const SpaceTimeField& u, const ProblemSpec& spec) {
  require_lattice(u, spec, "iterate");
  const Propagator prop(spec);
  const std::vector<Spectrum> nl = nonlinear_sources(u, spec, prop.plan(), spec.nonlinear_scale);
  return prop.run(nullptr, &nl);
}

double active_norm(const SpaceTimeField& u, const ProblemSpec& spec, double tol) {
  if (const auto* g = std::get_if<GlobalSpace>(&spec.space)) return E_norm(u, g->params, tol);
  const auto& l = std::get<LocalSpace>(spec.space);
  return ET_norm(u, l.p_time, l.q_space, tol);
}

PicardResult picard_solve(const ProblemSpec& spec, int K_max, double tol, const std::optional<SpaceTimeField>& start) {
  validate(spec);
  require(K_max >= 1, "K_max must be at least 1");
  require(tol > 0.0, "Picard tolerance must be positive");
  const double norm_tol = std::clamp(1e-3 * tol, 1e-14, kDefaultNormTol);

  auto step = [&](const SpaceTimeField& u) {
    try {
      return duhamel_map(u, spec);
    } catch (const Error& e) {
      if (e.code() == Errc::NonFiniteSample) throw Error(Errc::Diverged, "Picard iterate overflowed");
      throw;
    }
  };

  PicardTrace trace;
  SpaceTimeField u = start ? *start : linear_part(spec);
  if (start) require_lattice(u, spec, "starting iterate");
  double first = 0.0;
  int growing = 0;
  for (int k = 1; k <= K_max; ++k) {
    SpaceTimeField next = step(u);
    PicardStep s;
    s.k = k;
    s.increment = active_norm(next - u, spec, norm_tol);
    s.norm = active_norm(next, spec, norm_tol);
    if (k == 1) {
      first = s.increment;
    } else {
      const double prev = trace.steps.back().increment;
      s.ratio = prev > 0.0 ? s.increment / prev : 0.0;
      growing = s.increment > prev ? growing + 1 : 0;
    }
    trace.steps.push_back(s);
    trace.iterations = k;
    u = std::move(next);
    if (s.increment <= tol) {
      trace.converged = true;
      break;
    }
    if (growing >= 3 && s.increment > 10.0 * first) {
      throw Error(Errc::Diverged, "Picard increments grew for three iterations past 10x the first");
    }
  }
  trace.residual = active_norm(step(u) - u, spec, norm_tol);
  return PicardResult{std::move(u), std::move(trace)};
}

double estimate_contraction(const ProblemSpec& spec, double R, int trials, std::uint64_t seed) {
  require(trials >= 1, "trials must be at least 1");
  require(R > 0.0, "ball radius must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(0.05, 1.0);
  const auto times = uniform_times(spec.T, spec.M);
  auto draw = [&] {
    const Field a = band_limited_field(spec.grid, rng);
    const Field b = band_limited_field(spec.grid, rng);
    SpaceTimeField u = time_linear(a, b, times, spec.T);
    const double norm = active_norm(u, spec);
    return (R * radius(rng) / norm) * u;
  };
  double best = 0.0;
  for (int t = 0; t < trials; ++t) {
    const SpaceTimeField u = draw();
    const SpaceTimeField v = draw();
    const double du = active_norm(u - v, spec);
    if (!(du > 1e-14 * R)) continue;
    const double nu = active_norm(u, spec);
    const double nv = active_norm(v, spec);
    const double num = active_norm(nonlinear_term(u, spec) - nonlinear_term(v, spec), spec);
    best = std::max(best, num / (du * (std::pow(nu, spec.b) + std::pow(nv, spec.b))));
  }
  return best;
}

SmallnessReport check_smallness_global(const ProblemSpec& spec, double tol, int trials, std::uint64_t seed) {
  const auto* g = std::get_if<GlobalSpace>(&spec.space);
  if (!g) throw Error(Errc::WrongMode, "global smallness check needs the global solution space");
  if (spec.force.form != ForceForm::Potential) {
    throw Error(Errc::WrongForceForm, "global smallness check needs the force in potential form");
  }
  validate(spec);
  SmallnessReport r;
  r.B = mixed_norm(spec.u0, g->params, tol) +
        force_quasi_norm(sup_over_time(spec.force.values), g->params, spec.b, tol);
  r.R = 2.0 * r.B;
  r.C = estimate_contraction(spec, r.R > 0.0 ? r.R : 1.0, trials, seed);
  r.product = r.C * std::pow(r.R, spec.b);
  r.pass = r.product <= 0.5;
  return r;
}

LocalExistenceReport check_local_existence(const ProblemSpec& spec, double tol, int trials, std::uint64_t seed) {
  const auto* l = std::get_if<LocalSpace>(&spec.space);
  if (!l) throw Error(Errc::WrongMode, "local existence check needs the local solution space");
  validate(spec);
  if (!check_emb_class(l->qbar, l->q_space, l->emb_threshold)) {
    throw Error(Errc::InvalidSpec, "qbar is not in the embedding class of L^q");
  }
  LocalExistenceReport rep;

  // Data norm over the full horizon and the measured L^q / L^qbar ratio.
  const SpaceTimeField f = effective_force(spec);
  const double dt = spec.T / static_cast<double>(spec.M);
  double force_norm = 0.0;
  double ratio = 0.0;
  auto account = [&](const Field& x) {
    const double nq = luxemburg_norm(x, l->qbar, tol);
    if (nq > 0.0) ratio = std::max(ratio, lebesgue_norm(x, l->q_space) / nq);
    return nq;
  };
  const double u0_norm = account(spec.u0);
  for (std::size_t i = 0; i <= spec.M; ++i) {
    const double w = (i == 0 || i == spec.M) ? 0.5 * dt : dt;
    force_norm += w * account(f.frame(i));
  }
  rep.embedding_constant = std::max(1.0, ratio);
  const double data = u0_norm + force_norm;

  const double p_lo = l->p_time.lower();
  const double p_hi = l->p_time.upper();
  const double C = data > 0.0 ? estimate_contraction(spec, 1.0, trials, seed) : 0.0;
  const double C0 = C / (1.0 + spec.T);

  std::size_t divisor = 1;
  while (true) {
    LocalExistenceScan s;
    s.T = spec.T / static_cast<double>(divisor);
    s.B = rep.embedding_constant * std::max(std::pow(s.T, 1.0 / p_lo), std::pow(s.T, 1.0 / p_hi)) * data;
    s.product = C0 * (1.0 + s.T) * std::pow(2.0 * s.B, spec.b);
    s.pass = s.product <= 0.5;
    rep.scan.push_back(s);
    if (s.pass) {
      rep.T_suggested = s.T;
      rep.smallness = SmallnessReport{s.B, 2.0 * s.B, C0 * (1.0 + s.T), s.product, true};
      return rep;
    }
    if (spec.M % (2 * divisor) != 0) break;
    divisor *= 2;
  }
  throw Error(Errc::NoAdmissibleT, "contraction product exceeds 1/2 at every lattice horizon down to T/" +
                                       std::to_string(divisor));
}

double residual(const SpaceTimeField& u, const ProblemSpec& spec) {
  require_lattice(u, spec, "solution");
  require(spec.M >= 2, "residual needs M >= 2");
  const SpaceTimeField f = effective_force(spec);
  const double dt = spec.T / static_cast<double>(spec.M);
  std::vector<double> per_node(spec.M - 1, 0.0);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 1; i < spec.M; ++i) {
    const Field dudt = (0.5 / dt) * (u.frame(i + 1) - u.frame(i - 1));
    const Field r = dudt + fractional_laplacian(u.frame(i), spec.alpha) +
                    spec.nonlinear_scale * nonlinearity(u.frame(i), spec.b, spec.gamma) - f.frame(i);
    per_node[i - 1] = lebesgue_norm(r, 2.0);
  }
  double worst = 0.0;
  for (double v : per_node) worst = std::max(worst, v);
  return worst;
}

}  // namespace vlp
