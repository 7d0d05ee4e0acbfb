#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "vlp/grid.hpp"
#include "vlp/varexp.hpp"

namespace vlp {

enum class ForceForm {
  /// f is given directly.
  Direct,
  /// The stored field is a potential F with f = grad^gamma F.
  Potential,
};

struct Force {
  ForceForm form = ForceForm::Direct;
  SpaceTimeField values;
};

/// Global-in-time setting: solutions live in the mixed space measured by
/// sup_t, with q_const fixed at the critical value n b / (2 alpha - <1>_gamma).
struct GlobalSpace {
  MixedSpaceParams params;
};

/// Local-in-time setting: L^{p_time}([0, T], L^q) with data measured in
/// L^{qbar(.)}.
struct LocalSpace {
  VariableExponent p_time;
  double q_space;
  VariableExponent qbar;
  double emb_threshold = 1e3;
};

/// du/dt + (-Delta)^alpha u + grad^gamma(|u|^b u) = f on [0, T] x box,
/// u(0) = u0, solved in mild form on the lattice t_i = i T / M.
struct ProblemSpec {
  double alpha;
  int b;
  int gamma;
  Grid grid;
  Field u0;
  Force force;
  double T;
  std::size_t M;
  std::variant<GlobalSpace, LocalSpace> space;
  /// Multiplies the nonlinear term; 1 for the equation proper.
  double nonlinear_scale = 1.0;
};

/// <s>_gamma: 0 for gamma = 0, s for gamma = 1.
double gamma_bracket(double s, int gamma);

/// n b / (2 alpha - <1>_gamma).
double critical_exponent(int dim, int b, double alpha, int gamma);

/// Throws InvalidSpec / LatticeMismatch / GridMismatch when the spec breaks
/// a parameter range or a mode invariant.
void validate(const ProblemSpec& spec);

/// |u|^b u, followed by (1, ..., 1) . grad when gamma = 1.
Field nonlinearity(const Field& u, int b, int gamma);

/// The force f on the time lattice (grad^gamma applied to potentials).
SpaceTimeField effective_force(const ProblemSpec& spec);

/// Psi(u)(t) = g_t * u0 + int_0^t g_{t-s} * f(s) ds - int_0^t g_{t-s} * grad^gamma(|u|^b u)(s) ds.
/// The time integrals use the composite trapezoid rule on the lattice with
/// exact spectral semigroup factors, so the s = t endpoint is the identity.
SpaceTimeField duhamel_map(const SpaceTimeField& u, const ProblemSpec& spec);

/// Psi(0): data and force terms only.
SpaceTimeField linear_part(const ProblemSpec& spec);

/// int_0^t g_{t-s} * grad^gamma(|u|^b u)(s) ds, same quadrature.
SpaceTimeField nonlinear_term(const SpaceTimeField& u, const ProblemSpec& spec);

/// E_norm in the global setting, ET_norm in the local one.
double active_norm(const SpaceTimeField& u, const ProblemSpec& spec, double tol = kDefaultNormTol);

struct PicardStep {
  int k = 0;
  double norm = 0.0;
  double increment = 0.0;
  /// increment_k / increment_{k-1}; absent for k = 1.
  std::optional<double> ratio;
};

struct PicardTrace {
  std::vector<PicardStep> steps;
  int iterations = 0;
  bool converged = false;
  /// Active norm of duhamel_map(u) - u for the returned u.
  double residual = 0.0;
};

struct PicardResult {
  SpaceTimeField solution;
  PicardTrace trace;
};

/// u_{k+1} = duhamel_map(u_k) from u_0 = Psi(0) (or `start`), until the
/// increment's active norm is <= tol or K_max iterations. Throws Diverged
/// when increments grow three times in a row past 10x the first increment,
/// or when an iterate overflows.
PicardResult picard_solve(const ProblemSpec& spec, int K_max, double tol,
                          const std::optional<SpaceTimeField>& start = std::nullopt);

struct SmallnessReport {
  double B = 0.0;
  double R = 0.0;
  double C = 0.0;
  double product = 0.0;
  bool pass = false;
};

/// Global setting, potential force: B = ||u0|| in the mixed space plus the
/// norm of sup_t |F| with both exponents divided by b + 1 (a quasi-norm when
/// they drop below 1); R = 2B, C from estimate_contraction, pass iff
/// C R^b <= 1/2.
SmallnessReport check_smallness_global(const ProblemSpec& spec, double tol = kDefaultNormTol,
                                       int trials = 64, std::uint64_t seed = 1);

struct LocalExistenceScan {
  double T = 0.0;
  double B = 0.0;
  double product = 0.0;
  bool pass = false;
};

struct LocalExistenceReport {
  double T_suggested = 0.0;
  SmallnessReport smallness;
  /// Empirical constant multiplying max{T^{1/p-}, T^{1/p+}} in B(T).
  double embedding_constant = 1.0;
  /// One entry per halving of T, largest T first.
  std::vector<LocalExistenceScan> scan;
};

/// Local setting: B(T) = C_emb max{T^{1/p-}, T^{1/p+}} (||u0||_{qbar} +
/// ||f||_{L^1_t L^{qbar}_x}), contraction product C0 (1 + T) (2 B(T))^b with
/// C0 = C / (1 + spec.T). T is halved from spec.T while it stays on the time
/// lattice; the first passing T is returned. Throws NoAdmissibleT otherwise.
LocalExistenceReport check_local_existence(const ProblemSpec& spec, double tol = kDefaultNormTol,
                                           int trials = 64, std::uint64_t seed = 1);

/// max over random pairs (u, v) in the ball of radius R of
/// ||N(u) - N(v)|| / (||u - v|| (||u||^b + ||v||^b)), N = nonlinear_term,
/// norms in the active space. Fields are band-limited to the lowest N/4
/// modes per axis and interpolate linearly in time between two random
/// frames. Deterministic given the seed.
double estimate_contraction(const ProblemSpec& spec, double R, int trials, std::uint64_t seed);

/// max over interior nodes of the L^2 norm of
/// D_t u + (-Delta)^alpha u + grad^gamma(|u|^b u) - f, D_t centred.
double residual(const SpaceTimeField& u, const ProblemSpec& spec);

}  // namespace vlp
