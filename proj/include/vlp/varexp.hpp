#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "vlp/grid.hpp"

namespace vlp {

/// Sampled exponent function p(.) with 1 < p^- <= p^+ < infinity.
///
/// Spatial exponents are sampled on a Grid, one value per grid point.
/// Temporal exponents (for L^{p(.)}([0, T], X)) carry one value per time
/// sample and no grid.
class VariableExponent {
 public:
  explicit VariableExponent(const Field& samples, std::optional<double> p_inf = std::nullopt);
  explicit VariableExponent(std::vector<double> samples, std::optional<double> p_inf = std::nullopt);

  static VariableExponent constant(const Grid& grid, double p);
  static VariableExponent constant_in_time(std::size_t count, double p);

  std::span<const double> values() const noexcept { return values_; }
  const std::optional<Grid>& grid() const noexcept { return grid_; }
  std::optional<double> p_inf() const noexcept { return p_inf_; }
  std::size_t size() const noexcept { return values_.size(); }
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }

 private:
  void validate();

  std::optional<Grid> grid_;
  std::vector<double> values_;
  std::optional<double> p_inf_;
  double lower_ = 0.0;
  double upper_ = 0.0;
};

/// (p^-, p^+) over the samples.
std::pair<double, double> limit_exponents(const VariableExponent& p);

struct LogHolderReport {
  double local_constant = 0.0;
  double decay_constant = 0.0;
  bool pass = false;
  /// True when the pairwise scan ran on a strided subset of the points.
  bool strided = false;
};

/// Smallest C with |1/p(x) - 1/p(y)| <= C / log(e + 1/|x - y|) over sampled
/// pairs. Exhaustive up to kLogHolderScanPoints points, strided above.
inline constexpr std::size_t kLogHolderScanPoints = 4096;
double local_log_holder_constant(const VariableExponent& p, bool* strided = nullptr);
/// Smallest C with |1/p(x) - 1/p_inf| <= C / log(e + |x|); throws
/// MissingPInf when p has no declared limit.
double decay_log_holder_constant(const VariableExponent& p);
LogHolderReport check_log_holder(const VariableExponent& p, double budget);

/// Finite-box proxy for membership in the embedding class of L^q: q must not
/// exceed qbar^-, and the shell minima of q qbar / (qbar - q) taken along
/// radial shells of width h must be non-decreasing out to the box boundary
/// and end above `threshold`. Points with qbar == q count as +infinity.
bool check_emb_class(const VariableExponent& qbar, double q, double threshold = 1e3);

struct MixedSpaceParams {
  VariableExponent p;
  double q_const;
};

/// Modular m_p(f) = integral of |f(x)|^{p(x)}.
double modular(const Field& f, const VariableExponent& p);

/// Luxemburg norm inf{lambda > 0 : m_p(f / lambda) <= 1}, located by
/// geometric bisection down to relative bracket width `tol`.
inline constexpr double kDefaultNormTol = 1e-10;
double luxemburg_norm(const Field& f, const VariableExponent& p, double tol = kDefaultNormTol);

/// Classical (integral |f|^q)^{1/q}; q = +infinity gives the max norm.
double lebesgue_norm(const Field& f, double q);

/// max{ ||f||_{p(.)}, ||f||_{q_const} }.
double mixed_norm(const Field& f, const MixedSpaceParams& params, double tol = kDefaultNormTol);

/// Pointwise p / (p - 1).
VariableExponent conjugate_exponent(const VariableExponent& p);

/// ||f g||_{p1} / (||f||_{p2} ||g||_{p3}) for 1/p1 = 1/p2 + 1/p3; 0/0 is 0.
double holder_defect(const Field& f, const Field& g, const VariableExponent& p1,
                     const VariableExponent& p2, const VariableExponent& p3,
                     double tol = kDefaultNormTol);

/// Norm of the global solution space: mixed norm of sup_t |u(t, .)|.
double E_norm(const SpaceTimeField& u, const MixedSpaceParams& params, double tol = kDefaultNormTol);

/// Norm of L^{p(.)}([0, T], L^q): Luxemburg norm of t -> ||u(t, .)||_q with
/// trapezoid weights on the time lattice.
double ET_norm(const SpaceTimeField& u, const VariableExponent& p_time, double q_space,
               double tol = kDefaultNormTol);

struct DualityDefect {
  /// max over test functions g with ||g||_{p'} = 1 of int |f||g| / ||f||_p.
  double upper = 0.0;
  /// ||f||_p / max int |f||g|.
  double lower = 0.0;
};

/// Both sides of the norm-conjugate formula, probed with `trials` random
/// smooth test functions plus the extremal g = |f/||f|||^{p-1}.
DualityDefect norm_duality_defect(const Field& f, const VariableExponent& p, int trials,
                                  std::uint64_t seed);

/// Sum of random cosine modes with wavenumbers below max_mode * pi / L and
/// unit-order amplitude; used for randomized checks.
Field random_smooth_field(const Grid& grid, std::uint64_t seed, int modes = 6, int max_mode = 4);

namespace detail {

/// Generic Luxemburg solve for weighted samples: modular(lambda) =
/// sum_i w_i |v_i / lambda|^{e_i}. Exponents only need to be positive.
double luxemburg(std::span<const double> values, std::span<const double> exponents,
                 std::span<const double> weights, double tol);
/// Uniform-weight variant.
double luxemburg(std::span<const double> values, std::span<const double> exponents, double weight,
                 double tol);

}  // namespace detail

}  // namespace vlp
