#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace vlp {

inline constexpr int kMaxDim = 3;

/// A point of R^n; coordinates past dim() are zero.
using Point = std::array<double, kMaxDim>;
using Index = std::array<std::size_t, kMaxDim>;

/// Uniform periodic sampling of the box [-L, L)^n with N points per axis.
///
/// N is a power of two, so the spacing h = 2L/N is an exact power-of-two
/// scaling of L and h * N == 2L holds bit-for-bit. Points are stored
/// row-major with axis 0 slowest.
class Grid {
 public:
  Grid(int dim, double half_length, std::size_t points_per_axis);

  int dim() const noexcept { return dim_; }
  double half_length() const noexcept { return half_length_; }
  std::size_t points_per_axis() const noexcept { return points_; }
  double spacing() const noexcept { return spacing_; }
  std::size_t size() const noexcept { return size_; }
  double cell_volume() const noexcept { return cell_volume_; }
  /// Lebesgue measure of the box, (2L)^n.
  double measure() const noexcept;

  double coordinate(std::size_t k) const noexcept {
    return -half_length_ + static_cast<double>(k) * spacing_;
  }
  Index unflatten(std::size_t flat) const noexcept;
  std::size_t flatten(const Index& idx) const noexcept;
  Point point(std::size_t flat) const noexcept;
  double radius(std::size_t flat) const noexcept;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int dim_;
  double half_length_;
  std::size_t points_;
  double spacing_;
  std::size_t size_;
  double cell_volume_;
};

/// Real samples of a function on a Grid. Entries are always finite.
class Field {
 public:
  Field(Grid grid, std::vector<double> values);

  static Field zeros(const Grid& grid);
  static Field constant(const Grid& grid, double value);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

  /// Hands the sample buffer over; the Field is left empty.
  std::vector<double> release() && { return std::move(values_); }

 private:
  Grid grid_;
  std::vector<double> values_;
};

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double c, const Field& f);
Field abs(const Field& f);
double max_abs(const Field& f);
double max_abs_difference(const Field& a, const Field& b);

/// Samples of u(t, .) at strictly increasing instants 0 = t_0 < ... < t_M.
class SpaceTimeField {
 public:
  SpaceTimeField(std::vector<double> times, std::vector<Field> frames);

  const Grid& grid() const noexcept { return frames_.front().grid(); }
  std::span<const double> times() const noexcept { return times_; }
  const std::vector<Field>& frames() const noexcept { return frames_; }
  const Field& frame(std::size_t i) const { return frames_[i]; }
  /// Number of time steps M (frames - 1).
  std::size_t steps() const noexcept { return frames_.size() - 1; }

 private:
  std::vector<double> times_;
  std::vector<Field> frames_;
};

SpaceTimeField operator-(const SpaceTimeField& a, const SpaceTimeField& b);
SpaceTimeField operator*(double c, const SpaceTimeField& u);
double max_abs(const SpaceTimeField& u);
double max_abs_difference(const SpaceTimeField& a, const SpaceTimeField& b);

/// Uniform lattice t_i = i T / M, i = 0..M.
std::vector<double> uniform_times(double horizon, std::size_t steps);
SpaceTimeField constant_in_time(const Field& f, std::span<const double> times);

using PointFunction = std::function<double(const Point&)>;

/// Evaluates phi at every grid coordinate; throws NonFiniteSample on NaN/Inf.
Field sample(const Grid& grid, const PointFunction& phi);

/// Periodic rectangle rule h^n * sum(values).
double integrate(const Field& f);

/// Pointwise max over frames of |u(t_i, x)|.
Field sup_over_time(const SpaceTimeField& u);

/// Sum with a fixed blocking (kSumBlock consecutive entries per partial,
/// partials added left to right). The result does not depend on the number
/// of OpenMP threads.
inline constexpr std::size_t kSumBlock = 4096;
double deterministic_sum(std::span<const double> values);

/// Same blocking as deterministic_sum, applied to term(i) for i in [0, count).
template <class Term>
double blocked_sum(std::size_t count, Term&& term) {
  const std::size_t blocks = (count + kSumBlock - 1) / kSumBlock;
  std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t lo = b * kSumBlock;
    const std::size_t hi = std::min(count, lo + kSumBlock);
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += term(i);
    partial[b] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace vlp
