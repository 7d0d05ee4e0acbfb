#include "vlp/grid.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "vlp/error.hpp"

namespace vlp {

namespace {

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw Error(Errc::GridMismatch, "fields live on different grids");
}

void require_same_lattice(const SpaceTimeField& a, const SpaceTimeField& b) {
  require_same_grid(a.grid(), b.grid());
  if (a.times().size() != b.times().size() ||
      !std::equal(a.times().begin(), a.times().end(), b.times().begin())) {
    throw Error(Errc::LatticeMismatch, "space-time fields use different time lattices");
  }
}

}  // namespace

Grid::Grid(int dim, double half_length, std::size_t points_per_axis)
    : dim_(dim), half_length_(half_length), points_(points_per_axis) {
  if (dim < 1 || dim > kMaxDim) {
    throw Error(Errc::InvalidGrid, "dimension must be 1, 2 or 3, got " + std::to_string(dim));
  }
  if (!(half_length > 0.0) || !std::isfinite(half_length)) {
    throw Error(Errc::InvalidGrid, "box half-length must be positive and finite");
  }
  if (!is_power_of_two(points_per_axis) || points_per_axis < 2) {
    throw Error(Errc::InvalidGrid,
                "points per axis must be a power of two >= 2, got " + std::to_string(points_per_axis));
  }
  size_ = 1;
  for (int d = 0; d < dim; ++d) {
    if (size_ > std::numeric_limits<std::size_t>::max() / points_) {
      throw Error(Errc::InvalidGrid, "grid point count overflows the index type");
    }
    size_ *= points_;
  }
  spacing_ = 2.0 * half_length_ / static_cast<double>(points_);
  cell_volume_ = std::pow(spacing_, dim_);
}

double Grid::measure() const noexcept { return std::pow(2.0 * half_length_, dim_); }

Index Grid::unflatten(std::size_t flat) const noexcept {
  Index idx{0, 0, 0};
  for (int d = dim_ - 1; d >= 0; --d) {
    idx[d] = flat % points_;
    flat /= points_;
  }
  return idx;
}

std::size_t Grid::flatten(const Index& idx) const noexcept {
  std::size_t flat = 0;
  for (int d = 0; d < dim_; ++d) flat = flat * points_ + idx[d];
  return flat;
}

Point Grid::point(std::size_t flat) const noexcept {
  const Index idx = unflatten(flat);
  Point x{0.0, 0.0, 0.0};
  for (int d = 0; d < dim_; ++d) x[d] = coordinate(idx[d]);
  return x;
}

double Grid::radius(std::size_t flat) const noexcept {
  const Point x = point(flat);
  return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
}

Field::Field(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw Error(Errc::GridMismatch, "expected " + std::to_string(grid_.size()) + " samples, got " +
                                        std::to_string(values_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(Errc::NonFiniteSample, "field contains NaN or Inf");
  }
}

Field Field::zeros(const Grid& grid) { return Field(grid, std::vector<double>(grid.size(), 0.0)); }

Field Field::constant(const Grid& grid, double value) {
  return Field(grid, std::vector<double>(grid.size(), value));
}

Field operator+(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid());
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
  return Field(a.grid(), std::move(out));
}

Field operator-(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid());
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
  return Field(a.grid(), std::move(out));
}

Field operator*(double c, const Field& f) {
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * f[i];
  return Field(f.grid(), std::move(out));
}

Field abs(const Field& f) {
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::abs(f[i]);
  return Field(f.grid(), std::move(out));
}

double max_abs(const Field& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_difference(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

SpaceTimeField::SpaceTimeField(std::vector<double> times, std::vector<Field> frames)
    : times_(std::move(times)), frames_(std::move(frames)) {
  if (frames_.size() < 2 || times_.size() != frames_.size()) {
    throw Error(Errc::LatticeMismatch, "need M >= 1 steps and one frame per time sample");
  }
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) {
      throw Error(Errc::LatticeMismatch, "time samples must be strictly increasing");
    }
  }
  for (const Field& f : frames_) require_same_grid(f.grid(), frames_.front().grid());
}

SpaceTimeField operator-(const SpaceTimeField& a, const SpaceTimeField& b) {
  require_same_lattice(a, b);
  std::vector<Field> frames;
  frames.reserve(a.frames().size());
  for (std::size_t i = 0; i < a.frames().size(); ++i) frames.push_back(a.frame(i) - b.frame(i));
  return SpaceTimeField({a.times().begin(), a.times().end()}, std::move(frames));
}

SpaceTimeField operator*(double c, const SpaceTimeField& u) {
  std::vector<Field> frames;
  frames.reserve(u.frames().size());
  for (const Field& f : u.frames()) frames.push_back(c * f);
  return SpaceTimeField({u.times().begin(), u.times().end()}, std::move(frames));
}

double max_abs(const SpaceTimeField& u) {
  double m = 0.0;
  for (const Field& f : u.frames()) m = std::max(m, max_abs(f));
  return m;
}

double max_abs_difference(const SpaceTimeField& a, const SpaceTimeField& b) {
  require_same_lattice(a, b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.frames().size(); ++i) {
    m = std::max(m, max_abs_difference(a.frame(i), b.frame(i)));
  }
  return m;
}

std::vector<double> uniform_times(double horizon, std::size_t steps) {
  if (!(horizon > 0.0) || steps < 1) {
    throw Error(Errc::LatticeMismatch, "time lattice needs T > 0 and M >= 1");
  }
  std::vector<double> t(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    t[i] = horizon * static_cast<double>(i) / static_cast<double>(steps);
  }
  return t;
}

SpaceTimeField constant_in_time(const Field& f, std::span<const double> times) {
  return SpaceTimeField({times.begin(), times.end()}, std::vector<Field>(times.size(), f));
}

Field sample(const Grid& grid, const PointFunction& phi) {
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = phi(grid.point(i));
    if (!std::isfinite(v)) {
      throw Error(Errc::NonFiniteSample, "sampled function is not finite at grid point " +
                                             std::to_string(i));
    }
    values[i] = v;
  }
  return Field(grid, std::move(values));
}

double deterministic_sum(std::span<const double> values) {
  return blocked_sum(values.size(), [&](std::size_t i) { return values[i]; });
}

double integrate(const Field& f) { return f.grid().cell_volume() * deterministic_sum(f.values()); }

Field sup_over_time(const SpaceTimeField& u) {
  const std::size_t size = u.grid().size();
  std::vector<double> out(size, 0.0);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < size; ++i) {
    double m = 0.0;
    for (const Field& f : u.frames()) m = std::max(m, std::abs(f[i]));
    out[i] = m;
  }
  return Field(u.grid(), std::move(out));
}

}  // namespace vlp
