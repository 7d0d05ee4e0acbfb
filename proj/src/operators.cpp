#include "vlp/operators.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <complex>
#include <string>

#include "vlp/error.hpp"
#include "vlp/spectral.hpp"

namespace vlp {

namespace {

using boost::math::quadrature::gauss;

long isqrt(long v) {
  if (v < 0) return -1;
  auto r = static_cast<long>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

// One ball radius, as a list of rows along the last axis.
struct BallRows {
  std::vector<std::array<long, kMaxDim>> lead;  // offsets on the leading n-1 axes
  std::vector<long> half_width;
  double count = 0.0;
};

BallRows ball_rows(int dim, long half_n, long rho) {
  BallRows rows;
  const long cap = half_n - 1;
  const long reach = std::min(rho, cap);
  std::array<long, kMaxDim> d{0, 0, 0};
  auto emit = [&](long sq) {
    const long w = std::min(isqrt(rho * rho - sq), cap);
    if (w < 0) return;
    rows.lead.push_back(d);
    rows.half_width.push_back(w);
    rows.count += static_cast<double>(2 * w + 1);
  };
  if (dim == 1) {
    emit(0);
  } else if (dim == 2) {
    for (d[0] = -reach; d[0] <= reach; ++d[0]) emit(d[0] * d[0]);
  } else {
    for (d[0] = -reach; d[0] <= reach; ++d[0]) {
      for (d[1] = -reach; d[1] <= reach; ++d[1]) emit(d[0] * d[0] + d[1] * d[1]);
    }
  }
  return rows;
}

// Cell integral of |z|^{beta-n} over [-1/2, 1/2]^n, split into the 2n
// pyramids with apex at 0 and integrated radially in closed form.
double unit_cell_integral(int dim, double beta) {
  const double radial = [&] {
    auto face = [&](double sq) { return std::pow(0.25 + sq, 0.5 * (beta - dim)); };
    if (dim == 1) return face(0.0);
    if (dim == 2) return gauss<double, 30>::integrate([&](double a) { return face(a * a); }, -0.5, 0.5);
    return gauss<double, 30>::integrate(
        [&](double a) {
          return gauss<double, 30>::integrate([&](double b) { return face(a * a + b * b); }, -0.5, 0.5);
        },
        -0.5, 0.5);
  }();
  return 2.0 * dim * 0.5 / beta * radial;
}

void check_beta(int dim, double beta) {
  if (!(beta > 0.0 && beta < dim)) {
    throw Error(Errc::BetaOutOfRange, "Riesz potential needs 0 < beta < n, got beta=" + std::to_string(beta));
  }
}

// Integral of |u|^{beta-n} over the unit cell centred at `delta` (delta != 0).
double unit_cell_integral_at(int dim, double beta, const std::array<long, kMaxDim>& delta) {
  if (dim == 1) {
    const double j = static_cast<double>(std::abs(delta[0]));
    return (std::pow(j + 0.5, beta) - std::pow(j - 0.5, beta)) / beta;
  }
  auto power = [&](double sq) { return std::pow(sq, 0.5 * (beta - dim)); };
  auto axis = [&](int d) { return std::pair{delta[d] - 0.5, delta[d] + 0.5}; };
  const auto [a0, a1] = axis(0);
  const auto [b0, b1] = axis(1);
  if (dim == 2) {
    return gauss<double, 30>::integrate(
        [&](double a) { return gauss<double, 30>::integrate([&](double b) { return power(a * a + b * b); }, b0, b1); },
        a0, a1);
  }
  const auto [c0, c1] = axis(2);
  return gauss<double, 20>::integrate(
      [&](double a) {
        return gauss<double, 20>::integrate(
            [&](double b) {
              return gauss<double, 20>::integrate([&](double c) { return power(a * a + b * b + c * c); }, c0, c1);
            },
            b0, b1);
      },
      a0, a1);
}

// Nearest-image offset in lattice units for a periodic index difference.
long nearest_image(long delta, long n) {
  delta %= n;
  if (delta < 0) delta += n;
  return delta <= n / 2 ? delta : delta - n;
}

}  // namespace

Field maximal_function(const Field& f) {
  const Grid& g = f.grid();
  const int dim = g.dim();
  const auto n = static_cast<long>(g.points_per_axis());
  const long half_n = n / 2;
  const std::size_t rows_total = g.size() / static_cast<std::size_t>(n);

  // prefix[row * (3n+1) + k] = sum_{i<k} |f(row, i mod n)|
  const std::size_t stride = static_cast<std::size_t>(3 * n + 1);
  std::vector<double> prefix(rows_total * stride, 0.0);
#pragma omp parallel for schedule(static)
  for (std::size_t r = 0; r < rows_total; ++r) {
    double acc = 0.0;
    double* p = prefix.data() + r * stride;
    const double* row = f.values().data() + r * static_cast<std::size_t>(n);
    p[0] = 0.0;
    for (long k = 0; k < 3 * n; ++k) {
      acc += std::abs(row[k % n]);
      p[k + 1] = acc;
    }
  }

  std::vector<BallRows> balls;
  for (long rho = 1; rho <= half_n; rho *= 2) balls.push_back(ball_rows(dim, half_n, rho));

  std::vector<double> out(g.size(), 0.0);
#pragma omp parallel for schedule(static)
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    const Index idx = g.unflatten(flat);
    const long c = static_cast<long>(idx[dim - 1]);
    double best = 0.0;
    for (const BallRows& ball : balls) {
      double s = 0.0;
      for (std::size_t k = 0; k < ball.lead.size(); ++k) {
        std::size_t row = 0;
        for (int d = 0; d + 1 < dim; ++d) {
          long i = (static_cast<long>(idx[d]) + ball.lead[k][d]) % n;
          if (i < 0) i += n;
          row = row * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
        }
        const double* p = prefix.data() + row * stride;
        const long w = ball.half_width[k];
        s += p[c + w + n + 1] - p[c - w + n];
      }
      best = std::max(best, s / ball.count);
    }
    out[flat] = best;
  }
  return Field(g, std::move(out));
}

double riesz_self_cell_weight(int dim, double beta, double spacing) {
  check_beta(dim, beta);
  return unit_cell_integral(dim, beta) * std::pow(spacing, beta - dim);
}

double riesz_cell_weight(int dim, double beta, double spacing, double cutoff,
                         const std::array<long, kMaxDim>& delta) {
  check_beta(dim, beta);
  long reach = 0;
  double sq = 0.0;
  for (int d = 0; d < dim; ++d) {
    reach = std::max(reach, std::abs(delta[d]));
    sq += static_cast<double>(delta[d] * delta[d]);
  }
  const double scale = std::pow(spacing, beta - dim);
  const double rc = cutoff / spacing;
  const double half_diag = 0.5 * std::sqrt(static_cast<double>(dim));
  if (std::sqrt(sq) - half_diag >= rc) return 0.0;
  if (std::sqrt(sq) + half_diag > rc && reach > 0) {
    // Cell straddles the cutoff sphere: midpoint rule on a sub-lattice.
    constexpr int m = kRieszCutoffSubcells;
    double acc = 0.0;
    std::array<int, kMaxDim> k{0, 0, 0};
    const int total = dim == 1 ? m : dim == 2 ? m * m : m * m * m;
    for (int s = 0; s < total; ++s) {
      int rest = s;
      double u2 = 0.0;
      for (int d = 0; d < dim; ++d) {
        k[d] = rest % m;
        rest /= m;
        const double u = static_cast<double>(delta[d]) - 0.5 + (k[d] + 0.5) / m;
        u2 += u * u;
      }
      if (u2 <= rc * rc) acc += std::pow(u2, 0.5 * (beta - dim));
    }
    return acc / total * scale;
  }
  if (reach == 0) return unit_cell_integral(dim, beta) * scale;
  if (reach > kRieszNearCells) return std::pow(sq, 0.5 * (beta - dim)) * scale;
  return unit_cell_integral_at(dim, beta, delta) * scale;
}

double riesz_lattice_weight(const Grid& g, double beta, const std::array<long, kMaxDim>& delta) {
  const int dim = g.dim();
  const auto half = static_cast<long>(g.points_per_axis() / 2);
  // An offset of N/2 along an axis is shared by the images +L and -L.
  double w = 0.0;
  for (int mask = 0; mask < (1 << dim); ++mask) {
    std::array<long, kMaxDim> image = delta;
    bool valid = true;
    for (int d = 0; d < dim; ++d) {
      if (!(mask >> d & 1)) continue;
      if (std::abs(delta[d]) != half) valid = false;
      image[d] = -delta[d];
    }
    if (valid) w += riesz_cell_weight(dim, beta, g.spacing(), g.half_length(), image);
  }
  return w;
}

Field riesz_potential(const Field& f, double beta) {
  const Grid& g = f.grid();
  const int dim = g.dim();
  check_beta(dim, beta);
  const auto n = static_cast<long>(g.points_per_axis());

  // kernel[delta] = h^n times the cell average of K around delta.
  std::vector<double> kernel(g.size(), 0.0);
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    const Index idx = g.unflatten(flat);
    std::array<long, kMaxDim> delta{0, 0, 0};
    for (int d = 0; d < dim; ++d) delta[d] = nearest_image(static_cast<long>(idx[d]), n);
    kernel[flat] = g.cell_volume() * riesz_lattice_weight(g, beta, delta);
  }

  std::vector<double> absf(f.size());
  for (std::size_t i = 0; i < absf.size(); ++i) absf[i] = std::abs(f[i]);

  std::vector<double> out(g.size(), 0.0);
#pragma omp parallel for schedule(static)
  for (std::size_t x = 0; x < g.size(); ++x) {
    const Index ix = g.unflatten(x);
    double acc = 0.0;
    for (std::size_t y = 0; y < g.size(); ++y) {
      if (absf[y] == 0.0) continue;
      const Index iy = g.unflatten(y);
      Index delta{0, 0, 0};
      for (int d = 0; d < dim; ++d) delta[d] = (ix[d] + static_cast<std::size_t>(n) - iy[d]) % static_cast<std::size_t>(n);
      acc += kernel[g.flatten(delta)] * absf[y];
    }
    out[x] = acc;
  }
  return Field(g, std::move(out));
}

Field riesz_transform(const Field& f, int axis) {
  if (axis < 0 || axis >= f.grid().dim()) {
    throw Error(Errc::AxisOutOfRange, "Riesz transform axis " + std::to_string(axis) + " outside the grid");
  }
  const auto plan = SpectralPlan::for_grid(f.grid());
  return plan->apply(f, [&](std::size_t k) -> std::complex<double> {
    if (k == 0 || plan->nyquist(axis, k)) return 0.0;
    return {0.0, -plan->xi(axis, k) / plan->xi_norm(k)};
  });
}

Field fractional_derivative(const Field& f, double s) {
  const auto plan = SpectralPlan::for_grid(f.grid());
  if (s == 0.0) return f;
  return plan->apply(f, [&](std::size_t k) -> std::complex<double> {
    return k == 0 ? 0.0 : std::pow(plan->xi_norm(k), s);
  });
}

Field fractional_laplacian(const Field& f, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error(Errc::AlphaOutOfRange, "fractional Laplacian needs 0 < alpha <= 1");
  }
  return fractional_derivative(f, 2.0 * alpha);
}

Field grad_dot_ones(const Field& f) {
  const auto plan = SpectralPlan::for_grid(f.grid());
  const int dim = f.grid().dim();
  return plan->apply(f, [&](std::size_t k) -> std::complex<double> {
    double s = 0.0;
    for (int d = 0; d < dim; ++d) {
      if (!plan->nyquist(d, k)) s += plan->xi(d, k);
    }
    return {0.0, s};
  });
}

}  // namespace vlp
