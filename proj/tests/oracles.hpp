// Independent reference computations for the test suites. Nothing here
// calls the library's numerical routines; only Grid / Field containers are
// shared.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "vlp/grid.hpp"

namespace oracle {

using vlp::Field;
using vlp::Grid;
using vlp::Point;

inline double pi() { return std::numbers::pi; }

// Free-space Gaussian heat kernel summed over periodic images |j| <= 3.
inline double gaussian_images(double x, double t, double L) {
  double s = 0.0;
  for (int j = -3; j <= 3; ++j) {
    const double y = x + 2.0 * L * j;
    s += std::exp(-y * y / (4.0 * t)) / std::sqrt(4.0 * pi() * t);
  }
  return s;
}

// Poisson kernel t / (pi (t^2 + x^2)) summed over images |j| <= J, plus
// the asymptotic tail 2 sum_{j > J} t / (pi (2 L j)^2).
inline double poisson_images(double x, double t, double L, int J = 20000) {
  double s = 0.0;
  for (int j = -J; j <= J; ++j) {
    const double y = x + 2.0 * L * j;
    s += t / (pi() * (t * t + y * y));
  }
  const double tail = 2.0 * t / (pi() * 4.0 * L * L) * (1.0 / J - 0.5 / (static_cast<double>(J) * J));
  return s + tail;
}

// Riemann sum h^n sum |f|^p, then the 1/p power.
inline double lp_norm(const Field& f, double p) {
  double s = 0.0;
  for (double v : f.values()) s += std::pow(std::abs(v), p);
  return std::pow(s * f.grid().cell_volume(), 1.0 / p);
}

inline double max_norm(const Field& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

// Modular sum h^n |f / lambda|^{p(x)} evaluated directly.
inline double modular(const Field& f, const std::vector<double>& p, double lambda) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += std::pow(std::abs(f[i]) / lambda, p[i]);
  return s * f.grid().cell_volume();
}

// Luxemburg norm by plain bisection on lambda (not in log space).
inline double luxemburg(const Field& f, const std::vector<double>& p) {
  double lo = 0.0, hi = 1.0;
  while (modular(f, p, hi) > 1.0) hi *= 2.0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (modular(f, p, mid) > 1.0 ? lo : hi) = mid;
  }
  return hi;
}

// Closed forms of the two time integrals via the Beta function:
//   gamma = 1: 2a r^{2a-1-n} B(2a, n+1-2a)
//   gamma = 0: 2a r^{2a-n}   B(4a, n-2a)
inline double time_integral(double a, int n, double r, int gamma) {
  if (gamma == 1) return 2.0 * a * std::pow(r, 2.0 * a - 1.0 - n) * std::beta(2.0 * a, n + 1.0 - 2.0 * a);
  return 2.0 * a * std::pow(r, 2.0 * a - n) * std::beta(4.0 * a, n - 2.0 * a);
}

// Maximal function by enumerating every lattice offset d with |d_j| < N/2
// and |d| <= rho for each dyadic rho.
inline Field maximal(const Field& f) {
  const Grid& g = f.grid();
  const long n = static_cast<long>(g.points_per_axis());
  const int dim = g.dim();
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t x = 0; x < g.size(); ++x) {
    const vlp::Index ix = g.unflatten(x);
    for (long rho = 1; rho <= n / 2; rho *= 2) {
      double sum = 0.0, count = 0.0;
      const long r0 = std::min(rho, n / 2 - 1);
      const long r1 = dim > 1 ? r0 : 0;
      const long r2 = dim > 2 ? r0 : 0;
      for (long a = -r0; a <= r0; ++a) {
        for (long b = -r1; b <= r1; ++b) {
          for (long c = -r2; c <= r2; ++c) {
            if (a * a + b * b + c * c > rho * rho) continue;
            const long d[3] = {a, b, c};
            vlp::Index iy{0, 0, 0};
            for (int k = 0; k < dim; ++k) {
              iy[k] = static_cast<std::size_t>(((static_cast<long>(ix[k]) + d[k]) % n + n) % n);
            }
            sum += std::abs(f[g.flatten(iy)]);
            count += 1.0;
          }
        }
      }
      out[x] = std::max(out[x], sum / count);
    }
  }
  return Field(g, std::move(out));
}

// Riesz potential of |phi| at the grid points of `coarse`, over the ball
// |z| <= L. The singularity is subtracted: |phi(x)| times the exact ball
// integral of |z|^{beta-n}, plus a midpoint rule for the bounded remainder
// K(z) (|phi(x - z)| - |phi(x)|) on a lattice `refine` times finer.
inline Field riesz_refined(const Grid& coarse, const std::function<double(const Point&)>& phi, double beta,
                           int refine = 4) {
  const int dim = coarse.dim();
  const double L = coarse.half_length();
  const std::size_t nf = coarse.points_per_axis() * static_cast<std::size_t>(refine);
  const double hf = 2.0 * L / static_cast<double>(nf);
  const double cell = std::pow(hf, dim);
  const double ball = (dim == 1 ? 2.0 : 2.0 * pi()) * std::pow(L, beta) / beta;
  std::vector<double> out(coarse.size(), 0.0);
  for (std::size_t x = 0; x < coarse.size(); ++x) {
    const Point px = coarse.point(x);
    const double centre = std::abs(phi(px));
    double acc = centre * ball;
    const std::size_t total = dim == 1 ? nf : nf * nf;
    for (std::size_t k = 0; k < total; ++k) {
      const long i0 = static_cast<long>(dim == 1 ? k : k / nf);
      const long i1 = static_cast<long>(dim == 1 ? 0 : k % nf);
      // Offsets z on the fine lattice, centred on x: z = (i - nf/2) hf.
      const double z0 = (i0 - static_cast<long>(nf / 2)) * hf;
      const double z1 = dim == 1 ? 0.0 : (i1 - static_cast<long>(nf / 2)) * hf;
      const double r = std::sqrt(z0 * z0 + z1 * z1);
      if (r == 0.0 || r > L) continue;
      const Point py{px[0] - z0, px[1] - z1, 0.0};
      acc += cell * std::pow(r, beta - dim) * (std::abs(phi(py)) - centre);
    }
    out[x] = acc;
  }
  return Field(coarse, std::move(out));
}

// Smooth periodic test function: a few cosine modes with seeded phases.
inline std::function<double(const Point&)> smooth_function(int dim, double L, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  struct Mode {
    int k0, k1;
    double a, phi;
  };
  std::vector<Mode> modes;
  for (int m = 0; m < 4; ++m) {
    modes.push_back({static_cast<int>(u(rng) * 4), dim > 1 ? static_cast<int>(u(rng) * 4) : 0, u(rng) - 0.5,
                     2.0 * pi() * u(rng)});
  }
  return [=](const Point& x) {
    double v = 1.0;
    for (const auto& m : modes) v += m.a * std::cos(pi() / L * (m.k0 * x[0] + m.k1 * x[1]) + m.phi);
    return v;
  };
}

}  // namespace oracle
