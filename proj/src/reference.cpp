#include "vlp/operators.hpp"

#include <cmath>

namespace vlp {

namespace {

long wrap_offset(long delta, long n) {
  delta %= n;
  if (delta < 0) delta += n;
  return delta <= n / 2 ? delta : delta - n;
}

}  // namespace

namespace reference {

double integrate(const Field& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return f.grid().cell_volume() * s;
}

Field sup_over_time(const SpaceTimeField& u) {
  std::vector<double> out(u.grid().size(), 0.0);
  for (const Field& frame : u.frames()) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], std::abs(frame[i]));
  }
  return Field(u.grid(), std::move(out));
}

Field maximal_function(const Field& f) {
  const Grid& g = f.grid();
  const int dim = g.dim();
  const auto n = static_cast<long>(g.points_per_axis());
  const long cap = n / 2 - 1;
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t x = 0; x < g.size(); ++x) {
    const Index ix = g.unflatten(x);
    for (long rho = 1; rho <= n / 2; rho *= 2) {
      double sum = 0.0;
      double count = 0.0;
      std::array<long, kMaxDim> d{0, 0, 0};
      const long r0 = dim > 0 ? cap : 0, r1 = dim > 1 ? cap : 0, r2 = dim > 2 ? cap : 0;
      for (d[0] = -r0; d[0] <= r0; ++d[0]) {
        for (d[1] = -r1; d[1] <= r1; ++d[1]) {
          for (d[2] = -r2; d[2] <= r2; ++d[2]) {
            if (d[0] * d[0] + d[1] * d[1] + d[2] * d[2] > rho * rho) continue;
            Index iy{0, 0, 0};
            for (int a = 0; a < dim; ++a) {
              long v = (static_cast<long>(ix[a]) + d[a]) % n;
              if (v < 0) v += n;
              iy[a] = static_cast<std::size_t>(v);
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

Field riesz_potential(const Field& f, double beta) {
  const Grid& g = f.grid();
  const int dim = g.dim();
  const auto n = static_cast<long>(g.points_per_axis());
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t x = 0; x < g.size(); ++x) {
    const Index ix = g.unflatten(x);
    double acc = 0.0;
    for (std::size_t y = 0; y < g.size(); ++y) {
      const Index iy = g.unflatten(y);
      std::array<long, kMaxDim> delta{0, 0, 0};
      for (int a = 0; a < dim; ++a) delta[a] = wrap_offset(static_cast<long>(ix[a]) - static_cast<long>(iy[a]), n);
      const double k = riesz_lattice_weight(g, beta, delta);
      acc += g.cell_volume() * k * std::abs(f[y]);
    }
    out[x] = acc;
  }
  return Field(g, std::move(out));
}

}  // namespace reference

}  // namespace vlp
