#pragma once

#include "vlp/grid.hpp"

namespace vlp {

/// Centred dyadic Hardy-Littlewood maximal function.
///
/// At each grid point the result is the largest average of |f| over the
/// discrete balls {y : |y - x| <= r} with r in {h, 2h, 4h, ..., L}. Balls
/// wrap periodically; lattice offsets are limited to |d_j| < N/2 per axis so
/// no point is counted twice. Rows of each ball are summed from periodic
/// prefix sums along the last axis.
Field maximal_function(const Field& f);

/// Riesz potential I_beta f(x) = sum_y h^n K(x - y) |f(y)| with
/// K(z) = |z|^{beta - n} on the nearest periodic image, restricted to
/// |z| <= L. The kernel is averaged over each lattice cell: exactly within
/// kRieszNearCells steps of the origin (self-cell included), by a sub-lattice
/// midpoint rule on cells cut by the sphere |z| = L, and by the midpoint
/// value elsewhere.
/// Requires 0 < beta < n.
Field riesz_potential(const Field& f, double beta);

/// h^{-n} times the integral of |z|^{beta - n} over the cell [-h/2, h/2]^n,
/// i.e. the kernel value used at z = 0.
double riesz_self_cell_weight(int dim, double beta, double spacing);

inline constexpr long kRieszNearCells = 3;
inline constexpr int kRieszCutoffSubcells = 16;

/// h^{-n} times the integral of |z|^{beta - n} 1{|z| <= cutoff} over the
/// cell centred at delta * h (lattice offsets). Equals
/// riesz_self_cell_weight at delta = 0.
double riesz_cell_weight(int dim, double beta, double spacing, double cutoff, const std::array<long, kMaxDim>& delta);

/// riesz_cell_weight with cutoff L for a periodic lattice offset, summed
/// over both images on axes where |delta| = N/2.
double riesz_lattice_weight(const Grid& g, double beta, const std::array<long, kMaxDim>& delta);

/// Riesz transform along `axis` (0-based), symbol -i xi_j / |xi|. The mean
/// and the unpaired Nyquist plane of that axis are annihilated.
Field riesz_transform(const Field& f, int axis);

/// (-Delta)^alpha with symbol |xi|^{2 alpha}, 0 < alpha <= 1.
Field fractional_laplacian(const Field& f, double alpha);

/// (-Delta)^{s/2} with symbol |xi|^s for any s >= 0.
Field fractional_derivative(const Field& f, double s);

/// (1, ..., 1) . grad f by spectral differentiation.
Field grad_dot_ones(const Field& f);

/// Serial reference implementations kept for cross-checking the parallel
/// kernels; straightforward loops with no precomputed tables.
namespace reference {

double integrate(const Field& f);
Field sup_over_time(const SpaceTimeField& u);
Field maximal_function(const Field& f);
Field riesz_potential(const Field& f, double beta);

}  // namespace reference

}  // namespace vlp
