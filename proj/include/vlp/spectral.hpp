#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "vlp/grid.hpp"

namespace vlp {

using Spectrum = std::vector<std::complex<double>>;

/// FFT workspace for one Grid.
///
/// Wavenumbers follow the lattice xi in (pi/L) * {-N/2, ..., N/2-1} per
/// axis; the flat spectral index uses the same row-major order as fields.
/// forward() is unnormalized, inverse() divides by N^n, so a round trip is
/// the identity up to rounding. Plans are created once per grid behind a
/// mutex and executed with the new-array interface, which is safe for
/// concurrent callers.
class SpectralPlan {
 public:
  explicit SpectralPlan(const Grid& grid);
  ~SpectralPlan();
  SpectralPlan(const SpectralPlan&) = delete;
  SpectralPlan& operator=(const SpectralPlan&) = delete;

  /// Shared plan for this grid, created on first use.
  static std::shared_ptr<const SpectralPlan> for_grid(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return grid_.size(); }

  Spectrum forward(std::span<const double> values) const;
  /// Normalized inverse transform. The largest imaginary part of the result
  /// is stored in *max_imag when requested.
  std::vector<double> inverse(Spectrum spectrum, double* max_imag = nullptr) const;

  /// Signed wavenumber xi_j of spectral index `flat` along `axis`.
  double xi(int axis, std::size_t flat) const noexcept { return xi_[axis][flat]; }
  /// |xi| at spectral index `flat`.
  double xi_norm(std::size_t flat) const noexcept { return xi_norm_[flat]; }
  /// True when `flat` sits on the unpaired -N/2 mode of `axis`; odd symbols
  /// are zeroed there so that real input maps to real output.
  bool nyquist(int axis, std::size_t flat) const noexcept { return (nyquist_[flat] >> axis) & 1u; }
  /// (-1)^(m_1 + ... + m_n); shifts a spectrum so the inverse transform is
  /// centred at x = 0 in grid coordinates.
  double centring_sign(std::size_t flat) const noexcept { return centring_[flat]; }

  /// Applies a spectral multiplier symbol(flat) to a real field and returns
  /// the real part of the result.
  template <class Symbol>
  Field apply(const Field& f, Symbol&& symbol) const {
    Spectrum s = forward(f.values());
    for (std::size_t k = 0; k < s.size(); ++k) s[k] *= symbol(k);
    return Field(grid_, inverse(std::move(s)));
  }

 private:
  struct Plans;

  Grid grid_;
  std::array<std::vector<double>, kMaxDim> xi_;
  std::vector<double> xi_norm_;
  std::vector<std::uint8_t> nyquist_;
  std::vector<double> centring_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace vlp
