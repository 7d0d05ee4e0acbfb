#include "vlp/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

namespace vlp {

namespace {

// FFTW's planner is not thread-safe; execution with the new-array
// interface is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

struct SpectralPlan::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

SpectralPlan::SpectralPlan(const Grid& grid) : grid_(grid), plans_(std::make_unique<Plans>()) {
  const std::size_t size = grid_.size();
  const std::size_t n_axis = grid_.points_per_axis();
  const double dk = std::numbers::pi / grid_.half_length();
  for (int d = 0; d < grid_.dim(); ++d) xi_[d].assign(size, 0.0);
  xi_norm_.assign(size, 0.0);
  nyquist_.assign(size, 0);
  centring_.assign(size, 1.0);
  for (std::size_t flat = 0; flat < size; ++flat) {
    const Index idx = grid_.unflatten(flat);
    double sq = 0.0;
    long parity = 0;
    for (int d = 0; d < grid_.dim(); ++d) {
      const long m = idx[d] < n_axis / 2 ? static_cast<long>(idx[d])
                                         : static_cast<long>(idx[d]) - static_cast<long>(n_axis);
      const double k = dk * static_cast<double>(m);
      xi_[d][flat] = k;
      sq += k * k;
      parity += m;
      if (idx[d] == n_axis / 2) nyquist_[flat] |= static_cast<std::uint8_t>(1u << d);
    }
    xi_norm_[flat] = std::sqrt(sq);
    centring_[flat] = (parity % 2 == 0) ? 1.0 : -1.0;
  }

  std::array<int, kMaxDim> dims{};
  for (int d = 0; d < grid_.dim(); ++d) dims[d] = static_cast<int>(n_axis);
  Spectrum in(size), out(size);
  std::lock_guard lock(planner_mutex());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  plans_->forward = fftw_plan_dft(grid_.dim(), dims.data(), as_fftw(in.data()), as_fftw(out.data()),
                                  FFTW_FORWARD, flags);
  plans_->backward = fftw_plan_dft(grid_.dim(), dims.data(), as_fftw(in.data()), as_fftw(out.data()),
                                   FFTW_BACKWARD, flags);
}

SpectralPlan::~SpectralPlan() {
  std::lock_guard lock(planner_mutex());
  if (plans_->forward) fftw_destroy_plan(plans_->forward);
  if (plans_->backward) fftw_destroy_plan(plans_->backward);
}

std::shared_ptr<const SpectralPlan> SpectralPlan::for_grid(const Grid& grid) {
  using Key = std::tuple<int, double, std::size_t>;
  static std::mutex cache_mutex;
  static std::map<Key, std::shared_ptr<const SpectralPlan>> cache;
  const Key key{grid.dim(), grid.half_length(), grid.points_per_axis()};
  std::lock_guard lock(cache_mutex);
  auto& slot = cache[key];
  if (!slot) slot = std::make_shared<const SpectralPlan>(grid);
  return slot;
}

Spectrum SpectralPlan::forward(std::span<const double> values) const {
  Spectrum in(values.begin(), values.end());
  Spectrum out(in.size());
  fftw_execute_dft(plans_->forward, as_fftw(in.data()), as_fftw(out.data()));
  return out;
}

std::vector<double> SpectralPlan::inverse(Spectrum spectrum, double* max_imag) const {
  Spectrum out(spectrum.size());
  fftw_execute_dft(plans_->backward, as_fftw(spectrum.data()), as_fftw(out.data()));
  const double scale = 1.0 / static_cast<double>(out.size());
  std::vector<double> real(out.size());
  double imag = 0.0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    real[k] = out[k].real() * scale;
    imag = std::max(imag, std::abs(out[k].imag() * scale));
  }
  if (max_imag) *max_imag = imag;
  return real;
}

}  // namespace vlp
