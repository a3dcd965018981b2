#include "amshe/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <numbers>

#include "amshe/errors.hpp"

namespace amshe {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct SpectralGrid::Plans {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
    fftw_free(real);
    fftw_free(spec);
  }
};

SpectralGrid::SpectralGrid(const DomainSpec& domain) : domain_(domain), plans_(std::make_unique<Plans>()) {
  const int d = domain.dimension();
  const auto n = domain.points_per_axis();
  const std::size_t last = n / 2 + 1;
  spectrum_size_ = last;
  for (int a = 0; a + 1 < d; ++a) spectrum_size_ *= n;

  std::array<int, 3> dims{};
  for (int a = 0; a < d; ++a) dims[static_cast<std::size_t>(a)] = static_cast<int>(n);

  {
    std::lock_guard lock(planner_mutex());
    plans_->real = fftw_alloc_real(domain.cell_count());
    plans_->spec = fftw_alloc_complex(spectrum_size_);
    if (!plans_->real || !plans_->spec) fail(ErrorCode::DomainTooLarge, "FFT buffer allocation failed");
    plans_->r2c = fftw_plan_dft_r2c(d, dims.data(), plans_->real, plans_->spec, FFTW_ESTIMATE);
    plans_->c2r = fftw_plan_dft_c2r(d, dims.data(), plans_->spec, plans_->real, FFTW_ESTIMATE);
  }
  std::fill_n(plans_->real, domain.cell_count(), 0.0);

  // Wavenumbers of the half-spectrum layout: leading axes full length, last axis n/2+1.
  k2_.resize(spectrum_size_);
  weight_.resize(spectrum_size_);
  partner_.assign(spectrum_size_, kNoPartner);
  const double k0 = 2.0 * std::numbers::pi / domain.side_length();
  const auto signed_mode = [n](std::size_t m) {
    return m <= n / 2 ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(n);
  };
  for (std::size_t s = 0; s < spectrum_size_; ++s) {
    std::size_t rest = s;
    const std::size_t m_last = rest % last;
    rest /= last;
    double k2 = std::pow(k0 * signed_mode(m_last), 2);
    std::size_t partner = 0;
    std::size_t stride = last;
    for (int a = 0; a + 1 < d; ++a) {
      const std::size_t m = rest % n;
      rest /= n;
      k2 += std::pow(k0 * signed_mode(m), 2);
      partner += ((n - m) % n) * stride;
      stride *= n;
    }
    k2_[s] = k2;
    const bool self_conjugate = (m_last == 0) || (n % 2 == 0 && m_last == n / 2);
    weight_[s] = self_conjugate ? 1.0 : 2.0;
    if (self_conjugate) partner_[s] = partner + m_last;
  }
}

SpectralGrid::~SpectralGrid() = default;
SpectralGrid::SpectralGrid(SpectralGrid&&) noexcept = default;
SpectralGrid& SpectralGrid::operator=(SpectralGrid&&) noexcept = default;

std::span<double> SpectralGrid::real() noexcept { return {plans_->real, domain_.cell_count()}; }

std::span<Complex> SpectralGrid::spectrum() noexcept {
  return {reinterpret_cast<Complex*>(plans_->spec), spectrum_size_};
}

void SpectralGrid::forward() { fftw_execute(plans_->r2c); }

void SpectralGrid::backward() {
  fftw_execute(plans_->c2r);
  const double scale = 1.0 / static_cast<double>(domain_.cell_count());
  for (double& v : real()) v *= scale;
}

const std::vector<double>& SpectralGrid::heat_multiplier(double dt) {
  if (dt != heat_dt_) {
    heat_.resize(spectrum_size_);
    for (std::size_t s = 0; s < spectrum_size_; ++s) heat_[s] = std::exp(-0.5 * k2_[s] * dt);
    heat_dt_ = dt;
  }
  return heat_;
}

double SpectralGrid::spectral_inner(std::span<const Complex> a, std::span<const Complex> b) const {
  double acc = 0.0;
  for (std::size_t s = 0; s < spectrum_size_; ++s) {
    acc += weight_[s] * (a[s].real() * b[s].real() + a[s].imag() * b[s].imag());
  }
  return acc / static_cast<double>(domain_.cell_count());
}

}  // namespace amshe
