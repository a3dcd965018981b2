#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "amshe/domain.hpp"

namespace amshe {

using Complex = std::complex<double>;

/// Real <-> half-spectrum transform workspace for one domain.
///
/// Owns aligned buffers and FFTW plans (created with FFTW_ESTIMATE so the
/// arithmetic is identical run to run). Not thread-safe; give each worker its
/// own instance. Plan creation is serialized internally.
class SpectralGrid {
 public:
  explicit SpectralGrid(const DomainSpec& domain);
  ~SpectralGrid();
  SpectralGrid(const SpectralGrid&) = delete;
  SpectralGrid& operator=(const SpectralGrid&) = delete;
  SpectralGrid(SpectralGrid&&) noexcept;
  SpectralGrid& operator=(SpectralGrid&&) noexcept;

  const DomainSpec& domain() const noexcept { return domain_; }
  std::size_t real_size() const noexcept { return domain_.cell_count(); }
  std::size_t spectrum_size() const noexcept { return spectrum_size_; }

  std::span<double> real() noexcept;
  std::span<Complex> spectrum() noexcept;

  /// Unnormalized DFT of real() into spectrum().
  void forward();
  /// Inverse DFT of spectrum() into real(), divided by N^d. Clobbers spectrum().
  void backward();

  /// |k|^2 for every half-spectrum entry, k = 2*pi*m/L.
  const std::vector<double>& wavenumber_squared() const noexcept { return k2_; }
  /// 1 for self-conjugate half-spectrum columns, 2 otherwise.
  const std::vector<double>& hermitian_weight() const noexcept { return weight_; }

  /// For entries on the self-conjugate columns (last-axis mode 0 or N/2), the
  /// index holding the complex conjugate partner (itself for real modes);
  /// kNoPartner elsewhere.
  static constexpr std::size_t kNoPartner = static_cast<std::size_t>(-1);
  const std::vector<std::size_t>& conjugate_partner() const noexcept { return partner_; }

  /// exp(-|k|^2 dt / 2); cached for the most recent dt.
  const std::vector<double>& heat_multiplier(double dt);

  /// sum_x a(x) b(x) computed from the half spectra of a and b.
  double spectral_inner(std::span<const Complex> a, std::span<const Complex> b) const;

 private:
  struct Plans;

  DomainSpec domain_;
  std::size_t spectrum_size_ = 0;
  std::unique_ptr<Plans> plans_;
  std::vector<double> k2_;
  std::vector<double> weight_;
  std::vector<std::size_t> partner_;
  std::vector<double> heat_;
  double heat_dt_ = -1.0;
};

}  // namespace amshe
