#include "ghostdiff/modes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ghostdiff/error.hpp"

namespace ghostdiff {

ModeGrid build_grid(double k_max, std::size_t count, double optical_wavelength) {
  require(count >= 3, "grid count must be at least 3");
  require(count % 2 == 1, "grid count must be odd (got " + std::to_string(count) + ")");
  require(std::isfinite(optical_wavelength) && optical_wavelength > 0,
          "optical wavelength must be positive");
  require(std::isfinite(k_max) && k_max > 0, "k_max must be positive");
  const double k_total = kTwoPi / optical_wavelength;
  require(k_max < k_total, "k_max must be below the total wavevector 2*pi/wavelength = " +
                               std::to_string(k_total));
  const double spacing = 2.0 * k_max / static_cast<double>(count - 1);
  return ModeGrid(k_max, count, spacing, optical_wavelength);
}

std::vector<double> ModeGrid::axis() const {
  std::vector<double> out(count_);
  for (std::size_t i = 0; i < count_; ++i) out[i] = kx(i);
  return out;
}

std::optional<std::size_t> ModeGrid::index_of(double k) const noexcept {
  if (!std::isfinite(k)) return std::nullopt;
  const double steps = k / spacing_;
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-6) return std::nullopt;
  const double idx = rounded + static_cast<double>(center());
  if (idx < 0 || idx > static_cast<double>(count_ - 1)) return std::nullopt;
  return static_cast<std::size_t>(idx);
}

std::size_t ModeGrid::require_index(double k) const {
  auto idx = index_of(k);
  if (!idx) fail(ErrorKind::off_grid, "off-grid wavevector " + std::to_string(k) + " rad/m");
  return *idx;
}

std::size_t ModeGrid::nearest_index(double k) const {
  if (!std::isfinite(k) || std::abs(k) > k_max_ * (1 + 1e-12)) {
    fail(ErrorKind::sweep_out_of_band, "sweep out of band: k_x = " + std::to_string(k) +
                                           " rad/m exceeds k_max = " + std::to_string(k_max_));
  }
  const double idx = std::round(k / spacing_) + static_cast<double>(center());
  return static_cast<std::size_t>(std::clamp(idx, 0.0, static_cast<double>(count_ - 1)));
}

SourceSpectrum::SourceSpectrum(ModeGrid grid, std::vector<double> mean_photons)
    : grid_(grid), mean_photons_(std::move(mean_photons)) {
  require(mean_photons_.size() == grid_.count(), "spectrum length must equal grid count");
  bool any_lit = false;
  for (double n : mean_photons_) {
    require(std::isfinite(n) && n >= 0, "mean photon numbers must be finite and non-negative");
    any_lit = any_lit || n > 0;
  }
  require(any_lit, "spectrum must have at least one mode with <N> > 0");
}

SourceSpectrum SourceSpectrum::scaled(double gamma) const {
  require(std::isfinite(gamma) && gamma > 0, "spectrum scale must be positive");
  std::vector<double> out(mean_photons_);
  for (double& n : out) n *= gamma;
  return SourceSpectrum(grid_, std::move(out));
}

SourceSpectrum gaussian_spectrum(const ModeGrid& grid, double peak, double sigma_k) {
  require(std::isfinite(peak) && peak > 0, "gaussian peak must be positive");
  require(std::isfinite(sigma_k) && sigma_k > 0, "gaussian sigma_k must be positive");
  std::vector<double> n(grid.count());
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double u = grid.kx(i) / sigma_k;
    n[i] = peak * std::exp(-0.5 * u * u);
  }
  return SourceSpectrum(grid, std::move(n));
}

SourceSpectrum flat_spectrum(const ModeGrid& grid, double level) {
  require(std::isfinite(level) && level > 0, "flat spectrum level must be positive");
  return SourceSpectrum(grid, std::vector<double>(grid.count(), level));
}

SourceSpectrum single_mode_spectrum(const ModeGrid& grid, std::size_t index, double level) {
  require(index < grid.count(), "single-mode index outside grid");
  require(std::isfinite(level) && level > 0, "single-mode level must be positive");
  std::vector<double> n(grid.count(), 0.0);
  n[index] = level;
  return SourceSpectrum(grid, std::move(n));
}

DetectorMap make_detector_map(double focal_length_f3, double optical_wavelength) {
  require(std::isfinite(focal_length_f3) && focal_length_f3 > 0, "focal length f3 must be positive");
  require(std::isfinite(optical_wavelength) && optical_wavelength > 0,
          "optical wavelength must be positive");
  return DetectorMap{focal_length_f3, optical_wavelength};
}

double position_to_kx(const DetectorMap& map, double x) {
  return kTwoPi * x / (map.optical_wavelength * map.focal_length_f3);
}

double kx_to_position(const DetectorMap& map, double kx) {
  return kx * map.optical_wavelength * map.focal_length_f3 / kTwoPi;
}

}  // namespace ghostdiff
