#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace ghostdiff {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Uniform transverse-wavevector axis k_x in rad/m. The point count is odd
/// so that k_x = 0 sits exactly on the centre index.
class ModeGrid {
 public:
  double k_max() const noexcept { return k_max_; }
  std::size_t count() const noexcept { return count_; }
  double spacing() const noexcept { return spacing_; }
  double optical_wavelength() const noexcept { return optical_wavelength_; }
  std::size_t center() const noexcept { return (count_ - 1) / 2; }

  /// k_x of grid point i; symmetric about the centre bit-for-bit.
  double kx(std::size_t i) const noexcept {
    return (static_cast<double>(i) - static_cast<double>(center())) * spacing_;
  }

  std::vector<double> axis() const;

  /// Index of an on-grid wavevector, or nullopt if `k` is not a grid point
  /// (within a 1e-6 fraction of the spacing).
  std::optional<std::size_t> index_of(double k) const noexcept;

  /// Index of a grid point; throws Error(off_grid) for off-grid values.
  std::size_t require_index(double k) const;

  /// Nearest grid index; throws Error(sweep_out_of_band) when |k| exceeds
  /// the representable band [-k_max, k_max].
  std::size_t nearest_index(double k) const;

  bool operator==(const ModeGrid&) const = default;

 private:
  friend ModeGrid build_grid(double, std::size_t, double);
  ModeGrid(double k_max, std::size_t count, double spacing, double wavelength)
      : k_max_(k_max), count_(count), spacing_(spacing), optical_wavelength_(wavelength) {}

  double k_max_;
  std::size_t count_;
  double spacing_;
  double optical_wavelength_;
};

ModeGrid build_grid(double k_max, std::size_t count, double optical_wavelength);

/// Mean photon number <N_k> per grid mode of the thermal source.
class SourceSpectrum {
 public:
  /// Throws on negative or non-finite entries, a size mismatch, or an
  /// all-dark spectrum.
  SourceSpectrum(ModeGrid grid, std::vector<double> mean_photons);

  const ModeGrid& grid() const noexcept { return grid_; }
  std::span<const double> mean_photons() const noexcept { return mean_photons_; }
  double operator[](std::size_t i) const noexcept { return mean_photons_[i]; }
  std::size_t size() const noexcept { return mean_photons_.size(); }

  SourceSpectrum scaled(double gamma) const;

 private:
  ModeGrid grid_;
  std::vector<double> mean_photons_;
};

SourceSpectrum gaussian_spectrum(const ModeGrid& grid, double peak, double sigma_k);
SourceSpectrum flat_spectrum(const ModeGrid& grid, double level);
/// All photons in one mode; used for the narrow-source limit.
SourceSpectrum single_mode_spectrum(const ModeGrid& grid, std::size_t index, double level);

/// Lens L3 focal-plane mapping between detector position and k_x.
struct DetectorMap {
  double focal_length_f3;
  double optical_wavelength;
};

DetectorMap make_detector_map(double focal_length_f3, double optical_wavelength);

double position_to_kx(const DetectorMap& map, double x);
double kx_to_position(const DetectorMap& map, double kx);

}  // namespace ghostdiff
