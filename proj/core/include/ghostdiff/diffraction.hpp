#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "ghostdiff/modes.hpp"

namespace ghostdiff {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// N identical slits of width `slit_width` whose centres are spaced by
/// `slit_separation`, laid out symmetrically about `center_x` along X.
/// For a single slit the separation is unused and may be zero.
struct NSlit {
  int n_slits = 1;
  double slit_width = 0;
  double slit_separation = 0;
  double center_x = 0;

  /// Distance between the outer edges of the first and last slit.
  double open_span() const noexcept {
    return (n_slits - 1) * slit_separation + slit_width;
  }
};

void validate(const NSlit& slits);

/// Binary transmission mask on a square pixel lattice centred on the origin.
/// Row 0 is the top row (largest y).
class Mask {
 public:
  Mask(std::size_t rows, std::size_t cols, double pixel_pitch, std::vector<std::uint8_t> open);

  /// Reads the text format: a header line `pitch=<meters>` followed by one
  /// line of '0'/'1' characters per row.
  static Mask parse(std::istream& in);
  static Mask load(const std::filesystem::path& path);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double pixel_pitch() const noexcept { return pitch_; }
  bool is_open(std::size_t row, std::size_t col) const noexcept {
    return open_[row * cols_ + col] != 0;
  }
  std::size_t open_pixels() const noexcept;
  double open_area() const noexcept;
  /// Width of the widest contiguous open run along X.
  double widest_run() const noexcept;

  double pixel_left_edge(std::size_t col) const noexcept;
  double row_center_y(std::size_t row) const noexcept;

 private:
  std::size_t rows_;
  std::size_t cols_;
  double pitch_;
  std::vector<std::uint8_t> open_;
};

using Aperture = std::variant<NSlit, Mask>;

/// Energy transmissivity lambda_t = Sigma / S. In the 1-D slit model
/// Sigma = n * a and S = plane_extent; a mask is placed in a square plane of
/// side plane_extent.
double transmissivity(const Aperture& aperture, double plane_extent);

/// Fraunhofer factor f(kappa) sampled on the 2M-1 offsets k' - k of a mode
/// grid. Index j holds kappa = (j - (M - 1)) * spacing.
class DiffractionKernel {
 public:
  DiffractionKernel(ModeGrid grid, ComplexVector values, double lambda_t,
                    std::optional<NSlit> slit_geometry = std::nullopt);

  const ModeGrid& grid() const noexcept { return grid_; }
  std::span<const Complex> values() const noexcept { return values_; }
  double transmissivity() const noexcept { return lambda_t_; }
  const std::optional<NSlit>& slit_geometry() const noexcept { return slits_; }

  std::size_t zero_offset_index() const noexcept { return grid_.count() - 1; }
  double offset_kx(std::size_t j) const noexcept {
    return (static_cast<double>(j) - static_cast<double>(zero_offset_index())) * grid_.spacing();
  }

  /// f(k'_i - k_j) for grid indices i (k') and j (k).
  Complex between(std::size_t k_prime, std::size_t k) const noexcept {
    return values_[k_prime + zero_offset_index() - k];
  }

  /// Discrete normalization sum over all offsets of |f|^2.
  double normalization_sum() const noexcept;

  /// Full width at half maximum of the |f|^2 main lobe around kappa = 0.
  double main_lobe_fwhm() const noexcept;

  /// Copy with every sample multiplied by `factor`. Used to inject a
  /// normalization fault into validation runs.
  DiffractionKernel rescaled(double factor) const;

 private:
  ModeGrid grid_;
  ComplexVector values_;
  double lambda_t_;
  std::optional<NSlit> slits_;
};

/// Rescale so that sum |f|^2 == 1 while keeping relative amplitudes/phases.
ComplexVector normalize_kernel(std::span<const Complex> values);

/// Closed-form N-slit kernel: sinc(kappa a / 2) times the grating factor
/// sin(N kappa d / 2) / sin(kappa d / 2), then normalized.
DiffractionKernel kernel_nslit(const ModeGrid& grid, const NSlit& slits, double lambda_t);

/// Kernel from midpoint quadrature of the aperture integral
/// int_Sigma exp(-i (kx x + ky y)) dx dy along the k_y = 0 line, normalized.
/// `quad_points` is the node count per open interval (>= 64).
DiffractionKernel kernel_quadrature(const ModeGrid& grid, const Aperture& aperture,
                                    double lambda_t, int quad_points);

/// Unnormalized aperture integral at (kx, ky). Slits are a 1-D model and
/// select k_y = 0 (zero elsewhere).
Complex fraunhofer_integral(const Aperture& aperture, double kx, double ky, int quad_points);

}  // namespace ghostdiff
