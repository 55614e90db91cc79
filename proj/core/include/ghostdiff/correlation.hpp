#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ghostdiff/diffraction.hpp"
#include "ghostdiff/modes.hpp"
#include "ghostdiff/optics.hpp"

namespace ghostdiff {

/// Everything needed to predict the idler-arm ghost pattern. The signal
/// fibre tip sits at k0 (on axis by default).
struct GhostSetup {
  SourceSpectrum spectrum;
  BeamSplitter bs;
  DiffractionKernel kernel;
  DetectorMap detector;
  double fixed_signal_mode_k0 = 0.0;
};

/// Checks the shared-grid and on-grid-k0 invariants.
void validate(const GhostSetup& setup);

/// <c_k^dagger d_k0> = r t sqrt(lambda_t) <N_k> f(k0 - k). Throws
/// Error(off_grid) for k not on the grid.
Complex cross_correlation(const GhostSetup& setup, double k);

/// First-order degree of correlation between idler mode k and the fixed
/// diffracted mode k0. Splitter amplitudes and lambda_t cancel, so the value
/// is computed from the reduced form
///   sqrt(<N_k>) f(k0 - k) / sqrt(sum_k'' <N_k''> |f(k0 - k'')|^2).
/// Throws Error(dark_mode) when either mode carries no light.
Complex g1(const GhostSetup& setup, double k);

/// Direct signal-arm intensity <d_k'^dagger d_k'> = r^2 lambda_t sum_k <N_k> |f(k'-k)|^2.
double signal_intensity(const GhostSetup& setup, double k_prime);

/// signal_intensity at every grid mode.
std::vector<double> signal_intensity_profile(const GhostSetup& setup);

/// FWHM of <N_k>; when the spectrum never falls to half maximum inside the
/// grid the band edge is used, so the value is a lower bound.
double spectrum_fwhm(const SourceSpectrum& spectrum);

/// Spectrum FWHM divided by the kernel's |f|^2 main-lobe FWHM.
double approximation_quality(const SourceSpectrum& spectrum, const DiffractionKernel& kernel);

/// Broad-source N-slit closed form in detector coordinates, exactly as it is
/// usually printed:
///   sinc(pi x a / (lambda f3)) * sin(N pi x d / (lambda f3)) / (pi x d / (lambda f3)),
/// divided by its peak value N so the result has unit peak at x = 0.
double ghost_pattern_closed_form(const NSlit& slits, const DetectorMap& detector, double x);

struct CorrelationPattern {
  std::vector<double> positions_x;
  std::vector<double> kx;
  ComplexVector g1;
  std::vector<double> g1_approx;
  std::vector<double> signal_intensity;
  double approximation_quality = 0;
  /// Largest |x requested - x of the snapped mode| over the sweep, meters.
  double max_snap_error = 0;
};

/// Scans the idler detector over n_points positions in [x_min, x_max]; each
/// position is snapped to the nearest grid mode. Positions are evaluated
/// concurrently; output order follows input order.
CorrelationPattern sweep_pattern(const GhostSetup& setup, double x_min, double x_max,
                                 std::size_t n_points);

/// Indices of interior local minima. Runs of identical values (several
/// positions snapped onto one mode) count as one point located at the
/// run's middle index.
std::vector<std::size_t> local_minima(std::span<const double> values);

struct PatternSummary {
  double peak_abs_g1 = 0;
  double peak_x = 0;
  std::optional<double> first_zero_x;
  std::optional<double> fringe_spacing;
  double approximation_quality = 0;
  double max_snap_error = 0;
};

/// Peak, first minimum beyond the peak, and median spacing between
/// consecutive minima of |g1|.
PatternSummary summarize(const CorrelationPattern& pattern);

}  // namespace ghostdiff
