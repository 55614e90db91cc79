#include "ghostdiff/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ghostdiff/error.hpp"
#include "ghostdiff/parallel.hpp"

namespace ghostdiff {
namespace {

double sinc(double u) { return u == 0.0 ? 1.0 : std::sin(u) / u; }

// sum_k'' <N_k''> |f(k0 - k'')|^2, the common denominator of g1.
double coherence_norm(const GhostSetup& setup, std::size_t k0) {
  const auto& n = setup.spectrum;
  double sum = 0;
  for (std::size_t k = 0; k < n.size(); ++k) sum += n[k] * std::norm(setup.kernel.between(k0, k));
  return sum;
}

Complex g1_reduced(const GhostSetup& setup, std::size_t k, std::size_t k0, double norm) {
  const double n_k = setup.spectrum[k];
  if (n_k <= 0 || norm <= 0) {
    fail(ErrorKind::dark_mode, "dark mode: detector mode at k_x = " +
                                   std::to_string(setup.spectrum.grid().kx(n_k <= 0 ? k : k0)) +
                                   " rad/m carries no light");
  }
  return std::sqrt(n_k) * setup.kernel.between(k0, k) / std::sqrt(norm);
}

double intensity_at(const GhostSetup& setup, std::size_t kp) {
  const auto& n = setup.spectrum;
  double sum = 0;
  for (std::size_t k = 0; k < n.size(); ++k) sum += n[k] * std::norm(setup.kernel.between(kp, k));
  return setup.bs.r * setup.bs.r * setup.kernel.transmissivity() * sum;
}

}  // namespace

void validate(const GhostSetup& setup) {
  require_same_grid(setup.spectrum, setup.kernel);
  setup.spectrum.grid().require_index(setup.fixed_signal_mode_k0);
}

Complex cross_correlation(const GhostSetup& setup, double k) {
  validate(setup);
  const auto& grid = setup.spectrum.grid();
  const std::size_t ki = grid.require_index(k);
  const std::size_t k0 = grid.require_index(setup.fixed_signal_mode_k0);
  return setup.bs.r * setup.bs.t * std::sqrt(setup.kernel.transmissivity()) * setup.spectrum[ki] *
         setup.kernel.between(k0, ki);
}

Complex g1(const GhostSetup& setup, double k) {
  validate(setup);
  const auto& grid = setup.spectrum.grid();
  const std::size_t ki = grid.require_index(k);
  const std::size_t k0 = grid.require_index(setup.fixed_signal_mode_k0);
  return g1_reduced(setup, ki, k0, coherence_norm(setup, k0));
}

double signal_intensity(const GhostSetup& setup, double k_prime) {
  validate(setup);
  return intensity_at(setup, setup.spectrum.grid().require_index(k_prime));
}

std::vector<double> signal_intensity_profile(const GhostSetup& setup) {
  validate(setup);
  std::vector<double> out(setup.spectrum.size());
  parallel_for(out.size(), [&](std::size_t kp) { out[kp] = intensity_at(setup, kp); });
  return out;
}

double spectrum_fwhm(const SourceSpectrum& spectrum) {
  const auto n = spectrum.mean_photons();
  const auto peak_it = std::max_element(n.begin(), n.end());
  const std::size_t p = static_cast<std::size_t>(peak_it - n.begin());
  const double half = 0.5 * *peak_it;
  const double h = spectrum.grid().spacing();

  // Distance from the peak to the half-maximum crossing on one side.
  auto crossing = [&](int dir) {
    std::size_t i = p;
    while (true) {
      const bool at_edge = dir > 0 ? i + 1 >= n.size() : i == 0;
      if (at_edge) return std::abs(static_cast<double>(i) - static_cast<double>(p)) * h;
      const std::size_t next = dir > 0 ? i + 1 : i - 1;
      if (n[next] <= half) {
        const double frac = (n[i] - half) / (n[i] - n[next]);
        return (std::abs(static_cast<double>(i) - static_cast<double>(p)) + frac) * h;
      }
      i = next;
    }
  };
  return crossing(+1) + crossing(-1);
}

double approximation_quality(const SourceSpectrum& spectrum, const DiffractionKernel& kernel) {
  return spectrum_fwhm(spectrum) / kernel.main_lobe_fwhm();
}

double ghost_pattern_closed_form(const NSlit& slits, const DetectorMap& detector, double x) {
  const double scale = std::numbers::pi * x / (detector.optical_wavelength * detector.focal_length_f3);
  const double u = scale * slits.slit_width;
  const double v = scale * slits.slit_separation;
  const int n = slits.n_slits;
  const double grating = v == 0.0 ? 1.0 : std::sin(n * v) / (n * v);
  return sinc(u) * grating;
}

CorrelationPattern sweep_pattern(const GhostSetup& setup, double x_min, double x_max,
                                 std::size_t n_points) {
  validate(setup);
  require(n_points >= 2, "a sweep needs at least two points");
  require(std::isfinite(x_min) && std::isfinite(x_max) && x_min < x_max,
          "sweep range must satisfy x_min < x_max");
  const auto& grid = setup.spectrum.grid();
  const std::size_t k0 = grid.require_index(setup.fixed_signal_mode_k0);

  CorrelationPattern out;
  out.positions_x.resize(n_points);
  out.kx.resize(n_points);
  std::vector<std::size_t> index(n_points);
  const double step = (x_max - x_min) / static_cast<double>(n_points - 1);
  for (std::size_t i = 0; i < n_points; ++i) {
    const double x = i + 1 == n_points ? x_max : x_min + static_cast<double>(i) * step;
    out.positions_x[i] = x;
    index[i] = grid.nearest_index(position_to_kx(setup.detector, x));
    out.kx[i] = grid.kx(index[i]);
    out.max_snap_error =
        std::max(out.max_snap_error, std::abs(kx_to_position(setup.detector, out.kx[i]) - x));
  }

  const double norm = coherence_norm(setup, k0);
  const auto& slits = setup.kernel.slit_geometry();
  double kernel_peak = 0;
  for (const auto& v : setup.kernel.values()) kernel_peak = std::max(kernel_peak, std::abs(v));

  out.g1.resize(n_points);
  out.g1_approx.resize(n_points);
  out.signal_intensity.resize(n_points);
  parallel_for(n_points, [&](std::size_t i) {
    const std::size_t k = index[i];
    out.g1[i] = g1_reduced(setup, k, k0, norm);
    if (slits) {
      const double x_eff = kx_to_position(setup.detector, out.kx[i] - setup.fixed_signal_mode_k0);
      out.g1_approx[i] = ghost_pattern_closed_form(*slits, setup.detector, x_eff);
    } else {
      out.g1_approx[i] = std::abs(setup.kernel.between(k0, k)) / kernel_peak;
    }
    out.signal_intensity[i] = intensity_at(setup, k);
  });
  out.approximation_quality = approximation_quality(setup.spectrum, setup.kernel);
  return out;
}

std::vector<std::size_t> local_minima(std::span<const double> values) {
  struct Run {
    double value;
    std::size_t mid;
  };
  std::vector<Run> runs;
  for (std::size_t i = 0; i < values.size();) {
    std::size_t j = i;
    while (j + 1 < values.size() && values[j + 1] == values[i]) ++j;
    runs.push_back({values[i], (i + j) / 2});
    i = j + 1;
  }
  std::vector<std::size_t> out;
  for (std::size_t r = 1; r + 1 < runs.size(); ++r) {
    if (runs[r].value < runs[r - 1].value && runs[r].value < runs[r + 1].value) {
      out.push_back(runs[r].mid);
    }
  }
  return out;
}

PatternSummary summarize(const CorrelationPattern& pattern) {
  PatternSummary s;
  s.approximation_quality = pattern.approximation_quality;
  s.max_snap_error = pattern.max_snap_error;
  if (pattern.g1.empty()) return s;

  std::vector<double> mag(pattern.g1.size());
  for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::abs(pattern.g1[i]);
  const auto peak = static_cast<std::size_t>(std::max_element(mag.begin(), mag.end()) - mag.begin());
  s.peak_abs_g1 = mag[peak];
  s.peak_x = pattern.positions_x[peak];

  const auto minima = local_minima(mag);
  for (std::size_t i : minima) {
    if (i > peak) {
      s.first_zero_x = pattern.positions_x[i];
      break;
    }
  }
  if (minima.size() >= 2) {
    std::vector<double> gaps;
    for (std::size_t i = 1; i < minima.size(); ++i) {
      gaps.push_back(pattern.positions_x[minima[i]] - pattern.positions_x[minima[i - 1]]);
    }
    std::nth_element(gaps.begin(), gaps.begin() + static_cast<std::ptrdiff_t>(gaps.size() / 2),
                     gaps.end());
    s.fringe_spacing = gaps[gaps.size() / 2];
  }
  return s;
}

}  // namespace ghostdiff
