#include "ghostdiff/run.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "ghostdiff/csv.hpp"
#include "ghostdiff/error.hpp"
#include "ghostdiff/oracle.hpp"

namespace ghostdiff {
namespace {

std::string format_complex(Complex z) {
  std::string out = format_double(z.real());
  if (!std::signbit(z.imag())) out += '+';
  return out + format_double(z.imag()) + "i";
}

// Below kFullPrecision products may be subnormal and carry no relative precision.
constexpr double kFullPrecision = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();

double relative_deviation(Complex a, Complex b) {
  const double scale = std::max({std::abs(a), std::abs(b), kFullPrecision});
  return std::abs(a - b) / scale;
}

ValidationCheck bound_check(std::string name, double deviation, double tolerance) {
  return {std::move(name), "0", format_double(deviation), tolerance, deviation <= tolerance};
}

}  // namespace

Aperture build_aperture(const RunConfig& config) {
  const auto& ap = config.aperture;
  if (ap.type == ApertureType::mask) return Mask::load(ap.mask_path);
  return NSlit{ap.n, ap.a, ap.d, 0.0};
}

GhostSetup build_setup(const RunConfig& config) {
  const ModeGrid grid = build_grid(config.grid.k_max, config.grid.count, config.grid.optical_wavelength);
  SourceSpectrum spectrum = config.source.shape == SourceShape::flat
                                ? flat_spectrum(grid, config.source.level)
                                : gaussian_spectrum(grid, config.source.peak, config.source.sigma_k);
  const Aperture aperture = build_aperture(config);
  const double lambda_t = transmissivity(aperture, config.aperture.plane_extent);
  DiffractionKernel kernel =
      config.aperture.quad_points > 0
          ? kernel_quadrature(grid, aperture, lambda_t, config.aperture.quad_points)
          : kernel_nslit(grid, std::get<NSlit>(aperture), lambda_t);
  return GhostSetup{std::move(spectrum), make_beam_splitter(config.splitter.r), std::move(kernel),
                    make_detector_map(config.detector.f3, config.grid.optical_wavelength), 0.0};
}

PatternSummary run_pattern(const RunConfig& config, const std::filesystem::path& out) {
  const GhostSetup setup = build_setup(config);
  const CorrelationPattern pattern =
      sweep_pattern(setup, config.detector.x_min, config.detector.x_max, config.detector.points);
  write_file_atomically(out, [&](std::ostream& os) { write_pattern_csv(os, pattern); });
  return summarize(pattern);
}

void run_intensity(const RunConfig& config, const std::filesystem::path& out) {
  const GhostSetup setup = build_setup(config);
  const std::vector<double> intensity = signal_intensity_profile(setup);
  const std::vector<double> kx = setup.spectrum.grid().axis();
  write_file_atomically(out, [&](std::ostream& os) { write_intensity_csv(os, kx, intensity); });
}

bool ValidationReport::all_pass() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

std::vector<double> probe_modes(const DiffractionKernel& kernel, double k0, std::size_t count) {
  const auto& grid = kernel.grid();
  const std::size_t c0 = grid.require_index(k0);
  const auto lobe_steps = static_cast<std::ptrdiff_t>(std::floor(kernel.main_lobe_fwhm() / grid.spacing() / 4));
  std::ptrdiff_t step = std::max<std::ptrdiff_t>(1, lobe_steps);
  const auto half = static_cast<std::ptrdiff_t>(count / 2);
  const auto lo = -static_cast<std::ptrdiff_t>(c0);
  const auto hi = static_cast<std::ptrdiff_t>(grid.count() - 1 - c0);
  while (step > 1 && (-half * step < lo || (static_cast<std::ptrdiff_t>(count) - 1 - half) * step > hi)) --step;

  std::vector<double> out;
  for (std::size_t i = 0; i < count; ++i) {
    const std::ptrdiff_t offset = (static_cast<std::ptrdiff_t>(i) - half) * step;
    const std::ptrdiff_t idx = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(c0) + offset, 0,
                                                          static_cast<std::ptrdiff_t>(grid.count() - 1));
    out.push_back(grid.kx(static_cast<std::size_t>(idx)));
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ValidationReport run_validate(const RunConfig& config, const std::filesystem::path& out,
                              const ValidationHooks& hooks) {
  if (!config.oracle.enabled) throw ConfigError("oracle.enabled", "validation requires oracle");

  GhostSetup setup = build_setup(config);
  if (hooks.kernel_fault_scale != 1.0) setup.kernel = setup.kernel.rescaled(hooks.kernel_fault_scale);
  const auto& grid = setup.spectrum.grid();
  const std::size_t k0 = grid.require_index(setup.fixed_signal_mode_k0);

  ValidationReport report;
  report.notes.push_back("idler convention c = -t a + r a'; Monte Carlo <c^dagger d> multiplied by " +
                         format_double(kIdlerPhase) + " before comparison");
  report.notes.push_back("rng: std::mt19937_64 + boost ziggurat normals, one stream per block of " + std::to_string(kBlockSize) +
                         " samples, seed_seq{seed, block}; seed=" + std::to_string(config.oracle.seed) +
                         " n_samples=" + std::to_string(config.oracle.n_samples));

  const double norm_sum = setup.kernel.normalization_sum();
  report.checks.push_back({"kernel_normalization", "1", format_double(norm_sum), 1e-9,
                           std::abs(norm_sum - 1.0) <= 1e-9});

  // Exact second moments: closed form vs matrix composition.
  {
    const JointMomentTable analytic = analytic_moments(setup.bs, setup.spectrum, setup.kernel);
    const JointMomentTable exact = exact_moments_by_matrix(setup.spectrum, setup.bs, setup.kernel);
    double dev_cc = 0, dev_dd = 0, dev_cd = 0, cs_ratio = 0;
    for (std::size_t k = 0; k < grid.count(); ++k) {
      dev_cc = std::max(dev_cc, relative_deviation(analytic.cc[k], exact.cc[k]));
      dev_dd = std::max(dev_dd, relative_deviation(analytic.dd[k], exact.dd[k]));
    }
    for (Eigen::Index k = 0; k < analytic.cd.rows(); ++k) {
      for (Eigen::Index kp = 0; kp < analytic.cd.cols(); ++kp) {
        const Complex a = analytic.cd(k, kp);
        dev_cd = std::max(dev_cd, relative_deviation(a, kIdlerPhase * exact.cd(k, kp)));
        const double bound = analytic.cc[static_cast<std::size_t>(k)] * analytic.dd[static_cast<std::size_t>(kp)];
        if (bound > 0) cs_ratio = std::max(cs_ratio, std::norm(a) / bound);
      }
    }
    report.checks.push_back(bound_check("exact_moments_cc_max_rel_dev", dev_cc, 1e-12));
    report.checks.push_back(bound_check("exact_moments_dd_max_rel_dev", dev_dd, 1e-12));
    report.checks.push_back(bound_check("exact_moments_cd_max_rel_dev", dev_cd, 1e-12));
    report.checks.push_back({"cauchy_schwarz_max_ratio", "1", format_double(cs_ratio), 1e-10,
                             cs_ratio <= 1.0 + 1e-10});

    const std::vector<double> intensity = signal_intensity_profile(setup);
    double dev_int = 0;
    for (std::size_t k = 0; k < grid.count(); ++k) {
      dev_int = std::max(dev_int, relative_deviation(intensity[k], exact.dd[k]));
    }
    report.checks.push_back(bound_check("signal_intensity_vs_exact_max_rel_dev", dev_int, 1e-12));

    double dev_g1 = 0;
    const auto k0i = static_cast<Eigen::Index>(k0);
    for (std::size_t k = 0; k < grid.count(); ++k) {
      if (analytic.cc[k] <= 0 || analytic.dd[k0] <= 0) continue;
      const Complex from_moments =
          analytic.cd(static_cast<Eigen::Index>(k), k0i) / std::sqrt(analytic.cc[k] * analytic.dd[k0]);
      dev_g1 = std::max(dev_g1, std::abs(from_moments - g1(setup, grid.kx(k))));
    }
    report.checks.push_back(bound_check("g1_vs_normalized_moments_max_abs_dev", dev_g1, 1e-12));
  }

  // Monte Carlo: sampled classical thermal fields.
  {
    const std::vector<double> probes = probe_modes(setup.kernel, setup.fixed_signal_mode_k0, 8);
    const MonteCarloMoments mc = estimate_moments(setup.spectrum, setup.bs, setup.kernel, probes,
                                                  setup.fixed_signal_mode_k0, config.oracle.n_samples,
                                                  config.oracle.seed);
    for (std::size_t p = 0; p < probes.size(); ++p) {
      const Complex expected = cross_correlation(setup, probes[p]);
      const Complex observed = kIdlerPhase * mc.cd[p].mean;
      const double tol = 4.0 * mc.cd[p].std_error;
      report.checks.push_back({"mc_cross_correlation[k_x=" + format_double(probes[p]) + "]",
                               format_complex(expected), format_complex(observed), tol,
                               std::abs(observed - expected) <= tol});
    }
    const std::size_t mid = probes.size() / 2;
    const double cc_expected = setup.bs.t * setup.bs.t * setup.spectrum[grid.require_index(probes[mid])];
    const double cc_tol = 4.0 * mc.cc[mid].std_error;
    report.checks.push_back({"mc_idler_intensity[k_x=" + format_double(probes[mid]) + "]",
                             format_double(cc_expected), format_double(mc.cc[mid].mean.real()), cc_tol,
                             std::abs(mc.cc[mid].mean.real() - cc_expected) <= cc_tol});
    const double dd_expected = signal_intensity(setup, setup.fixed_signal_mode_k0);
    const double dd_tol = 4.0 * mc.dd.std_error;
    report.checks.push_back({"mc_signal_intensity[k_x=" + format_double(setup.fixed_signal_mode_k0) + "]",
                             format_double(dd_expected), format_double(mc.dd.mean.real()), dd_tol,
                             std::abs(mc.dd.mean.real() - dd_expected) <= dd_tol});
  }

  write_file_atomically(out, [&](std::ostream& os) { write_report(os, report); });
  return report;
}

void write_report(std::ostream& out, const ValidationReport& report) {
  for (const auto& note : report.notes) out << "# " << note << '\n';
  for (const auto& c : report.checks) {
    out << "check=" << c.name << " analytic=" << c.analytic << " oracle=" << c.oracle
        << " tolerance=" << format_double(c.tolerance) << " status=" << (c.pass ? "PASS" : "FAIL") << '\n';
  }
  out << "# summary: " << std::count_if(report.checks.begin(), report.checks.end(), [](const auto& c) { return c.pass; })
      << "/" << report.checks.size() << " passed\n";
}

}  // namespace ghostdiff
