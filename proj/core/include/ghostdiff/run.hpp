#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ghostdiff/config.hpp"
#include "ghostdiff/correlation.hpp"

namespace ghostdiff {

Aperture build_aperture(const RunConfig& config);
GhostSetup build_setup(const RunConfig& config);

/// Sweeps the idler detector and writes the pattern CSV to `out`.
PatternSummary run_pattern(const RunConfig& config, const std::filesystem::path& out);

/// Writes the signal-arm intensity profile (one row per grid mode).
void run_intensity(const RunConfig& config, const std::filesystem::path& out);

struct ValidationCheck {
  std::string name;
  std::string analytic;
  std::string oracle;
  double tolerance = 0;
  bool pass = false;
};

struct ValidationReport {
  std::vector<std::string> notes;
  std::vector<ValidationCheck> checks;

  bool all_pass() const noexcept;
};

/// Fault injection for exercising the validation suite itself.
struct ValidationHooks {
  /// Multiplies every kernel sample, breaking the unit normalization when != 1.
  double kernel_fault_scale = 1.0;
};

/// `count` idler modes around k0, spaced by a quarter of the kernel's main
/// lobe (at least one grid step) and clipped to the grid.
std::vector<double> probe_modes(const DiffractionKernel& kernel, double k0, std::size_t count);

/// Compares the closed forms against the exact matrix oracle and the Monte
/// Carlo oracle, writing one report line per check to `out`. Throws
/// ConfigError when oracle.enabled is false.
ValidationReport run_validate(const RunConfig& config, const std::filesystem::path& out,
                              const ValidationHooks& hooks = {});

void write_report(std::ostream& out, const ValidationReport& report);

}  // namespace ghostdiff
