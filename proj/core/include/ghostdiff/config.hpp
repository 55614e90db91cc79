#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ghostdiff {

struct GridConfig {
  double k_max = 0;
  std::size_t count = 4097;
  double optical_wavelength = 0;
};

enum class SourceShape { flat, gaussian };

struct SourceConfig {
  SourceShape shape = SourceShape::flat;
  double level = 0;    // flat
  double peak = 0;     // gaussian
  double sigma_k = 0;  // gaussian
};

struct SplitterConfig {
  double r = 0;
};

enum class ApertureType { nslit, mask };

struct ApertureConfig {
  ApertureType type = ApertureType::nslit;
  int n = 1;
  double a = 0;
  double d = 0;
  std::filesystem::path mask_path;
  double plane_extent = 0;
  /// 0 selects the closed-form slit kernel; masks default to 256.
  int quad_points = 0;
};

struct DetectorConfig {
  double f3 = 0;
  double x_min = 0;
  double x_max = 0;
  std::size_t points = 1025;
};

struct OracleConfig {
  std::size_t n_samples = 1'000'000;
  std::uint64_t seed = 1;
  bool enabled = true;
};

struct RunConfig {
  GridConfig grid;
  SourceConfig source;
  SplitterConfig splitter;
  ApertureConfig aperture;
  DetectorConfig detector;
  OracleConfig oracle;
};

struct ConfigIssue {
  std::string path;
  std::string reason;
};

/// Parse or validation failure. Validation collects every problem before
/// throwing; parse errors carry a single issue with line and column.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  ConfigError(std::string path, std::string reason);
  const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

/// Parses a JSON run configuration. Unknown keys are errors. A relative
/// aperture.mask_path is resolved against `base_dir`.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});

RunConfig load_config(const std::filesystem::path& path);

/// Closest candidate within edit distance 3, or empty.
std::string suggest_key(std::string_view key, const std::vector<std::string>& candidates);

}  // namespace ghostdiff
