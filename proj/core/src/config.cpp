#include "ghostdiff/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "ghostdiff/modes.hpp"

namespace ghostdiff {
namespace {

using json = nlohmann::json;

std::string join_issues(const std::vector<ConfigIssue>& issues) {
  std::string out;
  for (const auto& issue : issues) {
    if (!out.empty()) out += "\n";
    out += issue.path.empty() ? issue.reason : issue.path + ": " + issue.reason;
  }
  return out;
}

const std::vector<std::string> kSections = {"grid", "source", "splitter", "aperture", "detector", "oracle"};

const std::vector<std::string>& known_keys(const std::string& section) {
  static const std::vector<std::string> grid = {"k_max", "count", "optical_wavelength"};
  static const std::vector<std::string> source = {"shape", "level", "peak", "sigma_k"};
  static const std::vector<std::string> splitter = {"r"};
  static const std::vector<std::string> aperture = {"type", "n", "a", "d", "mask_path", "plane_extent",
                                                    "quad_points"};
  static const std::vector<std::string> detector = {"f3", "x_min", "x_max", "points"};
  static const std::vector<std::string> oracle = {"n_samples", "seed", "enabled"};
  if (section == "grid") return grid;
  if (section == "source") return source;
  if (section == "splitter") return splitter;
  if (section == "aperture") return aperture;
  if (section == "detector") return detector;
  return oracle;
}

class Reader {
 public:
  explicit Reader(std::vector<ConfigIssue>& issues) : issues_(issues) {}

  void issue(std::string path, std::string reason) { issues_.push_back({std::move(path), std::move(reason)}); }

  void check_keys(const json& obj, const std::string& prefix, const std::vector<std::string>& allowed) {
    for (const auto& [key, value] : obj.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) != allowed.end()) continue;
      std::string reason = "unknown key '" + key + "'";
      if (auto hint = suggest_key(key, allowed); !hint.empty()) reason += "; did you mean '" + hint + "'?";
      issue(prefix.empty() ? key : prefix + "." + key, reason);
    }
  }

  const json* find(const json& obj, const std::string& key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
  }

  std::optional<double> number(const json& obj, const std::string& section, const std::string& key,
                               bool required) {
    const json* v = find(obj, key);
    const std::string path = section + "." + key;
    if (!v) {
      if (required) issue(path, "required key is missing");
      return std::nullopt;
    }
    if (!v->is_number()) {
      issue(path, "expected a number");
      return std::nullopt;
    }
    const double x = v->get<double>();
    if (!std::isfinite(x)) {
      issue(path, "must be finite");
      return std::nullopt;
    }
    return x;
  }

  std::optional<std::int64_t> integer(const json& obj, const std::string& section, const std::string& key,
                                      bool required) {
    const json* v = find(obj, key);
    const std::string path = section + "." + key;
    if (!v) {
      if (required) issue(path, "required key is missing");
      return std::nullopt;
    }
    if (v->is_number_integer()) return v->get<std::int64_t>();
    if (v->is_number_float()) {
      const double x = v->get<double>();
      if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9.0e15) return static_cast<std::int64_t>(x);
    }
    issue(path, "expected an integer");
    return std::nullopt;
  }

  std::optional<std::string> string(const json& obj, const std::string& section, const std::string& key,
                                    bool required) {
    const json* v = find(obj, key);
    const std::string path = section + "." + key;
    if (!v) {
      if (required) issue(path, "required key is missing");
      return std::nullopt;
    }
    if (!v->is_string()) {
      issue(path, "expected a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<bool> boolean(const json& obj, const std::string& section, const std::string& key) {
    const json* v = find(obj, key);
    if (!v) return std::nullopt;
    if (!v->is_boolean()) {
      issue(section + "." + key, "expected true or false");
      return std::nullopt;
    }
    return v->get<bool>();
  }

 private:
  std::vector<ConfigIssue>& issues_;
};

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

ConfigError::ConfigError(std::string path, std::string reason)
    : ConfigError(std::vector<ConfigIssue>{{std::move(path), std::move(reason)}}) {}

std::string suggest_key(std::string_view key, const std::vector<std::string>& candidates) {
  auto distance = [](std::string_view a, std::string_view b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
      std::size_t diag = row[0];
      row[0] = i;
      for (std::size_t j = 1; j <= b.size(); ++j) {
        const std::size_t up = row[j];
        row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
        diag = up;
      }
    }
    return row[b.size()];
  };
  std::string best;
  std::size_t best_d = 4;
  for (const auto& c : candidates) {
    const std::size_t d = distance(key, c);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    throw ConfigError("", "parse error at line " + std::to_string(line) + ", column " +
                                std::to_string(col) + ": " + e.what());
  }

  std::vector<ConfigIssue> issues;
  Reader rd(issues);
  if (!doc.is_object()) throw ConfigError("", "configuration must be a JSON object");
  rd.check_keys(doc, "", kSections);

  static const json kEmpty = json::object();
  auto section = [&](const std::string& name, bool required) -> const json& {
    const json* s = rd.find(doc, name);
    if (!s) {
      if (required) rd.issue(name, "required section is missing");
      return kEmpty;
    }
    if (!s->is_object()) {
      rd.issue(name, "expected an object");
      return kEmpty;
    }
    rd.check_keys(*s, name, known_keys(name));
    return *s;
  };

  RunConfig cfg;

  // grid
  const json& grid = section("grid", true);
  auto k_max = rd.number(grid, "grid", "k_max", true);
  auto count = rd.integer(grid, "grid", "count", false);
  auto wavelength = rd.number(grid, "grid", "optical_wavelength", true);
  if (k_max) cfg.grid.k_max = *k_max;
  if (count) {
    if (*count < 3 || *count % 2 == 0) rd.issue("grid.count", "must be an odd integer >= 3");
    else cfg.grid.count = static_cast<std::size_t>(*count);
  }
  if (wavelength) {
    if (*wavelength <= 0) rd.issue("grid.optical_wavelength", "must be positive");
    else cfg.grid.optical_wavelength = *wavelength;
  }
  if (k_max) {
    if (*k_max <= 0) {
      rd.issue("grid.k_max", "must be positive");
    } else if (wavelength && *wavelength > 0 && *k_max >= kTwoPi / *wavelength) {
      rd.issue("grid.k_max", "must be below 2*pi/optical_wavelength = " + std::to_string(kTwoPi / *wavelength));
    }
  }

  // source
  const json& source = section("source", true);
  if (auto shape = rd.string(source, "source", "shape", true)) {
    if (*shape == "flat") {
      cfg.source.shape = SourceShape::flat;
      if (auto level = rd.number(source, "source", "level", true)) {
        if (*level <= 0) rd.issue("source.level", "must be positive");
        cfg.source.level = *level;
      }
      for (const char* k : {"peak", "sigma_k"}) {
        if (rd.find(source, k)) rd.issue(std::string("source.") + k, "only used by the gaussian shape");
      }
    } else if (*shape == "gaussian") {
      cfg.source.shape = SourceShape::gaussian;
      if (auto peak = rd.number(source, "source", "peak", true)) {
        if (*peak <= 0) rd.issue("source.peak", "must be positive");
        cfg.source.peak = *peak;
      }
      if (auto sigma = rd.number(source, "source", "sigma_k", true)) {
        if (*sigma <= 0) rd.issue("source.sigma_k", "must be positive");
        cfg.source.sigma_k = *sigma;
      }
      if (rd.find(source, "level")) rd.issue("source.level", "only used by the flat shape");
    } else {
      rd.issue("source.shape", "must be \"flat\" or \"gaussian\"");
    }
  }

  // splitter
  const json& splitter = section("splitter", true);
  if (auto r = rd.number(splitter, "splitter", "r", true)) {
    if (!(*r > 0 && *r < 1)) rd.issue("splitter.r", "must lie strictly between 0 and 1");
    cfg.splitter.r = *r;
  }

  // aperture
  const json& aperture = section("aperture", true);
  auto plane = rd.number(aperture, "aperture", "plane_extent", true);
  if (plane) {
    if (*plane <= 0) rd.issue("aperture.plane_extent", "must be positive");
    cfg.aperture.plane_extent = *plane;
  }
  if (auto qp = rd.integer(aperture, "aperture", "quad_points", false)) {
    if (*qp < 64) rd.issue("aperture.quad_points", "must be at least 64");
    else cfg.aperture.quad_points = static_cast<int>(std::min<std::int64_t>(*qp, 1 << 24));
  }
  if (auto type = rd.string(aperture, "aperture", "type", true)) {
    if (*type == "nslit") {
      cfg.aperture.type = ApertureType::nslit;
      auto n = rd.integer(aperture, "aperture", "n", true);
      auto a = rd.number(aperture, "aperture", "a", true);
      auto d = rd.number(aperture, "aperture", "d", n && *n > 1);
      if (n) {
        if (*n < 1 || *n > 100000) rd.issue("aperture.n", "must be between 1 and 100000");
        else cfg.aperture.n = static_cast<int>(*n);
      }
      if (a) {
        if (*a <= 0) rd.issue("aperture.a", "must be positive");
        cfg.aperture.a = *a;
      }
      if (d) {
        if (*d < 0) rd.issue("aperture.d", "must be non-negative");
        cfg.aperture.d = *d;
      }
      if (n && *n > 1 && a && d && *d <= *a) rd.issue("aperture.d", "must exceed aperture.a so slits do not overlap");
      if (n && a && plane && *a > 0 && *plane > 0) {
        const double span = (*n - 1) * cfg.aperture.d + *a;
        if (span > *plane) rd.issue("aperture.plane_extent", "smaller than the open extent of the slits");
      }
      if (rd.find(aperture, "mask_path")) rd.issue("aperture.mask_path", "only used when type is \"mask\"");
    } else if (*type == "mask") {
      cfg.aperture.type = ApertureType::mask;
      if (auto path = rd.string(aperture, "aperture", "mask_path", true)) {
        std::filesystem::path p(*path);
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        if (!std::filesystem::exists(p)) rd.issue("aperture.mask_path", "file does not exist: " + p.string());
        cfg.aperture.mask_path = p;
      }
      for (const char* k : {"n", "a", "d"}) {
        if (rd.find(aperture, k)) rd.issue(std::string("aperture.") + k, "only used when type is \"nslit\"");
      }
      if (cfg.aperture.quad_points == 0) cfg.aperture.quad_points = 256;
    } else {
      rd.issue("aperture.type", "must be \"nslit\" or \"mask\"");
    }
  }

  // detector
  const json& detector = section("detector", true);
  if (auto f3 = rd.number(detector, "detector", "f3", true)) {
    if (*f3 <= 0) rd.issue("detector.f3", "must be positive");
    cfg.detector.f3 = *f3;
  }
  auto x_min = rd.number(detector, "detector", "x_min", true);
  auto x_max = rd.number(detector, "detector", "x_max", true);
  if (x_min) cfg.detector.x_min = *x_min;
  if (x_max) cfg.detector.x_max = *x_max;
  if (x_min && x_max && !(*x_min < *x_max)) rd.issue("detector.x_max", "must be greater than detector.x_min");
  if (auto points = rd.integer(detector, "detector", "points", false)) {
    if (*points < 2 || *points > 10'000'000) rd.issue("detector.points", "must be between 2 and 1e7");
    else cfg.detector.points = static_cast<std::size_t>(*points);
  }

  // oracle
  const json& oracle = section("oracle", false);
  if (auto n = rd.integer(oracle, "oracle", "n_samples", false)) {
    if (*n < 10000) rd.issue("oracle.n_samples", "must be at least 1e4");
    else cfg.oracle.n_samples = static_cast<std::size_t>(*n);
  }
  if (auto seed = rd.integer(oracle, "oracle", "seed", false)) {
    if (*seed < 0) rd.issue("oracle.seed", "must be non-negative");
    else cfg.oracle.seed = static_cast<std::uint64_t>(*seed);
  }
  if (auto enabled = rd.boolean(oracle, "oracle", "enabled")) cfg.oracle.enabled = *enabled;

  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read configuration file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

}  // namespace ghostdiff
