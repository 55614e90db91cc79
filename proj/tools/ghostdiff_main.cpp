// ghostdiff: ghost interference-diffraction patterns from thermal light.
//
//   ghostdiff pattern   <config.json> [--out pattern.csv]
//   ghostdiff intensity <config.json> [--out intensity.csv]
//   ghostdiff validate  <config.json> [--out validation.txt]
//
// Exit codes: 0 success, 1 validation failure, 2 configuration error,
// 3 runtime error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ghostdiff/config.hpp"
#include "ghostdiff/csv.hpp"
#include "ghostdiff/error.hpp"
#include "ghostdiff/run.hpp"

namespace {

enum ExitCode : int { kOk = 0, kValidationFailed = 1, kConfigError = 2, kRuntimeError = 3 };

struct Options {
  std::filesystem::path config;
  std::filesystem::path out;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

std::string describe(const std::optional<double>& v) {
  return v ? ghostdiff::format_double(*v) + " m" : "none";
}

int run(const std::string& command, const Options& opt) {
  ghostdiff::RunConfig config = ghostdiff::load_config(opt.config);
  if (opt.seed) config.oracle.seed = *opt.seed;

  if (command == "pattern") {
    const auto out = opt.out.empty() ? std::filesystem::path("pattern.csv") : opt.out;
    const auto s = ghostdiff::run_pattern(config, out);
    if (!opt.quiet) {
      std::cout << "wrote " << out.string() << "\n"
                << "peak |g1|              " << ghostdiff::format_double(s.peak_abs_g1) << " at x = "
                << ghostdiff::format_double(s.peak_x) << " m\n"
                << "first zero             " << describe(s.first_zero_x) << "\n"
                << "fringe spacing         " << describe(s.fringe_spacing) << "\n"
                << "approximation quality  " << ghostdiff::format_double(s.approximation_quality) << "\n"
                << "max snap error         " << ghostdiff::format_double(s.max_snap_error) << " m\n";
    }
    return kOk;
  }
  if (command == "intensity") {
    const auto out = opt.out.empty() ? std::filesystem::path("intensity.csv") : opt.out;
    ghostdiff::run_intensity(config, out);
    if (!opt.quiet) std::cout << "wrote " << out.string() << "\n";
    return kOk;
  }
  const auto out = opt.out.empty() ? std::filesystem::path("validation.txt") : opt.out;
  const auto report = ghostdiff::run_validate(config, out);
  if (!opt.quiet) ghostdiff::write_report(std::cout, report);
  return report.all_pass() ? kOk : kValidationFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ghost interference-diffraction simulator (thermal light, beam splitter)"};
  app.require_subcommand(1);

  Options opt;
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", opt.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "Output path");
    sub->add_option("--seed", seed, "Override oracle.seed");
    sub->add_flag("--quiet", opt.quiet, "Suppress the summary on standard output");
  };
  auto* pattern = app.add_subcommand("pattern", "Idler-arm g1 sweep as CSV");
  auto* validate = app.add_subcommand("validate", "Check closed forms against the oracles");
  auto* intensity = app.add_subcommand("intensity", "Signal-arm intensity profile as CSV");
  for (auto* sub : {pattern, validate, intensity}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  std::string command = app.get_subcommands().front()->get_name();
  if (app.get_subcommands().front()->count("--seed") > 0) opt.seed = seed;

  try {
    return run(command, opt);
  } catch (const ghostdiff::ConfigError& e) {
    std::cerr << "configuration error:\n" << e.what() << "\n";
    return kConfigError;
  } catch (const ghostdiff::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
}
