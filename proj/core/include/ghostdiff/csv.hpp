#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>

#include "ghostdiff/correlation.hpp"

namespace ghostdiff {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Header: x_m,k_x,g1_re,g1_im,g1_abs,g1_approx,signal_intensity
void write_pattern_csv(std::ostream& out, const CorrelationPattern& pattern);

/// Header: k_x,intensity
void write_intensity_csv(std::ostream& out, std::span<const double> kx,
                         std::span<const double> intensity);

/// Writes through a sibling temporary file renamed into place on success.
/// If `body` throws, the temporary is removed and `path` is left untouched.
void write_file_atomically(const std::filesystem::path& path,
                           const std::function<void(std::ostream&)>& body);

}  // namespace ghostdiff
