#include "ghostdiff/csv.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <system_error>

#include "ghostdiff/error.hpp"

namespace ghostdiff {

std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

void write_pattern_csv(std::ostream& out, const CorrelationPattern& p) {
  out << "x_m,k_x,g1_re,g1_im,g1_abs,g1_approx,signal_intensity\n";
  for (std::size_t i = 0; i < p.positions_x.size(); ++i) {
    out << format_double(p.positions_x[i]) << ',' << format_double(p.kx[i]) << ','
        << format_double(p.g1[i].real()) << ',' << format_double(p.g1[i].imag()) << ','
        << format_double(std::abs(p.g1[i])) << ',' << format_double(p.g1_approx[i]) << ','
        << format_double(p.signal_intensity[i]) << '\n';
  }
}

void write_intensity_csv(std::ostream& out, std::span<const double> kx,
                         std::span<const double> intensity) {
  require(kx.size() == intensity.size(), "k_x and intensity columns differ in length");
  out << "k_x,intensity\n";
  for (std::size_t i = 0; i < kx.size(); ++i) {
    out << format_double(kx[i]) << ',' << format_double(intensity[i]) << '\n';
  }
}

void write_file_atomically(const std::filesystem::path& path,
                           const std::function<void(std::ostream&)>& body) {
  std::filesystem::path tmp = path;
  tmp += ".partial";
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) fail(ErrorKind::io, "cannot open " + tmp.string() + " for writing");
      body(out);
      out.flush();
      if (!out) fail(ErrorKind::io, "write to " + tmp.string() + " failed");
    }
    std::filesystem::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw;
  }
}

}  // namespace ghostdiff
