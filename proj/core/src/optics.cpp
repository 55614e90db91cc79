#include "ghostdiff/optics.hpp"

#include <cmath>

#include "ghostdiff/error.hpp"

namespace ghostdiff {
namespace {

void require_length(std::span<const Complex> xi, std::size_t m, const char* what) {
  if (xi.size() != m) {
    fail(ErrorKind::invalid_argument, std::string(what) + " has length " +
                                          std::to_string(xi.size()) + ", expected " +
                                          std::to_string(m));
  }
}

}  // namespace

BeamSplitter make_beam_splitter(double r) {
  require(std::isfinite(r) && r > 0 && r < 1, "beam splitter r must lie in (0, 1)");
  return BeamSplitter{r, std::sqrt(1.0 - r * r)};
}

void require_same_grid(const SourceSpectrum& spectrum, const DiffractionKernel& kernel) {
  if (!(spectrum.grid() == kernel.grid())) {
    fail(ErrorKind::grid_mismatch, "grid mismatch between source spectrum and kernel");
  }
}

Complex chi_thermal(const SourceSpectrum& spectrum, std::span<const Complex> xi) {
  require_length(xi, spectrum.size(), "xi");
  double exponent = 0;
  for (std::size_t k = 0; k < xi.size(); ++k) exponent += std::norm(xi[k]) * spectrum[k];
  return std::exp(-exponent);
}

Complex chi_output(const BeamSplitter& bs, const SourceSpectrum& spectrum, const ChiArgument& arg) {
  require_length(arg.xi1, spectrum.size(), "xi1");
  require_length(arg.xi2, spectrum.size(), "xi2");
  double exponent = 0;
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    exponent += spectrum[k] * std::norm(bs.r * arg.xi1[k] - bs.t * arg.xi2[k]);
  }
  return std::exp(-exponent);
}

Complex chi_diffracted_joint(const BeamSplitter& bs, const SourceSpectrum& spectrum,
                             const DiffractionKernel& kernel, const ChiArgument& arg) {
  require_same_grid(spectrum, kernel);
  const std::size_t m = spectrum.size();
  require_length(arg.xi1, m, "xi1");
  require_length(arg.xi2, m, "xi2");

  const double amp = bs.r * std::sqrt(kernel.transmissivity());
  double exponent = 0;
  for (std::size_t k = 0; k < m; ++k) {
    if (spectrum[k] == 0) continue;
    Complex conv = 0.0;
    for (std::size_t kp = 0; kp < m; ++kp) conv += arg.xi1[kp] * kernel.between(kp, k);
    exponent += spectrum[k] * std::norm(amp * conv - bs.t * arg.xi2[k]);
  }
  return std::exp(-exponent);
}

JointMomentTable analytic_moments(const BeamSplitter& bs, const SourceSpectrum& spectrum,
                                  const DiffractionKernel& kernel) {
  require_same_grid(spectrum, kernel);
  const std::size_t m = spectrum.size();
  const double lambda_t = kernel.transmissivity();
  const double cross = bs.r * bs.t * std::sqrt(lambda_t);

  JointMomentTable table;
  table.cc.resize(m);
  table.dd.assign(m, 0.0);
  table.cd.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));

  for (std::size_t k = 0; k < m; ++k) {
    table.cc[k] = bs.t * bs.t * spectrum[k];
    for (std::size_t kp = 0; kp < m; ++kp) {
      table.cd(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(kp)) =
          cross * spectrum[k] * kernel.between(kp, k);
    }
  }
  for (std::size_t kp = 0; kp < m; ++kp) {
    double sum = 0;
    for (std::size_t k = 0; k < m; ++k) sum += spectrum[k] * std::norm(kernel.between(kp, k));
    table.dd[kp] = bs.r * bs.r * lambda_t * sum;
  }
  return table;
}

}  // namespace ghostdiff
