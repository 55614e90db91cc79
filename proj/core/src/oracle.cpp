#include "ghostdiff/oracle.hpp"

#include <cmath>

#include "ghostdiff/error.hpp"
#include "ghostdiff/parallel.hpp"

namespace ghostdiff {
namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

ThermalFieldSampler::ThermalFieldSampler(const SourceSpectrum& spectrum, std::uint64_t seed,
                                         std::uint64_t stream)
    : scale_(spectrum.size()), engine_(seeded_engine(seed, stream)) {
  for (std::size_t k = 0; k < scale_.size(); ++k) scale_[k] = std::sqrt(0.5 * spectrum[k]);
}

void ThermalFieldSampler::draw(ComplexVector& out) {
  out.resize(scale_.size());
  for (std::size_t k = 0; k < scale_.size(); ++k) {
    if (scale_[k] == 0) {
      out[k] = 0.0;
      continue;
    }
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    out[k] = scale_[k] * Complex(re, im);
  }
}

FieldSample ThermalFieldSampler::draw() {
  FieldSample s;
  draw(s.amplitudes);
  return s;
}

FieldSample sample_thermal_field(const SourceSpectrum& spectrum, std::uint64_t seed) {
  return ThermalFieldSampler(spectrum, seed).draw();
}

PropagatedField propagate(const FieldSample& sample, const BeamSplitter& bs,
                          const DiffractionKernel& kernel) {
  const std::size_t m = kernel.grid().count();
  if (sample.amplitudes.size() != m) {
    fail(ErrorKind::grid_mismatch, "field sample length does not match the kernel grid");
  }
  PropagatedField out;
  out.idler.resize(m);
  out.diffracted.assign(m, 0.0);
  const double amp = std::sqrt(kernel.transmissivity()) * bs.r;
  for (std::size_t k = 0; k < m; ++k) out.idler[k] = -bs.t * sample.amplitudes[k];
  for (std::size_t kp = 0; kp < m; ++kp) {
    Complex sum = 0.0;
    for (std::size_t k = 0; k < m; ++k) sum += kernel.between(kp, k) * sample.amplitudes[k];
    out.diffracted[kp] = amp * sum;
  }
  return out;
}

void ComplexAccumulator::merge(const ComplexAccumulator& other) noexcept {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const Complex delta = other.mean_ - mean_;
  mean_ += delta * (nb / n);
  m2_ += other.m2_ + std::norm(delta) * na * nb / n;
  n_ += other.n_;
}

OracleEstimate ComplexAccumulator::estimate() const noexcept {
  return OracleEstimate{mean_, n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0, n_};
}

MonteCarloMoments estimate_moments(const SourceSpectrum& spectrum, const BeamSplitter& bs,
                                   const DiffractionKernel& kernel,
                                   std::span<const double> probe_k, double k0_prime,
                                   std::size_t n_samples, std::uint64_t seed) {
  require_same_grid(spectrum, kernel);
  require(n_samples >= 2, "Monte Carlo estimate needs at least two samples");
  const auto& grid = spectrum.grid();
  const std::size_t k0 = grid.require_index(k0_prime);
  std::vector<std::size_t> probes;
  for (double k : probe_k) probes.push_back(grid.require_index(k));

  // Only lit modes contribute to d_k0; the weights fold in r sqrt(lambda_t).
  std::vector<std::size_t> lit;
  std::vector<Complex> weight;
  const double amp = bs.r * std::sqrt(kernel.transmissivity());
  for (std::size_t k = 0; k < grid.count(); ++k) {
    if (spectrum[k] > 0) {
      lit.push_back(k);
      weight.push_back(amp * kernel.between(k0, k));
    }
  }

  struct Partial {
    std::vector<ComplexAccumulator> cd, cc;
    ComplexAccumulator dd;
  };
  const std::size_t n_blocks = (n_samples + kBlockSize - 1) / kBlockSize;
  std::vector<Partial> partial(n_blocks);

  parallel_for(n_blocks, [&](std::size_t b) {
    ThermalFieldSampler sampler(spectrum, seed, b);
    Partial& acc = partial[b];
    acc.cd.resize(probes.size());
    acc.cc.resize(probes.size());
    ComplexVector alpha;
    const std::size_t begin = b * kBlockSize;
    const std::size_t end = std::min(n_samples, begin + kBlockSize);
    for (std::size_t s = begin; s < end; ++s) {
      sampler.draw(alpha);
      Complex d = 0.0;
      for (std::size_t i = 0; i < lit.size(); ++i) d += weight[i] * alpha[lit[i]];
      acc.dd.add(std::norm(d));
      for (std::size_t p = 0; p < probes.size(); ++p) {
        const Complex c = -bs.t * alpha[probes[p]];
        acc.cd[p].add(std::conj(c) * d);
        acc.cc[p].add(std::norm(c));
      }
    }
  });

  Partial total;
  total.cd.resize(probes.size());
  total.cc.resize(probes.size());
  for (const auto& part : partial) {
    total.dd.merge(part.dd);
    for (std::size_t p = 0; p < probes.size(); ++p) {
      total.cd[p].merge(part.cd[p]);
      total.cc[p].merge(part.cc[p]);
    }
  }

  MonteCarloMoments out;
  out.dd = total.dd.estimate();
  for (std::size_t p = 0; p < probes.size(); ++p) {
    out.cd.push_back(total.cd[p].estimate());
    out.cc.push_back(total.cc[p].estimate());
  }
  return out;
}

OracleEstimate estimate_cross_correlation(const SourceSpectrum& spectrum, const BeamSplitter& bs,
                                          const DiffractionKernel& kernel, double k,
                                          double k0_prime, std::size_t n_samples,
                                          std::uint64_t seed) {
  require(n_samples >= 10000, "cross-correlation estimate needs at least 1e4 samples");
  const double probe[] = {k};
  return estimate_moments(spectrum, bs, kernel, probe, k0_prime, n_samples, seed).cd.front();
}

JointMomentTable exact_moments_by_matrix(const SourceSpectrum& spectrum, const BeamSplitter& bs,
                                         const DiffractionKernel& kernel) {
  require_same_grid(spectrum, kernel);
  const auto m = static_cast<Eigen::Index>(spectrum.size());

  // d = D alpha with D = r sqrt(lambda_t) F, F(k', k) = f(k' - k).
  Eigen::MatrixXcd diffraction(m, m);
  const double amp = bs.r * std::sqrt(kernel.transmissivity());
  for (Eigen::Index kp = 0; kp < m; ++kp) {
    for (Eigen::Index k = 0; k < m; ++k) {
      diffraction(kp, k) = amp * kernel.between(static_cast<std::size_t>(kp), static_cast<std::size_t>(k));
    }
  }
  // c = C alpha with C = diag(-t).
  const Eigen::VectorXcd idler = Eigen::VectorXcd::Constant(m, Complex(-bs.t, 0.0));
  Eigen::VectorXd covariance(m);
  for (Eigen::Index k = 0; k < m; ++k) covariance(k) = spectrum[static_cast<std::size_t>(k)];

  JointMomentTable table;
  // <c^dagger d> = conj(C) Sigma D^T, <c^dagger c> = diag(C Sigma C^H),
  // <d^dagger d> = diag(D Sigma D^H).
  const Eigen::VectorXcd left = idler.conjugate().cwiseProduct(covariance.cast<Complex>());
  table.cd = left.asDiagonal() * diffraction.transpose();

  const Eigen::VectorXd cc = idler.cwiseAbs2().cwiseProduct(covariance);
  const Eigen::VectorXd dd =
      (diffraction * covariance.asDiagonal()).cwiseProduct(diffraction.conjugate()).rowwise().sum().real();
  table.cc.assign(cc.data(), cc.data() + m);
  table.dd.assign(dd.data(), dd.data() + m);
  return table;
}

}  // namespace ghostdiff
