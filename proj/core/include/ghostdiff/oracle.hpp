#pragma once

// Independent ground truth for the closed-form moments.
//
// Thermal light has a positive Gaussian Glauber P-function, so every
// normally ordered moment of the quantum field equals the corresponding
// moment of a classical ensemble of complex Gaussian amplitudes with
// E|alpha_k|^2 = <N_k>. The vacuum input port contributes nothing to normally
// ordered moments and is dropped. Two engines are provided:
//
//  * exact_moments_by_matrix composes the linear maps of propagate() with the
//    diagonal input covariance diag(<N_k>);
//  * the Monte Carlo estimators sample the classical ensemble.
//
// Fields are propagated literally through the splitter matrix, so the idler is
// c = -t a and every <c^dagger d> carries the factor kIdlerPhase = -1 relative
// to the sign-free closed form. Comparisons apply it explicitly.
//
// Random streams: samples are drawn in fixed blocks of kBlockSize; block b is
// generated by std::mt19937_64 seeded from seed_seq{seed, b} and converted
// to normal deviates by Boost's ziggurat sampler. Blocks are
// independent of the worker that runs them and are merged in block order, so
// results depend only on (seed, n_samples).

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <boost/random/normal_distribution.hpp>

#include "ghostdiff/diffraction.hpp"
#include "ghostdiff/modes.hpp"
#include "ghostdiff/optics.hpp"

namespace ghostdiff {

inline constexpr double kIdlerPhase = -1.0;
inline constexpr std::size_t kBlockSize = 4096;

struct FieldSample {
  ComplexVector amplitudes;
};

/// Stream of circular complex Gaussian fields with E[alpha_k] = 0,
/// E|alpha_k|^2 = <N_k>, E[alpha_k^2] = 0.
class ThermalFieldSampler {
 public:
  ThermalFieldSampler(const SourceSpectrum& spectrum, std::uint64_t seed, std::uint64_t stream = 0);

  void draw(ComplexVector& out);
  FieldSample draw();

 private:
  std::vector<double> scale_;
  std::mt19937_64 engine_;
  boost::random::normal_distribution<double> normal_;
};

FieldSample sample_thermal_field(const SourceSpectrum& spectrum, std::uint64_t seed);

struct PropagatedField {
  ComplexVector diffracted;
  ComplexVector idler;
};

/// b = r alpha, c = -t alpha, d_k' = sqrt(lambda_t) sum_k f(k'-k) b_k.
PropagatedField propagate(const FieldSample& sample, const BeamSplitter& bs,
                          const DiffractionKernel& kernel);

struct OracleEstimate {
  Complex mean;
  double std_error = 0;
  std::size_t n_samples = 0;
};

/// Streaming mean/variance of complex samples; merge() combines partial
/// results (Chan et al.), so block results can be reduced in any grouping.
class ComplexAccumulator {
 public:
  void add(Complex z) noexcept {
    ++n_;
    const Complex delta = z - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += std::real(std::conj(delta) * (z - mean_));
  }
  void merge(const ComplexAccumulator& other) noexcept;
  std::size_t count() const noexcept { return n_; }
  Complex mean() const noexcept { return mean_; }
  /// Sample variance E|z - mean|^2 with the n-1 denominator.
  double variance() const noexcept { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  OracleEstimate estimate() const noexcept;

 private:
  std::size_t n_ = 0;
  Complex mean_ = 0.0;
  double m2_ = 0;
};

/// Monte Carlo moments for a fixed diffracted mode k0 and a set of idler
/// probe modes, all from one shared sample stream.
struct MonteCarloMoments {
  std::vector<OracleEstimate> cd;  ///< <c_probe^dagger d_k0>, literal phase
  std::vector<OracleEstimate> cc;  ///< <c_probe^dagger c_probe>
  OracleEstimate dd;               ///< <d_k0^dagger d_k0>
};

MonteCarloMoments estimate_moments(const SourceSpectrum& spectrum, const BeamSplitter& bs,
                                   const DiffractionKernel& kernel,
                                   std::span<const double> probe_k, double k0_prime,
                                   std::size_t n_samples, std::uint64_t seed);

/// Sample mean of conj(c_k) d_k0 over n_samples >= 1e4 independent fields.
OracleEstimate estimate_cross_correlation(const SourceSpectrum& spectrum, const BeamSplitter& bs,
                                          const DiffractionKernel& kernel, double k,
                                          double k0_prime, std::size_t n_samples,
                                          std::uint64_t seed);

/// Exact second moments from matrix composition of the propagation maps;
/// never evaluates the closed forms. cd carries kIdlerPhase.
JointMomentTable exact_moments_by_matrix(const SourceSpectrum& spectrum, const BeamSplitter& bs,
                                         const DiffractionKernel& kernel);

}  // namespace ghostdiff
