#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ghostdiff/diffraction.hpp"
#include "ghostdiff/modes.hpp"

namespace ghostdiff {

/// Lossless splitter with real amplitudes, r^2 + t^2 = 1.
///   b = r a + t a'   (signal)
///   c = -t a + r a'  (idler)
struct BeamSplitter {
  double r;
  double t;
};

BeamSplitter make_beam_splitter(double r);

/// Characteristic-function variables: xi1 on the signal (or diffracted)
/// modes, xi2 on the idler modes.
struct ChiArgument {
  ComplexVector xi1;
  ComplexVector xi2;
};

/// Second moments of the diffracted (d) and idler (c) modes.
/// cd(k, k') = <c_k^dagger d_k'>.
struct JointMomentTable {
  std::vector<double> cc;
  std::vector<double> dd;
  Eigen::MatrixXcd cd;
};

/// Normal characteristic function of the independent thermal input modes,
/// exp(-sum_k |xi_k|^2 <N_k>).
Complex chi_thermal(const SourceSpectrum& spectrum, std::span<const Complex> xi);

/// Joint characteristic function of signal and idler right after the
/// splitter; the vacuum port contributes a factor of one.
Complex chi_output(const BeamSplitter& bs, const SourceSpectrum& spectrum, const ChiArgument& arg);

/// Joint characteristic function of the diffracted signal modes and the idler
/// modes: the signal argument is replaced by sqrt(lambda_t) sum_k' xi_k' f(k'-k).
Complex chi_diffracted_joint(const BeamSplitter& bs, const SourceSpectrum& spectrum,
                             const DiffractionKernel& kernel, const ChiArgument& arg);

/// Closed-form moments:
///   cc[k]     = t^2 <N_k>
///   dd[k']    = r^2 lambda_t sum_k <N_k> |f(k'-k)|^2
///   cd[k][k'] = r t sqrt(lambda_t) <N_k> f(k'-k)
JointMomentTable analytic_moments(const BeamSplitter& bs, const SourceSpectrum& spectrum,
                                  const DiffractionKernel& kernel);

void require_same_grid(const SourceSpectrum& spectrum, const DiffractionKernel& kernel);

}  // namespace ghostdiff
