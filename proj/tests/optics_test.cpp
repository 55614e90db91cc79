#include <doctest.h>

#include <cmath>
#include <random>

#include "ghostdiff/error.hpp"
#include "ghostdiff/optics.hpp"
#include "support/reference.hpp"

using namespace ghostdiff;

namespace {

SourceSpectrum random_spectrum(std::mt19937_64& rng, const ModeGrid& grid, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> n(grid.count());
  for (auto& v : n) v = u(rng);
  return SourceSpectrum(grid, n);
}

DiffractionKernel random_kernel(std::mt19937_64& rng, const ModeGrid& grid, double lambda_t) {
  const auto v = testing::random_complex_vector(rng, 2 * grid.count() - 1, 1.0);
  return DiffractionKernel(grid, normalize_kernel(v), lambda_t);
}

}  // namespace

TEST_CASE("make_beam_splitter") {
  const auto bs = make_beam_splitter(0.6);
  CHECK(bs.r == 0.6);
  CHECK(bs.t == doctest::Approx(0.8).epsilon(1e-15));
  const auto half = make_beam_splitter(std::sqrt(0.5));
  CHECK(half.r * half.r + half.t * half.t == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(make_beam_splitter(0.0), Error);
  CHECK_THROWS_AS(make_beam_splitter(1.0), Error);
  CHECK_THROWS_AS(make_beam_splitter(-0.3), Error);
  CHECK_THROWS_AS(make_beam_splitter(std::nan("")), Error);
}

TEST_CASE("chi_thermal") {
  const ModeGrid g = build_grid(1e5, 3, 500e-9);
  const SourceSpectrum s(g, {0.0, 2.0, 0.0});
  CHECK(std::abs(chi_thermal(s, ComplexVector{0.0, 0.5, 0.0}) - std::exp(-0.5)) <= 1e-15);
  CHECK(chi_thermal(s, ComplexVector(3, 0.0)) == Complex(1.0, 0.0));
  CHECK(std::abs(chi_thermal(s, ComplexVector{7.0, 0.0, 3.0}) - 1.0) <= 0.0);
  CHECK_THROWS_AS(chi_thermal(s, ComplexVector(2, 0.0)), Error);
}

TEST_CASE("chi_output reduces to the input with scaled arguments") {
  std::mt19937_64 rng(5);
  const ModeGrid g = build_grid(1e5, 11, 500e-9);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = random_spectrum(rng, g, 0.0, 3.0);
    const auto bs = make_beam_splitter(std::uniform_real_distribution<double>(0.05, 0.95)(rng));
    const auto xi1 = testing::random_complex_vector(rng, g.count(), 0.3);
    const auto xi2 = testing::random_complex_vector(rng, g.count(), 0.3);
    ComplexVector scaled1(g.count()), scaled2(g.count()), mixed(g.count());
    for (std::size_t k = 0; k < g.count(); ++k) {
      scaled1[k] = bs.r * xi1[k];
      scaled2[k] = -bs.t * xi2[k];
      mixed[k] = bs.r * xi1[k] - bs.t * xi2[k];
    }
    const ComplexVector zero(g.count(), 0.0);
    CHECK(std::abs(chi_output(bs, s, {xi1, zero}) - chi_thermal(s, scaled1)) <= 1e-14);
    CHECK(std::abs(chi_output(bs, s, {zero, xi2}) - chi_thermal(s, scaled2)) <= 1e-14);
    CHECK(std::abs(chi_output(bs, s, {xi1, xi2}) - chi_thermal(s, mixed)) <= 1e-14);
    const double mag = std::abs(chi_output(bs, s, {xi1, xi2}));
    CHECK(mag <= 1.0);
    CHECK(mag > 0.0);
  }
}

TEST_CASE("chi_diffracted_joint equals chi_output under the signal substitution") {
  std::mt19937_64 rng(11);
  const ModeGrid g = build_grid(1e5, 9, 500e-9);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = random_spectrum(rng, g, 0.0, 2.0);
    const auto k = random_kernel(rng, g, std::uniform_real_distribution<double>(0.01, 1.0)(rng));
    const auto bs = make_beam_splitter(std::uniform_real_distribution<double>(0.05, 0.95)(rng));
    const auto xi1 = testing::random_complex_vector(rng, g.count(), 0.4);
    const auto xi2 = testing::random_complex_vector(rng, g.count(), 0.4);
    const auto pre = testing::substitute_signal_argument(k, xi1);
    CHECK(std::abs(chi_diffracted_joint(bs, s, k, {xi1, xi2}) - chi_output(bs, s, {pre, xi2})) <= 1e-14);
  }
}

TEST_CASE("analytic moments are the mixed derivatives of the joint characteristic function") {
  std::mt19937_64 rng(23);
  const ModeGrid g = build_grid(1e5, 7, 500e-9);
  for (int trial = 0; trial < 5; ++trial) {
    const auto s = random_spectrum(rng, g, 0.5, 2.0);
    const auto k = random_kernel(rng, g, 0.3);
    const auto bs = make_beam_splitter(0.4 + 0.1 * trial);
    const auto table = analytic_moments(bs, s, k);
    const double peak = table.cd.cwiseAbs().maxCoeff();
    auto chi = [&](const ChiArgument& a) { return chi_diffracted_joint(bs, s, k, a); };
    for (std::size_t ki = 0; ki < g.count(); ++ki) {
      for (std::size_t k0 = 0; k0 < g.count(); ++k0) {
        const Complex fd = testing::mixed_partial_at_origin(chi, g.count(), ki, k0, 1e-4);
        const Complex cd = table.cd(static_cast<Eigen::Index>(ki), static_cast<Eigen::Index>(k0));
        CHECK(std::abs(fd - cd) <= 1e-6 * peak);
      }
    }
  }
}

TEST_CASE("analytic moments: Cauchy-Schwarz and energy bounds") {
  std::mt19937_64 rng(31);
  const ModeGrid g = build_grid(1e5, 15, 500e-9);
  for (int trial = 0; trial < 40; ++trial) {
    const auto s = random_spectrum(rng, g, 0.0, 10.0);
    const double lambda_t = std::uniform_real_distribution<double>(0.01, 1.0)(rng);
    const auto k = random_kernel(rng, g, lambda_t);
    const auto bs = make_beam_splitter(std::uniform_real_distribution<double>(0.05, 0.95)(rng));
    const auto table = analytic_moments(bs, s, k);
    double total_n = 0;
    double total_dd = 0;
    for (std::size_t i = 0; i < g.count(); ++i) {
      total_n += s[i];
      total_dd += table.dd[i];
      CHECK(table.cc[i] == doctest::Approx(bs.t * bs.t * s[i]).epsilon(1e-15));
    }
    CHECK(total_dd <= bs.r * bs.r * lambda_t * total_n * (1 + 1e-12));
    for (Eigen::Index i = 0; i < table.cd.rows(); ++i) {
      for (Eigen::Index j = 0; j < table.cd.cols(); ++j) {
        CHECK(std::norm(table.cd(i, j)) <= table.cc[i] * table.dd[j] * (1 + 1e-12));
      }
    }
  }
}

TEST_CASE("analytic moments: direct intensity loop") {
  std::mt19937_64 rng(41);
  const ModeGrid g = build_grid(1e5, 21, 500e-9);
  const auto s = random_spectrum(rng, g, 0.0, 4.0);
  const auto k = random_kernel(rng, g, 0.2);
  const auto bs = make_beam_splitter(0.7);
  const auto table = analytic_moments(bs, s, k);
  const auto ref = testing::convolved_intensity(bs, s.mean_photons(), k);
  for (std::size_t i = 0; i < g.count(); ++i) CHECK(table.dd[i] == doctest::Approx(ref[i]).epsilon(1e-13));
}

TEST_CASE("grid mismatch is rejected") {
  const ModeGrid a = build_grid(1e5, 9, 500e-9);
  const ModeGrid b = build_grid(2e5, 9, 500e-9);
  const auto s = flat_spectrum(a, 1.0);
  const DiffractionKernel k(b, ComplexVector(17, 0.25), 0.5);
  try {
    analytic_moments(make_beam_splitter(0.5), s, k);
    FAIL("expected grid mismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::grid_mismatch);
  }
  CHECK_THROWS_AS(chi_diffracted_joint(make_beam_splitter(0.5), s, k,
                                       {ComplexVector(9, 0.0), ComplexVector(9, 0.0)}),
                  Error);
}
