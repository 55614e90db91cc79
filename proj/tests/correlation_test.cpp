#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ghostdiff/correlation.hpp"
#include "ghostdiff/error.hpp"
#include "support/reference.hpp"

using namespace ghostdiff;

namespace {

constexpr double kLambda = 500e-9;
constexpr double kF3 = 0.5;

GhostSetup make_setup(const SourceSpectrum& s, const NSlit& slits, double r = 0.6, double k0 = 0) {
  return GhostSetup{s, make_beam_splitter(r), kernel_nslit(s.grid(), slits, 0.02),
                    make_detector_map(kF3, kLambda), k0};
}

ModeGrid medium_grid() { return build_grid(4e6, 801, kLambda); }

}  // namespace

TEST_CASE("cross_correlation on a three-mode grid") {
  const ModeGrid g = build_grid(1e5, 3, kLambda);
  const SourceSpectrum s(g, {1.0, 4.0, 9.0});
  const DiffractionKernel k(g, {0.1, 0.2, Complex(0.3, 0.4), 0.5, 0.6}, 0.25);
  const GhostSetup setup{s, make_beam_splitter(0.6), k, make_detector_map(kF3, kLambda), 0.0};
  // k = k_x(2) = +1e5, k0 = 0: offset k0 - k = -1 step -> index 1
  const Complex expected = 0.6 * 0.8 * 0.5 * 9.0 * Complex(0.2, 0.0);
  CHECK(std::abs(cross_correlation(setup, 1e5) - expected) <= 1e-15);
  CHECK(std::abs(cross_correlation(setup, 0.0) - 0.6 * 0.8 * 0.5 * 4.0 * Complex(0.3, 0.4)) <= 1e-15);
  try {
    cross_correlation(setup, 3e4);
    FAIL("expected off grid");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::off_grid);
  }
  // g1 = sqrt(N_k) f(k0 - k) / sqrt(sum N |f(k0 - k'')|^2)
  const double norm = 1.0 * 0.25 + 4.0 * 0.25 + 9.0 * 0.04;
  CHECK(std::abs(g1(setup, 1e5) - 3.0 * Complex(0.2, 0.0) / std::sqrt(norm)) <= 1e-15);
}

TEST_CASE("g1 agrees with normalized moments and is bounded") {
  std::mt19937_64 rng(7);
  const ModeGrid g = build_grid(1e5, 13, kLambda);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> n(g.count());
    for (auto& v : n) v = 0.1 + u(rng);
    const SourceSpectrum s(g, n);
    const DiffractionKernel k(g, normalize_kernel(testing::random_complex_vector(rng, 25, 1.0)),
                              std::uniform_real_distribution<double>(0.01, 1.0)(rng));
    const auto bs = make_beam_splitter(std::uniform_real_distribution<double>(0.1, 0.9)(rng));
    const std::size_t k0 = std::uniform_int_distribution<std::size_t>(0, g.count() - 1)(rng);
    const GhostSetup setup{s, bs, k, make_detector_map(kF3, kLambda), g.kx(k0)};
    const auto table = analytic_moments(bs, s, k);
    for (std::size_t i = 0; i < g.count(); ++i) {
      const Complex cd = table.cd(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k0));
      const Complex ref = cd / std::sqrt(table.cc[i] * table.dd[k0]);
      const Complex got = g1(setup, g.kx(i));
      CHECK(std::abs(got - ref) <= 1e-12);
      CHECK(std::abs(got) <= 1.0 + 1e-12);
      CHECK(std::abs(cross_correlation(setup, g.kx(i)) - cd) <= 1e-12 * std::abs(cd) + 1e-300);
    }
  }
}

TEST_CASE("g1 ignores splitter, transmissivity and photon-number scale") {
  const ModeGrid g = medium_grid();
  const auto s = gaussian_spectrum(g, 3.0, 5e5);
  const NSlit slits{2, 10e-6, 50e-6, 0};
  const auto base = make_setup(s, slits, 0.3);
  GhostSetup other = make_setup(s.scaled(17.0), slits, 0.9);
  other.kernel = kernel_nslit(g, slits, 0.7);
  for (std::size_t i = 300; i < 500; i += 7) {
    CHECK(std::abs(g1(base, g.kx(i)) - g1(other, g.kx(i))) <= 1e-13);
  }
}

TEST_CASE("single-mode source is fully coherent") {
  const ModeGrid g = medium_grid();
  const auto s = single_mode_spectrum(g, 420, 2.0);
  const auto setup = make_setup(s, NSlit{1, 10e-6, 0, 0}, 0.5, g.kx(410));
  CHECK(std::abs(g1(setup, g.kx(420))) == doctest::Approx(1.0).epsilon(1e-14));
  try {
    g1(setup, g.kx(421));
    FAIL("expected dark mode");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::dark_mode);
    CHECK(std::string(e.what()).find("dark mode") == 0);
  }
}

TEST_CASE("flat source reproduces the kernel shape") {
  const ModeGrid g = medium_grid();
  const auto setup = make_setup(flat_spectrum(g, 1.0), NSlit{3, 10e-6, 40e-6, 0});
  const double ref0 = std::abs(g1(setup, 0.0));
  const double f0 = std::abs(setup.kernel.between(g.center(), g.center()));
  for (std::size_t i = 0; i < g.count(); i += 13) {
    const double ratio = std::abs(g1(setup, g.kx(i))) / ref0;
    CHECK(std::abs(ratio - std::abs(setup.kernel.between(g.center(), i)) / f0) <= 1e-12);
  }
}

TEST_CASE("signal intensity profile") {
  std::mt19937_64 rng(3);
  const ModeGrid g = build_grid(1e6, 41, kLambda);
  std::vector<double> n(g.count());
  for (auto& v : n) v = std::uniform_real_distribution<double>(0, 2)(rng);
  const SourceSpectrum s(g, n);
  const auto setup = make_setup(s, NSlit{2, 10e-6, 30e-6, 0});
  const auto profile = signal_intensity_profile(setup);
  const auto ref = testing::convolved_intensity(setup.bs, s.mean_photons(), setup.kernel);
  for (std::size_t i = 0; i < g.count(); ++i) {
    CHECK(profile[i] == doctest::Approx(ref[i]).epsilon(1e-13));
    CHECK(signal_intensity(setup, g.kx(i)) == profile[i]);
  }
}

TEST_CASE("spectrum_fwhm") {
  const ModeGrid g = build_grid(4e6, 4001, kLambda);
  const auto s = gaussian_spectrum(g, 1.0, 3e5);
  CHECK(std::abs(spectrum_fwhm(s) - 2 * std::sqrt(2 * std::log(2.0)) * 3e5) <= 0.05 * g.spacing());
  CHECK(spectrum_fwhm(flat_spectrum(g, 1.0)) == doctest::Approx(8e6));
  const auto quality = approximation_quality(s, kernel_nslit(g, NSlit{1, 10e-6, 0, 0}, 0.01));
  CHECK(quality == doctest::Approx(spectrum_fwhm(s) / (4 * 1.3915573 / 10e-6)).epsilon(1e-3));
}

TEST_CASE("ghost_pattern_closed_form") {
  const DetectorMap det = make_detector_map(kF3, kLambda);
  const NSlit single{1, 10e-6, 0, 0};
  const NSlit dbl{2, 10e-6, 50e-6, 0};
  CHECK(ghost_pattern_closed_form(single, det, 0.0) == 1.0);
  CHECK(ghost_pattern_closed_form(dbl, det, 0.0) == 1.0);
  const double lf = kLambda * kF3;
  CHECK(std::abs(ghost_pattern_closed_form(single, det, lf / 10e-6)) <= 1e-15);
  CHECK(std::abs(ghost_pattern_closed_form(dbl, det, lf / (2 * 50e-6))) <= 1e-15);
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const double x = std::uniform_real_distribution<double>(-0.05, 0.05)(rng);
    const double u = std::numbers::pi * x * 10e-6 / lf;
    const double v = std::numbers::pi * x * 50e-6 / lf;
    CHECK(ghost_pattern_closed_form(dbl, det, x) ==
          doctest::Approx(std::sin(u) / u * std::sin(2 * v) / (2 * v)).epsilon(1e-12));
    CHECK(ghost_pattern_closed_form(dbl, det, -x) == ghost_pattern_closed_form(dbl, det, x));
  }
}

TEST_CASE("sweep_pattern") {
  const ModeGrid g = medium_grid();
  const auto setup = make_setup(flat_spectrum(g, 1.0), NSlit{2, 10e-6, 50e-6, 0});
  const double x_edge = kx_to_position(setup.detector, g.k_max());
  const auto p = sweep_pattern(setup, -0.9 * x_edge, 0.9 * x_edge, 301);
  REQUIRE(p.positions_x.size() == 301);
  CHECK(p.positions_x.front() == -0.9 * x_edge);
  CHECK(p.positions_x.back() == 0.9 * x_edge);
  const double x_step = kx_to_position(setup.detector, g.spacing());
  CHECK(p.max_snap_error <= 0.5 * x_step * (1 + 1e-9));
  for (std::size_t i = 0; i < p.g1.size(); ++i) {
    CHECK(g.index_of(p.kx[i]).has_value());
    CHECK(p.g1[i] == g1(setup, p.kx[i]));
    CHECK(p.signal_intensity[i] == signal_intensity(setup, p.kx[i]));
    const double x_mode = kx_to_position(setup.detector, p.kx[i]);
    CHECK(p.g1_approx[i] == ghost_pattern_closed_form(*setup.kernel.slit_geometry(), setup.detector, x_mode));
  }
  const auto again = sweep_pattern(setup, -0.9 * x_edge, 0.9 * x_edge, 301);
  CHECK(again.g1 == p.g1);

  try {
    sweep_pattern(setup, -2 * x_edge, 0.0, 11);
    FAIL("expected out-of-band sweep");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::sweep_out_of_band);
  }
  CHECK_THROWS_AS(sweep_pattern(setup, 0.0, 0.01, 1), Error);
  CHECK_THROWS_AS(sweep_pattern(setup, 0.01, 0.0, 10), Error);
}

TEST_CASE("local_minima") {
  const std::vector<double> a{3, 1, 2};
  CHECK(local_minima(a) == std::vector<std::size_t>{1});
  const std::vector<double> plateau{3, 1, 1, 1, 2, 0.5, 4};
  CHECK(local_minima(plateau) == std::vector<std::size_t>{2, 5});
  const std::vector<double> edge{0, 1, 2, 3};
  CHECK(local_minima(edge).empty());
  const std::vector<double> flat{1, 1, 1};
  CHECK(local_minima(flat).empty());
}

TEST_CASE("summarize a double-slit pattern") {
  const ModeGrid g = build_grid(4e6, 4001, kLambda);
  const auto setup = make_setup(flat_spectrum(g, 1.0), NSlit{2, 10e-6, 50e-6, 0});
  const auto p = sweep_pattern(setup, -0.02, 0.02, 2001);
  const auto sum = summarize(p);
  const double lf = kLambda * kF3;
  const double x_step = kx_to_position(setup.detector, g.spacing());
  CHECK(std::abs(sum.peak_x) <= x_step);
  REQUIRE(sum.first_zero_x.has_value());
  CHECK(std::abs(*sum.first_zero_x - lf / (2 * 50e-6)) <= x_step);
  REQUIRE(sum.fringe_spacing.has_value());
  CHECK(std::abs(*sum.fringe_spacing - lf / 50e-6) <= x_step);
}
