#include "ghostdiff/diffraction.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "ghostdiff/error.hpp"

namespace ghostdiff {
namespace {

double sinc(double u) { return u == 0.0 ? 1.0 : std::sin(u) / u; }

// sin(N phi) / sin(phi), continued through the principal maxima.
double grating_factor(int n, double phi) {
  if (n == 1) return 1.0;
  const double s = std::sin(phi);
  if (std::abs(s) < 1e-9) return n * std::cos(n * phi) / std::cos(phi);
  return std::sin(n * phi) / s;
}

// Midpoint rule for int_{x0}^{x1} exp(-i kx x) dx. The phasor is advanced by
// multiplication and re-anchored every 128 nodes to bound rounding drift.
Complex midpoint_interval(double x0, double x1, double kx, int n) {
  const double h = (x1 - x0) / n;
  const Complex step = std::polar(1.0, -kx * h);
  Complex phasor;
  Complex sum = 0.0;
  for (int j = 0; j < n; ++j) {
    if (j % 128 == 0) phasor = std::polar(1.0, -kx * (x0 + (j + 0.5) * h));
    sum += phasor;
    phasor *= step;
  }
  return sum * h;
}

void check_resolved(const ModeGrid& grid, double feature_width) {
  const double limit = kTwoPi / (5.0 * feature_width);
  if (grid.spacing() > limit) {
    fail(ErrorKind::unresolved_kernel,
         "unresolved kernel: grid spacing " + std::to_string(grid.spacing()) +
             " rad/m exceeds 2*pi/(5a) = " + std::to_string(limit) + " rad/m");
  }
}

void check_lambda(double lambda_t) {
  require(std::isfinite(lambda_t) && lambda_t > 0 && lambda_t <= 1,
          "transmissivity must lie in (0, 1]");
}

}  // namespace

void validate(const NSlit& slits) {
  require(slits.n_slits >= 1, "slit count must be at least 1");
  require(std::isfinite(slits.slit_width) && slits.slit_width > 0, "slit width must be positive");
  require(std::isfinite(slits.center_x), "slit centre must be finite");
  if (slits.n_slits > 1) {
    require(std::isfinite(slits.slit_separation) && slits.slit_separation > slits.slit_width,
            "slit separation must exceed slit width for more than one slit");
  } else {
    require(std::isfinite(slits.slit_separation) && slits.slit_separation >= 0,
            "slit separation must be non-negative");
  }
}

// --- Mask -----------------------------------------------------------------

Mask::Mask(std::size_t rows, std::size_t cols, double pixel_pitch, std::vector<std::uint8_t> open)
    : rows_(rows), cols_(cols), pitch_(pixel_pitch), open_(std::move(open)) {
  require(rows_ > 0 && cols_ > 0, "mask must have at least one row and column");
  require(open_.size() == rows_ * cols_, "mask pixel count does not match its shape");
  require(std::isfinite(pitch_) && pitch_ > 0, "mask pixel pitch must be positive");
  require(open_pixels() > 0, "mask must have at least one open pixel");
}

Mask Mask::parse(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::io, "mask file is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::string key = "pitch=";
  if (line.rfind(key, 0) != 0) fail(ErrorKind::io, "mask header must be 'pitch=<meters>'");
  double pitch = 0;
  try {
    std::size_t used = 0;
    pitch = std::stod(line.substr(key.size()), &used);
    if (used != line.size() - key.size()) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    fail(ErrorKind::io, "mask header has an invalid pitch: '" + line + "'");
  }

  std::vector<std::uint8_t> open;
  std::size_t cols = 0;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (cols == 0) cols = line.size();
    if (line.size() != cols) {
      fail(ErrorKind::io, "mask row " + std::to_string(rows + 1) + " has " +
                              std::to_string(line.size()) + " columns, expected " +
                              std::to_string(cols));
    }
    for (char c : line) {
      if (c != '0' && c != '1') {
        fail(ErrorKind::io, "mask row " + std::to_string(rows + 1) + " contains '" +
                                std::string(1, c) + "'");
      }
      open.push_back(c == '1' ? 1 : 0);
    }
    ++rows;
  }
  if (rows == 0) fail(ErrorKind::io, "mask has no pixel rows");
  return Mask(rows, cols, pitch, std::move(open));
}

Mask Mask::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open mask file " + path.string());
  return parse(in);
}

std::size_t Mask::open_pixels() const noexcept {
  return static_cast<std::size_t>(std::count(open_.begin(), open_.end(), std::uint8_t{1}));
}

double Mask::open_area() const noexcept {
  return static_cast<double>(open_pixels()) * pitch_ * pitch_;
}

double Mask::widest_run() const noexcept {
  std::size_t best = 0;
  for (std::size_t r = 0; r < rows_; ++r) {
    std::size_t run = 0;
    for (std::size_t c = 0; c < cols_; ++c) {
      run = is_open(r, c) ? run + 1 : 0;
      best = std::max(best, run);
    }
  }
  return static_cast<double>(best) * pitch_;
}

double Mask::pixel_left_edge(std::size_t col) const noexcept {
  return (static_cast<double>(col) - 0.5 * static_cast<double>(cols_)) * pitch_;
}

double Mask::row_center_y(std::size_t row) const noexcept {
  return (0.5 * static_cast<double>(rows_ - 1) - static_cast<double>(row)) * pitch_;
}

// --- transmissivity ---------------------------------------------------------

double transmissivity(const Aperture& aperture, double plane_extent) {
  require(std::isfinite(plane_extent) && plane_extent > 0, "plane extent must be positive");
  return std::visit(
      [&](const auto& ap) -> double {
        using T = std::decay_t<decltype(ap)>;
        if constexpr (std::is_same_v<T, NSlit>) {
          validate(ap);
          require(ap.open_span() <= plane_extent,
                  "aperture open extent exceeds the diffraction plane");
          return ap.n_slits * ap.slit_width / plane_extent;
        } else {
          const double side = std::max(ap.rows(), ap.cols()) * ap.pixel_pitch();
          require(side <= plane_extent * (1 + 1e-12),
                  "mask extent exceeds the diffraction plane");
          return std::min(1.0, ap.open_area() / (plane_extent * plane_extent));
        }
      },
      aperture);
}

// --- DiffractionKernel --------------------------------------------------------

DiffractionKernel::DiffractionKernel(ModeGrid grid, ComplexVector values, double lambda_t,
                                     std::optional<NSlit> slit_geometry)
    : grid_(grid), values_(std::move(values)), lambda_t_(lambda_t), slits_(slit_geometry) {
  require(values_.size() == 2 * grid_.count() - 1,
          "kernel must hold 2M-1 offset samples for an M-point grid");
  check_lambda(lambda_t_);
}

double DiffractionKernel::normalization_sum() const noexcept {
  double sum = 0;
  for (const auto& v : values_) sum += std::norm(v);
  return sum;
}

double DiffractionKernel::main_lobe_fwhm() const noexcept {
  const std::size_t c = zero_offset_index();
  const double half = 0.5 * std::norm(values_[c]);
  const double h = grid_.spacing();
  auto crossing = [&](int dir) {
    for (std::size_t s = 1; s <= c; ++s) {
      const double inner = std::norm(values_[c + dir * static_cast<std::ptrdiff_t>(s - 1)]);
      const double outer = std::norm(values_[c + dir * static_cast<std::ptrdiff_t>(s)]);
      if (outer <= half) {
        const double frac = (inner - half) / (inner - outer);
        return (static_cast<double>(s - 1) + frac) * h;
      }
    }
    return static_cast<double>(c) * h;
  };
  return crossing(+1) + crossing(-1);
}

DiffractionKernel DiffractionKernel::rescaled(double factor) const {
  ComplexVector v(values_);
  for (auto& x : v) x *= factor;
  return DiffractionKernel(grid_, std::move(v), lambda_t_, slits_);
}

ComplexVector normalize_kernel(std::span<const Complex> values) {
  double sum = 0;
  for (const auto& v : values) sum += std::norm(v);
  require(sum > 0 && std::isfinite(sum), "cannot normalize an all-zero kernel");
  const double scale = 1.0 / std::sqrt(sum);
  ComplexVector out(values.begin(), values.end());
  for (auto& v : out) v *= scale;
  return out;
}

DiffractionKernel kernel_nslit(const ModeGrid& grid, const NSlit& slits, double lambda_t) {
  validate(slits);
  check_lambda(lambda_t);
  check_resolved(grid, slits.slit_width);

  const std::size_t n_offsets = 2 * grid.count() - 1;
  ComplexVector raw(n_offsets);
  const double zero = static_cast<double>(grid.count() - 1);
  for (std::size_t j = 0; j < n_offsets; ++j) {
    const double kappa = (static_cast<double>(j) - zero) * grid.spacing();
    const double shape = sinc(0.5 * kappa * slits.slit_width) *
                         grating_factor(slits.n_slits, 0.5 * kappa * slits.slit_separation);
    raw[j] = slits.center_x == 0.0 ? Complex(shape, 0.0)
                                   : shape * std::polar(1.0, -kappa * slits.center_x);
  }
  return DiffractionKernel(grid, normalize_kernel(raw), lambda_t, slits);
}

Complex fraunhofer_integral(const Aperture& aperture, double kx, double ky, int quad_points) {
  require(quad_points >= 64, "quadrature needs at least 64 points per open interval");
  return std::visit(
      [&](const auto& ap) -> Complex {
        using T = std::decay_t<decltype(ap)>;
        if constexpr (std::is_same_v<T, NSlit>) {
          if (ky != 0.0) return 0.0;
          Complex sum = 0.0;
          for (int s = 0; s < ap.n_slits; ++s) {
            const double c = ap.center_x + (s - 0.5 * (ap.n_slits - 1)) * ap.slit_separation;
            sum += midpoint_interval(c - 0.5 * ap.slit_width, c + 0.5 * ap.slit_width, kx,
                                     quad_points);
          }
          return sum;
        } else {
          // One y node per pixel row; exact on the k_y = 0 line.
          Complex sum = 0.0;
          for (std::size_t r = 0; r < ap.rows(); ++r) {
            Complex row = 0.0;
            std::size_t c = 0;
            while (c < ap.cols()) {
              if (!ap.is_open(r, c)) {
                ++c;
                continue;
              }
              const std::size_t start = c;
              while (c < ap.cols() && ap.is_open(r, c)) ++c;
              row += midpoint_interval(ap.pixel_left_edge(start), ap.pixel_left_edge(c), kx,
                                       quad_points);
            }
            if (row != 0.0) sum += row * ap.pixel_pitch() * std::polar(1.0, -ky * ap.row_center_y(r));
          }
          return sum;
        }
      },
      aperture);
}

DiffractionKernel kernel_quadrature(const ModeGrid& grid, const Aperture& aperture,
                                    double lambda_t, int quad_points) {
  require(quad_points >= 64, "quadrature needs at least 64 points per open interval");
  check_lambda(lambda_t);
  std::optional<NSlit> geometry;
  if (const auto* slits = std::get_if<NSlit>(&aperture)) {
    validate(*slits);
    check_resolved(grid, slits->slit_width);
    geometry = *slits;
  } else {
    check_resolved(grid, std::get<Mask>(aperture).widest_run());
  }

  const std::size_t n_offsets = 2 * grid.count() - 1;
  ComplexVector raw(n_offsets);
  const double zero = static_cast<double>(grid.count() - 1);
  for (std::size_t j = 0; j < n_offsets; ++j) {
    const double kappa = (static_cast<double>(j) - zero) * grid.spacing();
    raw[j] = fraunhofer_integral(aperture, kappa, 0.0, quad_points);
  }
  return DiffractionKernel(grid, normalize_kernel(raw), lambda_t, geometry);
}

}  // namespace ghostdiff
