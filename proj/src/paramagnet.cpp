#include "texlab/paramagnet.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "texlab/errors.hpp"

namespace texlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;
constexpr double kConvergence = 1e-8;
constexpr std::size_t kMaxPoints = std::size_t{1} << 24;
constexpr double kSingularCut = 1.0 - 1e-6;
constexpr double kHalfWindow = 5e-5;

void check_x(double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw ValidationError("x", "must be finite and >= 0");
}

double sech(double x) { return 1.0 / std::cosh(x); }

// Mean of ln((1 + c cos phi)/2) over a period, trapezoid with doubling.
double periodic_mean(double c, std::size_t points) {
  const auto f = [c](double phi) { return std::log((1.0 + c * std::cos(phi)) / 2.0); };
  std::size_t n = points;
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) sum += f(2.0 * kPi * static_cast<double>(k) / n);
  double prev = sum / static_cast<double>(n);
  while (n < kMaxPoints) {
    // Doubling only needs the new midpoints.
    for (std::size_t k = 0; k < n; ++k) {
      sum += f(2.0 * kPi * (static_cast<double>(k) + 0.5) / n);
    }
    n *= 2;
    const double next = sum / static_cast<double>(n);
    if (std::abs(next - prev) <= kConvergence) return next;
    prev = next;
  }
  throw ConvergenceError("trapezoid did not converge within " + std::to_string(kMaxPoints) +
                         " points");
}

// Same mean for c close to 1. With u = phi - pi the integrand is
// ln((1 - c cos u)/2); near u = 0 it is ln(a + b u^2), a = (1-c)/2, b = c/4.
double singular_mean(double c) {
  const double h = kHalfWindow;
  const double a = (1.0 - c) / 2.0;
  const double b = c / 4.0;
  double window = 2.0 * (h * std::log(a + b * h * h) - 2.0 * h);
  if (a > 0.0) window += 4.0 * std::sqrt(a / b) * std::atan(h * std::sqrt(b / a));

  const auto f = [c](double u) { return std::log((1.0 - c * std::cos(u)) / 2.0); };
  double outside = 0.0;
  double lo = h;
  while (lo < kPi) {
    const double hi = std::min(kPi, lo * 4.0);
    double err = 0.0;
    outside += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-14,
                                                                             &err);
    lo = hi;
  }
  return (window + 2.0 * outside) / (2.0 * kPi);
}

}  // namespace

DensityOperator gibbs_state(double x) {
  check_x(x);
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.0 / (1.0 + std::exp(-2.0 * x));
  m(1, 1) = 1.0 / (1.0 + std::exp(2.0 * x));
  return DensityOperator(m);
}

Ket coherent_gibbs_ket(const CoherentGibbsQubit& s) {
  check_x(s.x);
  Ket v(2);
  v(0) = std::sqrt(1.0 / (1.0 + std::exp(-2.0 * s.x)));
  v(1) = std::polar(std::sqrt(1.0 / (1.0 + std::exp(2.0 * s.x))), s.phi);
  return v;
}

double coherent_gibbs_sigma(const CoherentGibbsQubit& s) {
  check_x(s.x);
  return 1.0 + sech(s.x) * std::cos(s.phi);
}

double averaged_rugosity_per_spin(double x, std::size_t quadrature_points) {
  check_x(x);
  if (quadrature_points < 64) throw ValidationError("quadrature_points", "must be >= 64");
  const double c = sech(x);
  const double mean = c > kSingularCut ? singular_mean(c) : periodic_mean(c, quadrature_points);
  return -mean;
}

double printed_closed_form(double x) {
  check_x(x);
  return -std::log(0.5 + std::tanh(x / 2.0) / 2.0);
}

double alt_closed_form(double x) {
  check_x(x);
  return 2.0 * kLn2 - std::log1p(std::tanh(x));
}

Magnetization equilibrium_magnetization(const ParamagnetConfig& cfg) {
  check_x(cfg.x);
  if (cfg.spins < 1) throw ValidationError("N", "must be >= 1");
  return {std::tanh(cfg.x / 2.0), std::tanh(cfg.x)};
}

std::vector<RugosityRow> rugosity_magnetization_report(std::span<const double> grid,
                                                       std::size_t quadrature_points) {
  if (grid.empty()) throw ValidationError("grid", "must not be empty");
  std::vector<RugosityRow> rows;
  rows.reserve(grid.size());
  for (double x : grid) {
    RugosityRow r;
    r.x = x;
    r.quadrature = averaged_rugosity_per_spin(x, quadrature_points);
    r.printed = printed_closed_form(x);
    r.alternative = alt_closed_form(x);
    r.residual_printed = std::abs(r.printed - r.quadrature);
    r.residual_alt = std::abs(r.alternative - r.quadrature);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace texlab
