#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "texlab/states.hpp"

namespace texlab {

/// Everything depends on the single ratio x = mu0 B / (k_B T) >= 0.
struct ParamagnetConfig {
  double x = 0.0;
  std::size_t spins = 1;
};

struct CoherentGibbsQubit {
  double x = 0.0;
  double phi = 0.0;
};

/// diag(e^x, e^-x) / (2 cosh x) in the energy basis (spin up first).
DensityOperator gibbs_state(double x);

/// Square roots of the Boltzmann weights, the down amplitude carrying e^{i phi}.
Ket coherent_gibbs_ket(const CoherentGibbsQubit& s);

/// 1 + sech(x) cos(phi).
double coherent_gibbs_sigma(const CoherentGibbsQubit& s);

/// -(1/2pi) * integral over phi of ln(Sigma(phi)/2). Periodic trapezoid with
/// point doubling from `quadrature_points`; near x = 0 the log singularity at
/// phi = pi is cut out and integrated analytically. Throws ConvergenceError if
/// doubling does not settle to 1e-8.
double averaged_rugosity_per_spin(double x, std::size_t quadrature_points = 256);

/// -ln(1/2 + tanh(x/2)/2), the closed form as printed.
double printed_closed_form(double x);
/// 2 ln 2 - ln(1 + tanh x), the form matching direct integration.
double alt_closed_form(double x);

/// Per-spin magnetization in units of N mu0.
struct Magnetization {
  double printed = 0.0;      // tanh(x/2)
  double alternative = 0.0;  // tanh(x)
};
Magnetization equilibrium_magnetization(const ParamagnetConfig& cfg);

struct RugosityRow {
  double x = 0.0;
  double quadrature = 0.0;
  double printed = 0.0;
  double alternative = 0.0;
  double residual_printed = 0.0;
  double residual_alt = 0.0;
};

std::vector<RugosityRow> rugosity_magnetization_report(std::span<const double> grid,
                                                       std::size_t quadrature_points = 256);

}  // namespace texlab
