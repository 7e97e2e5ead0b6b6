#include "texlab/states.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "texlab/errors.hpp"

namespace texlab {

DensityOperator::DensityOperator(ComplexMatrix m, double tol) : m_(std::move(m)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols()) {
    throw ValidationError("matrix", "density operator must be square and non-empty");
  }
  if (static_cast<std::size_t>(m_.rows()) > kMaxDim) {
    throw DimensionError("density operator dimension exceeds limit");
  }
  if (!all_finite(m_)) {
    throw ValidationError("matrix", "entries must be finite");
  }
  if (hermiticity_residual(m_) > tol) {
    throw ValidationError("matrix", "not Hermitian within tolerance");
  }
  const cplx tr = m_.trace();
  if (std::abs(tr - 1.0) > tol) {
    throw ValidationError("matrix", "trace is " + std::to_string(tr.real()) +
                                        ", expected 1");
  }
}

DensityOperator DensityOperator::from_ket(const Ket& v) {
  return DensityOperator(projector(normalize(v)));
}

DensityOperator DensityOperator::maximally_mixed(std::size_t dim) {
  return DensityOperator(identity(dim) / static_cast<double>(dim));
}

bool DensityOperator::is_positive(double tol) const {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() >= -tol;
}

double DensityOperator::purity() const { return (m_ * m_).trace().real(); }

QubitBasis::QubitBasis(cplx alpha, cplx beta) : alpha_(alpha), beta_(beta) {
  const double norm2 = std::norm(alpha) + std::norm(beta);
  if (std::abs(norm2 - 1.0) > 1e-12) {
    throw ValidationError("hidden_basis",
                          "|alpha|^2 + |beta|^2 = " + std::to_string(norm2));
  }
}

Ket QubitBasis::plus() const {
  Ket v(2);
  v << alpha_, beta_;
  return v;
}

Ket QubitBasis::minus() const {
  Ket v(2);
  v << std::conj(beta_), -std::conj(alpha_);
  return v;
}

ComplexMatrix QubitBasis::matrix() const {
  ComplexMatrix u(2, 2);
  u << alpha_, std::conj(beta_), beta_, -std::conj(alpha_);
  return u;
}

Ket fourier_ket(std::size_t dim, std::size_t k) {
  if (dim == 0 || k < 1 || k > dim) {
    throw ValidationError("k", "Fourier index " + std::to_string(k) +
                                   " outside 1.." + std::to_string(dim));
  }
  Ket v(static_cast<Eigen::Index>(dim));
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (std::size_t j = 0; j < dim; ++j) {
    // Reduce the exponent mod D before forming the angle to keep phases exact
    // for large indices.
    const std::size_t e = ((k - 1) * j) % dim;
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(e) /
                         static_cast<double>(dim);
    v(static_cast<Eigen::Index>(j)) = std::polar(scale, angle);
  }
  return v;
}

ComplexMatrix fourier_matrix(std::size_t dim) {
  ComplexMatrix f(dim, dim);
  for (std::size_t k = 1; k <= dim; ++k) {
    f.col(static_cast<Eigen::Index>(k - 1)) = fourier_ket(dim, k);
  }
  return f;
}

Ket basis_ket(std::size_t dim, std::size_t i) {
  if (i < 1 || i > dim) {
    throw ValidationError("i", "basis index outside 1.." + std::to_string(dim));
  }
  Ket v = Ket::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(i - 1)) = 1.0;
  return v;
}

DensityOperator qubit_from_bloch(const BlochVector& v) {
  const double r2 = v.x * v.x + v.y * v.y + v.z * v.z;
  if (r2 > 1.0 + 1e-12) {
    throw ValidationError("bloch", "vector length exceeds 1");
  }
  ComplexMatrix m(2, 2);
  const cplx i{0.0, 1.0};
  m << 1.0 + v.z, v.x - i * v.y, v.x + i * v.y, 1.0 - v.z;
  return DensityOperator(0.5 * m);
}

BlochVector bloch_from_qubit(const DensityOperator& rho) {
  if (rho.dim() != 2) throw ValidationError("dim", "Bloch vector needs D = 2");
  const auto& m = rho.matrix();
  // x = Tr(rho sx), y = Tr(rho sy), z = Tr(rho sz)
  return {2.0 * m(0, 1).real(), -2.0 * m(0, 1).imag(),
          (m(0, 0) - m(1, 1)).real()};
}

HaarQubitSample sample_haar_qubit(Rng& rng) {
  const double phi = 2.0 * std::numbers::pi * rng.uniform();
  const double cos_theta = 1.0 - 2.0 * rng.uniform();
  return {std::acos(cos_theta), phi};
}

Ket ket_in_basis(const HaarQubitSample& s, const QubitBasis& basis) {
  const double a = std::cos(0.5 * s.theta);
  const cplx b = std::polar(std::sin(0.5 * s.theta), s.phi);
  return a * basis.plus() + b * basis.minus();
}

Ket random_ket(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> gauss;
  Ket v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(gauss(rng), gauss(rng));
  return normalize(v);
}

DensityOperator random_density(std::size_t dim, Rng& rng, std::size_t rank) {
  if (rank == 0) rank = dim;
  std::normal_distribution<double> gauss;
  ComplexMatrix g(dim, rank);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    g.data()[i] = cplx(gauss(rng), gauss(rng));
  }
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace();
  // Symmetrize away rounding so the Hermiticity check is exact.
  ComplexMatrix herm = 0.5 * (rho + rho.adjoint());
  return DensityOperator(std::move(herm));
}

QubitBasis random_basis(Rng& rng) {
  const Ket v = random_ket(2, rng);
  // Renormalize in double to satisfy the 1e-12 basis invariant exactly.
  const double n = std::sqrt(std::norm(v(0)) + std::norm(v(1)));
  return {v(0) / n, v(1) / n};
}

}  // namespace texlab
