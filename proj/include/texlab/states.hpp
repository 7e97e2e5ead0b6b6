#pragma once

#include <cstddef>

#include "texlab/rng.hpp"
#include "texlab/tensor.hpp"

namespace texlab {

/// Trace-one Hermitian matrix. Construction validates Hermiticity, unit trace
/// and finiteness; positivity is checked on demand (`is_positive`).
class DensityOperator {
 public:
  explicit DensityOperator(ComplexMatrix m, double tol = kEps);

  static DensityOperator from_ket(const Ket& v);
  static DensityOperator maximally_mixed(std::size_t dim);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  const ComplexMatrix& matrix() const noexcept { return m_; }

  bool is_positive(double tol = kEps) const;
  double purity() const;

 private:
  ComplexMatrix m_;
};

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Input-qubit angles: theta in [0, pi], phi in [0, 2pi).
struct HaarQubitSample {
  double theta = 0.0;
  double phi = 0.0;
};

/// Hidden qubit basis: |+> = alpha|1> + beta|2>, |-> = beta*|1> - alpha*|2>.
class QubitBasis {
 public:
  QubitBasis(cplx alpha, cplx beta);

  static QubitBasis computational() { return {1.0, 0.0}; }

  cplx alpha() const noexcept { return alpha_; }
  cplx beta() const noexcept { return beta_; }

  Ket plus() const;
  Ket minus() const;

  /// Columns are |+> and |-> in computational coordinates.
  ComplexMatrix matrix() const;

 private:
  cplx alpha_;
  cplx beta_;
};

/// Fourier ket |f_k>, k in 1..D, amplitudes w^{(k-1)(j-1)}/sqrt(D).
Ket fourier_ket(std::size_t dim, std::size_t k);

/// Columns are |f_1>..|f_D>.
ComplexMatrix fourier_matrix(std::size_t dim);

/// |i> in the 1-based labelling used in reports.
Ket basis_ket(std::size_t dim, std::size_t i);

DensityOperator qubit_from_bloch(const BlochVector& v);
BlochVector bloch_from_qubit(const DensityOperator& rho);

/// phi uniform on [0, 2pi), cos(theta) uniform on [-1, 1].
HaarQubitSample sample_haar_qubit(Rng& rng);

/// a|+> + b|-> with a = cos(theta/2), b = e^{i phi} sin(theta/2).
Ket ket_in_basis(const HaarQubitSample& sample, const QubitBasis& basis);

/// Haar-random pure state on C^dim (complex Gaussian, normalized).
Ket random_ket(std::size_t dim, Rng& rng);

/// Random mixed state: Ginibre ensemble G G^dag / Tr, full rank by default.
DensityOperator random_density(std::size_t dim, Rng& rng, std::size_t rank = 0);

/// Haar-random hidden basis (|+> drawn as a Haar-random qubit).
QubitBasis random_basis(Rng& rng);

}  // namespace texlab
