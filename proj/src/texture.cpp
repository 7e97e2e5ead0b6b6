#include "texlab/texture.hpp"

#include <cmath>
#include <limits>

#include "texlab/errors.hpp"

namespace texlab {

namespace {

cplx entry_sum(const ComplexMatrix& m) {
  cplx s = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) s += m(i, j);
  return s;
}

}  // namespace

double grand_sum(const DensityOperator& rho) {
  const cplx s = entry_sum(rho.matrix());
  if (std::abs(s.imag()) > kEps) {
    throw ValidationError("matrix", "grand sum has imaginary residue");
  }
  return s.real();
}

double grand_sum_unchecked(const ComplexMatrix& m) { return entry_sum(m).real(); }

double rugosity_from_grand_sum(double sigma, std::size_t dim) {
  if (sigma <= kEps) return std::numeric_limits<double>::infinity();
  // Clamp rounding just above D so that f1 reads exactly zero.
  const double ratio = std::min(sigma / static_cast<double>(dim), 1.0);
  return -std::log(ratio);
}

double rugosity(const DensityOperator& rho) {
  return rugosity_from_grand_sum(grand_sum(rho), rho.dim());
}

double projective_probability(const DensityOperator& rho) {
  return grand_sum(rho) / static_cast<double>(rho.dim());
}

double imaginarity_qubit(const DensityOperator& rho) {
  if (rho.dim() != 2) {
    throw ValidationError("dim", "imaginarity_qubit needs D = 2");
  }
  return 2.0 * std::abs(bloch_from_qubit(rho).y);
}

TextureReading read_texture(const DensityOperator& rho) {
  TextureReading r;
  r.dim = rho.dim();
  r.grand_sum = grand_sum(rho);
  r.rugosity = rugosity_from_grand_sum(r.grand_sum, r.dim);
  r.projective_probability = r.grand_sum / static_cast<double>(r.dim);
  return r;
}

std::pair<double, double> additivity_check(std::span<const DensityOperator> rhos) {
  if (rhos.empty()) throw ValidationError("rhos", "need at least one factor");
  ComplexMatrix product = rhos.front().matrix();
  double rhs = 0.0;
  for (std::size_t k = 0; k < rhos.size(); ++k) {
    if (k > 0) product = kron(product, rhos[k].matrix());
    rhs += rugosity(rhos[k]);
  }
  const double lhs = rugosity_from_grand_sum(
      grand_sum_unchecked(product), static_cast<std::size_t>(product.rows()));
  return {lhs, rhs};
}

}  // namespace texlab
