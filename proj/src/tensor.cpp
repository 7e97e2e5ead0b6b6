#include "texlab/tensor.hpp"

#include <cmath>
#include <string>

#include "texlab/errors.hpp"

namespace texlab {

namespace {

void guard_dims(std::size_t rows, std::size_t cols) {
  if (rows > kMaxDim || cols > kMaxDim) {
    throw DimensionError("product dimension " + std::to_string(rows) + "x" +
                         std::to_string(cols) + " exceeds limit " +
                         std::to_string(kMaxDim));
  }
}

}  // namespace

ComplexMatrix identity(std::size_t dim) {
  return ComplexMatrix::Identity(static_cast<Eigen::Index>(dim),
                                 static_cast<Eigen::Index>(dim));
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const auto rows = static_cast<std::size_t>(a.rows() * b.rows());
  const auto cols = static_cast<std::size_t>(a.cols() * b.cols());
  guard_dims(rows, cols);
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Ket kron(const Ket& a, const Ket& b) {
  guard_dims(static_cast<std::size_t>(a.size() * b.size()), 1);
  Ket out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t d1,
                            std::size_t d2, Subsystem keep) {
  const auto n = static_cast<Eigen::Index>(d1 * d2);
  if (d1 == 0 || d2 == 0 || m.rows() != n || m.cols() != n) {
    throw ValidationError("dims", "matrix is " + std::to_string(m.rows()) +
                                      "x" + std::to_string(m.cols()) +
                                      ", expected " + std::to_string(n) +
                                      "x" + std::to_string(n));
  }
  const auto a = static_cast<Eigen::Index>(d1);
  const auto b = static_cast<Eigen::Index>(d2);
  if (keep == Subsystem::First) {
    ComplexMatrix out = ComplexMatrix::Zero(a, a);
    for (Eigen::Index i = 0; i < a; ++i)
      for (Eigen::Index j = 0; j < a; ++j)
        for (Eigen::Index k = 0; k < b; ++k) out(i, j) += m(i * b + k, j * b + k);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(b, b);
  for (Eigen::Index i = 0; i < b; ++i)
    for (Eigen::Index j = 0; j < b; ++j)
      for (Eigen::Index k = 0; k < a; ++k) out(i, j) += m(k * b + i, k * b + j);
  return out;
}

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError("shape", "frobenius_distance needs equal shapes");
  }
  return (a - b).norm();
}

Ket normalize(const Ket& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw ValidationError("ket", "cannot normalize a zero or non-finite vector");
  }
  return v / n;
}

ComplexMatrix projector(const Ket& v) { return v * v.adjoint(); }

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const cplx z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

double hermiticity_residual(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace texlab
