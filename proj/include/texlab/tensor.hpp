#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace texlab {

using cplx = std::complex<double>;

// Row-major dense storage; dimensions stay at desk scale (<= kMaxDim).
using ComplexMatrix =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Ket = Eigen::VectorXcd;

/// Default tolerance for algebraic identities.
inline constexpr double kEps = 1e-10;

/// Resource guard for Kronecker products and imported states.
inline constexpr std::size_t kMaxDim = 1024;

enum class Subsystem { First, Second };

ComplexMatrix identity(std::size_t dim);

/// Standard Kronecker ordering: the first factor is the most significant index.
/// Throws DimensionError if either result dimension would exceed kMaxDim.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
Ket kron(const Ket& a, const Ket& b);

/// Reduce an operator on C^d1 (x) C^d2 to the subsystem in `keep`.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t d1,
                            std::size_t d2, Subsystem keep);

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// Returns v / ||v||. Throws ValidationError for the zero vector.
Ket normalize(const Ket& v);

ComplexMatrix projector(const Ket& v);

bool all_finite(const ComplexMatrix& m);

/// Largest entrywise deviation from Hermiticity.
double hermiticity_residual(const ComplexMatrix& m);

}  // namespace texlab
