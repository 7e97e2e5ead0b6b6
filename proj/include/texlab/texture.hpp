#pragma once

#include <cstddef>
#include <span>
#include <utility>

#include "texlab/states.hpp"

namespace texlab {

struct TextureReading {
  double grand_sum = 0.0;
  double rugosity = 0.0;  // +inf when grand_sum == 0
  double projective_probability = 0.0;
  std::size_t dim = 0;
};

/// Sum of all matrix entries in the computational basis. Throws if the
/// imaginary residue exceeds kEps (input was not Hermitian enough).
double grand_sum(const DensityOperator& rho);

/// Same double sum on a raw matrix, no validation; returns the real part.
double grand_sum_unchecked(const ComplexMatrix& m);

/// -ln(grand_sum / D); +inf for a vanishing grand sum.
double rugosity(const DensityOperator& rho);

/// Rugosity for a given grand sum and dimension. Grand sums within kEps of
/// zero (or below) map to +inf.
double rugosity_from_grand_sum(double grand_sum, std::size_t dim);

/// Probability of the outcome |f1> in a projective measurement.
double projective_probability(const DensityOperator& rho);

/// Qubit imaginarity 2|y| with y = Tr(rho sigma_y).
double imaginarity_qubit(const DensityOperator& rho);

TextureReading read_texture(const DensityOperator& rho);

/// (rugosity of the tensor product, sum of factor rugosities).
std::pair<double, double> additivity_check(std::span<const DensityOperator> rhos);

}  // namespace texlab
