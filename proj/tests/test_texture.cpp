#include <gtest/gtest.h>

#include <random>

#include <numbers>

#include "oracles.hpp"
#include "texlab/errors.hpp"
#include "texlab/texture.hpp"

using namespace texlab;

namespace {
const double kLn2 = std::numbers::ln2;

DensityOperator diagonal(std::span<const double> p) {
  ComplexMatrix m = ComplexMatrix::Zero(p.size(), p.size());
  for (std::size_t i = 0; i < p.size(); ++i) m(i, i) = p[i];
  return DensityOperator(m);
}
}  // namespace

TEST(GrandSum, ReferenceStates) {
  EXPECT_NEAR(grand_sum(DensityOperator::from_ket(fourier_ket(4, 1))), 4.0, 1e-12);
  EXPECT_NEAR(grand_sum(DensityOperator::from_ket(fourier_ket(2, 2))), 0.0, 1e-15);
  EXPECT_NEAR(grand_sum(qubit_from_bloch({0.5, 0.3, 0.2})), 1.5, 1e-15);
}

TEST(GrandSum, AgreesWithBothOracles) {
  Rng rng(101);
  for (std::size_t d : {2u, 3u, 4u, 6u}) {
    for (int k = 0; k < 25; ++k) {
      const auto rho = random_density(d, rng);
      const auto o = oracle::from(rho.matrix());
      EXPECT_NEAR(grand_sum(rho), oracle::grand_sum(o).real(), 1e-12);
      EXPECT_NEAR(grand_sum(rho), oracle::f1_expectation(o), 1e-10);
    }
  }
}

TEST(GrandSum, StaysInRange) {
  Rng rng(102);
  for (std::size_t d : {2u, 3u, 4u}) {
    for (int k = 0; k < 3333; ++k) {
      const double s = grand_sum(random_density(d, rng, 1 + k % d));
      EXPECT_GE(s, -1e-12);
      EXPECT_LE(s, d + 1e-10);
    }
  }
}

TEST(GrandSum, MaximalTextureSubspace) {
  Rng rng(103);
  for (std::size_t d : {3u, 5u}) {
    for (int k = 0; k < 20; ++k) {
      Ket v = Ket::Zero(d);
      for (std::size_t j = 2; j <= d; ++j) v += cplx(rng.uniform() - 0.5, rng.uniform() - 0.5) * fourier_ket(d, j);
      EXPECT_LT(std::abs(grand_sum(DensityOperator::from_ket(normalize(v)))), 1e-10);
    }
  }
}

TEST(GrandSum, AffineUnderMixing) {
  Rng rng(104);
  for (int k = 0; k < 50; ++k) {
    const std::size_t d = 2 + k % 3;
    std::vector<double> p(4);
    double total = 0.0;
    for (auto& v : p) total += (v = rng.uniform());
    ComplexMatrix mix = ComplexMatrix::Zero(d, d);
    double weighted = 0.0;
    for (auto& v : p) {
      v /= total;
      const auto r = random_density(d, rng);
      mix += v * r.matrix();
      weighted += v * grand_sum(r);
    }
    EXPECT_NEAR(grand_sum(DensityOperator(mix)), weighted, 1e-12);
  }
}

TEST(Rugosity, ReferenceValues) {
  for (std::size_t d : {2u, 3u, 7u}) {
    EXPECT_NEAR(rugosity(DensityOperator::from_ket(fourier_ket(d, 1))), 0.0, 1e-12);
    EXPECT_TRUE(std::isinf(rugosity(DensityOperator::from_ket(fourier_ket(d, 2)))));
  }
  EXPECT_NEAR(rugosity(qubit_from_bloch({0, 0, 0})), kLn2, 1e-15);
  for (double x : {-0.9, -0.3, 0.0, 0.4, 0.95}) {
    EXPECT_NEAR(rugosity(qubit_from_bloch({x, 0.0, 0.0})), std::log(2.0 / (1.0 + x)), 1e-12);
  }
}

TEST(Rugosity, DiagonalStatesGiveLogDimension) {
  Rng rng(105);
  for (std::size_t d : {2u, 3u, 5u, 8u}) {
    std::vector<double> p(d);
    double t = 0.0;
    for (auto& v : p) t += (v = rng.uniform());
    for (auto& v : p) v /= t;
    EXPECT_NEAR(rugosity(diagonal(p)), std::log(double(d)), 1e-12);
  }
}

TEST(Rugosity, JensenDirectionUnderMixing) {
  Rng rng(106);
  for (int k = 0; k < 200; ++k) {
    const std::size_t d = 2 + k % 3;
    const double p = rng.uniform();
    const auto a = random_density(d, rng);
    const auto b = random_density(d, rng);
    const DensityOperator mix(p * a.matrix() + (1 - p) * b.matrix());
    EXPECT_LE(rugosity(mix), p * rugosity(a) + (1 - p) * rugosity(b) + 1e-10);
  }
}

TEST(Rugosity, MixingEqualityOnlyForEqualGrandSums) {
  // Two diagonal states share grand sum 1 so rugosity is affine on their mixtures.
  const double pa[] = {0.7, 0.3}, pb[] = {0.2, 0.8};
  const auto a = diagonal(pa), b = diagonal(pb);
  const DensityOperator mix(0.4 * a.matrix() + 0.6 * b.matrix());
  EXPECT_NEAR(rugosity(mix), 0.4 * rugosity(a) + 0.6 * rugosity(b), 1e-12);
  // Unequal grand sums: strict inequality.
  const auto f1 = DensityOperator::from_ket(fourier_ket(2, 1));
  const auto mm = DensityOperator::maximally_mixed(2);
  const DensityOperator mix2(0.5 * f1.matrix() + 0.5 * mm.matrix());
  EXPECT_LT(rugosity(mix2), 0.5 * rugosity(f1) + 0.5 * rugosity(mm) - 1e-3);
}

TEST(Rugosity, FaithfulNearTexturelessState) {
  Rng rng(107);
  const Ket f1 = fourier_ket(3, 1);
  for (int k = 0; k < 100; ++k) {
    const Ket v = normalize(f1 + 1e-5 * random_ket(3, rng));
    const auto rho = DensityOperator::from_ket(v);
    if (rugosity(rho) < 1e-8) {
      EXPECT_LT(frobenius_distance(rho.matrix(), projector(f1)), 1e-3);
    }
  }
}

TEST(ProjectiveProbability, MatchesShotFrequencies) {
  Rng rng(108);
  EXPECT_NEAR(projective_probability(DensityOperator::from_ket(fourier_ket(3, 1))), 1.0, 1e-12);
  EXPECT_NEAR(projective_probability(DensityOperator::from_ket(fourier_ket(2, 2))), 0.0, 1e-12);
  const int shots = 100000;
  int outliers = 0;
  for (int k = 0; k < 20; ++k) {
    const auto rho = random_density(2, rng);
    const double p = projective_probability(rho);
    EXPECT_NEAR(p, grand_sum(rho) / 2.0, 1e-12);
    std::binomial_distribution<int> draw(shots, p);
    const double freq = double(draw(rng)) / shots;
    if (std::abs(freq - p) > 3.0 * std::sqrt(p * (1 - p) / shots)) ++outliers;
  }
  EXPECT_LE(outliers, 2);
}

TEST(Imaginarity, BlochExamples) {
  EXPECT_NEAR(imaginarity_qubit(qubit_from_bloch({0.3, 0.0, 0.5})), 0.0, 1e-15);
  EXPECT_NEAR(imaginarity_qubit(qubit_from_bloch({0, 1, 0})), 2.0, 1e-15);
  EXPECT_NEAR(imaginarity_qubit(qubit_from_bloch({0.6, -0.3, 0})), 0.6, 1e-15);
  EXPECT_THROW(imaginarity_qubit(DensityOperator::maximally_mixed(3)), ValidationError);
}

TEST(Additivity, ProductsOfStates) {
  const auto f1 = DensityOperator::from_ket(fourier_ket(2, 1));
  const DensityOperator pair[] = {f1, f1};
  auto [l0, r0] = additivity_check(pair);
  EXPECT_NEAR(l0, 0.0, 1e-12);
  EXPECT_NEAR(r0, 0.0, 1e-12);

  Rng rng(109);
  for (int k = 0; k < 20; ++k) {
    const auto rho = random_density(2, rng);
    const DensityOperator twice[] = {rho, rho};
    EXPECT_NEAR(additivity_check(twice).first, 2.0 * rugosity(rho), 1e-9);
    const DensityOperator three[] = {random_density(2, rng), random_density(2, rng), random_density(2, rng)};
    auto [lhs, rhs] = additivity_check(three);
    // Oracle: grand sum of the 8x8 product by explicit double sum.
    auto prod = oracle::kron(oracle::kron(oracle::from(three[0].matrix()), oracle::from(three[1].matrix())),
                             oracle::from(three[2].matrix()));
    EXPECT_NEAR(lhs, -std::log(oracle::grand_sum(prod).real() / 8.0), 1e-9);
    EXPECT_NEAR(lhs, rhs, 1e-9);
  }
}

TEST(Additivity, ZeroGrandSumFactorGivesInfinity) {
  const DensityOperator parts[] = {DensityOperator::from_ket(fourier_ket(2, 2)), DensityOperator::maximally_mixed(2)};
  auto [lhs, rhs] = additivity_check(parts);
  EXPECT_TRUE(std::isinf(lhs));
  EXPECT_TRUE(std::isinf(rhs));
}

TEST(ReadTexture, FieldsConsistent) {
  const auto r = read_texture(DensityOperator::maximally_mixed(3));
  EXPECT_EQ(r.dim, 3u);
  EXPECT_NEAR(r.grand_sum, 1.0, 1e-15);
  EXPECT_NEAR(r.rugosity, std::log(3.0), 1e-15);
  EXPECT_NEAR(r.projective_probability, 1.0 / 3.0, 1e-15);
}
