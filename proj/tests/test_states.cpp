#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>

#include "texlab/errors.hpp"
#include "texlab/states.hpp"

using namespace texlab;

namespace {
constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);
}  // namespace

TEST(FourierKet, QubitStates) {
  const double r = 1.0 / std::sqrt(2.0);
  const Ket f1 = fourier_ket(2, 1);
  const Ket f2 = fourier_ket(2, 2);
  EXPECT_NEAR(std::abs(f1(0) - r), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(f1(1) - r), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(f2(0) - r), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(f2(1) + r), 0.0, 1e-15);
}

TEST(FourierKet, AmplitudesFollowRootsOfUnity) {
  const std::size_t d = 5;
  for (std::size_t k = 1; k <= d; ++k) {
    const Ket f = fourier_ket(d, k);
    for (std::size_t j = 1; j <= d; ++j) {
      const cplx expect = std::polar(1.0 / std::sqrt(5.0), 2.0 * kPi * double((k - 1) * (j - 1)) / 5.0);
      EXPECT_NEAR(std::abs(f(j - 1) - expect), 0.0, 1e-14);
    }
  }
}

TEST(FourierKet, OrthonormalFamily) {
  for (std::size_t d : {2u, 3u, 4u, 5u, 8u}) {
    for (std::size_t k = 1; k <= d; ++k)
      for (std::size_t j = 1; j <= d; ++j) {
        const cplx ip = fourier_ket(d, k).dot(fourier_ket(d, j));
        EXPECT_NEAR(std::abs(ip - (k == j ? 1.0 : 0.0)), 0.0, 1e-12);
      }
    const auto f = fourier_matrix(d);
    EXPECT_LT(frobenius_distance(f * f.adjoint(), identity(d)), 1e-10);
  }
}

TEST(FourierKet, IndexOutOfRange) {
  EXPECT_THROW(fourier_ket(3, 0), ValidationError);
  EXPECT_THROW(fourier_ket(3, 4), ValidationError);
}

TEST(DensityOperator, RejectsInvalidMatrices) {
  ComplexMatrix m = identity(2);
  EXPECT_THROW(DensityOperator{m}, ValidationError);  // trace 2
  m = identity(2) / 2.0;
  m(0, 1) = 0.3;
  EXPECT_THROW(DensityOperator{m}, ValidationError);  // not Hermitian
  m(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(DensityOperator{m}, ValidationError);
  EXPECT_THROW(DensityOperator{ComplexMatrix(2, 3)}, ValidationError);
}

TEST(DensityOperator, PositivityOnDemand) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.5;
  m(1, 1) = -0.5;
  const DensityOperator rho(m);
  EXPECT_FALSE(rho.is_positive());
  EXPECT_TRUE(DensityOperator::maximally_mixed(3).is_positive());
}

TEST(Bloch, ReferenceStates) {
  EXPECT_LT(frobenius_distance(qubit_from_bloch({0, 0, 0}).matrix(), identity(2) / 2.0), 1e-15);
  EXPECT_LT(frobenius_distance(qubit_from_bloch({1, 0, 0}).matrix(), projector(fourier_ket(2, 1))), 1e-15);
  ComplexMatrix y(2, 2);
  y << 0.5, -0.5 * I, 0.5 * I, 0.5;
  EXPECT_LT(frobenius_distance(qubit_from_bloch({0, 1, 0}).matrix(), y), 1e-15);
  EXPECT_THROW(qubit_from_bloch({1, 1, 0}), ValidationError);
}

TEST(Bloch, RoundTripThroughPauliTraces) {
  Rng rng(5);
  for (int k = 0; k < 200; ++k) {
    const double x = rng.uniform() - 0.5, y = rng.uniform() - 0.5, z = rng.uniform() - 0.5;
    const auto rho = qubit_from_bloch({x, y, z});
    const auto& m = rho.matrix();
    // Pauli traces written out by hand.
    EXPECT_NEAR((m(0, 1) + m(1, 0)).real(), x, 1e-12);
    EXPECT_NEAR((I * (m(0, 1) - m(1, 0))).real(), y, 1e-12);
    EXPECT_NEAR((m(0, 0) - m(1, 1)).real(), z, 1e-12);
    const auto back = bloch_from_qubit(rho);
    EXPECT_NEAR(back.x, x, 1e-12);
    EXPECT_NEAR(back.y, y, 1e-12);
    EXPECT_NEAR(back.z, z, 1e-12);
  }
}

TEST(Bloch, PureIffUnitLength) {
  EXPECT_NEAR(qubit_from_bloch({0.6, 0.0, 0.8}).purity(), 1.0, 1e-12);
  EXPECT_LT(qubit_from_bloch({0.6, 0.0, 0.7}).purity(), 1.0 - 1e-3);
}

TEST(HaarSampler, MomentsAndIsotropy) {
  Rng rng(77);
  const int n = 100000;
  double cos_mean = 0.0, bx = 0.0, by = 0.0, bz = 0.0;
  for (int k = 0; k < n; ++k) {
    const auto s = sample_haar_qubit(rng);
    ASSERT_GE(s.theta, 0.0);
    ASSERT_LE(s.theta, kPi);
    ASSERT_GE(s.phi, 0.0);
    ASSERT_LT(s.phi, 2.0 * kPi);
    cos_mean += std::cos(s.theta);
    bx += std::sin(s.theta) * std::cos(s.phi);
    by += std::sin(s.theta) * std::sin(s.phi);
    bz += std::cos(s.theta);
  }
  EXPECT_NEAR(cos_mean / n, 0.0, 0.01);
  EXPECT_NEAR(bx / n, 0.0, 0.01);
  EXPECT_NEAR(by / n, 0.0, 0.01);
  EXPECT_NEAR(bz / n, 0.0, 0.01);
}

TEST(HaarSampler, FourthMomentOfAmplitudes) {
  Rng rng(78);
  const int n = 1000000;
  double acc = 0.0;
  for (int k = 0; k < n; ++k) {
    const auto s = sample_haar_qubit(rng);
    const double c = std::cos(s.theta / 2.0), sn = std::sin(s.theta / 2.0);
    acc += c * c * sn * sn;
  }
  EXPECT_NEAR(acc / n, 1.0 / 6.0, 0.002);
}

TEST(HaarSampler, CosThetaPassesKolmogorovSmirnov) {
  Rng rng(79);
  const int n = 100000;
  std::vector<double> u(n);
  for (auto& v : u) v = std::cos(sample_haar_qubit(rng).theta);
  std::sort(u.begin(), u.end());
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    const double cdf = (u[i] + 1.0) / 2.0;
    ks = std::max({ks, std::abs(cdf - double(i) / n), std::abs(cdf - double(i + 1) / n)});
  }
  EXPECT_LT(ks, 0.01);
}

TEST(KetInBasis, ComputationalBasisCases) {
  const auto comp = QubitBasis::computational();
  const Ket a = ket_in_basis({0.0, 1.3}, comp);
  EXPECT_NEAR(std::abs(a(0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(a(1)), 0.0, 1e-15);
  const Ket b = ket_in_basis({kPi, 0.0}, comp);
  EXPECT_NEAR(std::abs(b(0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(b(1) + 1.0), 0.0, 1e-15);
}

TEST(KetInBasis, UnitNormForRandomSamples) {
  Rng rng(80);
  for (int k = 0; k < 10000; ++k) {
    const auto basis = random_basis(rng);
    EXPECT_NEAR(ket_in_basis(sample_haar_qubit(rng), basis).squaredNorm(), 1.0, 1e-12);
  }
}

TEST(QubitBasis, ConventionAndValidation) {
  const QubitBasis b(cplx(0.6, 0.0), cplx(0.0, 0.8));
  EXPECT_NEAR(std::abs(b.minus()(0) - std::conj(b.beta())), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(b.minus()(1) + std::conj(b.alpha())), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(b.plus().dot(b.minus())), 0.0, 1e-15);
  EXPECT_THROW(QubitBasis(1.0, 0.1), ValidationError);
}

TEST(RandomStates, ValidAndReproducible) {
  Rng a(9), b(9);
  for (std::size_t d : {2u, 3u, 5u}) {
    const auto r1 = random_density(d, a);
    const auto r2 = random_density(d, b);
    EXPECT_EQ(frobenius_distance(r1.matrix(), r2.matrix()), 0.0);
    EXPECT_TRUE(r1.is_positive());
    EXPECT_NEAR(r1.matrix().trace().real(), 1.0, 1e-12);
  }
  const auto pure = random_density(3, a, 1);
  EXPECT_NEAR(pure.purity(), 1.0, 1e-10);
}

TEST(RngStreams, DistinctIndicesDecorrelate) {
  auto s0 = Rng::stream(1, 0);
  auto s1 = Rng::stream(1, 1);
  auto s0b = Rng::stream(1, 0);
  EXPECT_NE(s0(), s1());
  s0 = Rng::stream(1, 0);
  EXPECT_EQ(s0(), s0b());
}
