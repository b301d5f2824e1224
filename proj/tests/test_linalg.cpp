#include <gtest/gtest.h>

#include <random>

#include "qmeasure/linalg.hpp"
#include "support/oracles.hpp"

using namespace qmeasure;

TEST(Linalg, HermitianPartIsExactMidpoint) {
  ComplexMatrix m(2);
  m(0, 0) = Complex(1.0, 0.5);
  m(0, 1) = Complex(2.0, 1.0);
  m(1, 0) = Complex(4.0, 3.0);
  const ComplexMatrix h = hermitian_part(m);
  EXPECT_EQ(h(0, 0), Complex(1.0, 0.0));
  EXPECT_EQ(h(0, 1), Complex(3.0, -1.0));
  EXPECT_EQ(h(1, 0), Complex(3.0, 1.0));
  EXPECT_EQ(hermiticity_defect(h), 0.0);
  EXPECT_DOUBLE_EQ(hermiticity_defect(m), std::abs(Complex(2.0, 1.0) - Complex(4.0, -3.0)));
}

TEST(Linalg, ProductAndAdjoint) {
  ComplexMatrix a(2), b(2);
  a(0, 0) = 1.0;
  a(0, 1) = Complex(0.0, 1.0);
  a(1, 1) = 2.0;
  b(0, 0) = 3.0;
  b(1, 0) = 1.0;
  b(1, 1) = Complex(0.0, -1.0);
  const ComplexMatrix p = a * b;
  EXPECT_EQ(p(0, 0), Complex(3.0, 1.0));
  EXPECT_EQ(p(0, 1), Complex(1.0, 0.0));
  EXPECT_EQ(p(1, 0), Complex(2.0, 0.0));
  EXPECT_EQ(p(1, 1), Complex(0.0, -2.0));
  EXPECT_EQ(a.adjoint()(1, 0), Complex(0.0, -1.0));
}

TEST(Linalg, JacobiDiagonalInputNeedsNoSweep) {
  ComplexMatrix m(3);
  m(0, 0) = 2.0;
  m(1, 1) = -1.0;
  m(2, 2) = 0.5;
  const HermitianEigen e = hermitian_eigen(m);
  EXPECT_EQ(e.sweeps, 0);
  EXPECT_EQ(e.values, (std::vector<double>{-1.0, 0.5, 2.0}));
}

TEST(Linalg, JacobiMatchesEigenOnRandomHermitian) {
  std::mt19937_64 rng(7);
  for (std::size_t n : {1u, 2u, 5u, 16u}) {
    for (int trial = 0; trial < 20; ++trial) {
      const ComplexMatrix m = oracle::random_hermitian_normalized(rng, n);
      const HermitianEigen e = hermitian_eigen(m);
      const auto expected = oracle::eigenvalues(m);
      ASSERT_EQ(e.values.size(), expected.size());
      for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(e.values[j], expected[j], 1e-12);

      // A V = V diag(λ) and V unitary.
      ComplexMatrix lambda(n);
      for (std::size_t j = 0; j < n; ++j) lambda(j, j) = e.values[j];
      EXPECT_LT(max_abs_diff(m * e.vectors, e.vectors * lambda), 1e-12);
      EXPECT_LT(max_abs_diff(e.vectors.adjoint() * e.vectors, ComplexMatrix::identity(n)), 1e-12);
    }
  }
}

TEST(Linalg, JacobiHandlesDegenerateSpectrum) {
  // Rank-one all-ones matrix: eigenvalues 0 (x15) and 16.
  ComplexMatrix m(16);
  for (auto& v : m.data()) v = 1.0;
  const HermitianEigen e = hermitian_eigen(m);
  for (std::size_t j = 0; j < 15; ++j) EXPECT_NEAR(e.values[j], 0.0, 1e-12);
  EXPECT_NEAR(e.values[15], 16.0, 1e-12);
}

TEST(Linalg, JacobiIsDeterministic) {
  std::mt19937_64 rng(3);
  const ComplexMatrix m = oracle::random_hermitian_normalized(rng, 16);
  const HermitianEigen a = hermitian_eigen(m);
  const HermitianEigen b = hermitian_eigen(m);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.vectors, b.vectors);
}

TEST(Linalg, InnerProductIsConjugateLinearInFirstSlot) {
  const std::vector<Complex> x{Complex(0.0, 1.0), 2.0};
  const std::vector<Complex> y{1.0, Complex(0.0, 1.0)};
  EXPECT_EQ(inner(x, y), Complex(0.0, -1.0) + Complex(0.0, 2.0));
}
