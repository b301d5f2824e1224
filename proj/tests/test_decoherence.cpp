#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qmeasure/decoherence.hpp"
#include "qmeasure/errors.hpp"
#include "qmeasure/polytope.hpp"
#include "support/oracles.hpp"

using namespace qmeasure;

namespace {

// Frozen from numpy.linalg.eigvalsh and re-checked against Eigen below.
constexpr double kPrMinEigenvalue = -0.29616267193838247;

ComplexMatrix scaled(ComplexMatrix m, double s) { return m *= s; }

std::vector<Complex> real_vector(std::initializer_list<double> v) {
  return std::vector<Complex>(v.begin(), v.end());
}

}  // namespace

TEST(DecoherenceFunctional, RejectsNonHermitianInput) {
  ComplexMatrix m(2);
  m(0, 0) = 0.5;
  m(1, 1) = 0.5;
  m(0, 1) = Complex(0.0, 1e-11);
  m(1, 0) = Complex(0.0, 1e-11);
  EXPECT_THROW(DecoherenceFunctional{m}, ValidationError);
}

TEST(DecoherenceFunctional, StoresHermitianPartOfNearlyHermitianInput) {
  ComplexMatrix m(2);
  m(0, 0) = 0.4;
  m(1, 1) = 0.4;
  m(0, 1) = Complex(0.1, 4e-13);
  m(1, 0) = Complex(0.1, -3e-13);
  const DecoherenceFunctional d(m);
  EXPECT_EQ(hermiticity_defect(d.entries()), 0.0);
  EXPECT_EQ(d(0, 1), Complex(0.1, 3.5e-13));
}

TEST(DecoherenceFunctional, RejectsWrongNormalizationWithoutRescaling) {
  ComplexMatrix m(2);
  m(0, 0) = 0.5;
  m(1, 1) = 0.5 + 1e-9;
  EXPECT_THROW(DecoherenceFunctional{m}, ValidationError);
  m(1, 1) = 0.5 + 1e-11;
  const DecoherenceFunctional d(m);
  EXPECT_EQ(d(1, 1), Complex(0.5 + 1e-11));
  EXPECT_THROW(DecoherenceFunctional{ComplexMatrix(17)}, ValidationError);
  EXPECT_THROW(DecoherenceFunctional{ComplexMatrix(0)}, ValidationError);
}

TEST(DecoherenceFunctional, DiagonalFactory) {
  EXPECT_THROW(DecoherenceFunctional::diagonal({0.5, 0.6}), InputError);
  EXPECT_THROW(DecoherenceFunctional::diagonal({1.5, -0.5}), InputError);
  const auto d = DecoherenceFunctional::diagonal({0.25, 0.75});
  EXPECT_EQ(d(1, 1), Complex(0.75));
}

TEST(MeasureOf, PrExamples) {
  const DecoherenceFunctional d = d_pr_canonical();
  EXPECT_DOUBLE_EQ(measure_of(d, Subset::singleton(parse_history("-+--"))), 0.5);
  EXPECT_NEAR(measure_of(d, Subset{0xFFFF}), 1.0, 1e-15);
  EXPECT_EQ(measure_of(d, Subset{}), 0.0);
}

TEST(MeasureOf, RandomFunctionalsNormalizeAndMatchBruteForce) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const DecoherenceFunctional d(oracle::random_hermitian_normalized(rng, 16));
    EXPECT_NEAR(measure_of(d, Subset{0xFFFF}), 1.0, 1e-12);
    const SetFunction table = quadratic_form_table(d);
    std::uniform_int_distribution<std::uint32_t> mask(0, 0xFFFF);
    for (int i = 0; i < 100; ++i) {
      const Subset x{mask(rng)};
      const double expected = oracle::measure(d.entries(), x.mask);
      EXPECT_NEAR(measure_of(d, x), expected, 1e-12);
      EXPECT_NEAR(table(x), expected, 1e-12);
    }
  }
}

TEST(MeasureOf, DisjointUnionExpandsBilinearly) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const DecoherenceFunctional d(oracle::random_hermitian_normalized(rng, 16));
    const auto parts = oracle::random_disjoint_parts(rng, 16, 2);
    const Subset x{parts[0]}, y{parts[1]};
    Complex cross{};
    for (int h = 0; h < 16; ++h)
      for (int k = 0; k < 16; ++k)
        if (x.contains(h) && y.contains(k)) cross += d(h, k);
    EXPECT_NEAR(d.between(x, y).real(), cross.real(), 1e-12);
    EXPECT_NEAR(d.between(x, y).imag(), cross.imag(), 1e-12);
    EXPECT_NEAR(measure_of(d, x | y), measure_of(d, x) + measure_of(d, y) + 2.0 * cross.real(), 1e-12);
  }
}

TEST(ToMeasure, Examples) {
  const auto delta = to_measure(DecoherenceFunctional::delta(16, 3));
  EXPECT_EQ(delta(Subset::singleton(3)), 1.0);
  EXPECT_EQ(delta(Subset{0xFFF7}), 0.0);
  EXPECT_EQ(classify_level(delta, 3), 1);

  EXPECT_EQ(classify_level(to_measure(d_pr_canonical()), 3), 2);

  const auto uniform = to_measure(DecoherenceFunctional::diagonal(std::vector<double>(16, 1.0 / 16.0)));
  EXPECT_NEAR(uniform(Subset{0x00FF}), 0.5, 1e-15);
  EXPECT_EQ(classify_level(uniform, 3), 1);
}

TEST(Positivity, PrFunctionalIsPositive) {
  const DecoherenceFunctional d = d_pr_canonical();
  EXPECT_TRUE(is_positive(d));
  EXPECT_GE(positivity_report(d).min_measure, -1e-12);
}

TEST(Positivity, NegativeDiagonalEntryIsCaught) {
  // The (-+--;-+--) entry set to -1/4 leaves total weight 1/4; scaling by 4
  // restores normalization and gives that singleton measure -1.
  ComplexMatrix m = d_pr_canonical().entries();
  const auto h = static_cast<std::size_t>(parse_history("-+--"));
  m(h, h) = -0.25;
  const DecoherenceFunctional d(scaled(m, 4.0));
  EXPECT_FALSE(is_positive(d));
  const PositivityReport r = positivity_report(d);
  EXPECT_LT(r.min_measure, -0.99);
  EXPECT_THROW(to_measure(d), PositivityError);
  try {
    to_measure(d);
  } catch (const PositivityError& e) {
    EXPECT_NE(std::string(e.what()).find("mask"), std::string::npos);
  }
}

TEST(Positivity, StrongImpliesOrdinaryOnRandomPsd) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const DecoherenceFunctional d(oracle::random_psd_normalized(rng, 16, 1 + trial % 16));
    EXPECT_TRUE(is_strongly_positive(d));
    EXPECT_TRUE(is_positive(d));
  }
}

TEST(StrongPositivity, PrFunctionalFails) {
  const DecoherenceFunctional d = d_pr_canonical();
  EXPECT_FALSE(is_strongly_positive(d));
  EXPECT_NEAR(oracle::min_eigenvalue(d.entries()), kPrMinEigenvalue, 1e-12);
  EXPECT_NEAR(min_eigenvalue(d.entries()), kPrMinEigenvalue, 1e-12);
}

TEST(StrongPositivity, DeltaPasses) {
  EXPECT_TRUE(is_strongly_positive(DecoherenceFunctional::delta(16, 0)));
}

TEST(StrongPositivity, AgreesWithEveryCollectionSpotCheck) {
  // M_ij = D(X_i;X_j) for random collections is PSD whenever entries is.
  std::mt19937_64 rng(14);
  std::uniform_int_distribution<std::uint32_t> mask(1, 0xFFFF);
  const DecoherenceFunctional d(oracle::random_psd_normalized(rng, 16, 3));
  for (int trial = 0; trial < 20; ++trial) {
    ComplexMatrix m(6);
    std::array<Subset, 6> xs{};
    for (auto& x : xs) x = Subset{mask(rng)};
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) m(i, j) = d.between(xs[i], xs[j]);
    EXPECT_GE(oracle::min_eigenvalue(m), -1e-12);
  }
}

TEST(GramVectors, DiagonalGivesOrthogonalVectors) {
  std::vector<double> p(16, 0.0);
  p[0] = 0.5;
  p[3] = 0.3;
  p[9] = 0.2;
  const GramDecomposition g = gram_vectors(DecoherenceFunctional::diagonal(p));
  EXPECT_EQ(g.rank, 3);
  EXPECT_LE(g.residual, 1e-15);
  for (std::size_t h = 0; h < 16; ++h) {
    EXPECT_NEAR(std::sqrt(inner(g.vectors[h], g.vectors[h]).real()), std::sqrt(p[h]), 1e-15);
    for (std::size_t k = h + 1; k < 16; ++k) EXPECT_EQ(inner(g.vectors[h], g.vectors[k]), Complex{});
  }
}

TEST(GramVectors, DeltaHasRankOne) {
  const GramDecomposition g = gram_vectors(DecoherenceFunctional::delta(16, 7));
  EXPECT_EQ(g.rank, 1);
}

TEST(GramVectors, RoundTripOnRandomPsd) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t rank = 1 + static_cast<std::size_t>(trial) % 16;
    const DecoherenceFunctional d(oracle::random_psd_normalized(rng, 16, rank));
    const GramDecomposition g = gram_vectors(d);
    EXPECT_EQ(g.rank, static_cast<int>(rank));
    EXPECT_LE(g.residual, 10 * kStrongPositivityTol);
    double worst = 0.0;
    for (std::size_t h = 0; h < 16; ++h)
      for (std::size_t k = 0; k < 16; ++k)
        worst = std::max(worst, std::abs(inner(g.vectors[h], g.vectors[k]) - d.entries()(h, k)));
    EXPECT_LE(worst, 10 * kStrongPositivityTol);
  }
}

TEST(GramVectors, RejectsNegativeSpectrum) {
  EXPECT_THROW(gram_vectors(d_pr_canonical()), NotStronglyPositiveError);
}

TEST(Lemma1, LocalAllPlusGivesOneVector) {
  const GramDecomposition g = gram_vectors(DecoherenceFunctional::delta(16, 0));
  const CorrelatorVectors v = lemma1_vectors(g);
  ASSERT_EQ(v.a.size(), 1u);
  EXPECT_EQ(v.a, g.vectors[0]);
  EXPECT_EQ(v.a_prime, g.vectors[0]);
  EXPECT_EQ(v.b, g.vectors[0]);
  EXPECT_EQ(v.b_prime, g.vectors[0]);
  for (double x : correlator_products(v)) EXPECT_NEAR(x, 1.0, 1e-15);
  EXPECT_TRUE(theorem1_check(v));
}

TEST(Lemma1, SignsFollowTheLocalAssignment) {
  const GramDecomposition g = gram_vectors(DecoherenceFunctional::delta(16, parse_history("+-+-")));
  const CorrelatorVectors v = lemma1_vectors(g);
  const auto x = correlator_products(v);
  EXPECT_NEAR(x[0], 1.0, 1e-15);
  EXPECT_NEAR(x[1], -1.0, 1e-15);
  EXPECT_NEAR(x[2], -1.0, 1e-15);
  EXPECT_NEAR(x[3], 1.0, 1e-15);
}

TEST(Lemma1, NonMarginalFunctionalIsFlagged) {
  // Rank one with v(++++) = v(--++), so |a> = v(++++) - v(--++) = 0.
  ComplexMatrix m(16);
  const auto h = std::size_t{0};
  const auto k = static_cast<std::size_t>(parse_history("--++"));
  m(h, h) = m(k, k) = m(h, k) = m(k, h) = 0.25;
  EXPECT_THROW(lemma1_vectors(gram_vectors(DecoherenceFunctional(m))), MarginalConstraintError);
}

TEST(Theorem1, IdenticalVectorsHoldWithSlack) {
  CorrelatorVectors v{real_vector({1.0}), real_vector({1.0}), real_vector({1.0}), real_vector({1.0})};
  EXPECT_TRUE(theorem1_check(v));
}

TEST(Theorem1, SingletGeometrySaturates) {
  const double s = std::numbers::sqrt2 / 2.0;
  // a at 0, a' at π/2, b at π/4, b' at -π/4.
  CorrelatorVectors v{real_vector({1.0, 0.0}), real_vector({0.0, 1.0}), real_vector({s, s}),
                      real_vector({s, -s})};
  const auto x = correlator_products(v);
  EXPECT_NEAR(x[0], s, 1e-15);
  EXPECT_NEAR(x[1], s, 1e-15);
  EXPECT_NEAR(x[2], s, 1e-15);
  EXPECT_NEAR(x[3], -s, 1e-15);
  EXPECT_TRUE(theorem1_check(v));
  const auto lhs = tsirelson2_values(x);
  EXPECT_NEAR(lhs[3], std::numbers::pi, 1e-12);
}

TEST(Theorem1, HoldsForRandomUnitVectors) {
  std::mt19937_64 rng(16);
  std::normal_distribution<double> g;
  auto unit = [&] {
    std::vector<Complex> v(4);
    double n = 0.0;
    for (auto& x : v) {
      x = Complex(g(rng), 0.0);
      n += std::norm(x);
    }
    for (auto& x : v) x /= std::sqrt(n);
    return v;
  };
  for (int trial = 0; trial < 1000; ++trial) {
    CorrelatorVectors v{unit(), unit(), unit(), unit()};
    EXPECT_TRUE(theorem1_check(v));
  }
}

TEST(Theorem1, OvershootingInnerProductIsInvalid) {
  CorrelatorVectors v{real_vector({2.0}), real_vector({1.0}), real_vector({1.0}), real_vector({1.0})};
  EXPECT_THROW(theorem1_check(v), InvalidGramError);
}

TEST(LevelTwo, RandomFunctionalsHaveNoThirdOrderInterference) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const DecoherenceFunctional d(oracle::random_hermitian_normalized(rng, 16));
    const SetFunction mu = quadratic_form_table(d);
    for (int i = 0; i < 16; ++i)
      for (int j = i + 1; j < 16; ++j)
        for (int k = j + 1; k < 16; ++k) {
          const std::array<Subset, 3> parts{Subset::singleton(i), Subset::singleton(j), Subset::singleton(k)};
          ASSERT_LE(std::abs(interference(mu, parts)), 1e-11);
        }
    for (int t = 0; t < 200; ++t) {
      const auto p = oracle::random_disjoint_parts(rng, 16, 3);
      const std::array<Subset, 3> parts{Subset{p[0]}, Subset{p[1]}, Subset{p[2]}};
      ASSERT_LE(std::abs(interference(mu, parts)), 1e-11);
    }
  }
}
