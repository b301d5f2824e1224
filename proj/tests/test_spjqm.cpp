#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "qmeasure/errors.hpp"
#include "qmeasure/polytope.hpp"
#include "qmeasure/spjqm.hpp"
#include "support/oracles.hpp"

using namespace qmeasure;

namespace {

Behavior correlated(double t) { return Behavior{{0, 0}, {0, 0}, {t, t, t, -t}}; }

void expect_sound(const Behavior& y, const FeasibilityOutcome& r, double tol) {
  ASSERT_EQ(r.status, FeasibilityStatus::feasible);
  ASSERT_TRUE(r.certificate.has_value());
  EXPECT_TRUE(verify_certificate(*r.certificate, y, tol));
  EXPECT_GE(oracle::min_eigenvalue(r.certificate->entries()), -tol);
  const InequalityReport rep = inequality_report(y);
  EXPECT_TRUE(rep.tsirelson1_ok);
  EXPECT_TRUE(rep.tsirelson2_ok);

  const CorrelatorVectors v = lemma1_vectors(gram_vectors(*r.certificate, tol), 1e-7);
  for (const auto* vec : {&v.a, &v.a_prime, &v.b, &v.b_prime})
    EXPECT_NEAR(std::sqrt(inner(*vec, *vec).real()), 1.0, 1e-7);
  const auto x = correlator_products(v);
  for (std::size_t p = 0; p < 4; ++p) EXPECT_NEAR(x[p], y.X[p], 1e-7) << "correlator " << p;
  EXPECT_LE(std::abs(inner(v.a, v.b).imag()), 1e-7);
}

}  // namespace

TEST(AffineProjection, ConstructedMeasureIsAFixedPoint) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const Behavior y = oracle::random_behavior(rng);
    const MarginalConstraints c(y);
    const ComplexMatrix d = construct_joint_measure(y).entries();
    EXPECT_LE(c.violation(d), 1e-12);
    EXPECT_LE(max_abs_diff(affine_projection(d, c), d), 1e-12);
  }
}

TEST(AffineProjection, IdempotentAndHermitian) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const MarginalConstraints c(oracle::random_behavior(rng));
    const ComplexMatrix once = affine_projection(oracle::random_hermitian_normalized(rng, 16), c);
    EXPECT_EQ(hermiticity_defect(once), 0.0);
    EXPECT_LE(c.violation(once), 1e-12);
    EXPECT_LE(max_abs_diff(affine_projection(once, c), once), 1e-12);
  }
}

TEST(AffineProjection, IsOrthogonal) {
  // M - P(M) is orthogonal to every difference of affine points.
  std::mt19937_64 rng(43);
  const Behavior y = oracle::random_behavior(rng);
  const MarginalConstraints c(y);
  const ComplexMatrix m = oracle::random_hermitian_normalized(rng, 16);
  const ComplexMatrix p = affine_projection(m, c);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix q = affine_projection(oracle::random_hermitian_normalized(rng, 16), c);
    Complex dot{};
    for (std::size_t i = 0; i < 256; ++i) dot += std::conj(m.data()[i] - p.data()[i]) * (q.data()[i] - p.data()[i]);
    EXPECT_NEAR(std::abs(dot), 0.0, 1e-11);
  }
}

TEST(AffineProjection, ZeroMatrixToUniformTables) {
  const MarginalConstraints c(Behavior{});
  const ComplexMatrix p = affine_projection(ComplexMatrix(16), c);
  const DecoherenceFunctional d(p);  // normalization follows from the constraints
  const Marginals m = marginals_from_D(d);
  EXPECT_LE(m.decoherence_residual, 1e-12);
  for (const auto& t : m.tables)
    for (double v : t.p) EXPECT_NEAR(v, 0.25, 1e-12);
}

TEST(PsdProjection, ClipsNegativeSpectrum) {
  const ComplexMatrix p = psd_projection(d_pr_canonical().entries());
  EXPECT_GE(oracle::min_eigenvalue(p), -1e-14);
  std::mt19937_64 rng(44);
  const ComplexMatrix psd = oracle::random_psd_normalized(rng, 16, 5);
  EXPECT_LE(max_abs_diff(psd_projection(psd), psd), 1e-12);
}

TEST(VerifyCertificate, Examples) {
  EXPECT_TRUE(verify_certificate(DecoherenceFunctional::delta(16, 0), vertex_catalog()[0].behavior, 1e-12));
  EXPECT_FALSE(verify_certificate(DecoherenceFunctional::delta(16, 1), vertex_catalog()[0].behavior, 1e-12));
  EXPECT_FALSE(verify_certificate(d_pr_canonical(), canonical_pr_box(), 1e-8));
  EXPECT_FALSE(verify_certificate(DecoherenceFunctional::delta(4, 0), Behavior{}, 1e-8));
}

TEST(SolveSpjqm, LocalVerticesAreFeasible) {
  for (int h = 0; h < kLocalVertexCount; ++h) {
    const Behavior& y = vertex_catalog()[static_cast<std::size_t>(h)].behavior;
    const FeasibilityOutcome r = solve_spjqm(y);
    ASSERT_EQ(r.status, FeasibilityStatus::feasible) << h;
    EXPECT_TRUE(verify_certificate(*r.certificate, y, 1e-8));
  }
}

TEST(SolveSpjqm, PrBoxIsInfeasibleByTheArcsineForm) {
  const FeasibilityOutcome r = solve_spjqm(canonical_pr_box());
  EXPECT_EQ(r.status, FeasibilityStatus::infeasible);
  EXPECT_FALSE(r.certificate.has_value());
  ASSERT_TRUE(r.violated_inequality.has_value());
  EXPECT_EQ(r.violated_inequality->placement, 3);
  EXPECT_NEAR(r.violated_inequality->lhs, 2.0 * std::numbers::pi, 1e-12);
  EXPECT_NE(r.violated_inequality->description.find("TsirelsonII"), std::string::npos);
  EXPECT_GT(r.violated_inequality->lhs, std::numbers::pi + 1e-12);
}

TEST(SolveSpjqm, CorrelatedPointSevenIsFeasible) {
  const Behavior y = correlated(0.7);
  EXPECT_LT(inequality_report(y).max_tsirelson2(), std::numbers::pi);
  const FeasibilityOutcome r = solve_spjqm(y);
  expect_sound(y, r, 1e-8);
  EXPECT_LE(r.psd_violation, 1e-8);
  EXPECT_LE(r.affine_violation, 1e-8);
}

TEST(SolveSpjqm, SingletTypeCertificateReproducesCorrelators) {
  const Behavior y = correlated(std::numbers::sqrt2 / 2.0);
  expect_sound(y, solve_spjqm(y), 1e-8);
}

TEST(SolveSpjqm, MixturesNearThePrBoxAreInfeasible) {
  for (double t : {0.75, 0.8, 0.9}) {
    const FeasibilityOutcome r = solve_spjqm(correlated(t));
    EXPECT_EQ(r.status, FeasibilityStatus::infeasible) << t;
    EXPECT_GT(r.violated_inequality->lhs, std::numbers::pi);
  }
}

TEST(SolveSpjqm, IterationCapGivesUndetermined) {
  SpjqmOptions opts;
  opts.max_iters = 5;
  const FeasibilityOutcome r = solve_spjqm(correlated(0.7), opts);
  EXPECT_EQ(r.status, FeasibilityStatus::undetermined);
  EXPECT_EQ(r.iterations, 5);
  EXPECT_FALSE(r.certificate.has_value());
  EXPECT_GT(r.psd_violation + r.affine_violation, 1e-8);
}

TEST(SolveSpjqm, InvalidBehaviorIsRejected) {
  EXPECT_THROW(solve_spjqm(Behavior{{1.0, 0.0}, {-1.0, 0.0}, {1.0, 0.0, 0.0, 0.0}}), InvalidBehaviorError);
}

TEST(SolveSpjqm, ResidualsDoNotIncreaseAcrossCheckpoints) {
  for (double t : {0.6, 0.7, 0.7071}) {
    SpjqmOptions opts;
    opts.checkpoint_interval = 10;
    const FeasibilityOutcome r = solve_spjqm(correlated(t), opts);
    ASSERT_GE(r.checkpoints.size(), 3u);
    for (std::size_t i = 1; i < r.checkpoints.size(); ++i) {
      const auto& a = r.checkpoints[i - 1];
      const auto& b = r.checkpoints[i];
      EXPECT_LE(b.psd_violation + b.affine_violation, a.psd_violation + a.affine_violation + 1e-12)
          << "t " << t << " iteration " << b.iteration;
    }
  }
}

TEST(SolveSpjqm, Deterministic) {
  const FeasibilityOutcome a = solve_spjqm(correlated(0.7));
  const FeasibilityOutcome b = solve_spjqm(correlated(0.7));
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ(a.psd_violation, b.psd_violation);
  EXPECT_EQ(a.affine_violation, b.affine_violation);
  EXPECT_EQ(a.certificate->entries(), b.certificate->entries());
}

TEST(SolveSpjqm, SoundOnRandomBehaviors) {
  std::mt19937_64 rng(45);
  int feasible = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const Behavior y = oracle::random_behavior(rng);
    SpjqmOptions opts;
    opts.max_iters = 20'000;
    const FeasibilityOutcome r = solve_spjqm(y, opts);
    if (r.status == FeasibilityStatus::feasible) {
      ++feasible;
      expect_sound(y, r, opts.tol);
    } else if (r.status == FeasibilityStatus::infeasible) {
      EXPECT_FALSE(inequality_report(y).tsirelson2_ok);
    }
  }
  EXPECT_GT(feasible, 0);
}
