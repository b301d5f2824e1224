#pragma once

// Strongly positive joint quantal measures (SPJQM): a PSD decoherence
// functional on the 16 joint histories whose four experiment marginals are
// diagonal and equal the behavior's probability tables.
//
// The search is a three-way decision:
//   * the arcsine (TsirelsonII) inequality fails: no SPJQM can exist, and the
//     violated placement is the certificate;
//   * Dykstra's alternating projections between the PSD cone and the affine
//     marginal constraints reach both residuals <= tol: feasible, and the
//     affine iterate is returned as the certificate;
//   * otherwise: undetermined.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qmeasure/behavior.hpp"
#include "qmeasure/decoherence.hpp"
#include "qmeasure/linalg.hpp"

namespace qmeasure {

/// The affine set {M Hermitian 16x16 : every experiment marginal of M equals
/// diag(P_αβ)}. 64 linear equations per real/imaginary part; the system is
/// rank deficient (rank 49) but consistent for every valid behavior.
class MarginalConstraints {
 public:
  static constexpr std::size_t kEquations = 64;

  explicit MarginalConstraints(const Behavior& y);

  /// Target of equation 16e + 4c + c' (experiment e, outcome pairs c, c').
  const std::array<double, kEquations>& targets() const { return targets_; }

  /// Max modulus of (marginals of m) - targets.
  double violation(const ComplexMatrix& m) const;

 private:
  std::array<double, kEquations> targets_{};
};

/// Frobenius-nearest Hermitian matrix satisfying the constraints:
/// M - K^+ (K vec M - t). Idempotent.
ComplexMatrix affine_projection(const ComplexMatrix& m, const MarginalConstraints& c);

/// Nearest PSD matrix: eigenvalues clipped at zero.
ComplexMatrix psd_projection(const ComplexMatrix& m);

enum class FeasibilityStatus { feasible, infeasible, undetermined };

const char* to_string(FeasibilityStatus s);

struct ViolatedInequality {
  int placement = 0;  // index of the correlator carrying the minus sign
  std::string description;
  double lhs = 0.0;
};

struct SpjqmCheckpoint {
  int iteration = 0;
  double psd_violation = 0.0;
  double affine_violation = 0.0;
  /// Frobenius distance between the PSD and the affine iterate.
  double gap = 0.0;
};

struct SpjqmOptions {
  double tol = 1e-8;
  int max_iters = 50'000;
  int checkpoint_interval = 100;
};

struct FeasibilityOutcome {
  FeasibilityStatus status = FeasibilityStatus::undetermined;
  std::optional<DecoherenceFunctional> certificate;
  std::optional<ViolatedInequality> violated_inequality;
  int iterations = 0;
  double psd_violation = 0.0;
  double affine_violation = 0.0;
  std::vector<SpjqmCheckpoint> checkpoints;
};

/// Throws InvalidBehaviorError for invalid y.
FeasibilityOutcome solve_spjqm(const Behavior& y, const SpjqmOptions& options = {});

/// Strongly positive within tol, marginal tables equal to y's within tol,
/// and decoherence residual <= tol.
bool verify_certificate(const DecoherenceFunctional& d, const Behavior& y, double tol);

}  // namespace qmeasure
