#pragma once

// Decoherence functionals on a finite history space.
//
// D is stored on singleton pairs, entries(h,k) = D({h};{k}), and extended
// bilinearly: D(X;Y) = 1_X^T entries 1_Y. Additivity in each argument then
// holds by construction; Hermiticity and normalization are checked once.
//
// Strong positivity is tested on the singleton matrix alone. For any finite
// collection X_1..X_m, M_ij = D(X_i;X_j) = (B entries B^T)_ij with B the 0/1
// incidence matrix of the collection, so M is PSD for every collection iff
// entries is PSD (take the singletons to get the converse).

#include <array>
#include <cstdint>
#include <vector>

#include "qmeasure/histories.hpp"
#include "qmeasure/linalg.hpp"

namespace qmeasure {

class DecoherenceFunctional {
 public:
  static constexpr double kHermiticityTol = 1e-12;
  static constexpr double kNormalizationTol = 1e-10;

  /// Throws ValidationError if the matrix is not square with 1..16 rows,
  /// deviates from Hermitian by more than kHermiticityTol, or its entries do
  /// not sum to 1 within kNormalizationTol. Inputs are never rescaled. The
  /// stored matrix is the exact Hermitian part of the input.
  explicit DecoherenceFunctional(const ComplexMatrix& entries);

  /// Diagonal functional concentrated on one history.
  static DecoherenceFunctional delta(int n, int history);
  /// Diagonal functional from non-negative weights summing to 1.
  static DecoherenceFunctional diagonal(const std::vector<double>& weights);

  const ComplexMatrix& entries() const { return entries_; }
  int size() const { return static_cast<int>(entries_.size()); }
  SampleSpace space() const { return SampleSpace(size()); }
  Complex operator()(int h, int k) const {
    return entries_(static_cast<std::size_t>(h), static_cast<std::size_t>(k));
  }

  /// D(X;Y) by bilinear extension.
  Complex between(Subset x, Subset y) const;

 private:
  ComplexMatrix entries_;
};

/// μ(X) = D(X;X). Throws ValidationError if the imaginary part exceeds 1e-12.
double measure_of(const DecoherenceFunctional& d, Subset x);

/// The signed table X -> D(X;X) over all 2^n subsets, no positivity check.
SetFunction quadratic_form_table(const DecoherenceFunctional& d);

/// Dense μ table. Throws PositivityError naming a mask with μ < -tol.
GeneralizedMeasure to_measure(const DecoherenceFunctional& d,
                              double tol = GeneralizedMeasure::kDefaultTolerance);

struct PositivityReport {
  double min_measure = 0.0;
  Subset argmin;
};

/// Exhaustive sweep of all nonempty subsets.
PositivityReport positivity_report(const DecoherenceFunctional& d);

bool is_positive(const DecoherenceFunctional& d, double tol = 1e-12);

inline constexpr double kStrongPositivityTol = 1e-9;

bool is_strongly_positive(const DecoherenceFunctional& d, double tol = kStrongPositivityTol);

/// Vectors v_h with ⟨v_h|v_k⟩ = D({h};{k}).
struct GramDecomposition {
  std::vector<std::vector<Complex>> vectors;  // one per history, length rank
  int rank = 0;
  double residual = 0.0;  // max |Gram - entries|
};

/// Eigendecomposes `entries`, keeps eigenvalues above tol and sets
/// v_h[m] = sqrt(λ_m) conj(U(h,m)). Throws NotStronglyPositiveError if an
/// eigenvalue is below -tol.
GramDecomposition gram_vectors(const DecoherenceFunctional& d, double tol = kStrongPositivityTol);

/// Signed sums |a⟩ = Σ_h i(h) v_h, and likewise a', b, b' for the 16-history
/// space.
struct CorrelatorVectors {
  std::vector<Complex> a, a_prime, b, b_prime;
};

/// Throws InputError unless the decomposition has 16 vectors, and
/// MarginalConstraintError if any of the four norms is off 1 by more than tol.
CorrelatorVectors lemma1_vectors(const GramDecomposition& g, double tol = 1e-8);

/// Re⟨a|b⟩, Re⟨a|b'⟩, Re⟨a'|b⟩, Re⟨a'|b'⟩.
std::array<double, 4> correlator_products(const CorrelatorVectors& v);

/// Angle form of the arcsine inequality. With θ = π/2 - arcsin Re⟨α|β⟩ for
/// the four (α,β) pairs, checks for each pair p that
///   θ_p <= Σ_{q≠p} θ_q + tol   and   Σ_{q≠p} θ_q - θ_p <= 2π + tol.
/// Throws InvalidGramError if an inner product lies outside [-1-tol, 1+tol].
bool theorem1_check(const CorrelatorVectors& v, double tol = 1e-10);

}  // namespace qmeasure
