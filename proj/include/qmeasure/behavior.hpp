#pragma once

// No-signalling boxes for two parties with two settings and two outcomes.
//
// A Behavior is the 8-coordinate parameterization
//   P_{αβ}(i,j) = (1 + i mA_α + j mB_β + i j X_αβ) / 4,
// so the marginals of P_{αβ} depend only on the local setting and
// no-signalling holds structurally. Correlators are ordered
// (X_ab, X_ab', X_a'b, X_a'b'), see experiment_index().

#include <array>

#include "qmeasure/decoherence.hpp"
#include "qmeasure/joint_space.hpp"

namespace qmeasure {

/// P(i,j) for one experiment, indexed by outcome_pair_index(i, j):
/// p = {P(+,+), P(+,-), P(-,+), P(-,-)}.
struct JointDistribution {
  std::array<double, 4> p{};

  double at(int i, int j) const { return p[static_cast<std::size_t>(outcome_pair_index(i, j))]; }
  double& at(int i, int j) { return p[static_cast<std::size_t>(outcome_pair_index(i, j))]; }

  bool operator==(const JointDistribution&) const = default;
};

using ExperimentTables = std::array<JointDistribution, 4>;

struct Behavior {
  std::array<double, 2> mA{};  // ⟨A⟩ at a, a'
  std::array<double, 2> mB{};  // ⟨B⟩ at b, b'
  std::array<double, 4> X{};   // X_ab, X_ab', X_a'b, X_a'b'

  double marginal(Party p, Setting s) const {
    return (p == Party::alya ? mA : mB)[static_cast<std::size_t>(s)];
  }
  double correlator(Setting alpha, Setting beta) const {
    return X[static_cast<std::size_t>(experiment_index(alpha, beta))];
  }

  bool operator==(const Behavior&) const = default;
};

/// Largest coordinate difference.
double max_abs_diff(const Behavior& a, const Behavior& b);

/// Throws InvalidBehaviorError unless every coordinate is in [-1,1] and all
/// 16 reconstructed probabilities are >= -tol.
void validate(const Behavior& y, double tol = 1e-12);
bool is_valid(const Behavior& y, double tol = 1e-12);

/// Throws InvalidBehaviorError if an entry is below -1e-12; entries in
/// [-1e-12, 0) are returned as 0.
JointDistribution probabilities_from_behavior(const Behavior& y, Setting alpha, Setting beta);
ExperimentTables tables_from_behavior(const Behavior& y);

/// Tables must be non-negative and normalized within 1e-9. Throws
/// NoSignallingError naming party and setting when a local marginal differs
/// by more than 1e-9 between the two tables sharing that setting.
Behavior behavior_from_probabilities(const ExperimentTables& tables);

/// Signed CHSH forms, entry p carrying the minus sign on X[p].
std::array<double, 4> chsh_values(const std::array<double, 4>& X);
/// |Σ_{q≠p} arcsin X_q - arcsin X_p| for each placement p.
std::array<double, 4> tsirelson2_values(const std::array<double, 4>& X);

inline constexpr double kInequalityTol = 1e-12;

struct InequalityReport {
  std::array<double, 4> chsh_values{};
  bool chshb_ok = true;       // |CHSH| <= 2
  bool tsirelson1_ok = true;  // |CHSH| <= 2√2
  std::array<double, 4> tsirelson2_lhs{};
  bool tsirelson2_ok = true;  // arcsine form <= π

  double max_chsh() const;
  double max_tsirelson2() const;
  int worst_tsirelson2_placement() const;
  /// Correlators admit an ordinary quantum model iff the arcsine form holds.
  bool oqmc_exists() const { return tsirelson2_ok; }
};

InequalityReport inequality_report(const Behavior& y);

/// Zero marginals, X = (1, 1, 1, -1).
Behavior canonical_pr_box();

/// A local relabeling. Acting on a history ω, the new outcome at Alya's
/// setting α is ω at setting σ(α), negated if flip_a_outputs[σ(α)]; σ swaps
/// a and a' when swap_a_inputs is set. Likewise for Bai. Output flips are
/// thus indexed by the setting of the box being transformed.
struct FlipSpec {
  bool swap_a_inputs = false;
  bool swap_b_inputs = false;
  std::array<bool, 2> flip_a_outputs{};
  std::array<bool, 2> flip_b_outputs{};

  /// Bits 0-1 flip_a_outputs, 2-3 flip_b_outputs, 4 swap_a, 5 swap_b.
  static FlipSpec from_code(int code);
  int code() const;
  FlipSpec inverse() const;

  bool operator==(const FlipSpec&) const = default;
};

inline constexpr int kFlipGroupOrder = 64;

/// Image of a history index under the flip.
int apply_flip_history(const FlipSpec& f, int history);

Behavior apply_flip(const FlipSpec& f, const Behavior& y);

/// Simultaneous row/column permutation: D'(π h; π k) = D(h; k).
DecoherenceFunctional apply_flip_D(const FlipSpec& f, const DecoherenceFunctional& d);

inline constexpr double kDecoherenceTol = 1e-9;

struct Marginals {
  ExperimentTables tables;
  /// Largest modulus of an off-diagonal entry over the four 4x4 marginals.
  double decoherence_residual = 0.0;
  /// The summed 4x4 marginal matrices, indexed [experiment][4*c + c'].
  std::array<std::array<Complex, 16>, 4> matrices{};
};

/// Partial sums of D over the settings not measured in each experiment.
/// Throws InputError unless D lives on the 16-history space, and
/// PositivityError if a marginal diagonal is below -kDecoherenceTol.
Marginals marginals_from_D(const DecoherenceFunctional& d);

}  // namespace qmeasure
