#pragma once

// Finite sample spaces, subsets as bitmasks, set functions on them, and the
// interference functionals I_k that define the sum-rule hierarchy.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace qmeasure {

inline constexpr int kMaxHistories = 16;

class SampleSpace {
 public:
  /// Throws InputError unless 1 <= n <= kMaxHistories.
  explicit SampleSpace(int n);

  int size() const { return n_; }
  std::uint32_t full_mask() const { return (std::uint32_t{1} << n_) - 1; }
  std::size_t subset_count() const { return std::size_t{1} << n_; }

  bool operator==(const SampleSpace&) const = default;

 private:
  int n_;
};

/// A subset of a sample space; bit h set iff history h belongs to it.
struct Subset {
  std::uint32_t mask = 0;

  static constexpr Subset singleton(int h) { return Subset{std::uint32_t{1} << h}; }

  constexpr bool empty() const { return mask == 0; }
  constexpr bool contains(int h) const { return (mask >> h) & 1U; }
  constexpr int size() const { return std::popcount(mask); }
  constexpr bool disjoint_from(Subset other) const { return (mask & other.mask) == 0; }

  friend constexpr Subset operator|(Subset a, Subset b) { return Subset{a.mask | b.mask}; }
  friend constexpr bool operator==(Subset, Subset) = default;
  friend constexpr auto operator<=>(Subset, Subset) = default;
};

/// Real function on all 2^n subsets, stored densely and indexed by mask.
/// Only f(∅) = 0 is required; signs are unrestricted.
class SetFunction {
 public:
  /// `values.size()` must be 2^n and values[0] must be 0.
  SetFunction(SampleSpace space, std::vector<double> values);

  const SampleSpace& space() const { return space_; }
  double operator()(Subset x) const { return values_[x.mask]; }
  std::span<const double> values() const { return values_; }

 private:
  SampleSpace space_;
  std::vector<double> values_;
};

/// A non-negative set function: μ(X) >= -tol for every X.
class GeneralizedMeasure : public SetFunction {
 public:
  static constexpr double kDefaultTolerance = 1e-12;

  /// Throws PositivityError naming the first offending mask.
  GeneralizedMeasure(SampleSpace space, std::vector<double> values,
                     double tol = kDefaultTolerance);

  /// Point mass on history h.
  static GeneralizedMeasure delta(SampleSpace space, int h);
  /// Additive measure from per-history weights.
  static GeneralizedMeasure from_weights(SampleSpace space, std::span<const double> weights);
};

/// I_k(X_1..X_k) = Σ_{∅≠S⊆{1..k}} (-1)^{k-|S|} f(⊔_{i∈S} X_i).
/// Parts must be pairwise disjoint (empty parts are allowed) and lie in the
/// sample space; 1 <= k <= kMaxHistories. The result does not depend on the
/// order of `parts`, bit for bit.
double interference(const SetFunction& f, std::span<const Subset> parts);

struct SumRuleOptions {
  double tol = 1e-10;
  /// Tuple count above which exhaustive enumeration gives way to sampling.
  std::uint64_t budget = 100'000;
  std::uint64_t seed = 0;
};

struct SumRuleReport {
  bool holds = true;
  bool exhaustive = false;
  std::uint64_t tuples_tested = 0;
  double max_abs_interference = 0.0;
  /// The tuple attaining max_abs_interference (empty if nothing was tested).
  std::vector<Subset> worst_tuple;
};

/// Tests I_{k+1} = 0 over ordered disjoint (k+1)-tuples. There are (k+2)^n of
/// them (each history goes to one part or to none); all are tested if that
/// count fits the budget, otherwise `budget` tuples are drawn uniformly with a
/// seeded generator.
SumRuleReport check_sum_rule(const SetFunction& f, int k, const SumRuleOptions& options = {});

bool sum_rule_holds(const SetFunction& f, int k, const SumRuleOptions& options = {});

/// Smallest k <= k_max whose sum rule I_{k+1} = 0 holds; nullopt means
/// "above k_max".
std::optional<int> classify_level(const SetFunction& f, int k_max,
                                  const SumRuleOptions& options = {});

}  // namespace qmeasure
