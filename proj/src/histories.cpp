#include "qmeasure/histories.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>

#include "qmeasure/errors.hpp"

namespace qmeasure {

SampleSpace::SampleSpace(int n) : n_(n) {
  if (n < 1 || n > kMaxHistories)
    throw InputError("sample space size must be in [1, 16], got " + std::to_string(n));
}

SetFunction::SetFunction(SampleSpace space, std::vector<double> values)
    : space_(space), values_(std::move(values)) {
  if (values_.size() != space_.subset_count())
    throw InputError("set function table has " + std::to_string(values_.size()) +
                     " entries, expected " + std::to_string(space_.subset_count()));
  if (values_[0] != 0.0) throw InputError("set function must vanish on the empty set");
}

GeneralizedMeasure::GeneralizedMeasure(SampleSpace space, std::vector<double> values, double tol)
    : SetFunction(space, std::move(values)) {
  const auto v = this->values();
  for (std::size_t m = 0; m < v.size(); ++m) {
    if (!(v[m] >= -tol))
      throw PositivityError("negative measure " + std::to_string(v[m]) + " on subset mask " +
                            std::to_string(m));
  }
}

GeneralizedMeasure GeneralizedMeasure::delta(SampleSpace space, int h) {
  if (h < 0 || h >= space.size()) throw InputError("history index out of range");
  std::vector<double> values(space.subset_count(), 0.0);
  for (std::size_t m = 0; m < values.size(); ++m)
    if ((m >> h) & 1U) values[m] = 1.0;
  return GeneralizedMeasure(space, std::move(values));
}

GeneralizedMeasure GeneralizedMeasure::from_weights(SampleSpace space,
                                                    std::span<const double> weights) {
  if (weights.size() != static_cast<std::size_t>(space.size()))
    throw InputError("weight vector length does not match the sample space");
  std::vector<double> values(space.subset_count(), 0.0);
  for (std::size_t m = 1; m < values.size(); ++m) {
    const int low = std::countr_zero(static_cast<std::uint32_t>(m));
    values[m] = values[m & (m - 1)] + weights[low];
  }
  return GeneralizedMeasure(space, std::move(values));
}

namespace {

// Assumes validated, sorted parts.
double inclusion_exclusion(const SetFunction& f, std::span<const Subset> parts) {
  const std::size_t k = parts.size();
  double total = 0.0;
  for (std::uint32_t s = 1; s < (std::uint32_t{1} << k); ++s) {
    Subset u;
    for (std::size_t i = 0; i < k; ++i)
      if ((s >> i) & 1U) u = u | parts[i];
    const bool negative = ((k - std::popcount(s)) & 1U) != 0;
    total += negative ? -f(u) : f(u);
  }
  return total;
}

}  // namespace

double interference(const SetFunction& f, std::span<const Subset> parts) {
  if (parts.empty() || parts.size() > static_cast<std::size_t>(kMaxHistories))
    throw InputError("interference needs between 1 and 16 parts, got " +
                     std::to_string(parts.size()));
  const std::uint32_t full = f.space().full_mask();
  std::uint32_t seen = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].mask & ~full)
      throw InputError("part " + std::to_string(i) + " lies outside the sample space");
    if (parts[i].mask & seen)
      throw DisjointnessError("part " + std::to_string(i) + " overlaps an earlier part");
    seen |= parts[i].mask;
  }
  std::array<Subset, kMaxHistories> sorted{};
  std::copy(parts.begin(), parts.end(), sorted.begin());
  std::sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(parts.size()));
  return inclusion_exclusion(f, std::span(sorted.data(), parts.size()));
}

namespace {

// (base)^exp, saturating at UINT64_MAX.
std::uint64_t saturating_pow(std::uint64_t base, int exp) {
  std::uint64_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (out > UINT64_MAX / base) return UINT64_MAX;
    out *= base;
  }
  return out;
}

}  // namespace

SumRuleReport check_sum_rule(const SetFunction& f, int k, const SumRuleOptions& options) {
  if (k < 1 || k + 1 > kMaxHistories) throw InputError("sum-rule order k must be in [1, 15]");
  const int parts_count = k + 1;
  const int n = f.space().size();
  const auto labels = static_cast<std::uint32_t>(parts_count + 1);

  SumRuleReport report;
  std::vector<Subset> tuple(static_cast<std::size_t>(parts_count));
  auto test_labels = [&](std::span<const std::uint32_t> label) {
    std::fill(tuple.begin(), tuple.end(), Subset{});
    for (int h = 0; h < n; ++h)
      if (label[h] != 0) tuple[label[h] - 1].mask |= std::uint32_t{1} << h;
    const double v = std::abs(interference(f, tuple));
    ++report.tuples_tested;
    if (v > report.max_abs_interference || report.worst_tuple.empty()) {
      report.max_abs_interference = std::max(report.max_abs_interference, v);
      report.worst_tuple = tuple;
    }
  };

  std::vector<std::uint32_t> label(static_cast<std::size_t>(n), 0);
  const std::uint64_t count = saturating_pow(labels, n);
  if (count <= options.budget) {
    report.exhaustive = true;
    for (std::uint64_t t = 0; t < count; ++t) {
      test_labels(label);
      for (int h = 0; h < n; ++h) {  // mixed-radix increment
        if (++label[h] < labels) break;
        label[h] = 0;
      }
    }
  } else {
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::uint32_t> pick(0, labels - 1);
    for (std::uint64_t t = 0; t < options.budget; ++t) {
      for (auto& l : label) l = pick(rng);
      test_labels(label);
    }
  }
  report.holds = report.max_abs_interference <= options.tol;
  return report;
}

bool sum_rule_holds(const SetFunction& f, int k, const SumRuleOptions& options) {
  return check_sum_rule(f, k, options).holds;
}

std::optional<int> classify_level(const SetFunction& f, int k_max, const SumRuleOptions& options) {
  if (k_max < 1) throw InputError("k_max must be at least 1");
  const int upper = std::min(k_max, kMaxHistories - 1);
  for (int k = 1; k <= upper; ++k)
    if (sum_rule_holds(f, k, options)) return k;
  return std::nullopt;
}

}  // namespace qmeasure
