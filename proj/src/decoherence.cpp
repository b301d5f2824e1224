#include "qmeasure/decoherence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qmeasure/errors.hpp"
#include "qmeasure/joint_space.hpp"

namespace qmeasure {

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

DecoherenceFunctional::DecoherenceFunctional(const ComplexMatrix& entries) {
  const std::size_t n = entries.size();
  if (n < 1 || n > static_cast<std::size_t>(kMaxHistories))
    throw ValidationError("decoherence functional must have 1..16 histories, got " +
                          std::to_string(n));
  for (const auto& v : entries.data())
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw ValidationError("decoherence functional has a non-finite entry");
  const double defect = hermiticity_defect(entries);
  if (defect > kHermiticityTol)
    throw ValidationError("matrix is not Hermitian: max |D - D^dagger| = " + fmt_double(defect));
  entries_ = hermitian_part(entries);
  const double total = entries_.sum().real();
  if (std::abs(total - 1.0) > kNormalizationTol)
    throw ValidationError("entries sum to " + fmt_double(total) + ", expected 1");
}

DecoherenceFunctional DecoherenceFunctional::delta(int n, int history) {
  if (history < 0 || history >= n) throw InputError("history index out of range");
  ComplexMatrix m(static_cast<std::size_t>(n));
  m(static_cast<std::size_t>(history), static_cast<std::size_t>(history)) = 1.0;
  return DecoherenceFunctional(m);
}

DecoherenceFunctional DecoherenceFunctional::diagonal(const std::vector<double>& weights) {
  ComplexMatrix m(weights.size());
  for (std::size_t h = 0; h < weights.size(); ++h) {
    if (weights[h] < 0.0) throw PositivityError("negative diagonal weight");
    m(h, h) = weights[h];
  }
  return DecoherenceFunctional(m);
}

Complex DecoherenceFunctional::between(Subset x, Subset y) const {
  Complex total{};
  for (int h = 0; h < size(); ++h) {
    if (!x.contains(h)) continue;
    for (int k = 0; k < size(); ++k)
      if (y.contains(k)) total += (*this)(h, k);
  }
  return total;
}

double measure_of(const DecoherenceFunctional& d, Subset x) {
  if (x.mask & ~d.space().full_mask()) throw InputError("subset lies outside the sample space");
  const Complex mu = d.between(x, x);
  if (std::abs(mu.imag()) > 1e-12)
    throw ValidationError("D(X;X) has imaginary part " + fmt_double(mu.imag()) +
                          " (corrupted or non-Hermitian input)");
  return mu.real();
}

SetFunction quadratic_form_table(const DecoherenceFunctional& d) {
  const SampleSpace space = d.space();
  std::vector<double> values(space.subset_count(), 0.0);
  // μ(X ∪ {h}) = μ(X) + D_hh + 2 Re Σ_{k∈X} D_hk, with h the lowest bit.
  for (std::size_t m = 1; m < values.size(); ++m) {
    const auto mask = static_cast<std::uint32_t>(m);
    const int h = std::countr_zero(mask);
    const std::uint32_t rest = mask & (mask - 1);
    double cross = 0.0;
    for (std::uint32_t r = rest; r != 0; r &= r - 1) cross += d(h, std::countr_zero(r)).real();
    values[m] = values[rest] + d(h, h).real() + 2.0 * cross;
  }
  return SetFunction(space, std::move(values));
}

GeneralizedMeasure to_measure(const DecoherenceFunctional& d, double tol) {
  SetFunction table = quadratic_form_table(d);
  auto v = table.values();
  return GeneralizedMeasure(d.space(), std::vector<double>(v.begin(), v.end()), tol);
}

PositivityReport positivity_report(const DecoherenceFunctional& d) {
  const SetFunction table = quadratic_form_table(d);
  const auto v = table.values();
  PositivityReport report;
  report.min_measure = v[1];
  report.argmin = Subset{1};
  for (std::size_t m = 2; m < v.size(); ++m) {
    if (v[m] < report.min_measure) {
      report.min_measure = v[m];
      report.argmin = Subset{static_cast<std::uint32_t>(m)};
    }
  }
  return report;
}

bool is_positive(const DecoherenceFunctional& d, double tol) {
  return positivity_report(d).min_measure >= -tol;
}

bool is_strongly_positive(const DecoherenceFunctional& d, double tol) {
  return min_eigenvalue(d.entries()) >= -tol;
}

GramDecomposition gram_vectors(const DecoherenceFunctional& d, double tol) {
  const HermitianEigen eig = hermitian_eigen(d.entries());
  if (eig.values.front() < -tol)
    throw NotStronglyPositiveError("eigenvalue " + fmt_double(eig.values.front()) +
                                   " below -tol; no Gram vectors exist");
  const std::size_t n = eig.values.size();
  std::vector<std::size_t> kept;
  for (std::size_t j = 0; j < n; ++j)
    if (eig.values[j] > tol) kept.push_back(j);

  GramDecomposition g;
  g.rank = static_cast<int>(kept.size());
  g.vectors.assign(n, std::vector<Complex>(kept.size()));
  for (std::size_t h = 0; h < n; ++h)
    for (std::size_t m = 0; m < kept.size(); ++m) {
      const std::size_t j = kept[m];
      g.vectors[h][m] = std::sqrt(eig.values[j]) * std::conj(eig.vectors(h, j));
    }

  for (std::size_t h = 0; h < n; ++h)
    for (std::size_t k = 0; k < n; ++k)
      g.residual = std::max(
          g.residual, std::abs(inner(g.vectors[h], g.vectors[k]) -
                               d(static_cast<int>(h), static_cast<int>(k))));
  if (g.residual > 10.0 * tol)
    throw InternalError("Gram reconstruction residual " + fmt_double(g.residual) +
                        " exceeds 10*tol");
  return g;
}

CorrelatorVectors lemma1_vectors(const GramDecomposition& g, double tol) {
  if (g.vectors.size() != static_cast<std::size_t>(kJointHistories))
    throw InputError("correlator vectors need the 16-history space");
  const std::size_t r = static_cast<std::size_t>(g.rank);
  CorrelatorVectors out{std::vector<Complex>(r), std::vector<Complex>(r), std::vector<Complex>(r),
                        std::vector<Complex>(r)};
  for (int h = 0; h < kJointHistories; ++h) {
    const auto& v = g.vectors[static_cast<std::size_t>(h)];
    const double i = outcome(h, Party::alya, Setting::unprimed);
    const double ip = outcome(h, Party::alya, Setting::primed);
    const double j = outcome(h, Party::bai, Setting::unprimed);
    const double jp = outcome(h, Party::bai, Setting::primed);
    for (std::size_t m = 0; m < r; ++m) {
      out.a[m] += i * v[m];
      out.a_prime[m] += ip * v[m];
      out.b[m] += j * v[m];
      out.b_prime[m] += jp * v[m];
    }
  }
  const std::array<std::pair<const char*, const std::vector<Complex>*>, 4> named{
      {{"a", &out.a}, {"a'", &out.a_prime}, {"b", &out.b}, {"b'", &out.b_prime}}};
  for (const auto& [name, vec] : named) {
    const double norm = std::sqrt(inner(*vec, *vec).real());
    if (std::abs(norm - 1.0) > tol)
      throw MarginalConstraintError(std::string("|") + name + "> has norm " + fmt_double(norm) +
                                    "; the functional does not reproduce normalized marginals");
  }
  return out;
}

std::array<double, 4> correlator_products(const CorrelatorVectors& v) {
  return {inner(v.a, v.b).real(), inner(v.a, v.b_prime).real(), inner(v.a_prime, v.b).real(),
          inner(v.a_prime, v.b_prime).real()};
}

bool theorem1_check(const CorrelatorVectors& v, double tol) {
  const auto products = correlator_products(v);
  std::array<double, 4> theta{};
  for (std::size_t p = 0; p < 4; ++p) {
    const double x = products[p];
    if (x < -1.0 - tol || x > 1.0 + tol)
      throw InvalidGramError("inner product " + fmt_double(x) + " outside [-1, 1]");
    theta[p] = std::numbers::pi / 2 - std::asin(std::clamp(x, -1.0, 1.0));
  }
  for (std::size_t p = 0; p < 4; ++p) {
    double others = 0.0;
    for (std::size_t q = 0; q < 4; ++q)
      if (q != p) others += theta[q];
    if (theta[p] > others + tol) return false;
    if (others - theta[p] > 2 * std::numbers::pi + tol) return false;
  }
  return true;
}

}  // namespace qmeasure
