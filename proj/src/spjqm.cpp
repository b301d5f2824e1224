#include "qmeasure/spjqm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qmeasure/errors.hpp"
#include "qmeasure/polytope.hpp"

namespace qmeasure {

namespace {

constexpr std::size_t kN = kJointHistories;
constexpr std::size_t kEq = MarginalConstraints::kEquations;

// cell[e][h]: outcome-pair index of history h in experiment e.
using CellTable = std::array<std::array<std::size_t, kN>, 4>;

CellTable build_cells() {
  CellTable cells{};
  constexpr std::array<Setting, 2> settings{Setting::unprimed, Setting::primed};
  for (Setting alpha : settings)
    for (Setting beta : settings) {
      const auto e = static_cast<std::size_t>(experiment_index(alpha, beta));
      for (std::size_t h = 0; h < kN; ++h) {
        const int hi = static_cast<int>(h);
        cells[e][h] = static_cast<std::size_t>(
            outcome_pair_index(outcome(hi, Party::alya, alpha), outcome(hi, Party::bai, beta)));
      }
    }
  return cells;
}

const CellTable& cells() {
  static const CellTable table = build_cells();
  return table;
}

std::size_t equation(std::size_t e, std::size_t h, std::size_t k) {
  return 16 * e + 4 * cells()[e][h] + cells()[e][k];
}

std::array<Complex, kEq> apply_constraints(const ComplexMatrix& m) {
  std::array<Complex, kEq> out{};
  for (std::size_t e = 0; e < 4; ++e)
    for (std::size_t h = 0; h < kN; ++h)
      for (std::size_t k = 0; k < kN; ++k) out[equation(e, h, k)] += m(h, k);
  return out;
}

// K^+ = K^T (K K^T)^+, stored as [h*16 + k][equation].
struct Pseudoinverse {
  std::vector<double> data = std::vector<double>(kN * kN * kEq, 0.0);
  double operator()(std::size_t hk, std::size_t r) const { return data[hk * kEq + r]; }
};

Pseudoinverse build_pseudoinverse() {
  // Gram matrix K K^T, counted directly from the 0/1 structure of K.
  ComplexMatrix gram(kEq);
  for (std::size_t h = 0; h < kN; ++h)
    for (std::size_t k = 0; k < kN; ++k)
      for (std::size_t e = 0; e < 4; ++e)
        for (std::size_t f = 0; f < 4; ++f) gram(equation(e, h, k), equation(f, h, k)) += 1.0;

  const HermitianEigen eig = hermitian_eigen(gram);
  const double cutoff = 1e-9 * eig.values.back();
  std::vector<double> gram_pinv(kEq * kEq, 0.0);
  for (std::size_t j = 0; j < kEq; ++j) {
    if (eig.values[j] <= cutoff) continue;
    const double inv = 1.0 / eig.values[j];
    for (std::size_t r = 0; r < kEq; ++r)
      for (std::size_t s = 0; s < kEq; ++s)
        gram_pinv[r * kEq + s] +=
            inv * (eig.vectors(r, j) * std::conj(eig.vectors(s, j))).real();
  }

  Pseudoinverse p;
  for (std::size_t h = 0; h < kN; ++h)
    for (std::size_t k = 0; k < kN; ++k) {
      double* row = &p.data[(h * kN + k) * kEq];
      for (std::size_t e = 0; e < 4; ++e) {
        const double* g = &gram_pinv[equation(e, h, k) * kEq];
        for (std::size_t s = 0; s < kEq; ++s) row[s] += g[s];
      }
    }
  return p;
}

const Pseudoinverse& pseudoinverse() {
  static const Pseudoinverse p = build_pseudoinverse();
  return p;
}

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) s += std::norm(a.data()[i] - b.data()[i]);
  return std::sqrt(s);
}

std::string placement_description(int placement) {
  static constexpr std::array<const char*, 4> names{"X_ab", "X_ab'", "X_a'b", "X_a'b'"};
  std::string out = "TsirelsonII: |";
  for (int q = 0; q < 4; ++q) {
    if (q > 0) out += q == placement ? " - " : " + ";
    else if (q == placement) out += "-";
    out += std::string("asin ") + names[static_cast<std::size_t>(q)];
  }
  return out + "| <= pi";
}

}  // namespace

MarginalConstraints::MarginalConstraints(const Behavior& y) {
  const ExperimentTables tables = tables_from_behavior(y);
  for (std::size_t e = 0; e < 4; ++e)
    for (std::size_t c = 0; c < 4; ++c) targets_[16 * e + 5 * c] = tables[e].p[c];
}

double MarginalConstraints::violation(const ComplexMatrix& m) const {
  const auto values = apply_constraints(m);
  double worst = 0.0;
  for (std::size_t r = 0; r < kEq; ++r) worst = std::max(worst, std::abs(values[r] - targets_[r]));
  return worst;
}

ComplexMatrix affine_projection(const ComplexMatrix& m, const MarginalConstraints& c) {
  if (m.size() != kN) throw InputError("affine projection needs a 16x16 matrix");
  auto residual = apply_constraints(m);
  for (std::size_t r = 0; r < kEq; ++r) residual[r] -= c.targets()[r];
  const Pseudoinverse& pinv = pseudoinverse();
  ComplexMatrix out = m;
  for (std::size_t h = 0; h < kN; ++h)
    for (std::size_t k = 0; k < kN; ++k) {
      Complex delta{};
      const std::size_t hk = h * kN + k;
      for (std::size_t r = 0; r < kEq; ++r) delta += pinv(hk, r) * residual[r];
      out(h, k) -= delta;
    }
  return hermitian_part(out);
}

ComplexMatrix psd_projection(const ComplexMatrix& m) {
  const HermitianEigen eig = hermitian_eigen(m);
  const std::size_t n = m.size();
  ComplexMatrix out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double lambda = eig.values[j];
    if (lambda <= 0.0) continue;
    for (std::size_t r = 0; r < n; ++r) {
      const Complex vr = lambda * eig.vectors(r, j);
      for (std::size_t c = 0; c < n; ++c) out(r, c) += vr * std::conj(eig.vectors(c, j));
    }
  }
  return hermitian_part(out);
}

const char* to_string(FeasibilityStatus s) {
  switch (s) {
    case FeasibilityStatus::feasible:
      return "feasible";
    case FeasibilityStatus::infeasible:
      return "infeasible";
    case FeasibilityStatus::undetermined:
      return "undetermined";
  }
  return "undetermined";
}

bool verify_certificate(const DecoherenceFunctional& d, const Behavior& y, double tol) {
  if (d.size() != kJointHistories) return false;
  if (!is_strongly_positive(d, tol)) return false;
  Marginals m;
  try {
    m = marginals_from_D(d);
  } catch (const PositivityError&) {
    return false;
  }
  if (m.decoherence_residual > tol) return false;
  const ExperimentTables expected = tables_from_behavior(y);
  for (std::size_t e = 0; e < 4; ++e)
    for (std::size_t c = 0; c < 4; ++c)
      if (std::abs(m.tables[e].p[c] - expected[e].p[c]) > tol) return false;
  return true;
}

FeasibilityOutcome solve_spjqm(const Behavior& y, const SpjqmOptions& options) {
  validate(y);
  FeasibilityOutcome out;

  const InequalityReport report = inequality_report(y);
  if (!report.tsirelson2_ok) {
    const int p = report.worst_tsirelson2_placement();
    out.status = FeasibilityStatus::infeasible;
    out.violated_inequality =
        ViolatedInequality{p, placement_description(p), report.tsirelson2_lhs[static_cast<std::size_t>(p)]};
    return out;
  }

  const MarginalConstraints constraints(y);

  auto try_accept = [&](const ComplexMatrix& candidate) {
    try {
      DecoherenceFunctional d(candidate);
      if (verify_certificate(d, y, options.tol)) {
        out.status = FeasibilityStatus::feasible;
        out.certificate = std::move(d);
        return true;
      }
    } catch (const ValidationError&) {
    }
    return false;
  };

  // The polytope construction already certifies every local behavior.
  const ComplexMatrix constructed = construct_joint_measure(y).entries();
  if (try_accept(constructed)) {
    out.affine_violation = constraints.violation(constructed);
    out.psd_violation = std::max(0.0, -min_eigenvalue(constructed));
    out.checkpoints.push_back({0, out.psd_violation, out.affine_violation, 0.0});
    return out;
  }

  // Dykstra from the minimum-norm affine point; starting from the construction
  // instead converges about fifty times slower near the TsirelsonII boundary.
  ComplexMatrix x = affine_projection(ComplexMatrix(kN), constraints);
  ComplexMatrix psd_point = x;
  out.psd_violation = std::max(0.0, -min_eigenvalue(x));
  out.affine_violation = constraints.violation(x);
  out.checkpoints.push_back({0, out.psd_violation, out.affine_violation, 0.0});
  if (out.psd_violation <= options.tol && try_accept(x)) return out;

  // Dykstra: increments p (PSD step) and q (affine step).
  ComplexMatrix p(kN), q(kN);
  for (int it = 1; it <= options.max_iters; ++it) {
    psd_point = psd_projection(x + p);
    p = x + p - psd_point;
    x = affine_projection(psd_point + q, constraints);
    q = psd_point + q - x;

    out.iterations = it;
    out.psd_violation = std::max(0.0, -min_eigenvalue(x));
    out.affine_violation = constraints.violation(psd_point);
    const bool converged =
        out.psd_violation <= options.tol && out.affine_violation <= options.tol;
    if (options.checkpoint_interval > 0 && (it % options.checkpoint_interval == 0 || converged))
      out.checkpoints.push_back(
          {it, out.psd_violation, out.affine_violation, frobenius_distance(x, psd_point)});
    if (converged && try_accept(x)) return out;
  }
  out.status = FeasibilityStatus::undetermined;
  return out;
}

}  // namespace qmeasure
