#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace qmeasure {

/// min c·x subject to A x = b, x >= 0. A is rows x cols, row-major.
struct StandardFormLp {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> A;
  std::vector<double> b;
  /// Optional phase-two objective; empty means "any feasible point".
  std::vector<double> c;
};

struct LpSolution {
  enum class Status { optimal, infeasible, unbounded };
  Status status = Status::infeasible;
  std::vector<double> x;
  /// Sum of artificial variables at the end of phase one.
  double infeasibility = 0.0;
  int pivots = 0;
};

/// Dense two-phase tableau simplex with Bland's smallest-index rule for both
/// the entering and the leaving variable, so it terminates on degenerate
/// problems. Phase one declares infeasibility when the artificial sum stays
/// above `feasibility_tol`.
LpSolution solve_lp(const StandardFormLp& lp, double feasibility_tol = 1e-10);

}  // namespace qmeasure
