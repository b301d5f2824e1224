#include "qmeasure/simplex.hpp"

#include <cmath>
#include <limits>

#include "qmeasure/errors.hpp"

namespace qmeasure {

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kTieEps = 1e-13;

class Tableau {
 public:
  Tableau(const StandardFormLp& lp)
      : m_(lp.rows), n_(lp.cols), width_(lp.cols + lp.rows + 1), t_((m_ + 1) * width_, 0.0),
        basis_(m_) {
    for (std::size_t i = 0; i < m_; ++i) {
      const double sign = lp.b[i] < 0.0 ? -1.0 : 1.0;
      for (std::size_t j = 0; j < n_; ++j) at(i, j) = sign * lp.A[i * n_ + j];
      at(i, n_ + i) = 1.0;
      at(i, rhs()) = sign * lp.b[i];
      basis_[i] = n_ + i;
    }
  }

  double& at(std::size_t r, std::size_t c) { return t_[r * width_ + c]; }
  double at(std::size_t r, std::size_t c) const { return t_[r * width_ + c]; }
  std::size_t rhs() const { return width_ - 1; }
  std::size_t objective_row() const { return m_; }

  /// Loads reduced costs for `cost` (length n_ + m_) into the objective row.
  void set_objective(const std::vector<double>& cost) {
    const std::size_t z = objective_row();
    for (std::size_t j = 0; j < width_; ++j) at(z, j) = j < cost.size() ? cost[j] : 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) at(z, j) -= cb * at(i, j);
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    const double inv = 1.0 / at(row, col);
    for (std::size_t j = 0; j < width_; ++j) at(row, j) *= inv;
    at(row, col) = 1.0;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == row) continue;
      const double factor = at(i, col);
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) at(i, j) -= factor * at(row, j);
      at(i, col) = 0.0;
    }
    basis_[row] = col;
    ++pivots_;
  }

  /// Runs Bland pivots over the original columns until optimal; false if
  /// unbounded.
  bool optimize() {
    const std::size_t z = objective_row();
    for (;;) {
      std::size_t enter = n_;
      for (std::size_t j = 0; j < n_; ++j)
        if (at(z, j) < -kPivotEps) {
          enter = j;
          break;
        }
      if (enter == n_) return true;

      std::size_t leave = m_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = at(i, enter);
        if (a <= kPivotEps) continue;
        const double ratio = at(i, rhs()) / a;
        if (leave == m_ || ratio < best - kTieEps ||
            (std::abs(ratio - best) <= kTieEps && basis_[i] < basis_[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
  }

  /// Pivots zero-level artificial variables out of the basis where possible.
  void expel_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      for (std::size_t j = 0; j < n_; ++j)
        if (std::abs(at(i, j)) > kPivotEps) {
          pivot(i, j);
          break;
        }
    }
  }

  std::vector<double> primal() const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_) x[basis_[i]] = at(i, rhs());
    return x;
  }

  double artificial_sum() const {
    double s = 0.0;
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= n_) s += at(i, rhs());
    return s;
  }

  int pivots() const { return pivots_; }
  std::size_t cols() const { return n_; }
  std::size_t rows() const { return m_; }

 private:
  std::size_t m_, n_, width_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
  int pivots_ = 0;
};

}  // namespace

LpSolution solve_lp(const StandardFormLp& lp, double feasibility_tol) {
  if (lp.A.size() != lp.rows * lp.cols || lp.b.size() != lp.rows ||
      (!lp.c.empty() && lp.c.size() != lp.cols))
    throw InternalError("inconsistent LP dimensions");

  Tableau tab(lp);
  std::vector<double> phase_one(lp.cols + lp.rows, 0.0);
  for (std::size_t i = 0; i < lp.rows; ++i) phase_one[lp.cols + i] = 1.0;
  tab.set_objective(phase_one);
  tab.optimize();

  LpSolution out;
  out.infeasibility = tab.artificial_sum();
  if (out.infeasibility > feasibility_tol) {
    out.status = LpSolution::Status::infeasible;
    out.pivots = tab.pivots();
    return out;
  }
  tab.expel_artificials();

  if (!lp.c.empty()) {
    std::vector<double> cost(lp.cols + lp.rows, 0.0);
    std::copy(lp.c.begin(), lp.c.end(), cost.begin());
    tab.set_objective(cost);
    if (!tab.optimize()) {
      out.status = LpSolution::Status::unbounded;
      out.pivots = tab.pivots();
      return out;
    }
  }
  out.status = LpSolution::Status::optimal;
  out.x = tab.primal();
  out.pivots = tab.pivots();
  return out;
}

}  // namespace qmeasure
