#include "qmeasure/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

#include "qmeasure/errors.hpp"

namespace qmeasure {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(n_);
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t c = 0; c < n_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

Complex ComplexMatrix::sum() const {
  return std::accumulate(data_.begin(), data_.end(), Complex{});
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  assert(n_ == other.n_);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  assert(n_ == other.n_);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(double s) {
  for (auto& v : data_) v *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  assert(a.size() == b.size());
  const std::size_t n = a.size();
  ComplexMatrix out(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < n; ++k) {
      const Complex v = a(r, k);
      if (v == Complex{}) continue;
      for (std::size_t c = 0; c < n; ++c) out(r, c) += v * b(k, c);
    }
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  assert(a.size() == b.size());
  double worst = 0.0;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) worst = std::max(worst, std::abs(da[i] - db[i]));
  return worst;
}

double hermiticity_defect(const ComplexMatrix& a) {
  double worst = 0.0;
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t c = r; c < a.size(); ++c)
      worst = std::max(worst, std::abs(a(r, c) - std::conj(a(c, r))));
  return worst;
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) {
  ComplexMatrix out(a.size());
  for (std::size_t r = 0; r < a.size(); ++r) {
    out(r, r) = a(r, r).real();
    for (std::size_t c = r + 1; c < a.size(); ++c) {
      const Complex v = 0.5 * (a(r, c) + std::conj(a(c, r)));
      out(r, c) = v;
      out(c, r) = std::conj(v);
    }
  }
  return out;
}

namespace {

// Plain complex product; std::complex operator* adds inf/nan recovery that
// dominates the Jacobi inner loops.
inline Complex mul(Complex a, Complex b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t c = r + 1; c < a.size(); ++c) s += 2.0 * std::norm(a(r, c));
  return std::sqrt(s);
}

double frobenius_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (const auto& v : a.data()) s += std::norm(v);
  return std::sqrt(s);
}

// Annihilates a(p,q) with U = diag-phase * real rotation, A <- U† A U, V <- V U.
void rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double r = std::abs(apq);
  if (r == 0.0) return;
  const Complex phase = std::conj(apq) / r;  // e^{-i arg(apq)}
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double tau = (aqq - app) / (2.0 * r);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  // U(p,p) = c, U(p,q) = s, U(q,p) = -s*phase, U(q,q) = c*phase.
  const Complex uqp = -s * phase;
  const Complex uqq = c * phase;
  const Complex uqp_conj = std::conj(uqp);
  const Complex uqq_conj = std::conj(uqq);

  const std::size_t n = a.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = c * akp + mul(akq, uqp);
    a(k, q) = s * akp + mul(akq, uqq);
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = c * apk + mul(uqp_conj, aqk);
    a(q, k) = s * apk + mul(uqq_conj, aqk);
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  for (std::size_t k = 0; k < n; ++k) {
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = c * vkp + mul(vkq, uqp);
    v(k, q) = s * vkp + mul(vkq, uqq);
  }
}

}  // namespace

HermitianEigen hermitian_eigen(const ComplexMatrix& input) {
  constexpr int kMaxSweeps = 100;
  const std::size_t n = input.size();
  ComplexMatrix a = hermitian_part(input);
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double threshold = 1e-13 * std::max(1.0, frobenius_norm(a));
  int sweeps = 0;
  while (off_diagonal_norm(a) >= threshold) {
    if (sweeps == kMaxSweeps) throw InternalError("Jacobi eigensolver did not converge");
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
    ++sweeps;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

  HermitianEigen out;
  out.sweeps = sweeps;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]).real();
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, j) = v(k, order[j]);
  }
  return out;
}

double min_eigenvalue(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  return hermitian_eigen(a).values.front();
}

Complex inner(std::span<const Complex> x, std::span<const Complex> y) {
  assert(x.size() == y.size());
  Complex s{};
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

}  // namespace qmeasure
