#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qmeasure {

using Complex = std::complex<double>;

/// Dense square complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t n) : n_(n), data_(n * n) {}

  static ComplexMatrix identity(std::size_t n);

  std::size_t size() const { return n_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }

  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  ComplexMatrix adjoint() const;
  Complex sum() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(double s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<Complex> data_;
};

/// Largest entrywise modulus of a - b. Sizes must match.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// max |A(r,c) - conj(A(c,r))|.
double hermiticity_defect(const ComplexMatrix& a);

/// (A + A†)/2.
ComplexMatrix hermitian_part(const ComplexMatrix& a);

/// Eigen-decomposition A = V diag(values) V† of a Hermitian matrix.
/// `values` ascending; column j of `vectors` belongs to values[j].
struct HermitianEigen {
  std::vector<double> values;
  ComplexMatrix vectors;
  int sweeps = 0;
};

/// Cyclic complex Jacobi. Iterates until the off-diagonal Frobenius norm
/// drops below 1e-13 (scaled by max(1, ||A||_F)), at most 100 sweeps. Works on
/// the Hermitian part of the input.
HermitianEigen hermitian_eigen(const ComplexMatrix& a);

/// Smallest eigenvalue via hermitian_eigen.
double min_eigenvalue(const ComplexMatrix& a);

/// ⟨x|y⟩ = Σ conj(x_i) y_i.
Complex inner(std::span<const Complex> x, std::span<const Complex> y);

}  // namespace qmeasure
