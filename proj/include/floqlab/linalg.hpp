#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace floqlab {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

/// Dense row-major complex matrix. Small sizes only (n up to a few dozen).
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const Complex> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Complex> data() const { return data_; }

  CVector column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const Complex> values);

  ComplexMatrix adjoint() const;
  double max_abs() const;
  double frobenius() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex s);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);

/// Exact matrix product. Throws DomainError on inner-dimension mismatch.
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

CVector matvec(const ComplexMatrix& m, std::span<const Complex> x);

Complex inner(std::span<const Complex> a, std::span<const Complex> b);  // <a|b>
double norm(std::span<const Complex> x);
double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b);

bool is_hermitian(const ComplexMatrix& m, double tol);
/// max |(M^dagger M - I)_ij|
double unitarity_defect(const ComplexMatrix& m);

struct EigenDecomposition {
  CVector eigenvalues;
  std::vector<CVector> eigenvectors;  // unit norm, paired with eigenvalues

  std::size_t size() const { return eigenvalues.size(); }
};

// Cyclic complex Jacobi. Eigenvalues ascending (imaginary parts are zero).
// Within a degenerate group vectors are ordered by descending magnitude of
// their first nonzero component, then by that component's index. Each
// vector's phase is fixed so that its largest component is real positive.
EigenDecomposition hermitian_eigen(const ComplexMatrix& m);

// Simultaneous diagonalization of the commuting Hermitian parts
// (U + U^dagger)/2 and (U - U^dagger)/2i. Eigenvalues sorted by ascending
// eigenphase in (-pi, pi].
EigenDecomposition unitary_eigen(const ComplexMatrix& u);

/// LU with partial pivoting.
Complex determinant(const ComplexMatrix& m);

/// exp(m) by scaling and squaring of a truncated Taylor series.
ComplexMatrix expm(const ComplexMatrix& m);

/// D_1..D_{n_max} of the tridiagonal matrix with zero diagonal, first bond
/// v_eff and all other bonds v, from D_1 = 0, D_2 = -v_eff^2, D_N = -v^2 D_{N-2}.
std::vector<double> tridiag_det_sequence(double v_eff, double v, int n_max);

}  // namespace floqlab
