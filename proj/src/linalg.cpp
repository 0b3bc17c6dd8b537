#include "floqlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "floqlab/errors.hpp"

namespace floqlab {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DomainError("ragged matrix initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

CVector ComplexMatrix::column(std::size_t j) const {
  CVector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

void ComplexMatrix::set_column(std::size_t j, std::span<const Complex> values) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix a(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) a(j, i) = std::conj((*this)(i, j));
  return a;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::frobenius() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DomainError("matrix size mismatch in +");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DomainError("matrix size mismatch in -");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DomainError("matmul: inner dimensions differ (" + std::to_string(a.cols()) + " vs " +
                      std::to_string(b.rows()) + ")");
  }
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

CVector matvec(const ComplexMatrix& m, std::span<const Complex> x) {
  if (m.cols() != x.size()) throw DomainError("matvec: dimension mismatch");
  CVector y(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Complex s{};
    for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  Complex s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm(std::span<const Complex> x) {
  double s = 0.0;
  for (const auto& z : x) s += std::norm(z);
  return std::sqrt(s);
}

double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (!m.square()) return false;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j)
      if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
  return true;
}

double unitarity_defect(const ComplexMatrix& m) {
  ComplexMatrix g = matmul(m.adjoint(), m);
  g -= ComplexMatrix::identity(m.rows());
  return g.max_abs();
}

namespace {

constexpr double kZeroComponent = 1e-12;

std::size_t first_nonzero(const CVector& w) {
  for (std::size_t i = 0; i < w.size(); ++i)
    if (std::abs(w[i]) > kZeroComponent) return i;
  return w.size();
}

// Rotate the global phase so the largest component (lowest index on ties)
// is real and positive.
void fix_phase(CVector& w) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < w.size(); ++i)
    if (std::abs(w[i]) > std::abs(w[best]) + kZeroComponent) best = i;
  if (std::abs(w[best]) == 0.0) return;
  const Complex phase = std::conj(w[best]) / std::abs(w[best]);
  for (auto& z : w) z *= phase;
  w[best] = std::abs(w[best]);
}

// Orders eigenpairs by `key` ascending; keys closer than `group_tol` count
// as one degenerate group, ordered by the first-nonzero-component rule.
void sort_pairs(EigenDecomposition& d, const std::vector<double>& key, double group_tol) {
  std::vector<std::size_t> idx(d.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return key[a] < key[b]; });

  std::vector<std::size_t> order;
  order.reserve(idx.size());
  for (std::size_t start = 0; start < idx.size();) {
    std::size_t end = start + 1;
    while (end < idx.size() && key[idx[end]] - key[idx[end - 1]] <= group_tol) ++end;
    std::vector<std::size_t> group(idx.begin() + start, idx.begin() + end);
    std::stable_sort(group.begin(), group.end(), [&](auto a, auto b) {
      const auto& wa = d.eigenvectors[a];
      const auto& wb = d.eigenvectors[b];
      const std::size_t fa = first_nonzero(wa), fb = first_nonzero(wb);
      const double ma = fa < wa.size() ? std::abs(wa[fa]) : 0.0;
      const double mb = fb < wb.size() ? std::abs(wb[fb]) : 0.0;
      if (std::abs(ma - mb) > kZeroComponent) return ma > mb;
      return fa < fb;
    });
    order.insert(order.end(), group.begin(), group.end());
    start = end;
  }

  EigenDecomposition sorted;
  for (auto k : order) {
    sorted.eigenvalues.push_back(d.eigenvalues[k]);
    sorted.eigenvectors.push_back(std::move(d.eigenvectors[k]));
  }
  d = std::move(sorted);
}

}  // namespace

EigenDecomposition hermitian_eigen(const ComplexMatrix& m) {
  const std::size_t n = m.rows();
  const double scale = std::max(1.0, m.max_abs());
  if (!is_hermitian(m, 1e-10 * scale)) throw DomainError("hermitian_eigen: input is not Hermitian");

  ComplexMatrix a = m;
  for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double fro = a.frobenius();

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  // Run to rounding level rather than a loose tolerance: eigenvectors of
  // nearly degenerate clusters feed unitary_eigen.
  constexpr int kMaxSweeps = 100;
  bool converged = fro == 0.0 || n < 2;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    if (off_norm() <= 1e-15 * fro) {
      converged = true;
      break;
    }
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double r = std::abs(a(p, q));
        if (r <= 1e-18 * fro) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        rotated = true;
        const Complex e = a(p, q) / r;  // e^{i phi}
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * r);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex ec = std::conj(e);

        // A <- A R, V <- V R with R_pp = c, R_pq = s, R_qp = -s e^{-i phi}, R_qq = c e^{-i phi}
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * ec * akq;
          a(k, q) = s * akp + c * ec * akq;
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * ec * vkq;
          v(k, q) = s * vkp + c * ec * vkq;
        }
        // A <- R^dagger A
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * e * aqk;
          a(q, k) = s * apk + c * e * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
    if (!rotated) converged = true;
  }
  if (!converged && off_norm() > 1e-12 * fro) {
    throw NumericalError("hermitian_eigen: Jacobi did not converge in 100 sweeps");
  }

  EigenDecomposition d;
  std::vector<double> key;
  for (std::size_t j = 0; j < n; ++j) {
    d.eigenvalues.emplace_back(a(j, j).real(), 0.0);
    key.push_back(a(j, j).real());
    CVector w = v.column(j);
    fix_phase(w);
    d.eigenvectors.push_back(std::move(w));
  }
  sort_pairs(d, key, 1e-9 * scale);
  return d;
}

EigenDecomposition unitary_eigen(const ComplexMatrix& u) {
  if (!u.square()) throw DomainError("unitary_eigen: matrix is not square");
  if (unitarity_defect(u) > 1e-8) throw DomainError("unitary_eigen: input is not unitary");
  const std::size_t n = u.rows();
  const ComplexMatrix ud = u.adjoint();
  const ComplexMatrix herm_part = Complex(0.5) * (u + ud);
  const ComplexMatrix anti_part = Complex(0.0, -0.5) * (u - ud);

  const EigenDecomposition ea = hermitian_eigen(herm_part);
  constexpr double kGroupTol = 1e-8;

  EigenDecomposition d;
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start + 1;
    while (end < n && ea.eigenvalues[end].real() - ea.eigenvalues[end - 1].real() <= kGroupTol) ++end;
    const std::size_t k = end - start;

    ComplexMatrix basis(n, k);
    for (std::size_t j = 0; j < k; ++j) basis.set_column(j, ea.eigenvectors[start + j]);
    const ComplexMatrix restricted = matmul(basis.adjoint(), matmul(anti_part, basis));
    ComplexMatrix sym = Complex(0.5) * (restricted + restricted.adjoint());
    const EigenDecomposition eb = hermitian_eigen(sym);

    for (std::size_t j = 0; j < k; ++j) {
      CVector w = matvec(basis, eb.eigenvectors[j]);
      const double nw = norm(w);
      for (auto& z : w) z /= nw;
      fix_phase(w);
      d.eigenvalues.push_back(inner(w, matvec(u, w)));
      d.eigenvectors.push_back(std::move(w));
    }
    start = end;
  }

  std::vector<double> phase;
  for (const auto& mu : d.eigenvalues) {
    double p = std::arg(mu);
    if (p <= -std::numbers::pi) p = std::numbers::pi;
    phase.push_back(p);
  }
  sort_pairs(d, phase, 1e-9);
  return d;
}

Complex determinant(const ComplexMatrix& m) {
  if (!m.square()) throw DomainError("determinant: matrix is not square");
  ComplexMatrix a = m;
  const std::size_t n = a.rows();
  Complex det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (a(pivot, col) == Complex{}) return 0.0;
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
      det = -det;
    }
    det *= a(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const Complex f = a(r, col) / a(col, col);
      for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
    }
  }
  return det;
}

ComplexMatrix expm(const ComplexMatrix& m) {
  if (!m.square()) throw DomainError("expm: matrix is not square");
  const std::size_t n = m.rows();
  double row_norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += std::abs(m(i, j));
    row_norm = std::max(row_norm, s);
  }
  int squarings = 0;
  if (row_norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(row_norm / 0.5)));
  const ComplexMatrix scaled = Complex(std::ldexp(1.0, -squarings)) * m;

  ComplexMatrix result = ComplexMatrix::identity(n);
  ComplexMatrix term = ComplexMatrix::identity(n);
  for (int k = 1; k <= 24; ++k) {
    term = Complex(1.0 / k) * matmul(term, scaled);
    result += term;
  }
  for (int s = 0; s < squarings; ++s) result = matmul(result, result);
  return result;
}

std::vector<double> tridiag_det_sequence(double v_eff, double v, int n_max) {
  if (n_max < 1) throw DomainError("tridiag_det_sequence: n_max must be >= 1");
  std::vector<double> d(static_cast<std::size_t>(n_max));
  d[0] = 0.0;
  if (n_max >= 2) d[1] = -v_eff * v_eff;
  for (int k = 3; k <= n_max; ++k) d[k - 1] = -v * v * d[k - 3];
  return d;
}

}  // namespace floqlab
