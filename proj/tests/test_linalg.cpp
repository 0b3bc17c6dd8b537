#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "floqlab/errors.hpp"
#include "floqlab/linalg.hpp"
#include "oracles.hpp"

using namespace floqlab;

namespace {

ComplexMatrix random_hermitian(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = g(rng);
    for (std::size_t j = i + 1; j < n; ++j) {
      m(i, j) = Complex(g(rng), g(rng));
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

double residual(const ComplexMatrix& m, Complex lambda, const CVector& w) {
  CVector mw = matvec(m, w);
  double r = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) r = std::max(r, std::abs(mw[i] - lambda * w[i]));
  return r;
}

double orthonormality_defect(const std::vector<CVector>& vs) {
  double worst = 0.0;
  for (std::size_t a = 0; a < vs.size(); ++a)
    for (std::size_t b = 0; b < vs.size(); ++b)
      worst = std::max(worst, std::abs(inner(vs[a], vs[b]) - (a == b ? 1.0 : 0.0)));
  return worst;
}

}  // namespace

TEST_CASE("matmul basics") {
  const ComplexMatrix m{{1.0, Complex(2.0, -1.0)}, {0.5, 3.0}};
  const ComplexMatrix id = ComplexMatrix::identity(2);
  const ComplexMatrix im = matmul(id, m);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(im(i, j) == m(i, j));

  const ComplexMatrix sx{{0.0, 1.0}, {1.0, 0.0}};
  const ComplexMatrix sq = matmul(sx, sx);
  CHECK(sq(0, 0) == Complex(1.0));
  CHECK(sq(0, 1) == Complex(0.0));
  CHECK(sq(1, 1) == Complex(1.0));

  // cyclic shift composed with itself = shift by two
  const ComplexMatrix p{{0, 0, 1}, {1, 0, 0}, {0, 1, 0}};
  const ComplexMatrix p2 = matmul(p, p);
  const ComplexMatrix expect{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(p2(i, j) == expect(i, j));

  CHECK_THROWS_AS(matmul(ComplexMatrix(2, 3), ComplexMatrix(2, 3)), DomainError);
}

TEST_CASE("hermitian_eigen on closed-form spectra") {
  SUBCASE("three-site chain") {
    const ComplexMatrix h{{0, 1, 0}, {1, 0, 1}, {0, 1, 0}};
    const auto e = hermitian_eigen(h);
    REQUIRE(e.size() == 3);
    CHECK(e.eigenvalues[0].real() == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-13));
    CHECK(std::abs(e.eigenvalues[1].real()) < 1e-13);
    CHECK(e.eigenvalues[2].real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
    for (std::size_t k = 0; k < 3; ++k) CHECK(residual(h, e.eigenvalues[k], e.eigenvectors[k]) < 1e-12);
  }
  SUBCASE("diagonal") {
    const ComplexMatrix d{{3, 0, 0}, {0, 1, 0}, {0, 0, 2}};
    const auto e = hermitian_eigen(d);
    CHECK(e.eigenvalues[0].real() == 1.0);
    CHECK(e.eigenvalues[1].real() == 2.0);
    CHECK(e.eigenvalues[2].real() == 3.0);
    CHECK(std::abs(e.eigenvectors[0][1]) == doctest::Approx(1.0));
    CHECK(std::abs(e.eigenvectors[1][2]) == doctest::Approx(1.0));
    CHECK(std::abs(e.eigenvectors[2][0]) == doctest::Approx(1.0));
  }
  SUBCASE("effective three-site matrix at A/omega = 2") {
    const double j0 = oracle::j0_series60(2.0);
    const ComplexMatrix h{{0, j0, 0}, {j0, 0, 1}, {0, 1, 0}};
    const auto e = hermitian_eigen(h);
    // +-sqrt(1 + J0(2)^2) = +-1.0247570838908456
    CHECK(e.eigenvalues[0].real() == doctest::Approx(-1.0247570838908456).epsilon(1e-12));
    CHECK(std::abs(e.eigenvalues[1].real()) < 1e-13);
    CHECK(e.eigenvalues[2].real() == doctest::Approx(1.0247570838908456).epsilon(1e-12));
  }
  SUBCASE("degenerate ordering is deterministic") {
    const ComplexMatrix d{{1, 0, 0}, {0, 1, 0}, {0, 0, 0}};
    const auto e = hermitian_eigen(d);
    CHECK(std::abs(e.eigenvectors[1][0]) == doctest::Approx(1.0));
    CHECK(std::abs(e.eigenvectors[2][1]) == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(hermitian_eigen(ComplexMatrix{{0, 1}, {2, 0}}), DomainError);
}

TEST_CASE("hermitian_eigen random property: residual, orthonormality, reconstruction") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const ComplexMatrix m = random_hermitian(rng, n);
    const auto e = hermitian_eigen(m);
    const double scale = std::max(1.0, m.max_abs());
    ComplexMatrix rebuilt(n, n);
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(std::abs(e.eigenvalues[k].imag()) == 0.0);
      CHECK(residual(m, e.eigenvalues[k], e.eigenvectors[k]) <= 1e-8 * scale);
      if (k > 0) CHECK(e.eigenvalues[k].real() >= e.eigenvalues[k - 1].real());
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          rebuilt(i, j) += e.eigenvalues[k] * e.eigenvectors[k][i] * std::conj(e.eigenvectors[k][j]);
    }
    CHECK(orthonormality_defect(e.eigenvectors) <= 1e-8);
    CHECK((rebuilt - m).max_abs() <= 1e-7);
  }
}

TEST_CASE("unitary_eigen") {
  SUBCASE("identity") {
    const auto e = unitary_eigen(ComplexMatrix::identity(4));
    for (const auto& mu : e.eigenvalues) CHECK(std::abs(mu - 1.0) < 1e-14);
    CHECK(orthonormality_defect(e.eigenvectors) < 1e-14);
  }
  SUBCASE("diagonal phases") {
    const CVector d{std::polar(1.0, 0.7), std::polar(1.0, -2.1)};
    const auto e = unitary_eigen(ComplexMatrix::diagonal(d));
    CHECK(std::arg(e.eigenvalues[0]) == doctest::Approx(-2.1));
    CHECK(std::arg(e.eigenvalues[1]) == doctest::Approx(0.7));
    CHECK(std::abs(e.eigenvectors[0][1]) == doctest::Approx(1.0));
    CHECK(std::abs(e.eigenvectors[1][0]) == doctest::Approx(1.0));
  }
  SUBCASE("phases +-theta share the same cosine") {
    const CVector d{std::polar(1.0, 0.4), std::polar(1.0, -0.4), 1.0};
    const auto e = unitary_eigen(ComplexMatrix::diagonal(d));
    CHECK(std::arg(e.eigenvalues[0]) == doctest::Approx(-0.4));
    CHECK(std::arg(e.eigenvalues[1]) == doctest::Approx(0.0));
    CHECK(std::arg(e.eigenvalues[2]) == doctest::Approx(0.4));
  }
  SUBCASE("undriven three-chain one-period propagator") {
    // exp(-i H T) built from the Hermitian eigenpairs of H.
    const double period = 2.0 * std::numbers::pi / 10.0;
    const ComplexMatrix h{{0, 1, 0}, {1, 0, 1}, {0, 1, 0}};
    const auto eh = hermitian_eigen(h);
    ComplexMatrix u(3, 3);
    for (std::size_t k = 0; k < 3; ++k)
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
          u(i, j) += std::polar(1.0, -eh.eigenvalues[k].real() * period) * eh.eigenvectors[k][i] *
                     std::conj(eh.eigenvectors[k][j]);
    const auto e = unitary_eigen(u);
    CHECK(std::arg(e.eigenvalues[0]) == doctest::Approx(-std::sqrt(2.0) * period).epsilon(1e-12));
    CHECK(std::abs(std::arg(e.eigenvalues[1])) < 1e-12);
    CHECK(std::arg(e.eigenvalues[2]) == doctest::Approx(std::sqrt(2.0) * period).epsilon(1e-12));
  }
  CHECK_THROWS_AS(unitary_eigen(ComplexMatrix{{2, 0}, {0, 1}}), DomainError);
}

TEST_CASE("unitary_eigen agrees with exp(-iHT) spectra for random Hermitian H") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> period_dist(0.1, 1.5);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const ComplexMatrix h = random_hermitian(rng, n);
    const double period = period_dist(rng);
    const ComplexMatrix u = expm(Complex(0.0, -period) * h);
    CHECK(unitarity_defect(u) < 1e-12);

    const auto eu = unitary_eigen(u);
    const auto eh = hermitian_eigen(h);
    std::vector<Complex> expected;
    for (const auto& l : eh.eigenvalues) expected.push_back(std::polar(1.0, -l.real() * period));
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(std::abs(std::abs(eu.eigenvalues[k]) - 1.0) <= 1e-7);
      CHECK(residual(u, eu.eigenvalues[k], eu.eigenvectors[k]) <= 1e-8);
      double nearest = 10.0;
      for (const auto& mu : expected) nearest = std::min(nearest, std::abs(mu - eu.eigenvalues[k]));
      CHECK(nearest <= 1e-9);
    }
    CHECK(orthonormality_defect(eu.eigenvectors) <= 1e-8);
    for (std::size_t k = 1; k < n; ++k) CHECK(std::arg(eu.eigenvalues[k]) >= std::arg(eu.eigenvalues[k - 1]));
  }
}

TEST_CASE("tridiag_det_sequence") {
  const auto a = tridiag_det_sequence(1.0, 1.0, 4);
  REQUIRE(a.size() == 4);
  CHECK(a[0] == 0.0);
  CHECK(a[1] == -1.0);
  CHECK(a[2] == 0.0);
  CHECK(a[3] == 1.0);

  for (double d : tridiag_det_sequence(0.0, 7.0, 6)) CHECK(d == 0.0);
  CHECK(tridiag_det_sequence(2.0, 3.0, 6)[5] == -324.0);
  CHECK_THROWS_AS(tridiag_det_sequence(1.0, 1.0, 0), DomainError);
}

TEST_CASE("tridiag_det_sequence matches Leibniz and LU determinants") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> veff(-2.0, 2.0), vd(0.5, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double ve = veff(rng), v = vd(rng);
    const auto seq = tridiag_det_sequence(ve, v, 12);
    for (int n = 1; n <= 12; ++n) {
      const auto m = oracle::chain(n, v, ve);
      ComplexMatrix cm(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cm(i, j) = m[i][j];
      const double lu = determinant(cm).real();
      const double d = seq[n - 1];
      const double scale = std::max({1.0, std::abs(d), std::abs(lu)});
      CHECK(std::abs(d - lu) <= 1e-9 * scale);
      if (n <= 7 && trial < 10) CHECK(std::abs(d - oracle::leibniz_det(m)) <= 1e-9 * scale);
    }
  }
}

TEST_CASE("expm of a diagonal matrix") {
  const CVector d{Complex(0.0, 1.3), -2.0, Complex(1.0, -0.5)};
  const ComplexMatrix e = expm(ComplexMatrix::diagonal(d));
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(e(i, i) - std::exp(d[i])) < 1e-13);
}
