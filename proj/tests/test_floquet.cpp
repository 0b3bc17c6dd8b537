#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "floqlab/errors.hpp"
#include "floqlab/evolve.hpp"
#include "floqlab/floquet.hpp"
#include "oracles.hpp"

using namespace floqlab;

namespace {

std::vector<double> quasi_energies(const FloquetSpectrum& s) {
  std::vector<double> out;
  for (const auto& m : s.modes) out.push_back(m.quasi_energy);
  return out;
}

void check_spectrum_invariants(const FloquetSpectrum& s) {
  const double half = 0.5 * s.system.omega();
  REQUIRE(s.modes.size() == static_cast<std::size_t>(s.system.n()));
  for (std::size_t k = 0; k < s.modes.size(); ++k) {
    const auto& m = s.modes[k];
    CHECK(m.quasi_energy > -half);
    CHECK(m.quasi_energy <= half);
    if (k > 0) CHECK(m.quasi_energy >= s.modes[k - 1].quasi_energy);
    double sum = 0.0;
    for (double p : m.avg_populations) {
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
      sum += p;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-8);
    for (std::size_t l = 0; l < s.modes.size(); ++l)
      CHECK(std::abs(inner(m.eigenvector, s.modes[l].eigenvector) - (k == l ? 1.0 : 0.0)) <= 1e-7);
  }
}

}  // namespace

TEST_CASE("fold_quasi_energy") {
  const double w = 10.0;
  CHECK(fold_quasi_energy(0.0, w) == 0.0);
  CHECK(fold_quasi_energy(5.0, w) == 5.0);
  CHECK(fold_quasi_energy(-5.0, w) == 5.0);
  CHECK(fold_quasi_energy(7.0, w) == doctest::Approx(-3.0));
  CHECK(fold_quasi_energy(-13.0, w) == doctest::Approx(-3.0));
  CHECK(fold_quasi_energy(1e3 + 0.25, w) == doctest::Approx(0.25));
  CHECK_THROWS_AS(fold_quasi_energy(1.0, 0.0), DomainError);

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  for (int i = 0; i < 2000; ++i) {
    const double e = u(rng);
    const double f = fold_quasi_energy(e, w);
    CHECK(f > -0.5 * w);
    CHECK(f <= 0.5 * w);
    CHECK(fold_quasi_energy(f, w) == f);
    CHECK(fold_quasi_energy(f + w, w) == doctest::Approx(f).epsilon(1e-12).scale(w));
    const double k = (e - f) / w;
    CHECK(std::abs(k - std::round(k)) <= 1e-9);
  }
}

TEST_CASE("floquet_spectrum examples") {
  SUBCASE("undriven three-chain") {
    const auto s = floquet_spectrum(canonical_system(3, 1.0, 0.0, 10.0));
    check_spectrum_invariants(s);
    CHECK(s.modes[0].quasi_energy == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-9));
    CHECK(std::abs(s.modes[1].quasi_energy) <= 1e-9);
    CHECK(s.modes[2].quasi_energy == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  }
  SUBCASE("a zero quasi-energy persists for the three-chain") {
    for (double r : {0.0, 0.3, 1.0, 2.0, 3.7, 5.0}) {
      const auto s = floquet_spectrum(canonical_system(3, 1.0, 10.0 * r, 10.0));
      check_spectrum_invariants(s);
      const auto e = quasi_energies(s);
      const double closest = *std::min_element(e.begin(), e.end(), [](double a, double b) {
        return std::abs(a) < std::abs(b);
      });
      CHECK(std::abs(closest) <= 1e-6);
    }
  }
  SUBCASE("first J0 zero approaches the {-1, 0, 1} effective spectrum") {
    const auto s = floquet_spectrum(canonical_system(3, 1.0, 10.0 * oracle::j0_first_root(), 10.0));
    CHECK(s.modes[0].quasi_energy == doctest::Approx(-1.0).epsilon(3e-2));
    CHECK(std::abs(s.modes[1].quasi_energy) <= 3e-2);
    CHECK(s.modes[2].quasi_energy == doctest::Approx(1.0).epsilon(3e-2));
  }
}

TEST_CASE("Floquet defining property and particle-hole symmetry") {
  for (int n : {2, 3, 4, 5}) {
    for (double r : {0.4, 1.5, 2.4, 4.2}) {
      const auto sys = canonical_system(n, 1.0, 10.0 * r, 10.0);
      const auto s = floquet_spectrum(sys);
      check_spectrum_invariants(s);
      for (const auto& m : s.modes) {
        const auto r1 = propagate_observed(sys, m.eigenvector, 0.0, sys.period(), {});
        const Complex phase = std::polar(1.0, -m.quasi_energy * sys.period());
        for (std::size_t j = 0; j < m.eigenvector.size(); ++j)
          CHECK(std::abs(r1.final_state[j] - phase * m.eigenvector[j]) <= 1e-6);
      }
      auto e = quasi_energies(s);
      auto neg = e;
      for (double& x : neg) x = -x;
      std::sort(neg.begin(), neg.end());
      for (std::size_t k = 0; k < e.size(); ++k) CHECK(std::abs(e[k] - neg[k]) <= 1e-6);
    }
  }
}

TEST_CASE("period-averaged populations are gauge invariant") {
  const auto sys = canonical_system(3, 1.0, 20.0, 10.0);
  const auto s = floquet_spectrum(sys);
  for (const auto& m : s.modes) {
    CVector rotated = m.eigenvector;
    for (auto& c : rotated) c *= std::polar(1.0, 1.234);
    const auto p = period_averaged_populations(sys, rotated, {});
    for (std::size_t j = 0; j < p.size(); ++j) CHECK(std::abs(p[j] - m.avg_populations[j]) <= 1e-12);
  }
}

TEST_CASE("dark_mode examples") {
  SUBCASE("three-chain at A/omega = 2") {
    const auto s = floquet_spectrum(canonical_system(3, 1.0, 20.0, 10.0));
    const auto d = dark_mode(s);
    REQUIRE(d.mode.has_value());
    CHECK_FALSE(d.ambiguous);
    CHECK(std::abs(d.mode->quasi_energy) <= 1e-3);
    CHECK(d.mode->avg_populations[1] <= 0.02);
    CHECK(d.mode->avg_populations[0] > 0.5);
    CHECK(d.index == 1);
  }
  SUBCASE("five-chain at A/omega = 2") {
    const auto d = dark_mode(floquet_spectrum(canonical_system(5, 1.0, 20.0, 10.0)));
    REQUIRE(d.mode.has_value());
    CHECK(d.mode->avg_populations[1] <= 0.02);
    CHECK(d.mode->avg_populations[3] <= 0.02);
  }
  SUBCASE("even chain away from J0 zeros has none") {
    for (double r : {0.5, 1.3, 2.0, 3.5}) {
      const auto d = dark_mode(floquet_spectrum(canonical_system(4, 1.0, 10.0 * r, 10.0)));
      CHECK_FALSE(d.mode.has_value());
      CHECK_FALSE(d.ambiguous);
    }
  }
  SUBCASE("loose tolerances that admit two modes are flagged") {
    const auto s = floquet_spectrum(canonical_system(3, 0.0, 0.0, 10.0));
    const auto d = dark_mode(s, 1.0, 1.0);
    CHECK_FALSE(d.mode.has_value());
    CHECK(d.ambiguous);
  }
  const auto s = floquet_spectrum(canonical_system(3, 1.0, 20.0, 10.0));
  CHECK_THROWS_AS(dark_mode(s, 0.0, 0.02), DomainError);
  CHECK_THROWS_AS(dark_mode(s, 1e-3, -1.0), DomainError);
}

TEST_CASE("match_by_overlap") {
  const std::vector<CVector> prev{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
  const std::vector<CVector> next{{0.0, 0.0, Complex(0.0, 1.0)}, {0.6, 0.8, 0.0}, {0.8, -0.6, 0.0}};
  const std::vector<double> pe{-1.0, 0.0, 1.0}, ne{1.0, 0.0, -1.0};
  const auto p = match_by_overlap(prev, pe, next, ne);
  CHECK(p == std::vector<std::size_t>{2, 1, 0});

  // equal overlaps: proximity in quasi-energy decides
  const std::vector<CVector> a{{1.0, 0.0}, {0.0, 1.0}};
  const double s = std::sqrt(0.5);
  const std::vector<CVector> b{{s, s}, {s, -s}};
  CHECK(match_by_overlap(a, std::vector<double>{-1.0, 1.0}, b, std::vector<double>{0.9, -0.9}) ==
        std::vector<std::size_t>{1, 0});
  CHECK_THROWS_AS(match_by_overlap(a, std::vector<double>{0.0, 0.0}, prev, std::vector<double>{0, 0, 0}),
                  DomainError);
}

TEST_CASE("quasi_energy_sweep") {
  SUBCASE("ratio 0 reproduces the undriven spectrum") {
    for (int n = 2; n <= 6; ++n) {
      const std::vector<double> ratios{0.0};
      const auto t = quasi_energy_sweep(n, 1.0, 10.0, ratios);
      const auto e = hermitian_eigen(hamiltonian_at(canonical_system(n, 1.0, 0.0, 10.0), 0.0));
      REQUIRE(t.rows.size() == 1);
      std::vector<double> q;
      for (const auto& m : t.rows[0].modes) q.push_back(m.quasi_energy);
      std::sort(q.begin(), q.end());
      for (int k = 0; k < n; ++k) CHECK(std::abs(q[k] - e.eigenvalues[k].real()) <= 1e-7);
    }
  }
  SUBCASE("the three-chain zero branch is tracked as one label") {
    std::vector<double> ratios;
    for (int i = 0; i <= 40; ++i) ratios.push_back(0.125 * i);
    const auto t = quasi_energy_sweep(3, 1.0, 10.0, ratios);
    REQUIRE(t.rows.size() == ratios.size());
    std::size_t label = 3;
    for (std::size_t k = 0; k < 3; ++k)
      if (std::abs(t.rows[0].modes[k].quasi_energy) < 1e-6) label = k;
    REQUIRE(label < 3);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      CHECK(t.rows[i].ratio == ratios[i]);
      CHECK(std::abs(t.rows[i].modes[label].quasi_energy) <= 1e-6 * 10.0);
    }
  }
  SUBCASE("four-chain gap closes near the J0 zero") {
    std::vector<double> ratios;
    for (int i = 0; i <= 30; ++i) ratios.push_back(2.25 + 0.01 * i);
    const auto t = quasi_energy_sweep(4, 1.0, 10.0, ratios);
    double best = 1e9;
    for (const auto& row : t.rows) {
      std::vector<double> q;
      for (const auto& m : row.modes) q.push_back(m.quasi_energy);
      std::sort(q.begin(), q.end());
      best = std::min(best, q[2] - q[1]);
    }
    CHECK(best <= 5e-3 * 10.0);
  }
  const std::vector<double> bad{0.0, -1.0};
  CHECK_THROWS_AS(quasi_energy_sweep(3, 1.0, 10.0, bad), DomainError);
}
