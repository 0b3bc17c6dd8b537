#include "floqlab/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "floqlab/errors.hpp"
#include "floqlab/parallel.hpp"

namespace floqlab {

double fold_quasi_energy(double eps, double omega) {
  if (!(omega > 0.0)) throw DomainError("fold_quasi_energy: omega must be > 0");
  const double half = 0.5 * omega;
  if (eps > -half && eps <= half) return eps;
  double folded = eps - omega * std::ceil((eps - half) / omega);
  if (folded <= -half) folded += omega;
  if (folded > half) folded -= omega;
  return folded;
}

std::vector<double> period_averaged_populations(const DrivenSystem& system, std::span<const Complex> state,
                                                const PropagationSettings& settings) {
  const std::size_t n = state.size();
  std::vector<double> sum(n, 0.0);
  std::vector<double> first(n), last(n);
  long samples = 0;
  propagate_observed(system, state, 0.0, system.period(), settings, [&](double, std::span<const Complex> c) {
    for (std::size_t j = 0; j < n; ++j) {
      const double p = std::norm(c[j]);
      if (samples == 0) first[j] = p;
      last[j] = p;
      sum[j] += p;
    }
    ++samples;
  });
  // Trapezoid on the uniform grid: interior weight 1, endpoints 1/2.
  const double intervals = static_cast<double>(samples - 1);
  std::vector<double> avg(n);
  for (std::size_t j = 0; j < n; ++j) avg[j] = (sum[j] - 0.5 * (first[j] + last[j])) / intervals;
  return avg;
}

FloquetSpectrum floquet_spectrum(const DrivenSystem& system, const PropagationSettings& settings) {
  const ComplexMatrix u = monodromy(system, settings);
  const EigenDecomposition eig = unitary_eigen(u);
  const double period = system.period();

  std::vector<FloquetMode> modes;
  for (std::size_t k = 0; k < eig.size(); ++k) {
    FloquetMode mode;
    mode.quasi_energy = fold_quasi_energy(-std::arg(eig.eigenvalues[k]) / period, system.omega());
    mode.eigenvector = eig.eigenvectors[k];
    mode.avg_populations = period_averaged_populations(system, mode.eigenvector, settings);
    modes.push_back(std::move(mode));
  }
  std::stable_sort(modes.begin(), modes.end(),
                   [](const auto& a, const auto& b) { return a.quasi_energy < b.quasi_energy; });
  return FloquetSpectrum{std::move(modes), system, settings};
}

DarkModeResult dark_mode(const FloquetSpectrum& spectrum, double eps_tol, double pop_tol) {
  if (!(eps_tol > 0.0) || !(pop_tol > 0.0)) throw DomainError("dark_mode: tolerances must be > 0");
  DarkModeResult result;
  int matches = 0;
  for (std::size_t k = 0; k < spectrum.modes.size(); ++k) {
    const auto& mode = spectrum.modes[k];
    if (std::abs(mode.quasi_energy) > eps_tol) continue;
    bool dark = true;
    for (std::size_t j = 1; j < mode.avg_populations.size(); j += 2)
      if (mode.avg_populations[j] > pop_tol) dark = false;
    if (!dark) continue;
    if (++matches == 1) {
      result.mode = mode;
      result.index = k;
    }
  }
  if (matches > 1) {
    result.mode.reset();
    result.ambiguous = true;
    result.index = 0;
  }
  return result;
}

DarkModeResult dark_mode(const FloquetSpectrum& spectrum) {
  return dark_mode(spectrum, 1e-4 * spectrum.system.omega(), 0.02);
}

std::vector<std::size_t> match_by_overlap(std::span<const CVector> prev, std::span<const double> prev_eps,
                                          std::span<const CVector> next, std::span<const double> next_eps) {
  const std::size_t n = prev.size();
  if (next.size() != n) throw DomainError("match_by_overlap: mode counts differ");
  std::vector<std::vector<double>> overlap(n, std::vector<double>(n));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) overlap[k][l] = std::abs(inner(prev[k], next[l]));

  std::vector<std::size_t> perm(n, n);
  std::vector<bool> taken(n, false);
  for (std::size_t round = 0; round < n; ++round) {
    std::size_t best_k = n, best_l = n;
    for (std::size_t k = 0; k < n; ++k) {
      if (perm[k] != n) continue;
      for (std::size_t l = 0; l < n; ++l) {
        if (taken[l]) continue;
        if (best_k == n) {
          best_k = k;
          best_l = l;
          continue;
        }
        const double d = overlap[k][l] - overlap[best_k][best_l];
        const bool closer = std::abs(prev_eps[k] - next_eps[l]) < std::abs(prev_eps[best_k] - next_eps[best_l]);
        if (d > 1e-9 || (std::abs(d) <= 1e-9 && closer)) {
          best_k = k;
          best_l = l;
        }
      }
    }
    perm[best_k] = best_l;
    taken[best_l] = true;
  }
  return perm;
}

SweepTable quasi_energy_sweep(int n, double v, double omega, std::span<const double> ratios,
                              const PropagationSettings& settings) {
  for (double r : ratios)
    if (!std::isfinite(r) || r < 0.0) throw DomainError("quasi_energy_sweep: ratios must be finite and >= 0");
  settings.validate();

  auto spectra = parallel_map(ratios.size(), [&](std::size_t i) {
    return floquet_spectrum(canonical_system(n, v, ratios[i] * omega, omega), settings).modes;
  });

  SweepTable table{n, v, omega, settings, {}};
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    SweepRow row{ratios[i], {}};
    if (i == 0) {
      row.modes = std::move(spectra[i]);
    } else {
      const auto& prev = table.rows.back().modes;
      std::vector<CVector> pv, nv;
      std::vector<double> pe, ne;
      for (const auto& m : prev) {
        pv.push_back(m.eigenvector);
        pe.push_back(m.quasi_energy);
      }
      for (const auto& m : spectra[i]) {
        nv.push_back(m.eigenvector);
        ne.push_back(m.quasi_energy);
      }
      const auto perm = match_by_overlap(pv, pe, nv, ne);
      for (std::size_t k = 0; k < perm.size(); ++k) row.modes.push_back(std::move(spectra[i][perm[k]]));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace floqlab
