#pragma once

#include <optional>
#include <span>
#include <vector>

#include "floqlab/evolve.hpp"
#include "floqlab/linalg.hpp"
#include "floqlab/model.hpp"

namespace floqlab {

struct FloquetMode {
  double quasi_energy = 0.0;             // in (-omega/2, omega/2]
  CVector eigenvector;                   // Floquet state at t = 0
  std::vector<double> avg_populations;   // (1/T) int_0^T |c_j|^2 dt
};

struct FloquetSpectrum {
  std::vector<FloquetMode> modes;  // ascending quasi-energy
  DrivenSystem system;
  PropagationSettings settings;
};

/// Maps eps into (-omega/2, omega/2]. Idempotent.
double fold_quasi_energy(double eps, double omega);

/// Quasi-energies from the eigenphases of U(T): eps = -arg(mu)/T, folded.
/// Mode populations are trapezoid averages over one propagated period.
FloquetSpectrum floquet_spectrum(const DrivenSystem& system, const PropagationSettings& settings = {});

/// Period-averaged |c_j|^2 for the trajectory starting at `state`.
std::vector<double> period_averaged_populations(const DrivenSystem& system, std::span<const Complex> state,
                                                const PropagationSettings& settings);

struct DarkModeResult {
  std::optional<FloquetMode> mode;
  bool ambiguous = false;  // more than one mode matched
  std::size_t index = 0;   // position in spectrum.modes when found
};

// A mode with |eps| <= eps_tol and <P_j> <= pop_tol on every even site
// (j = 2, 4, ... counting from 1). Returns nothing when none or several match.
DarkModeResult dark_mode(const FloquetSpectrum& spectrum, double eps_tol, double pop_tol);
/// Defaults eps_tol = 1e-4 * omega, pop_tol = 0.02.
DarkModeResult dark_mode(const FloquetSpectrum& spectrum);

struct SweepRow {
  double ratio = 0.0;               // A / omega
  std::vector<FloquetMode> modes;   // indexed by tracked branch
};

struct SweepTable {
  int n = 0;
  double v = 0.0;
  double omega = 0.0;
  PropagationSettings settings;
  std::vector<SweepRow> rows;
};

// One spectrum per ratio (computed concurrently), then branch labels are
// carried from row to row by greedy maximal eigenvector overlap.
SweepTable quasi_energy_sweep(int n, double v, double omega, std::span<const double> ratios,
                              const PropagationSettings& settings = {});

/// Permutation p such that next[p[k]] continues branch k of prev.
std::vector<std::size_t> match_by_overlap(std::span<const CVector> prev, std::span<const double> prev_eps,
                                          std::span<const CVector> next, std::span<const double> next_eps);

}  // namespace floqlab
