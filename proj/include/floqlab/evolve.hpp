#pragma once

#include <functional>
#include <span>
#include <vector>

#include "floqlab/linalg.hpp"
#include "floqlab/model.hpp"

namespace floqlab {

enum class Integrator { rk4 };

struct PropagationSettings {
  int steps_per_period = 2000;
  Integrator method = Integrator::rk4;

  /// Throws DomainError when steps_per_period < 100.
  void validate() const;
};

/// Every integrator step of a propagation, including the initial state.
struct Trajectory {
  std::vector<double> times;
  std::vector<CVector> states;
  std::vector<std::vector<double>> populations;  // |c_j|^2 per sample
  double max_norm_drift = 0.0;
};

// Called with (t, c(t)) at every grid point, starting at t0.
using StepObserver = std::function<void(double, std::span<const Complex>)>;

struct PropagationResult {
  CVector final_state;
  double max_norm_drift = 0.0;
  long steps = 0;
};

/// Fixed-step RK4 for i dc/dt = H(t) c on the grid t0 + k*T/steps_per_period.
/// No renormalization is applied. Throws StepSizeError once | |c| - |c0| |
/// exceeds 1e-4.
PropagationResult propagate_observed(const DrivenSystem& system, std::span<const Complex> initial,
                                     double t0, double t1, const PropagationSettings& settings,
                                     const StepObserver& observer = {});

/// Stores the full trajectory; use propagate_observed for long horizons.
Trajectory propagate(const DrivenSystem& system, const StateVector& initial, double t0, double t1,
                     const PropagationSettings& settings);

/// Smallest sampled |c_site|^2 over [0, periods * T], starting from `initial`.
struct MinPopulation {
  double min_population = 1.0;
  double time_of_min = 0.0;
  double max_norm_drift = 0.0;
};
MinPopulation sampled_min_population(const DrivenSystem& system, const StateVector& initial, int site,
                                     int periods, const PropagationSettings& settings);

/// One-period propagator U(T), column j = evolved basis state j.
/// Throws StepSizeError when the unitarity defect exceeds 1e-6.
ComplexMatrix monodromy(const DrivenSystem& system, const PropagationSettings& settings);

}  // namespace floqlab
