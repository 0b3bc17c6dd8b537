#include "floqlab/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "floqlab/errors.hpp"

namespace floqlab {

void PropagationSettings::validate() const {
  if (steps_per_period < 100)
    throw DomainError("steps_per_period must be >= 100, got " + std::to_string(steps_per_period));
}

namespace {

constexpr double kNormAbort = 1e-4;

// Drive values (A/2) sin(omega t) on the half-step grid of one period.
// Grid-aligned propagations look values up by index so long horizons do not
// accumulate phase error in t.
class DriveTable {
 public:
  DriveTable(const DrivenSystem& system, int steps_per_period)
      : half_steps_(2L * steps_per_period), values_(static_cast<std::size_t>(half_steps_)) {
    const double half_amp = 0.5 * system.amplitude();
    for (long k = 0; k < half_steps_; ++k) {
      const double phase = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(half_steps_);
      values_[static_cast<std::size_t>(k)] = half_amp * std::sin(phase);
    }
  }
  double at(long half_index) const {
    long k = half_index % half_steps_;
    if (k < 0) k += half_steps_;
    return values_[static_cast<std::size_t>(k)];
  }

 private:
  long half_steps_;
  std::vector<double> values_;
};

template <class Observer>
PropagationResult run_rk4(const DrivenSystem& system, std::span<const Complex> initial, double t0, double t1,
                          const PropagationSettings& settings, Observer&& observe) {
  settings.validate();
  if (!(t1 > t0)) throw DomainError("propagate: t1 must be greater than t0");
  if (initial.size() != static_cast<std::size_t>(system.n()))
    throw DomainError("propagate: initial state has wrong dimension");

  const double period = system.period();
  const double grid_h = period / settings.steps_per_period;
  const double span_steps = (t1 - t0) / grid_h;
  long steps = std::lround(span_steps);
  double h = grid_h;
  bool on_grid = std::abs(span_steps - static_cast<double>(steps)) <= 1e-9 * std::max(1.0, span_steps);
  if (!on_grid || steps < 1) {
    steps = std::max(1L, static_cast<long>(std::ceil(span_steps)));
    h = (t1 - t0) / static_cast<double>(steps);
  }
  const double start_index = t0 / grid_h;
  const long start_step = std::lround(start_index);
  const bool use_table = on_grid && std::abs(start_index - static_cast<double>(start_step)) <= 1e-9 * std::max(1.0, std::abs(start_index));

  const DriveTable table(system, settings.steps_per_period);
  const double half_amp = 0.5 * system.amplitude();
  const double omega = system.omega();
  auto drive_at = [&](long step, int half) {
    if (use_table) return table.at(2 * (start_step + step) + half);
    return half_amp * std::sin(omega * (t0 + (static_cast<double>(step) + 0.5 * half) * h));
  };

  const std::size_t n = initial.size();
  CVector c(initial.begin(), initial.end());
  CVector k1(n), k2(n), k3(n), k4(n), tmp(n);
  const Complex minus_i_h(0.0, -h);
  const double norm0 = norm(c);
  double max_drift = 0.0;

  observe(t0, std::span<const Complex>(c));
  for (long s = 0; s < steps; ++s) {
    const double d0 = drive_at(s, 0), dm = drive_at(s, 1), d1 = drive_at(s, 2);
    // k's hold -i h H c
    apply_hamiltonian(system, d0, c, k1);
    for (std::size_t j = 0; j < n; ++j) {
      k1[j] *= minus_i_h;
      tmp[j] = c[j] + 0.5 * k1[j];
    }
    apply_hamiltonian(system, dm, tmp, k2);
    for (std::size_t j = 0; j < n; ++j) {
      k2[j] *= minus_i_h;
      tmp[j] = c[j] + 0.5 * k2[j];
    }
    apply_hamiltonian(system, dm, tmp, k3);
    for (std::size_t j = 0; j < n; ++j) {
      k3[j] *= minus_i_h;
      tmp[j] = c[j] + k3[j];
    }
    apply_hamiltonian(system, d1, tmp, k4);
    double sq = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      c[j] += (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + minus_i_h * k4[j]) / 6.0;
      sq += std::norm(c[j]);
    }
    const double drift = std::abs(std::sqrt(sq) - norm0);
    if (drift > max_drift) {
      max_drift = drift;
      if (drift > kNormAbort) {
        throw StepSizeError("norm drift " + std::to_string(drift) + " exceeds 1e-4 at step " +
                            std::to_string(s + 1) + "; raise steps_per_period");
      }
    }
    const double t = (s + 1 == steps) ? t1 : t0 + static_cast<double>(s + 1) * h;
    observe(t, std::span<const Complex>(c));
  }
  return {std::move(c), max_drift, steps};
}

}  // namespace

PropagationResult propagate_observed(const DrivenSystem& system, std::span<const Complex> initial, double t0,
                                     double t1, const PropagationSettings& settings, const StepObserver& observer) {
  if (observer) return run_rk4(system, initial, t0, t1, settings, observer);
  return run_rk4(system, initial, t0, t1, settings, [](double, std::span<const Complex>) {});
}

Trajectory propagate(const DrivenSystem& system, const StateVector& initial, double t0, double t1,
                     const PropagationSettings& settings) {
  Trajectory traj;
  auto result = run_rk4(system, initial.amplitudes(), t0, t1, settings, [&](double t, std::span<const Complex> c) {
    traj.times.push_back(t);
    traj.states.emplace_back(c.begin(), c.end());
    std::vector<double> p(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) p[j] = std::norm(c[j]);
    traj.populations.push_back(std::move(p));
  });
  traj.max_norm_drift = result.max_norm_drift;
  return traj;
}

MinPopulation sampled_min_population(const DrivenSystem& system, const StateVector& initial, int site, int periods,
                                     const PropagationSettings& settings) {
  if (site < 0 || site >= system.n()) throw DomainError("sampled_min_population: site out of range");
  if (periods < 1) throw DomainError("sampled_min_population: periods must be >= 1");
  if (initial.size() != static_cast<std::size_t>(system.n()))
    throw DomainError("sampled_min_population: initial state has wrong dimension");
  settings.validate();

  // The RK4 map over one step is linear and T-periodic, so the state at
  // m*T + k*h is U_k U(T)^m c0 with U_k the product of the first k step maps.
  // Only row `site` of each U_k is needed for P_site.
  const auto n = static_cast<std::size_t>(system.n());
  const auto spp = static_cast<std::size_t>(settings.steps_per_period);
  const auto idx = static_cast<std::size_t>(site);
  std::vector<Complex> rows((spp + 1) * n);
  ComplexMatrix u(n, n);
  double drift = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    CVector e(n);
    e[j] = 1.0;
    std::size_t k = 0;
    auto r = run_rk4(system, e, 0.0, system.period(), settings, [&](double, std::span<const Complex> c) {
      rows[k++ * n + j] = c[idx];
    });
    u.set_column(j, r.final_state);
    drift = std::max(drift, r.max_norm_drift);
  }

  MinPopulation out;
  out.max_norm_drift = drift;
  CVector c = initial.amplitudes();
  const double norm0 = norm(c);
  const double h = system.period() / static_cast<double>(spp);
  out.min_population = std::norm(c[idx]);
  for (int m = 0; m < periods; ++m) {
    for (std::size_t k = 1; k <= spp; ++k) {
      Complex amp{};
      for (std::size_t j = 0; j < n; ++j) amp += rows[k * n + j] * c[j];
      const double p = std::norm(amp);
      if (p < out.min_population) {
        out.min_population = p;
        out.time_of_min = (m * static_cast<double>(spp) + static_cast<double>(k)) * h;
      }
    }
    c = matvec(u, c);
    const double d = std::abs(norm(c) - norm0);
    out.max_norm_drift = std::max(out.max_norm_drift, d);
    if (d > kNormAbort) {
      throw StepSizeError("norm drift " + std::to_string(d) + " exceeds 1e-4 after " + std::to_string(m + 1) +
                          " periods; raise steps_per_period");
    }
  }
  return out;
}

ComplexMatrix monodromy(const DrivenSystem& system, const PropagationSettings& settings) {
  const auto n = static_cast<std::size_t>(system.n());
  ComplexMatrix u(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    CVector e(n);
    e[j] = 1.0;
    auto result = propagate_observed(system, e, 0.0, system.period(), settings);
    u.set_column(j, result.final_state);
  }
  const double defect = unitarity_defect(u);
  if (defect > 1e-6) {
    throw StepSizeError("monodromy unitarity defect " + std::to_string(defect) +
                        " exceeds 1e-6; raise steps_per_period");
  }
  return u;
}

}  // namespace floqlab
