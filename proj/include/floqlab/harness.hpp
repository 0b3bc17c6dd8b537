#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "floqlab/effective.hpp"
#include "floqlab/evolve.hpp"

namespace floqlab {

enum class Experiment { dynamics, min_pop_sweep, floquet_sweep, effective_compare, properties };

std::string to_string(Experiment e);
/// Accepts the CLI names: dynamics, sweep-min-pop, floquet-sweep, effective-compare, properties.
Experiment parse_experiment(const std::string& name);

struct RatioGrid {
  double lo = 0.0;
  double hi = 5.0;
  int count = 201;

  std::vector<double> values() const;
};

/// Parses "lo:hi:count". Throws DomainError on malformed or descending grids.
RatioGrid parse_ratio_grid(const std::string& spec);

struct ExperimentConfig {
  Experiment experiment = Experiment::dynamics;
  int n = 3;
  double v = 1.0;
  double omega = 10.0;
  double amplitude = 0.0;  // dynamics only
  RatioGrid ratios;
  int horizon_periods = 400;
  PropagationSettings settings;

  // properties
  std::vector<int> n_values{2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  int trials = 100;
  std::uint64_t seed = 20240601;
  double h13_perturbation = 0.0;

  bool timestamp = true;

  /// Throws DomainError (CLI exit code 2).
  void validate() const;
};

/// Numeric table with '#'-prefixed provenance lines.
struct CsvTable {
  std::vector<std::string> metadata;  // without the leading "# "
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void write(std::ostream& os) const;
  std::string str() const;
  std::size_t column_index(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;
};

/// Trajectory from (1, 0, ..., 0): columns t, P1..Pn.
CsvTable run_dynamics(const ExperimentConfig& config);

/// Per ratio: sampled min P1 over horizon_periods; for n = 3 also the
/// effective-model oracle. Columns: ratio, min_P1[, oracle_min_P1], t_min, norm_drift.
CsvTable run_min_pop_sweep(const ExperimentConfig& config);

/// Branch-tracked Floquet modes. Columns: ratio, mode, quasi_energy, avgP1..avgPn.
CsvTable run_floquet_sweep(const ExperimentConfig& config);

struct EffectiveComparison {
  CsvTable table;  // ratio, mode, quasi_energy, effective_eigenvalue, deviation
  double max_deviation = 0.0;
  double ratio_at_max = 0.0;
};
/// Pairs quasi-energies with effective eigenvalues by eigenvector overlap
/// in the driven frame.
EffectiveComparison run_effective_compare(const ExperimentConfig& config);

PropertyReport run_properties(const ExperimentConfig& config);

/// Line plot of the given columns against x_column; for floquet-sweep style
/// tables `group_column` splits rows into one series per distinct value.
std::string table_to_svg(const CsvTable& table, const std::string& title, const std::string& x_column,
                         const std::vector<std::string>& y_columns, const std::string& group_column = "");

/// Default SVG rendering per experiment.
std::string experiment_svg(const ExperimentConfig& config, const CsvTable& table);

}  // namespace floqlab
