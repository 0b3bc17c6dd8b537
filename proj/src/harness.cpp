#include "floqlab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <set>
#include <sstream>

#include "floqlab/errors.hpp"
#include "floqlab/floquet.hpp"
#include "floqlab/parallel.hpp"
#include "floqlab/svg.hpp"

#ifndef FLOQLAB_VERSION
#define FLOQLAB_VERSION "dev"
#endif

namespace floqlab {

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::dynamics: return "dynamics";
    case Experiment::min_pop_sweep: return "sweep-min-pop";
    case Experiment::floquet_sweep: return "floquet-sweep";
    case Experiment::effective_compare: return "effective-compare";
    case Experiment::properties: return "properties";
  }
  return "unknown";
}

Experiment parse_experiment(const std::string& name) {
  for (auto e : {Experiment::dynamics, Experiment::min_pop_sweep, Experiment::floquet_sweep,
                 Experiment::effective_compare, Experiment::properties})
    if (to_string(e) == name) return e;
  throw DomainError("unknown experiment '" + name + "'");
}

std::vector<double> RatioGrid::values() const {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
  if (count > 1) out.back() = hi;
  return out;
}

RatioGrid parse_ratio_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream is(spec);
  while (std::getline(is, part, ':')) parts.push_back(part);
  const auto bad = [&] { return DomainError("ratio grid must look like lo:hi:count, got '" + spec + "'"); };
  if (parts.size() != 3) throw bad();

  RatioGrid g;
  try {
    std::size_t used = 0;
    g.lo = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw bad();
    g.hi = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw bad();
    g.count = std::stoi(parts[2], &used);
    if (used != parts[2].size()) throw bad();
  } catch (const std::logic_error&) {
    throw bad();
  }
  if (!std::isfinite(g.lo) || !std::isfinite(g.hi) || g.lo < 0.0 || g.hi < g.lo || g.count < 1)
    throw DomainError("ratio grid must satisfy 0 <= lo <= hi and count >= 1, got '" + spec + "'");
  return g;
}

void ExperimentConfig::validate() const {
  if (n < 2) throw DomainError("n must be >= 2");
  if (!std::isfinite(v)) throw DomainError("v must be finite");
  if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError("omega must be > 0");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) throw DomainError("amplitude must be >= 0");
  if (ratios.count < 1 || ratios.hi < ratios.lo || ratios.lo < 0.0 || !std::isfinite(ratios.hi))
    throw DomainError("ratio grid must be finite, non-negative and ascending");
  if (horizon_periods < 10) throw DomainError("horizon must be at least 10 periods");
  settings.validate();
  if (experiment == Experiment::properties) {
    if (trials < 1) throw DomainError("trials must be >= 1");
    if (n_values.empty()) throw DomainError("n list must not be empty");
    for (int k : n_values)
      if (k < 2) throw DomainError("every n in the n list must be >= 2");
  }
}

namespace {

std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::vector<std::string> provenance(const ExperimentConfig& c, bool with_grid, bool with_horizon) {
  std::vector<std::string> m{
      std::string("floqlab ") + FLOQLAB_VERSION,
      "experiment: " + to_string(c.experiment),
      "n: " + std::to_string(c.n),
      "v: " + num(c.v),
      "omega: " + num(c.omega),
      "drive: site 1 +(A/2)sin(omega t), sites 2..n -(A/2)sin(omega t)",
      "integrator: rk4",
      "steps_per_period: " + std::to_string(c.settings.steps_per_period),
  };
  if (with_grid)
    m.push_back("ratio_grid: " + num(c.ratios.lo) + ":" + num(c.ratios.hi) + ":" + std::to_string(c.ratios.count));
  else
    m.push_back("amplitude: " + num(c.amplitude));
  if (with_horizon) m.push_back("horizon_periods: " + std::to_string(c.horizon_periods));
  if (c.timestamp) m.push_back("generated: " + utc_now());
  return m;
}

}  // namespace

void CsvTable::write(std::ostream& os) const {
  for (const auto& m : metadata) os << "# " << m << '\n';
  for (std::size_t k = 0; k < columns.size(); ++k) os << (k ? "," : "") << columns[k];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << num(row[k]);
    os << '\n';
  }
}

std::string CsvTable::str() const {
  std::ostringstream os;
  write(os);
  return os.str();
}

std::size_t CsvTable::column_index(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw DomainError("no column named '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> CsvTable::column(const std::string& name) const {
  const std::size_t k = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[k]);
  return out;
}

CsvTable run_dynamics(const ExperimentConfig& config) {
  config.validate();
  const DrivenSystem system = canonical_system(config.n, config.v, config.amplitude, config.omega);
  const Trajectory traj = propagate(system, StateVector::basis(config.n, 0), 0.0,
                                    config.horizon_periods * system.period(), config.settings);
  CsvTable t;
  t.metadata = provenance(config, false, true);
  t.metadata.push_back("initial_state: site 1");
  t.metadata.push_back("max_norm_drift: " + num(traj.max_norm_drift));
  t.columns.push_back("t");
  for (int j = 1; j <= config.n; ++j) t.columns.push_back("P" + std::to_string(j));
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    std::vector<double> row{traj.times[i]};
    row.insert(row.end(), traj.populations[i].begin(), traj.populations[i].end());
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable run_min_pop_sweep(const ExperimentConfig& config) {
  config.validate();
  const auto ratios = config.ratios.values();
  const auto results = parallel_map(ratios.size(), [&](std::size_t i) {
    const DrivenSystem system = canonical_system(config.n, config.v, ratios[i] * config.omega, config.omega);
    return sampled_min_population(system, StateVector::basis(config.n, 0), 0, config.horizon_periods,
                                  config.settings);
  });
  const bool with_oracle = config.n == 3;
  CsvTable t;
  t.metadata = provenance(config, true, true);
  t.metadata.push_back("initial_state: site 1");
  t.columns = {"ratio", "min_P1"};
  if (with_oracle) t.columns.push_back("oracle_min_P1");
  t.columns.push_back("t_min");
  t.columns.push_back("norm_drift");
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    std::vector<double> row{ratios[i], results[i].min_population};
    if (with_oracle) row.push_back(min_p1_oracle(3, config.v, config.v * bessel_j0(ratios[i])));
    row.push_back(results[i].time_of_min);
    row.push_back(results[i].max_norm_drift);
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable run_floquet_sweep(const ExperimentConfig& config) {
  config.validate();
  const auto ratios = config.ratios.values();
  const SweepTable sweep = quasi_energy_sweep(config.n, config.v, config.omega, ratios, config.settings);
  CsvTable t;
  t.metadata = provenance(config, true, false);
  t.metadata.push_back("mode: branch label tracked by eigenvector overlap between adjacent ratios");
  t.columns = {"ratio", "mode", "quasi_energy"};
  for (int j = 1; j <= config.n; ++j) t.columns.push_back("avgP" + std::to_string(j));
  for (const auto& row : sweep.rows) {
    for (std::size_t k = 0; k < row.modes.size(); ++k) {
      std::vector<double> r{row.ratio, static_cast<double>(k), row.modes[k].quasi_energy};
      r.insert(r.end(), row.modes[k].avg_populations.begin(), row.modes[k].avg_populations.end());
      t.rows.push_back(std::move(r));
    }
  }
  return t;
}

EffectiveComparison run_effective_compare(const ExperimentConfig& config) {
  config.validate();
  const auto ratios = config.ratios.values();

  struct Point {
    std::vector<double> quasi, effective;
  };
  const auto points = parallel_map(ratios.size(), [&](std::size_t i) {
    const DrivenSystem system = canonical_system(config.n, config.v, ratios[i] * config.omega, config.omega);
    const FloquetSpectrum spec = floquet_spectrum(system, config.settings);
    const EigenDecomposition eff = hermitian_eigen(effective_model(system).matrix);

    std::vector<CVector> eff_vecs, flo_vecs;
    std::vector<double> eff_vals, flo_vals;
    for (std::size_t k = 0; k < eff.size(); ++k) {
      eff_vecs.push_back(to_driven_frame(eff.eigenvectors[k], system));
      eff_vals.push_back(eff.eigenvalues[k].real());
    }
    for (const auto& m : spec.modes) {
      flo_vecs.push_back(m.eigenvector);
      flo_vals.push_back(m.quasi_energy);
    }
    const auto perm = match_by_overlap(eff_vecs, eff_vals, flo_vecs, flo_vals);
    Point p;
    for (std::size_t k = 0; k < perm.size(); ++k) {
      p.effective.push_back(eff_vals[k]);
      p.quasi.push_back(flo_vals[perm[k]]);
    }
    return p;
  });

  EffectiveComparison out;
  out.table.metadata = provenance(config, true, false);
  out.table.metadata.push_back("pairing: effective eigenvectors mapped to the driven frame, matched by overlap");
  out.table.columns = {"ratio", "mode", "quasi_energy", "effective_eigenvalue", "deviation"};
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    for (std::size_t k = 0; k < points[i].quasi.size(); ++k) {
      const double dev = std::abs(points[i].quasi[k] - points[i].effective[k]);
      if (dev > out.max_deviation) {
        out.max_deviation = dev;
        out.ratio_at_max = ratios[i];
      }
      out.table.rows.push_back({ratios[i], static_cast<double>(k), points[i].quasi[k], points[i].effective[k], dev});
    }
  }
  out.table.metadata.push_back("max_deviation: " + num(out.max_deviation) + " at ratio " + num(out.ratio_at_max));
  return out;
}

PropertyReport run_properties(const ExperimentConfig& config) {
  config.validate();
  PropertyConfig pc;
  pc.n_values = config.n_values;
  pc.trials = config.trials;
  pc.seed = config.seed;
  pc.h13_perturbation = config.h13_perturbation;
  return verify_properties(pc);
}

std::string table_to_svg(const CsvTable& table, const std::string& title, const std::string& x_column,
                         const std::vector<std::string>& y_columns, const std::string& group_column) {
  std::vector<svg::Series> series;
  const std::size_t xi = table.column_index(x_column);
  if (group_column.empty()) {
    for (const auto& y : y_columns) {
      const std::size_t yi = table.column_index(y);
      svg::Series s{y, {}, {}};
      for (const auto& r : table.rows) {
        s.x.push_back(r[xi]);
        s.y.push_back(r[yi]);
      }
      series.push_back(std::move(s));
    }
  } else {
    const std::size_t gi = table.column_index(group_column);
    std::set<double> groups;
    for (const auto& r : table.rows) groups.insert(r[gi]);
    for (const auto& y : y_columns) {
      const std::size_t yi = table.column_index(y);
      for (double g : groups) {
        svg::Series s{y + " " + group_column + " " + num(g), {}, {}};
        for (const auto& r : table.rows) {
          if (r[gi] != g) continue;
          s.x.push_back(r[xi]);
          s.y.push_back(r[yi]);
        }
        series.push_back(std::move(s));
      }
    }
  }
  const std::string y_label = y_columns.size() == 1 ? y_columns.front() : "value";
  return svg::line_plot(title, x_column, y_label, series);
}

std::string experiment_svg(const ExperimentConfig& config, const CsvTable& table) {
  const std::string title = to_string(config.experiment) + " (n=" + std::to_string(config.n) + ", v=" +
                            num(config.v) + ", omega=" + num(config.omega) + ")";
  switch (config.experiment) {
    case Experiment::dynamics: {
      std::vector<std::string> ys;
      for (int j = 1; j <= config.n; ++j) ys.push_back("P" + std::to_string(j));
      return table_to_svg(table, title, "t", ys);
    }
    case Experiment::min_pop_sweep: {
      std::vector<std::string> ys{"min_P1"};
      if (config.n == 3) ys.push_back("oracle_min_P1");
      return table_to_svg(table, title, "ratio", ys);
    }
    case Experiment::floquet_sweep:
      return table_to_svg(table, title, "ratio", {"quasi_energy"}, "mode");
    case Experiment::effective_compare:
      return table_to_svg(table, title, "ratio", {"quasi_energy", "effective_eigenvalue"}, "mode");
    case Experiment::properties:
      break;
  }
  throw DomainError("no plot for experiment " + to_string(config.experiment));
}

}  // namespace floqlab
