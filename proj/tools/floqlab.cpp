// floqlab command-line driver.
// Exit codes: 0 ok, 1 property violation, 2 invalid config, 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "floqlab/errors.hpp"
#include "floqlab/harness.hpp"

namespace {

using namespace floqlab;

enum ExitCode { kOk = 0, kViolation = 1, kInvalid = 2, kNumerical = 3 };

struct Options {
  ExperimentConfig config;
  std::string ratio_grid;
  std::optional<int> periods;
  std::string out;
  bool svg = false;
  bool no_timestamp = false;
};

void add_system_flags(CLI::App* sub, Options& o) {
  sub->add_option("--n", o.config.n, "number of sites");
  sub->add_option("--v", o.config.v, "nearest-neighbour coupling");
  sub->add_option("--omega", o.config.omega, "drive frequency");
  sub->add_option("--steps-per-period", o.config.settings.steps_per_period, "RK4 steps per drive period");
  sub->add_option("--out", o.out, "output CSV path (stdout when omitted)");
  sub->add_flag("--svg", o.svg, "also write an SVG plot next to --out");
  sub->add_flag("--no-timestamp", o.no_timestamp, "omit the generation time for byte-identical output");
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

std::string svg_path(const std::string& out) {
  return std::filesystem::path(out).replace_extension(".svg").string();
}

int emit_table(const Options& o, const CsvTable& table) {
  write_text(o.out, table.str());
  if (o.svg) {
    if (o.out.empty()) throw DomainError("--svg needs --out");
    write_text(svg_path(o.out), experiment_svg(o.config, table));
  }
  return kOk;
}

int run(Options& o) {
  auto& c = o.config;
  c.timestamp = !o.no_timestamp;
  if (!o.ratio_grid.empty()) c.ratios = parse_ratio_grid(o.ratio_grid);
  c.horizon_periods = o.periods.value_or(c.experiment == Experiment::dynamics ? 20 : 400);
  c.validate();
  if (o.svg && o.out.empty()) throw DomainError("--svg needs --out");

  switch (c.experiment) {
    case Experiment::dynamics:
      return emit_table(o, run_dynamics(c));
    case Experiment::min_pop_sweep:
      return emit_table(o, run_min_pop_sweep(c));
    case Experiment::floquet_sweep:
      return emit_table(o, run_floquet_sweep(c));
    case Experiment::effective_compare: {
      const auto r = run_effective_compare(c);
      std::cerr << "max |quasi_energy - effective_eigenvalue| = " << r.max_deviation << " at A/omega = "
                << r.ratio_at_max << '\n';
      return emit_table(o, r.table);
    }
    case Experiment::properties: {
      const auto report = run_properties(c);
      if (o.out.empty()) {
        std::cout << report.to_text();
      } else {
        write_text(o.out + ".txt", report.to_text());
        write_text(o.out + ".json", report.to_json());
        std::cerr << "violations: " << report.violations() << '\n';
      }
      return report.violations() == 0 ? kOk : kViolation;
    }
  }
  return kInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driven tight-binding chains: dynamics, Floquet spectra and effective-model checks"};
  app.set_version_flag("--version", std::string(FLOQLAB_VERSION));
  app.require_subcommand(1);

  Options o;
  std::vector<int> n_list;

  auto* dyn = app.add_subcommand("dynamics", "P_j(t) from site 1 at fixed amplitude");
  add_system_flags(dyn, o);
  dyn->add_option("--amplitude", o.config.amplitude, "drive amplitude A");
  dyn->add_option("--periods", o.periods, "horizon in drive periods (default 20)");

  auto* sweep = app.add_subcommand("sweep-min-pop", "minimum of P_1 versus A/omega");
  auto* floq = app.add_subcommand("floquet-sweep", "branch-tracked quasi-energies versus A/omega");
  auto* eff = app.add_subcommand("effective-compare", "quasi-energies against the effective model");
  for (auto* sub : {sweep, floq, eff}) {
    add_system_flags(sub, o);
    sub->add_option("--ratio-grid", o.ratio_grid, "A/omega grid lo:hi:count (default 0:5:201)");
  }
  sweep->add_option("--periods", o.periods, "horizon in drive periods (default 400)");

  auto* props = app.add_subcommand("properties", "randomized checks of the effective-matrix properties");
  props->add_option("--n-list", n_list, "chain lengths (default 2..11)")->delimiter(',');
  props->add_option("--trials", o.config.trials, "trials per chain length");
  props->add_option("--seed", o.config.seed, "base RNG seed");
  props->add_option("--out", o.out, "output prefix; writes <prefix>.txt and <prefix>.json");
  props->add_option("--perturb-h13", o.config.h13_perturbation)->group("");  // negative-control fixture

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  for (auto e : {Experiment::dynamics, Experiment::min_pop_sweep, Experiment::floquet_sweep,
                 Experiment::effective_compare, Experiment::properties})
    if (app.got_subcommand(to_string(e))) o.config.experiment = e;
  if (!n_list.empty()) o.config.n_values = n_list;

  try {
    return run(o);
  } catch (const DomainError& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kInvalid;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
}
