#include "floqlab/effective.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "floqlab/errors.hpp"
#include "json.hpp"

namespace floqlab {

namespace {

// sum_k (-1)^k (x/2)^{2k} / (k!)^2 with Neumaier compensation. The largest
// term at |x| = 17 is ~5e5, so extended precision keeps the absolute error
// near 1e-14.
double j0_series(double x) {
  const long double q = static_cast<long double>(x) * x / 4.0L;
  long double term = 1.0L, sum = 1.0L, comp = 0.0L;
  for (int k = 1; k < 200; ++k) {
    term *= -q / (static_cast<long double>(k) * k);
    const long double t = sum + term;
    if (std::fabs(sum) >= std::fabs(term))
      comp += (sum - t) + term;
    else
      comp += (term - t) + sum;
    sum = t;
    if (std::fabs(term) < 1e-22L * std::max(1.0L, std::fabs(sum)) && k > q) break;
  }
  return static_cast<double>(sum + comp);
}

double j0_hankel(double x) {
  // t_k = prod_{m<=k} (2m-1)^2 / (k! (8x)^k); P takes even k, Q odd k.
  double p = 1.0, q = 0.0, term = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (k * 8.0 * x);
    if (next >= term || next < 1e-18) break;
    term = next;
    if (k % 2 == 0)
      p += ((k / 2) % 2 == 0 ? term : -term);
    else
      q += (((k + 1) / 2) % 2 == 0 ? term : -term);
  }
  const double chi = x - 0.25 * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j0(double x) {
  const double ax = std::abs(x);
  if (std::isnan(ax)) return ax;
  if (ax <= 17.0) return j0_series(ax);
  return j0_hankel(ax);
}

ComplexMatrix effective_matrix(int n, double v, double v_eff) {
  if (n < 1) throw DomainError("effective_matrix: n must be >= 1");
  const auto m = static_cast<std::size_t>(n);
  ComplexMatrix h(m, m);
  for (std::size_t k = 0; k + 1 < m; ++k) h(k, k + 1) = h(k + 1, k) = (k == 0 ? v_eff : v);
  return h;
}

EffectiveModel effective_model(int n, double v, double v_eff) {
  return EffectiveModel{n, v, v_eff, effective_matrix(n, v, v_eff)};
}

EffectiveModel effective_model(const DrivenSystem& system) {
  if (!system.canonical())
    throw DomainError("effective_model: requires the (+1, -1, ..., -1) drive pattern");
  const double v_eff = system.v() * bessel_j0(system.ratio());
  return effective_model(system.n(), system.v(), v_eff);
}

CVector to_driven_frame(std::span<const Complex> a, const DrivenSystem& system) {
  CVector c(a.begin(), a.end());
  const double half_ratio = 0.5 * system.ratio();
  for (std::size_t j = 0; j < c.size(); ++j) c[j] *= std::polar(1.0, system.drive_signs()[j] * half_ratio);
  return c;
}

DarkState dark_state_closed_form(int n, double v, double v_eff) {
  if (n < 1 || n % 2 == 0) throw DomainError("dark_state_closed_form: n must be odd (even chains have no unique zero mode)");
  const auto m = static_cast<std::size_t>(n);
  DarkState d;
  d.vector.assign(m, 0.0);
  if (v_eff == 0.0) {
    d.vector[0] = 1.0;
    d.localization = 1.0;
    return d;
  }
  // Scaled by |v_eff| so tiny v_eff never overflows v/v_eff.
  const double sign_head = ((n - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
  d.vector[0] = sign_head * v * (v_eff > 0.0 ? 1.0 : -1.0);
  for (int k = 1; 2 * k + 1 <= n; ++k) {
    const double s = ((n - 2 * k - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
    d.vector[static_cast<std::size_t>(2 * k)] = s * std::abs(v_eff);
  }
  double sq = 0.0;
  for (double w : d.vector) sq += w * w;
  const double scale = 1.0 / std::sqrt(sq);
  for (double& w : d.vector) w *= scale;
  d.localization = d.vector[0] * d.vector[0];
  return d;
}

Localization localization(int n, double v, double v_eff) {
  if (n < 1 || n % 2 == 0) throw DomainError("localization: n must be odd");
  if (v_eff == 0.0) return {1.0, true};
  const double tail = v_eff * v_eff * 0.5 * (n - 1);
  return {v * v / (v * v + tail), v * v > tail};
}

double min_p1_oracle(int n, double v, double v_eff) {
  if (n != 3) throw DomainError("min_p1_oracle: only the three-site chain has a closed form");
  const double num = v * v - v_eff * v_eff;
  const double den = v * v + v_eff * v_eff;
  if (den == 0.0) return 1.0;
  return (num / den) * (num / den);
}

std::size_t PropertyReport::violations() const {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.pass; }));
}

std::string PropertyReport::to_text() const {
  std::ostringstream os;
  os.precision(6);
  os << "effective-matrix property checks\n";
  os << "  n values:";
  for (int n : config.n_values) os << ' ' << n;
  os << "\n  trials: " << config.trials << "\n  seed: " << config.seed << '\n';
  if (config.h13_perturbation != 0.0) os << "  H13 perturbation: " << config.h13_perturbation << '\n';
  for (const char* id : {"P1", "P2", "P3", "P4"}) {
    std::size_t total = 0, failed = 0;
    double worst = 0.0;
    for (const auto& c : checks) {
      if (c.property != id) continue;
      ++total;
      if (!c.pass) ++failed;
      worst = std::max(worst, c.residual);
    }
    os << "  " << id << ": " << total - failed << "/" << total << " pass, max residual " << worst << '\n';
  }
  os << "violations: " << violations() << '\n';
  for (const auto& c : checks) {
    if (c.pass) continue;
    os << "  FAIL " << c.property << " n=" << c.n << " trial=" << c.trial << " seed=" << c.seed << " v=" << c.v
       << " v_eff=" << c.v_eff << " residual=" << c.residual << " : " << c.detail << '\n';
  }
  return os.str();
}

std::string PropertyReport::to_json() const {
  nlohmann::json j;
  j["config"] = {{"n_values", config.n_values},
                 {"trials", config.trials},
                 {"seed", config.seed},
                 {"h13_perturbation", config.h13_perturbation}};
  j["violations"] = violations();
  auto& arr = j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    arr.push_back({{"n", c.n},
                   {"trial", c.trial},
                   {"seed", c.seed},
                   {"property", c.property},
                   {"pass", c.pass},
                   {"residual", c.residual},
                   {"v", c.v},
                   {"v_eff", c.v_eff},
                   {"detail", c.detail}});
  }
  return j.dump(2);
}

namespace {

std::uint64_t trial_seed(std::uint64_t seed, int n, int trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(trial)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

ComplexMatrix property_matrix(int n, double v, double v_eff, double h13) {
  ComplexMatrix h = effective_matrix(n, v, v_eff);
  if (n >= 3 && h13 != 0.0) h(0, 2) = h(2, 0) = h13;
  return h;
}

std::size_t count_zero(const EigenDecomposition& e, double tol) {
  return static_cast<std::size_t>(std::count_if(e.eigenvalues.begin(), e.eigenvalues.end(),
                                                [&](const Complex& l) { return std::abs(l.real()) <= tol; }));
}

void check_trial(const PropertyConfig& cfg, int n, int trial, std::vector<PropertyCheck>& out) {
  const std::uint64_t seed = trial_seed(cfg.seed, n, trial);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> veff_dist(-2.0, 2.0), v_dist(0.5, 2.0);
  double v_eff = 0.0;
  while (v_eff == 0.0) v_eff = veff_dist(rng);
  const double v = v_dist(rng);

  const ComplexMatrix h = property_matrix(n, v, v_eff, cfg.h13_perturbation);
  const double zero_tol = 1e-9 * std::max(1.0, h.max_abs());
  const EigenDecomposition eig = hermitian_eigen(h);
  auto make = [&](const char* id) {
    PropertyCheck c;
    c.n = n;
    c.trial = trial;
    c.seed = seed;
    c.property = id;
    c.v = v;
    c.v_eff = v_eff;
    return c;
  };

  if (n % 2 == 1) {
    PropertyCheck c = make("P1");
    const std::size_t zeros = count_zero(eig, zero_tol);
    if (zeros != 1) {
      c.pass = false;
      c.detail = std::to_string(zeros) + " zero eigenvalues";
    } else {
      std::size_t k = 0;
      while (std::abs(eig.eigenvalues[k].real()) > zero_tol) ++k;
      const DarkState dark = dark_state_closed_form(n, v, v_eff);
      const CVector closed(dark.vector.begin(), dark.vector.end());
      const Complex ov = inner(closed, eig.eigenvectors[k]);
      const Complex phase = std::abs(ov) > 0.0 ? ov / std::abs(ov) : Complex(1.0);
      CVector aligned = closed;
      for (auto& z : aligned) z *= phase;
      c.residual = max_abs_diff(aligned, eig.eigenvectors[k]);
      c.pass = c.residual <= 1e-7;
      if (!c.pass) c.detail = "null vector differs from closed form";
    }
    out.push_back(c);
  } else {
    PropertyCheck c = make("P2");
    double min_abs = std::abs(eig.eigenvalues[0].real());
    for (const auto& l : eig.eigenvalues) min_abs = std::min(min_abs, std::abs(l.real()));
    c.residual = min_abs;
    c.pass = min_abs > zero_tol;
    if (!c.pass) c.detail = "zero eigenvalue with v_eff != 0";

    // Same draw with the 1-2 bond cut: exactly two zero modes.
    const ComplexMatrix h0 = property_matrix(n, v, 0.0, cfg.h13_perturbation);
    const std::size_t zeros = count_zero(hermitian_eigen(h0), 1e-9 * std::max(1.0, h0.max_abs()));
    if (zeros != 2) {
      c.pass = false;
      c.detail += (c.detail.empty() ? "" : "; ") + std::to_string(zeros) + " zero eigenvalues at v_eff = 0";
    }
    out.push_back(c);
  }

  {
    PropertyCheck c = make("P3");
    for (std::size_t k = 0; k < eig.size(); ++k) {
      const double lambda = eig.eigenvalues[k].real();
      CVector partner = eig.eigenvectors[k];
      for (std::size_t j = 1; j < partner.size(); j += 2) partner[j] = -partner[j];
      CVector r = matvec(h, partner);
      for (std::size_t j = 0; j < r.size(); ++j) r[j] += lambda * partner[j];
      double res = 0.0;
      for (const auto& z : r) res = std::max(res, std::abs(z));
      c.residual = std::max(c.residual, res);
    }
    c.pass = c.residual <= 1e-8;
    if (!c.pass) c.detail = "(-lambda, (-1)^j w_j) is not an eigenpair";
    out.push_back(c);
  }

  {
    PropertyCheck c = make("P4");
    for (std::size_t k = 0; k < eig.size(); ++k) {
      if (std::abs(eig.eigenvalues[k].real()) <= zero_tol) continue;
      for (const auto& z : eig.eigenvectors[k]) c.residual = std::max(c.residual, std::norm(z) - 0.5);
    }
    c.residual = std::max(c.residual, 0.0);
    c.pass = c.residual <= 1e-9;
    if (!c.pass) c.detail = "nonzero-eigenvalue mode with |w_j|^2 > 1/2";
    if (n % 2 == 1 && count_zero(eig, zero_tol) == 1) {
      std::size_t k = 0;
      while (std::abs(eig.eigenvalues[k].real()) > zero_tol) ++k;
      const double w1 = std::norm(eig.eigenvectors[k][0]);
      const double threshold = 0.5 * (n - 1);
      const double ratio_sq = (v / v_eff) * (v / v_eff);
      const bool near_boundary = std::abs(ratio_sq - threshold) <= 1e-9 * threshold;
      if (!near_boundary && (w1 > 0.5) != (ratio_sq > threshold)) {
        c.pass = false;
        c.detail += (c.detail.empty() ? "" : "; ") + std::string("zero-mode |w_1|^2 > 1/2 disagrees with (v/v_eff)^2 > (n-1)/2");
      }
    }
    out.push_back(c);
  }
}

}  // namespace

PropertyReport verify_properties(const PropertyConfig& config) {
  if (config.trials < 1) throw DomainError("verify_properties: trials must be >= 1");
  for (int n : config.n_values)
    if (n < 2) throw DomainError("verify_properties: n must be >= 2");
  PropertyReport report{config, {}};
  for (int n : config.n_values)
    for (int trial = 0; trial < config.trials; ++trial) check_trial(config, n, trial, report.checks);
  return report;
}

}  // namespace floqlab
