#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "floqlab/linalg.hpp"
#include "floqlab/model.hpp"

namespace floqlab {

/// Bessel function of the first kind, order zero. Power series (summed in
/// extended precision) for |x| <= 17, Hankel asymptotic expansion beyond.
double bessel_j0(double x);

/// High-frequency time-averaged chain: zero diagonal, the 1-2 bond is
/// v_eff = v * J0(A/omega), every other bond is v.
struct EffectiveModel {
  int n = 0;
  double v = 0.0;
  double v_eff = 0.0;
  ComplexMatrix matrix;
};

ComplexMatrix effective_matrix(int n, double v, double v_eff);
EffectiveModel effective_model(int n, double v, double v_eff);

/// Throws DomainError for non-canonical drive patterns.
EffectiveModel effective_model(const DrivenSystem& system);

/// Maps an effective-model vector a to the driven frame at t = 0:
/// c_j = a_j exp(i s_j A / (2 omega)).
CVector to_driven_frame(std::span<const Complex> a, const DrivenSystem& system);

struct DarkState {
  std::vector<double> vector;  // unit norm, zero on even sites
  double localization = 0.0;   // |w_1|^2
};

// Zero mode of the odd-n effective matrix:
// w_1 ~ (-1)^((n-1)/2) v/v_eff, w_{2k} = 0, w_{2k+1} ~ (-1)^((n-2k-1)/2),
// normalized. v_eff = 0 gives (1, 0, ..., 0). Even n throws DomainError.
DarkState dark_state_closed_form(int n, double v, double v_eff);

struct Localization {
  double weight = 0.0;  // |w_1|^2 of the zero mode
  bool localized = false;  // weight > 1/2, i.e. (v/v_eff)^2 > (n-1)/2
};
Localization localization(int n, double v, double v_eff);

/// Long-time minimum of P_1 from (1,0,0) under the three-site effective
/// model: ((v^2 - v_eff^2) / (v^2 + v_eff^2))^2. Only n = 3.
double min_p1_oracle(int n, double v, double v_eff);

struct PropertyConfig {
  std::vector<int> n_values{2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  int trials = 100;
  std::uint64_t seed = 20240601;
  /// Added to the (1,3) and (3,1) entries; nonzero only for negative controls.
  double h13_perturbation = 0.0;
};

struct PropertyCheck {
  int n = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  std::string property;  // P1..P4
  bool pass = true;
  double residual = 0.0;
  double v = 0.0;
  double v_eff = 0.0;
  std::string detail;
};

struct PropertyReport {
  PropertyConfig config;
  std::vector<PropertyCheck> checks;

  std::size_t violations() const;
  std::string to_text() const;
  std::string to_json() const;
};

// Numerically checks, for random v_eff in [-2,2]\{0} and v in [0.5,2]:
// P1 unique zero mode for odd n matching the closed form; P2 no zero
// eigenvalue for even n (two when v_eff = 0); P3 (lambda, w) -> (-lambda,
// (-1)^j w_j) pairing; P4 max_j |w_j|^2 <= 1/2 off zero and the
// localization threshold for the zero mode.
PropertyReport verify_properties(const PropertyConfig& config);

}  // namespace floqlab
