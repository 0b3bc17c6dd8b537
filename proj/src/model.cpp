#include "floqlab/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "floqlab/errors.hpp"

namespace floqlab {

DrivenSystem::DrivenSystem(int n, double v, double amplitude, double omega, std::vector<int> drive_signs)
    : n_(n), v_(v), amplitude_(amplitude), omega_(omega), drive_signs_(std::move(drive_signs)) {
  if (n < 2) throw DomainError("DrivenSystem: n must be >= 2, got " + std::to_string(n));
  if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError("DrivenSystem: omega must be > 0");
  if (!std::isfinite(v)) throw DomainError("DrivenSystem: v must be finite");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
    throw DomainError("DrivenSystem: amplitude must be finite and >= 0");
  if (drive_signs_.size() != static_cast<std::size_t>(n))
    throw DomainError("DrivenSystem: need one drive sign per site");
  for (int s : drive_signs_)
    if (s != 1 && s != -1) throw DomainError("DrivenSystem: drive signs must be +1 or -1");
}

double DrivenSystem::period() const { return 2.0 * std::numbers::pi / omega_; }

bool DrivenSystem::canonical() const {
  if (drive_signs_[0] != 1) return false;
  for (std::size_t j = 1; j < drive_signs_.size(); ++j)
    if (drive_signs_[j] != -1) return false;
  return true;
}

DrivenSystem canonical_system(int n, double v, double amplitude, double omega) {
  if (n < 2) throw DomainError("canonical_system: n must be >= 2, got " + std::to_string(n));
  std::vector<int> signs(static_cast<std::size_t>(n), -1);
  signs[0] = 1;
  return DrivenSystem(n, v, amplitude, omega, std::move(signs));
}

ComplexMatrix hamiltonian_at(const DrivenSystem& system, double t) {
  const auto n = static_cast<std::size_t>(system.n());
  const double drive = 0.5 * system.amplitude() * std::sin(system.omega() * t);
  ComplexMatrix h(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    h(j, j) = system.drive_signs()[j] * drive;
    if (j + 1 < n) h(j, j + 1) = h(j + 1, j) = system.v();
  }
  return h;
}

void apply_hamiltonian(const DrivenSystem& system, double drive, std::span<const Complex> in,
                       std::span<Complex> out) {
  const std::size_t n = in.size();
  const double v = system.v();
  const auto& signs = system.drive_signs();
  for (std::size_t j = 0; j < n; ++j) {
    Complex s = (signs[j] * drive) * in[j];
    if (j > 0) s += v * in[j - 1];
    if (j + 1 < n) s += v * in[j + 1];
    out[j] = s;
  }
}

StateVector::StateVector(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  double s = 0.0;
  for (const auto& z : amplitudes_) s += std::norm(z);
  if (amplitudes_.empty() || std::abs(s - 1.0) > 1e-9)
    throw DomainError("StateVector: amplitudes must have unit norm");
}

StateVector StateVector::basis(int n, int site) {
  if (n < 1 || site < 0 || site >= n) throw DomainError("StateVector::basis: site out of range");
  CVector c(static_cast<std::size_t>(n));
  c[static_cast<std::size_t>(site)] = 1.0;
  return StateVector(std::move(c));
}

}  // namespace floqlab
