#pragma once

#include <span>
#include <vector>

#include "floqlab/linalg.hpp"

namespace floqlab {

/// A driven tight-binding chain with nearest-neighbour coupling v and
/// on-site energies E_j(t) = s_j * (A/2) * sin(omega t), s_j in {+1, -1}.
/// hbar = 1.
class DrivenSystem {
 public:
  DrivenSystem(int n, double v, double amplitude, double omega, std::vector<int> drive_signs);

  int n() const { return n_; }
  double v() const { return v_; }
  double amplitude() const { return amplitude_; }
  double omega() const { return omega_; }
  double period() const;
  double ratio() const { return amplitude_ / omega_; }
  const std::vector<int>& drive_signs() const { return drive_signs_; }

  /// True for the (+1, -1, ..., -1) pattern.
  bool canonical() const;

 private:
  int n_;
  double v_;
  double amplitude_;
  double omega_;
  std::vector<int> drive_signs_;
};

/// Site 1 shifted against all others: signs (+1, -1, ..., -1).
DrivenSystem canonical_system(int n, double v, double amplitude, double omega);

/// Dense H(t). Real symmetric tridiagonal.
ComplexMatrix hamiltonian_at(const DrivenSystem& system, double t);

/// out = H(t) * in without forming the matrix; `drive` is (A/2) sin(omega t).
void apply_hamiltonian(const DrivenSystem& system, double drive, std::span<const Complex> in,
                       std::span<Complex> out);

/// Unit-norm amplitude vector c_j.
class StateVector {
 public:
  /// Throws DomainError unless sum |c_j|^2 = 1 within 1e-9.
  explicit StateVector(CVector amplitudes);

  static StateVector basis(int n, int site);  // site is 0-based

  const CVector& amplitudes() const { return amplitudes_; }
  std::size_t size() const { return amplitudes_.size(); }

 private:
  CVector amplitudes_;
};

}  // namespace floqlab
