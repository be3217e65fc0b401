#pragma once

#include <numbers>

namespace bohm {

// SI values (CODATA 2018). Only the configuration boundary sees these; all
// dynamics run in Bohr radii and tau = omega0 * t.
struct PhysicalConstants {
  double bohr_radius_m = 5.29177210903e-11;
  double electron_mass_kg = 9.1093837015e-31;
  double elementary_charge_C = 1.602176634e-19;
  double hbar_Js = 1.054571817e-34;
  double eV_J = 1.602176634e-19;
  double E1_eV = -13.6057;

  double E2_eV() const { return E1_eV / 4.0; }
  double hartree_eV() const { return -2.0 * E1_eV; }
  /// (E2 - E1) / hbar in s^-1.
  double omega0_per_second() const { return (E2_eV() - E1_eV) * eV_J / hbar_Js; }
};

// <1s| z |2p0> / a, the dipole matrix element factor.
inline constexpr double kDipoleFactor = 128.0 * std::numbers::sqrt2 / 243.0;

// hbar / (m a^2 omega0) in exact atomic units, where omega0 = 3/8 hartree.
inline constexpr double kVelocityScale = 8.0 / 3.0;

inline constexpr double kPi = std::numbers::pi;

}  // namespace bohm
