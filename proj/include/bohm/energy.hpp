#pragma once

#include "bohm/drive.hpp"
#include "bohm/wavefield.hpp"

namespace bohm {

/// Local energy Re{psi* H psi} / |psi|^2 in eV. Not a constant of motion; the
/// density-weighted mean over the ensemble is the quantum expectation.
struct LocalEnergy {
  double total_eV = 0.0;
  double h0_part_eV = 0.0;
  double drive_part_eV = 0.0;
  bool clipped = false;
};

/// Reported in place of the total when rho < rho_floor.
inline constexpr double kClippedEnergy_eV = 1000.0;

/// h0 part from the complex amplitudes, Re{psi*(E1 psi_a + E2 psi_b)}/rho.
/// The dipole part -1/2 e E0 a xi cos(theta) cos((1 - Omega/omega0) tau) is
/// included only when `driven` (frozen superpositions are field-free).
LocalEnergy local_energy(const SpatialPoint& p, const CoefficientState& c,
                         const DriveParameters& drive, bool driven = true,
                         double rho_floor = kDefaultRhoFloor);

/// The printed form with the T' envelope, using the printed closed-form
/// coefficients. Cross-check for `local_energy`.
LocalEnergy local_energy_printed(const SpatialPoint& p, double tau,
                                 const DriveParameters& drive);

/// |c_a|^2 E1 + |c_b|^2 E2 + <dipole term>, the quantum expectation value.
double expected_energy(const CoefficientState& c, const DriveParameters& drive,
                       bool driven = true);

}  // namespace bohm
