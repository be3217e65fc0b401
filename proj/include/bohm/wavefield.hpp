#pragma once

#include <cmath>

#include "bohm/constants.hpp"
#include "bohm/drive.hpp"

namespace bohm {

/// Scaled spherical position: xi = r / a, polar angle theta, azimuth phi.
/// phi is carried unwrapped along trajectories.
struct SpatialPoint {
  double xi = 1.0;
  double theta = 1.0;
  double phi = 0.0;
};

/// Density floor below which gradient-type quantities report node proximity.
inline constexpr double kDefaultRhoFloor = 1e-12;

/// psi~ = N1 c_a e^{-xi} + N2 c_b xi e^{-xi/2} cos(theta) e^{-i tau}, with
/// N1 = 1/sqrt(pi), N2 = 1/sqrt(32 pi) and the global phase e^{-i E1 t/hbar}
/// removed.
struct WaveAmplitude {
  cplx psi;
  cplx d_xi;
  cplx d_theta;
  double rho = 0.0;
  cplx term_a;  // 1s part of psi
  cplx term_b;  // 2p0 part of psi, including e^{-i tau}
};

inline const double kNorm1s = 1.0 / std::sqrt(kPi);
inline const double kNorm2p = 1.0 / std::sqrt(32.0 * kPi);

WaveAmplitude eval_wave(const SpatialPoint& p, const CoefficientState& c);

/// Physical (orthonormal-frame) components of a scaled gradient:
/// radial = d/dxi, polar = (1/xi) d/dtheta.
struct ScaledGradient {
  double radial = 0.0;
  double polar = 0.0;
};

/// Im{(grad psi) psi*} / rho; throws NodeProximity when rho < rho_floor.
ScaledGradient grad_S(const SpatialPoint& p, const CoefficientState& c,
                      double rho_floor = kDefaultRhoFloor);

/// 2 Re{(grad psi) psi*} / rho; throws NodeProximity when rho < rho_floor.
ScaledGradient grad_log_rho(const SpatialPoint& p, const CoefficientState& c,
                            double rho_floor = kDefaultRhoFloor);

struct QuantumPotential {
  double value_eV = 0.0;
  bool step_degenerate = false;  // xi < 2h: radial stencil crowds the origin
};

/// -(1/2) lap(R)/R with R = sqrt(rho), by second-order central differences of
/// step h in xi and theta, converted to eV with the hartree of `constants`.
QuantumPotential quantum_potential(const SpatialPoint& p,
                                   const CoefficientState& c, double h = 1e-3,
                                   const PhysicalConstants& constants = {},
                                   double rho_floor = kDefaultRhoFloor);

}  // namespace bohm
