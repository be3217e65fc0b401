#pragma once

#include <numbers>

#include "bohm/drive.hpp"
#include "bohm/wavefield.hpp"

namespace bohm {

/// Scaled velocity (d xi/d tau, d theta/d tau, d phi/d tau) of the electron
/// with constant spin s = (hbar/2) z.
struct ScaledVelocity {
  double dxi = 0.0;
  double dtheta = 0.0;
  double dphi = 0.0;
};

/// Switches on the spin term of p = grad S + grad log rho x s. The defaults
/// are the physical field; the others exist so the verification suite can
/// demonstrate that it catches a missing or mirrored spin term.
struct FieldOptions {
  bool spin_term = true;
  bool flip_cross = false;
  double rho_floor = kDefaultRhoFloor;
};

/// Initial points need sin(theta0) >= 1e-3; integration aborts below 1e-6.
inline constexpr double kAxisInitMin = 1e-3;
inline constexpr double kAxisAbort = 1e-6;

/// dxi/dtau   = (8/3) Im{d_xi psi / psi}
/// dtheta/dtau = (8/3) xi^-2 Im{d_theta psi / psi}
/// dphi/dtau  = (4/3) [-(1/xi) d_xi ln rho - cos(theta)/(xi^2 sin theta) d_theta ln rho]
/// The last line is entirely the spin term.
///
/// Throws NodeProximity when rho < rho_floor, AxisProximity when
/// sin(theta) < 1e-6.
ScaledVelocity velocity_field(const SpatialPoint& p, const CoefficientState& c,
                              const FieldOptions& options = {});

/// Same field from a precomputed amplitude, without the node and axis checks.
ScaledVelocity velocity_from_wave(const WaveAmplitude& w, const SpatialPoint& p,
                                  const FieldOptions& options = {});

/// rho times the scaled velocity, computed without dividing by rho so it is
/// finite (and zero) at nodes.
struct CurrentDensity {
  double xi = 0.0;
  double theta = 0.0;
  double phi = 0.0;
};

CurrentDensity pauli_current(const SpatialPoint& p, const CoefficientState& c,
                             const FieldOptions& options = {});

/// d rho/d tau + div j for the driven pair. The truncated rotating-wave
/// coupling is not a multiplicative potential, so the pointwise balance
/// carries the source 2 Im{psi* H' psi}. Frozen states have no source.
double continuity_source(const SpatialPoint& p, const CoefficientState& c,
                         const DriveParameters& drive);

enum class Eigenstate { Ground1s, Excited2p0 };

/// 8/(3 xi) for 1s, 4/(3 xi) for 2p0.
double eigenstate_angular_velocity(Eigenstate state, double xi);

/// A = (2 + xi0) / (xi0 sin theta0), labelling the invariant hyperboloid
/// xi = 2 / (A sin theta - 1).
struct SurfaceInvariant {
  double A = 0.0;
};

SurfaceInvariant surface_constant(double xi0, double theta0);

/// xi - 2/(A sin theta - 1). Throws OffSheet when A sin theta <= 1.
double surface_residual(const SpatialPoint& p, const SurfaceInvariant& s);

/// beta as printed (4 sqrt 2 a) and the reciprocal that the unit-normalized
/// wavefunctions require in D and chi.
inline constexpr double kBetaPrinted = 4.0 * std::numbers::sqrt2;
inline constexpr double kBetaNormalized = 1.0 / kBetaPrinted;

/// Literal evaluation of the printed momentum expressions, with the printed
/// closed-form coefficients and envelopes. Momenta in atomic units
/// (hbar = m = a = 1); the *_dtau fields use the scaled system prefactors.
struct PrintedFormCheck {
  double T = 0.0;
  double Tprime = 0.0;
  double D = 0.0;
  double chi_r = 0.0;
  double chi_theta = 0.0;
  double p_r = 0.0;
  double p_theta = 0.0;
  double p_phi = 0.0;
  double dxi_dtau = 0.0;
  double dtheta_dtau = 0.0;
  double dphi_dtau = 0.0;
  /// With the sign of the |c_a|^2 term of chi_r reversed and the scaled
  /// prefactor sqrt(2)/3; these equal the derived spin-term values.
  double chi_r_corrected = 0.0;
  double p_phi_corrected = 0.0;
  double dphi_dtau_corrected = 0.0;
};

PrintedFormCheck printed_momentum_check(const SpatialPoint& p, double tau,
                                        const DriveParameters& drive,
                                        double beta = kBetaPrinted);

}  // namespace bohm
