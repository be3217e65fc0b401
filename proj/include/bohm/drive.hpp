#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "bohm/constants.hpp"

namespace bohm {

using cplx = std::complex<double>;

/// Near-resonant drive of the 1s-2p0 pair. SI rates in s^-1 plus the
/// dimensionless ratios to omega0 that the dynamics actually use.
struct DriveParameters {
  double E0_Vpm = 0.0;
  double Omega_ps = 0.0;   // detuning omega0 - omega
  double omega0_ps = 0.0;
  double V12_J = 0.0;
  double nu_ps = 0.0;      // V12 / hbar unless overridden; signed
  double sigma_ps = 0.0;   // sqrt(Omega^2 + nu^2)
  std::optional<double> nu_override;

  double nu_s = 0.0;
  double sigma_s = 0.0;
  double Omega_s = 0.0;

  /// e * E0 * a in eV, the prefactor of the dipole energy term.
  double field_energy_eV = 0.0;
  double E1_eV = -13.6057;

  double E2_eV() const { return E1_eV / 4.0; }
};

/// Maximum detuning accepted; above kDetuningWarn a warning is produced.
inline constexpr double kDetuningMax = 1e14;
inline constexpr double kDetuningWarn = 1e13;

/// Throws Error(InvalidParameter) when E0 <= 0, Omega < 0, Omega > 1e14 or the
/// generalized frequency vanishes.
DriveParameters derive_drive(double E0_Vpm, double Omega_ps,
                             const PhysicalConstants& constants = {},
                             std::optional<double> nu_override = std::nullopt,
                             std::optional<double> omega0_override = std::nullopt);

std::vector<std::string> drive_warnings(const DriveParameters& drive);

struct CoefficientState {
  cplx c_a{1.0, 0.0};
  cplx c_b{0.0, 0.0};
  double tau = 0.0;

  double norm() const { return std::norm(c_a) + std::norm(c_b); }
};

enum class CoefficientMode {
  Analytic,    // exact solution of the rotating-wave rate equations
  Printed,     // closed form as printed with the conjugated c_a; reference only
  Frozen,      // field-free superposition, constant c1, c2
  NumericOde,  // rate equations integrated alongside the trajectory
};

struct CoefficientSource {
  CoefficientMode mode = CoefficientMode::Analytic;
  cplx c1{1.0, 0.0};
  cplx c2{0.0, 0.0};

  static CoefficientSource analytic() { return {}; }
  /// Requires |c1|^2 + |c2|^2 = 1 within 1e-12.
  static CoefficientSource frozen(cplx c1, cplx c2);
  static CoefficientSource numeric() {
    return {CoefficientMode::NumericOde, {1.0, 0.0}, {0.0, 0.0}};
  }
  static CoefficientSource printed() {
    return {CoefficientMode::Printed, {1.0, 0.0}, {0.0, 0.0}};
  }

  bool driven() const { return mode != CoefficientMode::Frozen; }
};

/// Exact amplitudes with c_a(0) = 1, c_b(0) = 0:
///   c_a = e^{-i Omega tau/2} [cos(sigma tau/2) + i (Omega/sigma) sin(sigma tau/2)]
///   c_b = -i (nu/sigma) sin(sigma tau/2) e^{+i Omega tau/2}
CoefficientState coefficients(double tau, const DriveParameters& drive);

/// The printed closed form, whose c_a is the complex conjugate of the exact
/// one. It does not solve the rate equations for Omega != 0; the printed
/// envelopes T and T' are consistent with it.
CoefficientState coefficients_printed(double tau, const DriveParameters& drive);

/// Coefficients for any non-ODE source at tau.
CoefficientState evaluate_source(const CoefficientSource& source, double tau,
                                 const DriveParameters& drive);

/// (nu/sigma)^2 sin^2(sigma tau / 2)
double transition_probability(double tau, const DriveParameters& drive);

/// Printed envelopes: with the printed coefficients, T' = Re W and
/// (nu / 2 sigma) T = Im W for W = coherence().
double envelope_T(double tau, const DriveParameters& drive);
double envelope_Tprime(double tau, const DriveParameters& drive);

/// Same identities for the exact coefficients: the printed envelopes with
/// Omega -> -Omega and the carrier tau -> (1 - Omega) tau.
double envelope_T_analytic(double tau, const DriveParameters& drive);
double envelope_Tprime_analytic(double tau, const DriveParameters& drive);

/// c_a^* c_b e^{-i tau}: the interference weight multiplying psi100 psi210.
cplx coherence(const CoefficientState& state);

/// Right-hand side of the rate equations in scaled time, packed as
/// (Re c_a, Im c_a, Re c_b, Im c_b).
void rate_equations(double tau, const double* y, double* dydt,
                    const DriveParameters& drive);

/// Adaptive integration of the rate equations, sampled every `stride`
/// (plus the endpoint). Test oracle for `coefficients`.
std::vector<CoefficientState> solve_coefficients_numeric(
    double tau_max, const DriveParameters& drive, double tol,
    double stride = 10.0);

/// Angle reduction modulo 2 pi carried in extended precision.
double reduce_angle(long double x);

}  // namespace bohm
