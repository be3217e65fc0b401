#include "bohm/energy.hpp"

#include <cmath>

namespace bohm {

namespace {

double dipole_energy(const SpatialPoint& p, double tau,
                     const DriveParameters& drive) {
  const double carrier =
      reduce_angle(static_cast<long double>(tau) * (1.0L - drive.Omega_s));
  return -0.5 * drive.field_energy_eV * p.xi * std::cos(p.theta) *
         std::cos(carrier);
}

}  // namespace

LocalEnergy local_energy(const SpatialPoint& p, const CoefficientState& c,
                         const DriveParameters& drive, bool driven,
                         double rho_floor) {
  const WaveAmplitude w = eval_wave(p, c);
  LocalEnergy e;
  e.drive_part_eV = driven ? dipole_energy(p, c.tau, drive) : 0.0;
  if (!(w.rho >= rho_floor)) {
    e.clipped = true;
    e.total_eV = kClippedEnergy_eV;
    return e;
  }
  const cplx h0_psi = drive.E1_eV * w.term_a + drive.E2_eV() * w.term_b;
  e.h0_part_eV = (std::conj(w.psi) * h0_psi).real() / w.rho;
  e.total_eV = e.h0_part_eV + e.drive_part_eV;
  return e;
}

LocalEnergy local_energy_printed(const SpatialPoint& p, double tau,
                                 const DriveParameters& drive) {
  const CoefficientState c = coefficients_printed(tau, drive);
  const double psi100 = kNorm1s * std::exp(-p.xi);
  const double psi210 = kNorm2p * p.xi * std::exp(-0.5 * p.xi) * std::cos(p.theta);
  const double rho = eval_wave(p, c).rho;
  const double E1 = drive.E1_eV;
  const double E2 = drive.E2_eV();

  LocalEnergy e;
  e.h0_part_eV = (std::norm(c.c_a) * E1 * psi100 * psi100 +
                  std::norm(c.c_b) * E2 * psi210 * psi210 +
                  psi100 * psi210 * (E1 + E2) * envelope_Tprime(tau, drive)) /
                 rho;
  e.drive_part_eV = dipole_energy(p, tau, drive);
  e.total_eV = e.h0_part_eV + e.drive_part_eV;
  return e;
}

double expected_energy(const CoefficientState& c, const DriveParameters& drive,
                       bool driven) {
  double e = std::norm(c.c_a) * drive.E1_eV + std::norm(c.c_b) * drive.E2_eV();
  if (driven) {
    // <xi cos(theta)> = 2 Re{c_a* c_b e^{-i tau}} <1s|z|2p0>/a
    const double z_mean = 2.0 * coherence(c).real() * kDipoleFactor;
    const double carrier =
        reduce_angle(static_cast<long double>(c.tau) * (1.0L - drive.Omega_s));
    e += -0.5 * drive.field_energy_eV * z_mean * std::cos(carrier);
  }
  return e;
}

}  // namespace bohm
