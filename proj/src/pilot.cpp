#include "bohm/pilot.hpp"

#include <cmath>
#include <sstream>

#include "bohm/error.hpp"

namespace bohm {

ScaledVelocity velocity_from_wave(const WaveAmplitude& w, const SpatialPoint& p,
                                  const FieldOptions& options) {
  const cplx conj_psi = std::conj(w.psi);
  const cplx q_xi = w.d_xi * conj_psi / w.rho;
  const cplx q_theta = w.d_theta * conj_psi / w.rho;
  const double st = std::sin(p.theta);
  const double ct = std::cos(p.theta);
  const double xi2 = p.xi * p.xi;

  ScaledVelocity v;
  v.dxi = kVelocityScale * q_xi.imag();
  v.dtheta = kVelocityScale * q_theta.imag() / xi2;
  if (options.spin_term) {
    // grad ln rho x (1/2) z, right-handed (r, theta, phi) frame: only the
    // phi component survives, -(1/2)(G_r sin(theta) + G_theta cos(theta)).
    const double dlnrho_xi = 2.0 * q_xi.real();
    const double dlnrho_theta = 2.0 * q_theta.real();
    double spin = 0.5 * kVelocityScale *
                  (-dlnrho_xi / p.xi - ct / (xi2 * st) * dlnrho_theta);
    if (options.flip_cross) spin = -spin;
    v.dphi = spin;
  }
  return v;
}

ScaledVelocity velocity_field(const SpatialPoint& p, const CoefficientState& c,
                              const FieldOptions& options) {
  if (std::abs(std::sin(p.theta)) < kAxisAbort) {
    std::ostringstream os;
    os << "theta = " << p.theta << " is on the z axis, where phi is undefined";
    throw Error(ErrorKind::AxisProximity, os.str());
  }
  const WaveAmplitude w = eval_wave(p, c);
  if (!(w.rho >= options.rho_floor)) {
    std::ostringstream os;
    os << "density " << w.rho << " below floor at xi = " << p.xi
       << ", theta = " << p.theta << ", tau = " << c.tau;
    throw Error(ErrorKind::NodeProximity, os.str());
  }
  return velocity_from_wave(w, p, options);
}

CurrentDensity pauli_current(const SpatialPoint& p, const CoefficientState& c,
                             const FieldOptions& options) {
  const WaveAmplitude w = eval_wave(p, c);
  const cplx conj_psi = std::conj(w.psi);
  const cplx m_xi = w.d_xi * conj_psi;
  const cplx m_theta = w.d_theta * conj_psi;
  const double st = std::sin(p.theta);
  const double ct = std::cos(p.theta);
  const double xi2 = p.xi * p.xi;

  CurrentDensity j;
  j.xi = kVelocityScale * m_xi.imag();
  j.theta = kVelocityScale * m_theta.imag() / xi2;
  if (options.spin_term) {
    double spin = kVelocityScale *
                  (-m_xi.real() / p.xi - ct / (xi2 * st) * m_theta.real());
    if (options.flip_cross) spin = -spin;
    j.phi = spin;
  }
  return j;
}

double continuity_source(const SpatialPoint& p, const CoefficientState& c,
                         const DriveParameters& drive) {
  // In tau units the coupling maps c_b phi_2 e^{-i tau} onto phi_1 with
  // weight (nu/2) e^{-i Omega tau}, and c_a phi_1 onto phi_2 e^{-i tau}
  // with (nu/2) e^{+i Omega tau}.
  const WaveAmplitude w = eval_wave(p, c);
  const double detune = reduce_angle(static_cast<long double>(drive.Omega_s) * c.tau);
  const cplx phase = std::polar(1.0, detune);
  const CoefficientState unit{{1.0, 0.0}, {1.0, 0.0}, c.tau};
  const WaveAmplitude basis = eval_wave(p, unit);
  const cplx phi1 = basis.term_a;
  const cplx phi2_rot = basis.term_b;  // phi_2 e^{-i tau}
  const cplx coupled = 0.5 * drive.nu_s *
                       (std::conj(phase) * c.c_b * phi1 + phase * c.c_a * phi2_rot);
  return 2.0 * (std::conj(w.psi) * coupled).imag();
}

double eigenstate_angular_velocity(Eigenstate state, double xi) {
  if (!(xi > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "xi must be positive");
  }
  const double ground = kVelocityScale / xi;
  return state == Eigenstate::Ground1s ? ground : 0.5 * ground;
}

SurfaceInvariant surface_constant(double xi0, double theta0) {
  if (!(xi0 > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "xi0 must be positive");
  }
  const double s = std::sin(theta0);
  if (std::abs(s) < kAxisInitMin) {
    std::ostringstream os;
    os << "theta0 = " << theta0 << " is within the excluded axis region";
    throw Error(ErrorKind::AxisProximity, os.str());
  }
  return {(2.0 + xi0) / (xi0 * s)};
}

double surface_residual(const SpatialPoint& p, const SurfaceInvariant& s) {
  const double denom = s.A * std::sin(p.theta) - 1.0;
  if (!(denom > 0.0)) {
    std::ostringstream os;
    os << "A sin(theta) = " << denom + 1.0 << " <= 1: point cannot lie on the "
       << "hyperboloid with A = " << s.A;
    throw Error(ErrorKind::OffSheet, os.str());
  }
  return p.xi - 2.0 / denom;
}

PrintedFormCheck printed_momentum_check(const SpatialPoint& p, double tau,
                                        const DriveParameters& drive,
                                        double beta) {
  const CoefficientState c = coefficients_printed(tau, drive);
  const double ca2 = std::norm(c.c_a);
  const double cb2 = std::norm(c.c_b);
  const double xi = p.xi;
  const double st = std::sin(p.theta);
  const double ct = std::cos(p.theta);
  const double e1 = std::exp(-xi);
  const double e2 = std::exp(-2.0 * xi);
  const double e32 = std::exp(-1.5 * xi);
  const double nu_sigma = drive.nu_s / drive.sigma_s;

  PrintedFormCheck out;
  out.T = envelope_T(tau, drive);
  out.Tprime = envelope_Tprime(tau, drive);
  out.D = e2 * ca2 + beta * beta * xi * xi * e1 * ct * ct * cb2 +
          2.0 * beta * xi * e32 * ct * out.Tprime;
  out.chi_r = ca2 * e2 / beta + beta * cb2 * ct * ct * e1 * xi * (1.0 - 0.5 * xi) +
              ct * e32 * (1.0 - 1.5 * xi) * out.Tprime;
  out.chi_theta = -beta * cb2 * e1 * st * ct * xi - e32 * st * out.Tprime;

  const double pref = 0.5 * nu_sigma * beta;
  out.p_r = pref * ct * e32 * (1.0 + 0.5 * xi) * out.T / out.D;
  out.p_theta = pref * st * e32 * out.T / out.D;
  out.p_phi = beta / out.D * (-out.chi_r * st - out.chi_theta * ct);

  const double scaled = nu_sigma / (3.0 * std::numbers::sqrt2);
  out.dxi_dtau = scaled * ct * e32 * (1.0 + 0.5 * xi) * out.T / out.D;
  out.dtheta_dtau = scaled * st * e32 / xi * out.T / out.D;
  out.dphi_dtau = -scaled / (xi * out.D) * (out.chi_r + out.chi_theta * ct / st);

  out.chi_r_corrected = out.chi_r - 2.0 * ca2 * e2 / beta;
  out.p_phi_corrected = beta / out.D * (-out.chi_r_corrected * st - out.chi_theta * ct);
  out.dphi_dtau_corrected = -std::numbers::sqrt2 / 3.0 / (xi * out.D) *
                            (out.chi_r_corrected + out.chi_theta * ct / st);
  return out;
}

}  // namespace bohm
