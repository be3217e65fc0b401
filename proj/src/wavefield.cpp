#include "bohm/wavefield.hpp"

#include <cmath>
#include <sstream>

#include "bohm/error.hpp"

namespace bohm {

namespace {

void check_density(double rho, double rho_floor, const SpatialPoint& p,
                   double tau) {
  if (!(rho >= rho_floor)) {
    std::ostringstream os;
    os << "density " << rho << " below floor " << rho_floor
       << " near a node at xi = " << p.xi << ", theta = " << p.theta
       << ", tau = " << tau;
    throw Error(ErrorKind::NodeProximity, os.str());
  }
}

}  // namespace

WaveAmplitude eval_wave(const SpatialPoint& p, const CoefficientState& c) {
  const double e1 = std::exp(-p.xi);
  const double e2 = std::exp(-0.5 * p.xi);
  const double ct = std::cos(p.theta);
  const double st = std::sin(p.theta);

  const cplx a = kNorm1s * c.c_a;
  const cplx b = kNorm2p * c.c_b * std::polar(1.0, -reduce_angle(c.tau));

  WaveAmplitude w;
  w.term_a = a * e1;
  w.term_b = b * (p.xi * e2 * ct);
  w.psi = w.term_a + w.term_b;
  w.d_xi = -w.term_a + b * (e2 * (1.0 - 0.5 * p.xi) * ct);
  w.d_theta = b * (-p.xi * e2 * st);
  w.rho = std::norm(w.psi);
  return w;
}

ScaledGradient grad_S(const SpatialPoint& p, const CoefficientState& c,
                      double rho_floor) {
  const WaveAmplitude w = eval_wave(p, c);
  check_density(w.rho, rho_floor, p, c.tau);
  const cplx conj_psi = std::conj(w.psi);
  return {(w.d_xi * conj_psi).imag() / w.rho,
          (w.d_theta * conj_psi).imag() / (w.rho * p.xi)};
}

ScaledGradient grad_log_rho(const SpatialPoint& p, const CoefficientState& c,
                            double rho_floor) {
  const WaveAmplitude w = eval_wave(p, c);
  check_density(w.rho, rho_floor, p, c.tau);
  const cplx conj_psi = std::conj(w.psi);
  return {2.0 * (w.d_xi * conj_psi).real() / w.rho,
          2.0 * (w.d_theta * conj_psi).real() / (w.rho * p.xi)};
}

QuantumPotential quantum_potential(const SpatialPoint& p,
                                   const CoefficientState& c, double h,
                                   const PhysicalConstants& constants,
                                   double rho_floor) {
  auto amplitude = [&c](double xi, double theta) {
    return std::sqrt(eval_wave({xi, theta, 0.0}, c).rho);
  };
  const double r0 = amplitude(p.xi, p.theta);
  check_density(r0 * r0, rho_floor, p, c.tau);

  QuantumPotential out;
  out.step_degenerate = p.xi < 2.0 * h;

  const double rp = amplitude(p.xi + h, p.theta);
  const double rm = amplitude(p.xi - h, p.theta);
  const double tp = amplitude(p.xi, p.theta + h);
  const double tm = amplitude(p.xi, p.theta - h);
  const double d2r = (rp - 2.0 * r0 + rm) / (h * h);
  const double d1r = (rp - rm) / (2.0 * h);
  const double d2t = (tp - 2.0 * r0 + tm) / (h * h);
  const double d1t = (tp - tm) / (2.0 * h);
  const double xi2 = p.xi * p.xi;
  const double laplacian = d2r + 2.0 / p.xi * d1r +
                           (d2t + d1t * std::cos(p.theta) / std::sin(p.theta)) / xi2;
  out.value_eV = -0.5 * laplacian / r0 * constants.hartree_eV();
  return out;
}

}  // namespace bohm
