#include "bohm/drive.hpp"

#include <cmath>
#include <sstream>

#include "bohm/error.hpp"
#include "bohm/ode.hpp"

namespace bohm {

namespace {

constexpr long double kTwoPiL = 6.283185307179586476925286766559L;

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorKind::InvalidParameter, message);
}

}  // namespace

double reduce_angle(long double x) {
  long double r = std::fmod(x, kTwoPiL);
  if (r < 0) r += kTwoPiL;
  return static_cast<double>(r);
}

DriveParameters derive_drive(double E0_Vpm, double Omega_ps,
                             const PhysicalConstants& constants,
                             std::optional<double> nu_override,
                             std::optional<double> omega0_override) {
  require(std::isfinite(E0_Vpm) && E0_Vpm > 0.0,
          "field strength E0 must be positive");
  require(std::isfinite(Omega_ps) && Omega_ps >= 0.0,
          "detuning Omega must be non-negative");
  require(Omega_ps <= kDetuningMax,
          "detuning above 1e14 s^-1 breaks the rotating-wave approximation");

  DriveParameters d;
  d.E0_Vpm = E0_Vpm;
  d.Omega_ps = Omega_ps;
  d.omega0_ps = omega0_override.value_or(constants.omega0_per_second());
  require(std::isfinite(d.omega0_ps) && d.omega0_ps > 0.0,
          "transition frequency omega0 must be positive");
  d.V12_J = -kDipoleFactor * constants.bohr_radius_m *
            constants.elementary_charge_C * E0_Vpm;
  d.nu_override = nu_override;
  if (nu_override) {
    require(std::isfinite(*nu_override), "nu override must be finite");
    d.nu_ps = *nu_override;
  } else {
    d.nu_ps = d.V12_J / constants.hbar_Js;
  }
  d.sigma_ps = std::hypot(d.Omega_ps, d.nu_ps);
  require(d.sigma_ps > 0.0, "generalized Rabi frequency sigma must be positive");

  d.nu_s = d.nu_ps / d.omega0_ps;
  d.sigma_s = d.sigma_ps / d.omega0_ps;
  d.Omega_s = d.Omega_ps / d.omega0_ps;
  d.field_energy_eV = constants.elementary_charge_C * E0_Vpm *
                      constants.bohr_radius_m / constants.eV_J;
  d.E1_eV = constants.E1_eV;
  return d;
}

std::vector<std::string> drive_warnings(const DriveParameters& drive) {
  std::vector<std::string> out;
  if (drive.Omega_ps > kDetuningWarn) {
    std::ostringstream os;
    os << "detuning " << drive.Omega_ps
       << " s^-1 exceeds 1e13; rotating-wave approximation is marginal";
    out.push_back(os.str());
  }
  return out;
}

CoefficientSource CoefficientSource::frozen(cplx c1, cplx c2) {
  const double n = std::norm(c1) + std::norm(c2);
  require(std::abs(n - 1.0) <= 1e-12,
          "frozen coefficients must satisfy |c1|^2 + |c2|^2 = 1");
  return {CoefficientMode::Frozen, c1, c2};
}

CoefficientState coefficients(double tau, const DriveParameters& drive) {
  const long double t = tau;
  const double half_sigma = reduce_angle(0.5L * drive.sigma_s * t);
  const double half_detune = reduce_angle(0.5L * drive.Omega_s * t);
  const double s = std::sin(half_sigma), c = std::cos(half_sigma);
  const double detune_ratio = drive.Omega_s / drive.sigma_s;
  const cplx rot = std::polar(1.0, half_detune);

  CoefficientState out;
  out.tau = tau;
  out.c_a = std::conj(rot) * cplx(c, detune_ratio * s);
  out.c_b = rot * cplx(0.0, -(drive.nu_s / drive.sigma_s) * s);
  return out;
}

CoefficientState coefficients_printed(double tau, const DriveParameters& drive) {
  const long double t = tau;
  const double half_sigma = reduce_angle(0.5L * drive.sigma_s * t);
  const double half_detune = reduce_angle(0.5L * drive.Omega_s * t);
  const double ratio_p = (drive.sigma_s + drive.Omega_s) / (2.0 * drive.sigma_s);
  const double ratio_m = (drive.sigma_s - drive.Omega_s) / (2.0 * drive.sigma_s);
  const double nu_half = drive.nu_s / (2.0 * drive.sigma_s);
  const cplx lo = std::polar(1.0, half_detune - half_sigma);
  const cplx hi = std::polar(1.0, half_detune + half_sigma);

  CoefficientState out;
  out.tau = tau;
  out.c_a = ratio_p * lo + ratio_m * hi;
  out.c_b = nu_half * lo - nu_half * hi;
  return out;
}

CoefficientState evaluate_source(const CoefficientSource& source, double tau,
                                 const DriveParameters& drive) {
  switch (source.mode) {
    case CoefficientMode::Analytic:
      return coefficients(tau, drive);
    case CoefficientMode::Printed:
      return coefficients_printed(tau, drive);
    case CoefficientMode::Frozen:
      return {source.c1, source.c2, tau};
    case CoefficientMode::NumericOde:
      break;
  }
  throw Error(ErrorKind::InvalidParameter,
              "numeric-ode coefficients are integrated with the trajectory");
}

double transition_probability(double tau, const DriveParameters& drive) {
  const double s = std::sin(reduce_angle(0.5L * drive.sigma_s * tau));
  const double r = drive.nu_s / drive.sigma_s;
  return r * r * s * s;
}

double envelope_T(double tau, const DriveParameters& drive) {
  const double carrier = reduce_angle(tau);
  const double st = reduce_angle(static_cast<long double>(drive.sigma_s) * tau);
  const double q = drive.Omega_s / drive.sigma_s;
  return -std::cos(carrier) * std::sin(st) - q * std::sin(carrier) +
         q * std::cos(st) * std::sin(carrier);
}

double envelope_Tprime(double tau, const DriveParameters& drive) {
  const double carrier = reduce_angle(tau);
  const double st = reduce_angle(static_cast<long double>(drive.sigma_s) * tau);
  const double q = drive.Omega_s / drive.sigma_s;
  return drive.nu_s / (2.0 * drive.sigma_s) *
         (q * std::cos(carrier) - q * std::cos(st) * std::cos(carrier) -
          std::sin(st) * std::sin(carrier)) + 0.0;
}

namespace {

struct EnvelopeArgs {
  double carrier, st, q;
};

EnvelopeArgs analytic_args(double tau, const DriveParameters& drive) {
  return {reduce_angle(static_cast<long double>(tau) * (1.0L - drive.Omega_s)),
          reduce_angle(static_cast<long double>(drive.sigma_s) * tau),
          -drive.Omega_s / drive.sigma_s};
}

}  // namespace

double envelope_T_analytic(double tau, const DriveParameters& drive) {
  const auto [carrier, st, q] = analytic_args(tau, drive);
  return -std::cos(carrier) * std::sin(st) - q * std::sin(carrier) +
         q * std::cos(st) * std::sin(carrier);
}

double envelope_Tprime_analytic(double tau, const DriveParameters& drive) {
  const auto [carrier, st, q] = analytic_args(tau, drive);
  return drive.nu_s / (2.0 * drive.sigma_s) *
         (q * std::cos(carrier) - q * std::cos(st) * std::cos(carrier) -
          std::sin(st) * std::sin(carrier)) + 0.0;
}

cplx coherence(const CoefficientState& state) {
  return std::conj(state.c_a) * state.c_b *
         std::polar(1.0, -reduce_angle(state.tau));
}

void rate_equations(double tau, const double* y, double* dydt,
                    const DriveParameters& drive) {
  const cplx ca(y[0], y[1]);
  const cplx cb(y[2], y[3]);
  const cplx phase = std::polar(1.0, reduce_angle(static_cast<long double>(drive.Omega_s) * tau));
  const cplx k(0.0, -0.5 * drive.nu_s);
  const cplx dca = k * std::conj(phase) * cb;
  const cplx dcb = k * phase * ca;
  dydt[0] = dca.real();
  dydt[1] = dca.imag();
  dydt[2] = dcb.real();
  dydt[3] = dcb.imag();
}

std::vector<CoefficientState> solve_coefficients_numeric(
    double tau_max, const DriveParameters& drive, double tol, double stride) {
  require(tau_max >= 0.0, "tau_max must be non-negative");
  require(tol > 0.0, "tolerance must be positive");
  require(stride > 0.0, "sample stride must be positive");

  std::vector<CoefficientState> out;
  out.push_back({{1.0, 0.0}, {0.0, 0.0}, 0.0});
  if (tau_max == 0.0) return out;

  auto rhs = [&drive](double t, const ode::State<4>& y, ode::State<4>& dy) {
    rate_equations(t, y.data(), dy.data(), drive);
  };
  ode::StepControl control;
  control.rel_tol = tol;
  control.abs_tol = tol;
  control.max_step = 10.0;
  control.min_step = 1e-12;
  ode::DormandPrince45<4> stepper(control);
  stepper.start(rhs, 0.0, {1.0, 0.0, 0.0, 0.0});

  long next = 1;
  auto next_time = [&] { return std::min(tau_max, next * stride); };
  while (stepper.t() < tau_max) {
    const auto r = stepper.try_step(rhs, tau_max);
    if (r == ode::StepResult::Underflow) {
      std::ostringstream os;
      os << "coefficient integration step underflow at tau = " << stepper.t();
      throw Error(ErrorKind::StepUnderflow, os.str());
    }
    if (r != ode::StepResult::Accepted) continue;
    while (next_time() <= stepper.t() && out.back().tau < tau_max) {
      const double ts = next_time();
      const auto y = ts == stepper.t() ? stepper.y() : stepper.dense(ts);
      out.push_back({{y[0], y[1]}, {y[2], y[3]}, ts});
      ++next;
    }
  }
  return out;
}

}  // namespace bohm
