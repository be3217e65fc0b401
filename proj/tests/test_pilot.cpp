#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bohm/drive.hpp"
#include "bohm/error.hpp"
#include "bohm/pilot.hpp"
#include "oracles.hpp"

using namespace bohm;

namespace {

DriveParameters figure_drive() { return derive_drive(8.8e7, 1.55e12, {}, -5.1e12, 1.549e16); }

CoefficientState pure(bool excited, double tau = 0.0) {
  CoefficientState c;
  c.c_a = excited ? 0.0 : 1.0;
  c.c_b = excited ? 1.0 : 0.0;
  c.tau = tau;
  return c;
}

double d4(const std::function<double(double)>& f, double x, double h) {
  return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

// Velocity from the textbook orbitals by finite differences.
ScaledVelocity oracle_velocity(const SpatialPoint& p, const CoefficientState& c) {
  const double h = 1e-5;
  auto psi = [&](double x, double t) { return oracle::psi(x, t, c.c_a, c.c_b, c.tau); };
  const cplx p0 = psi(p.xi, p.theta);
  auto ph_x = [&](double x) { return std::arg(psi(x, p.theta) / p0); };
  auto ph_t = [&](double t) { return std::arg(psi(p.xi, t) / p0); };
  auto lr_x = [&](double x) { return std::log(std::norm(psi(x, p.theta))); };
  auto lr_t = [&](double t) { return std::log(std::norm(psi(p.xi, t))); };
  ScaledVelocity v;
  v.dxi = 8.0 / 3.0 * d4(ph_x, p.xi, h);
  v.dtheta = 8.0 / 3.0 * d4(ph_t, p.theta, h) / (p.xi * p.xi);
  v.dphi = 4.0 / 3.0 *
           (-d4(lr_x, p.xi, h) / p.xi -
            std::cos(p.theta) / (p.xi * p.xi * std::sin(p.theta)) * d4(lr_t, p.theta, h));
  return v;
}

}  // namespace

TEST_CASE("1s electron circulates at 8/(3 xi)") {
  const ScaledVelocity v = velocity_field({4.0, 1.0, 0.0}, pure(false));
  CHECK(v.dxi == 0.0);
  CHECK(v.dtheta == 0.0);
  CHECK(v.dphi == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(eigenstate_angular_velocity(Eigenstate::Ground1s, 4.0) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("2p0 electron circulates at half the 1s rate") {
  const ScaledVelocity v = velocity_field({4.5, 0.8, 0.0}, pure(true, 3.0));
  CHECK(std::abs(v.dxi) < 1e-15);
  CHECK(std::abs(v.dtheta) < 1e-15);
  CHECK(v.dphi == doctest::Approx(4.0 / 13.5).epsilon(1e-13));
  CHECK(v.dphi == doctest::Approx(0.296).epsilon(1e-3));
  const ScaledVelocity g = velocity_field({4.5, 0.8, 0.0}, pure(false));
  CHECK(v.dphi / g.dphi == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("no radial motion in the equatorial plane") {
  const DriveParameters d = figure_drive();
  for (double tau : {100.0, 4000.0, 9129.0}) {
    const ScaledVelocity v = velocity_field({3.0, kPi / 2, 0.0}, coefficients(tau, d));
    CHECK(std::abs(v.dxi) < 1e-13);
  }
}

TEST_CASE("velocity field against the finite-difference oracle") {
  const DriveParameters d = figure_drive();
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> xi(0.5, 9.0), th(0.1, kPi - 0.1), tau(0.0, 2e4);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const SpatialPoint p{xi(gen), th(gen), 0.0};
    const CoefficientState c = coefficients(tau(gen), d);
    if (eval_wave(p, c).rho < 1e-8) continue;
    ++checked;
    const ScaledVelocity v = velocity_field(p, c);
    const ScaledVelocity o = oracle_velocity(p, c);
    const double s = std::hypot(o.dxi, o.dtheta * p.xi) + 1e-12;
    CHECK(std::abs(v.dxi - o.dxi) / s < 1e-6);
    CHECK(std::abs(v.dtheta - o.dtheta) * p.xi / s < 1e-6);
    CHECK(v.dphi == doctest::Approx(o.dphi).epsilon(1e-6));
  }
  CHECK(checked > 250);
}

TEST_CASE("axis and node are rejected") {
  try {
    velocity_field({4.0, 1e-7, 0.0}, pure(false));
    FAIL("expected axis abort");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AxisProximity);
  }
  CHECK_THROWS_AS(velocity_field({4.0, kPi - 1e-7, 0.0}, pure(false)), Error);
  CHECK_NOTHROW(velocity_field({4.0, 2e-6, 0.0}, pure(false)));
  try {
    velocity_field({3.0, kPi / 2, 0.0}, pure(true));
    FAIL("expected node proximity");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NodeProximity);
  }
}

TEST_CASE("surface constants") {
  CHECK(surface_constant(4.0, 1.0).A == doctest::Approx(6.0 / (4.0 * std::sin(1.0))).epsilon(1e-15));
  CHECK(surface_constant(4.0, 1.0).A == doctest::Approx(1.78259).epsilon(1e-5));
  CHECK(surface_constant(2.0, kPi / 2).A == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(surface_constant(3.2, 2.0).A == doctest::Approx(5.2 / (3.2 * std::sin(2.0))).epsilon(1e-15));
}

TEST_CASE("surface residual") {
  const SurfaceInvariant s = surface_constant(4.0, 1.0);
  CHECK(std::abs(surface_residual({4.0, 1.0, 0.0}, s)) < 1e-14);
  const double th = 0.7;
  const double on = 2.0 / (s.A * std::sin(th) - 1.0);
  CHECK(std::abs(surface_residual({on, th, 5.0}, s)) < 1e-12);
  CHECK(surface_residual({on + 0.5, th, 0.0}, s) == doctest::Approx(0.5));
  // A sin(theta) <= 1 has no sheet.
  try {
    surface_residual({4.0, 0.3, 0.0}, s);
    FAIL("expected off-sheet error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OffSheet);
  }
}

TEST_CASE("velocity is tangent to the invariant surface") {
  const DriveParameters d = figure_drive();
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> xi0(1.0, 8.0), th0(0.3, kPi - 0.3), tau(0.0, 2e4);
  for (int i = 0; i < 500; ++i) {
    const SpatialPoint p{xi0(gen), th0(gen), 0.0};
    const CoefficientState c = coefficients(tau(gen), d);
    if (eval_wave(p, c).rho < 1e-10) continue;
    const double A = surface_constant(p.xi, p.theta).A;
    const ScaledVelocity v = velocity_field(p, c);
    const double g = A * std::sin(p.theta) - 1.0;
    const double dF = v.dxi + 2.0 * A * std::cos(p.theta) / (g * g) * v.dtheta;
    CHECK(std::abs(dF) < 1e-12 * (std::abs(v.dxi) + std::abs(v.dtheta) * p.xi + 1e-300) + 1e-16);
  }
}

TEST_CASE("probability current") {
  const CurrentDensity node = pauli_current({3.0, kPi / 2, 0.0}, pure(true));
  CHECK(node.xi == 0.0);
  CHECK(node.theta == 0.0);
  CHECK(std::abs(node.phi) < 1e-20);
  const SpatialPoint p{2.0, 1.2, 0.0};
  const CurrentDensity g = pauli_current(p, pure(false));
  CHECK(g.phi == doctest::Approx(eval_wave(p, pure(false)).rho * 8.0 / 6.0).epsilon(1e-13));
  const CoefficientState c = coefficients(777.0, figure_drive());
  const CurrentDensity j = pauli_current(p, c);
  const ScaledVelocity v = velocity_field(p, c);
  const double rho = eval_wave(p, c).rho;
  CHECK(j.xi == doctest::Approx(rho * v.dxi).epsilon(1e-12));
  CHECK(j.theta == doctest::Approx(rho * v.dtheta).epsilon(1e-12));
  CHECK(j.phi == doctest::Approx(rho * v.dphi).epsilon(1e-12));
}

TEST_CASE("continuity with and without the drive") {
  const DriveParameters d = figure_drive();
  auto residual = [&](const SpatialPoint& p, double tau, auto coeff) {
    const double drho =
        d4([&](double t) { return std::norm(oracle::psi(p.xi, p.theta, coeff(t).c_a, coeff(t).c_b, t)); },
           tau, 1e-3);
    const CoefficientState c = coeff(tau);
    auto fx = [&](double x) { return x * x * pauli_current({x, p.theta, 0.0}, c).xi; };
    auto ft = [&](double t) { return std::sin(t) * pauli_current({p.xi, t, 0.0}, c).theta; };
    return drho + d4(fx, p.xi, 1e-4) / (p.xi * p.xi) + d4(ft, p.theta, 1e-4) / std::sin(p.theta);
  };
  const cplx c1(0.6, 0.0), c2(0.0, 0.8);
  auto frozen = [&](double t) { return CoefficientState{c1, c2, t}; };
  auto driven = [&](double t) { return coefficients(t, d); };
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> xi(0.5, 8.0), th(0.2, kPi - 0.2), tau(10.0, 2e4);
  double raw = 0.0;
  for (int i = 0; i < 200; ++i) {
    const SpatialPoint p{xi(gen), th(gen), 0.0};
    const double t = tau(gen);
    CHECK(std::abs(residual(p, t, frozen)) < 1e-9);
    const double r = residual(p, t, driven);
    raw = std::max(raw, std::abs(r));
    CHECK(std::abs(r - continuity_source(p, driven(t), d)) < 1e-9);
  }
  // The truncated coupling leaves a pointwise imbalance.
  CHECK(raw > 1e-7);
}

TEST_CASE("azimuthal motion comes entirely from the spin term") {
  const CoefficientState c = coefficients(2500.0, figure_drive());
  const SpatialPoint p{3.5, 1.1, 0.0};
  const ScaledVelocity full = velocity_field(p, c);
  FieldOptions off;
  off.spin_term = false;
  const ScaledVelocity none = velocity_field(p, c, off);
  CHECK(none.dphi == 0.0);
  CHECK(none.dxi == full.dxi);
  CHECK(none.dtheta == full.dtheta);
  FieldOptions mirrored;
  mirrored.flip_cross = true;
  CHECK(velocity_field(p, c, mirrored).dphi == doctest::Approx(-full.dphi));
}

TEST_CASE("printed momentum forms") {
  const DriveParameters d = figure_drive();
  const SpatialPoint p{4.0, 1.0, 0.0};
  const PrintedFormCheck at0 = printed_momentum_check(p, 0.0, d, kBetaNormalized);
  CHECK(at0.T == 0.0);
  CHECK(at0.Tprime == 0.0);
  CHECK(at0.p_r == 0.0);
  CHECK(at0.p_theta == 0.0);
  CHECK(at0.D == doctest::Approx(std::exp(-8.0)).epsilon(1e-13));

  const PrintedFormCheck f = printed_momentum_check(p, 500.0, d, kBetaNormalized);
  const ScaledVelocity v = velocity_field(p, coefficients_printed(500.0, d));
  CHECK(std::abs(f.p_r - v.dxi / kVelocityScale) < 1e-8);
  CHECK(std::abs(f.p_theta + v.dtheta * p.xi / kVelocityScale) < 1e-8);
  CHECK(f.p_phi_corrected ==
        doctest::Approx(v.dphi * p.xi * std::sin(p.theta) / kVelocityScale).epsilon(1e-10));
  CHECK(f.dphi_dtau_corrected == doctest::Approx(v.dphi).epsilon(1e-10));
  // Only the reciprocal beta reproduces pi rho.
  const double pi_rho = kPi * eval_wave(p, coefficients_printed(500.0, d)).rho;
  CHECK(f.D == doctest::Approx(pi_rho).epsilon(1e-12));
  const PrintedFormCheck raw = printed_momentum_check(p, 500.0, d);
  CHECK(std::abs(raw.D / pi_rho - 1.0) > 1e-3);
}
