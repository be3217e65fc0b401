#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bohm/config.hpp"
#include "bohm/energy.hpp"
#include "bohm/error.hpp"
#include "bohm/ode.hpp"
#include "bohm/trajectory.hpp"

using namespace bohm;

namespace {

DriveParameters figure_drive() { return derive_drive(8.8e7, 1.55e12, {}, -5.1e12, 1.549e16); }

Trajectory preset_run(const char* name) {
  const RunConfig cfg = preset_config(name);
  return integrate(cfg.initial, cfg.integrate.tau_max, drive_from_config(cfg),
                   source_from_config(cfg), integrator_from_config(cfg));
}

double window_mean(const std::vector<TrajectorySample>& s, double lo, double hi, auto get) {
  double sum = 0.0;
  int n = 0;
  for (const auto& x : s) {
    if (x.tau >= lo && x.tau <= hi) {
      sum += get(x);
      ++n;
    }
  }
  REQUIRE(n > 0);
  return sum / n;
}

const CoefficientSource frozen_1s = CoefficientSource::frozen({1.0, 0.0}, {0.0, 0.0});

}  // namespace

TEST_CASE("first-figure run: circulation slows as the electron is excited") {
  const Trajectory tr = preset_run("fig1");
  const auto& s = tr.samples;
  REQUIRE(s.size() == 10001);
  CHECK(s.back().tau == 1e4);
  const double early = window_mean(s, 0, 200, [](auto& x) { return x.velocity.dphi; });
  CHECK(early >= 0.6);
  CHECK(early <= 0.73);
  const double late = window_mean(s, 8900, 9100, [](auto& x) { return x.velocity.dphi; });
  const double xi = window_mean(s, 8900, 9100, [](auto& x) { return x.point.xi; });
  CHECK(late >= 0.25);
  CHECK(late <= 0.35);
  CHECK(xi >= 4.0);
  CHECK(xi <= 5.0);
  for (std::size_t i = 1; i < s.size(); ++i) {
    CHECK(s[i].tau > s[i - 1].tau);
  }
  // phi is carried unwrapped.
  CHECK(s.back().point.phi > 100.0);
}

TEST_CASE("both preset runs stay on their invariant surface") {
  for (const char* name : {"fig1", "fig2"}) {
    const Trajectory tr = preset_run(name);
    double worst = 0.0;
    for (const auto& x : tr.samples) {
      REQUIRE(std::isfinite(x.surface_residual));
      worst = std::max(worst, std::abs(x.surface_residual) / x.point.xi);
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("frozen 1s: fixed radius and angle, uniform rotation") {
  IntegratorConfig ic;
  for (const SpatialPoint p0 : {SpatialPoint{4.0, 1.0, 0.0}, SpatialPoint{1.3, 2.5, 0.7}}) {
    const Trajectory tr = integrate(p0, 500.0, figure_drive(), frozen_1s, ic);
    for (const auto& x : tr.samples) {
      CHECK(std::abs(x.point.xi - p0.xi) < 1e-10);
      CHECK(std::abs(x.point.theta - p0.theta) < 1e-10);
      const double expect = p0.phi + 8.0 / (3.0 * p0.xi) * x.tau;
      CHECK(x.point.phi == doctest::Approx(expect).epsilon(1e-12));
      CHECK(x.energy_eV == doctest::Approx(-13.6057).epsilon(1e-10));
    }
  }
}

TEST_CASE("halving rel_tol on the first-figure run") {
  const RunConfig cfg = preset_config("fig1");
  IntegratorConfig loose = integrator_from_config(cfg);
  IntegratorConfig fine = loose;
  fine.rel_tol = loose.rel_tol / 2;
  const DriveParameters d = drive_from_config(cfg);
  const double end[] = {cfg.integrate.tau_max};
  const SpatialPoint a = integrate_to(cfg.initial, end, d, source_from_config(cfg), loose)[0];
  const SpatialPoint b = integrate_to(cfg.initial, end, d, source_from_config(cfg), fine)[0];
  const double bound = 10.0 * fine.rel_tol;
  const double dphi = std::remainder(a.phi - b.phi, 2 * kPi);
  INFO("rel_tol " << loose.rel_tol << " vs " << fine.rel_tol << ", bound " << bound
                  << "; changes xi " << a.xi - b.xi << ", theta " << a.theta - b.theta
                  << ", phi " << dphi);
  CHECK(std::abs(a.xi - b.xi) < bound);
  CHECK(std::abs(a.theta - b.theta) < bound);
  CHECK(std::abs(dphi) < bound);
}

TEST_CASE("frozen 1s field integrated forward then backward returns home") {
  const DriveParameters d = figure_drive();
  auto rhs = [&](double t, const ode::State<3>& y, ode::State<3>& dy) {
    const ScaledVelocity v = velocity_field({y[0], y[1], y[2]}, evaluate_source(frozen_1s, t, d));
    dy = {v.dxi, v.dtheta, v.dphi};
  };
  ode::StepControl sc;
  sc.rel_tol = 1e-10;
  sc.abs_tol = 1e-12;
  const ode::State<3> y0{4.0, 1.0, 0.0};

  ode::DormandPrince45<3> fwd(sc);
  fwd.start(rhs, 0.0, y0);
  while (fwd.t() < 100.0) REQUIRE(fwd.try_step(rhs, 100.0) != ode::StepResult::Underflow);
  CHECK(fwd.y()[2] > 60.0);

  ode::DormandPrince45<3> back(sc, -1.0);
  back.start(rhs, 100.0, fwd.y());
  while (back.t() > 0.0) REQUIRE(back.try_step(rhs, 0.0) != ode::StepResult::Underflow);
  CHECK(back.t() == 0.0);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(back.y()[i] - y0[i]) < 1e-8);
}

TEST_CASE("identical inputs give identical sample streams") {
  IntegratorConfig ic;
  const SpatialPoint p{4.0, 1.0, 0.0};
  const Trajectory a = integrate(p, 3000.0, figure_drive(), CoefficientSource::analytic(), ic);
  const Trajectory b = integrate(p, 3000.0, figure_drive(), CoefficientSource::analytic(), ic);
  REQUIRE(a.samples.size() == b.samples.size());
  CHECK(a.manifest.stats.steps == b.manifest.stats.steps);
  CHECK(a.manifest.stats.rejections == b.manifest.stats.rejections);
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].point.xi == b.samples[i].point.xi);
    CHECK(a.samples[i].point.phi == b.samples[i].point.phi);
    CHECK(a.samples[i].energy_eV == b.samples[i].energy_eV);
  }
}

TEST_CASE("numeric coefficients track the closed form along a trajectory") {
  IntegratorConfig ic;
  ic.rel_tol = 1e-10;
  ic.abs_tol = 1e-12;
  const SpatialPoint p{4.0, 1.0, 0.0};
  const Trajectory a = integrate(p, 2000.0, figure_drive(), CoefficientSource::analytic(), ic);
  const Trajectory n = integrate(p, 2000.0, figure_drive(), CoefficientSource::numeric(), ic);
  REQUIRE(a.samples.size() == n.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); i += 100) {
    CHECK(n.samples[i].point.xi == doctest::Approx(a.samples[i].point.xi).epsilon(1e-6));
    CHECK(n.samples[i].cb_sq == doctest::Approx(a.samples[i].cb_sq).epsilon(1e-6));
  }
}

TEST_CASE("long run flags the reversal window") {
  const RunConfig cfg = preset_config("fig1");
  const DriveParameters d = drive_from_config(cfg);
  const LongRun a = integrate_long(cfg.initial, d, integrator_from_config(cfg));
  CHECK(a.reversal_tau == doctest::Approx(2 * kPi / d.sigma_s));
  REQUIRE(a.trajectory.manifest.reversal_window);
  CHECK(a.reversal_window.first < a.reversal_tau);
  CHECK(a.reversal_window.second > a.reversal_tau);
  CHECK(a.trajectory.samples.back().tau == kLongRunTau);
  for (const auto& s : a.trajectory.samples) {
    if (s.tau >= a.reversal_window.first && s.tau <= a.reversal_window.second) {
      CHECK(s.cb_sq < kReversalProbability);
    }
  }
  CHECK(transition_probability(a.reversal_window.first, d) ==
        doctest::Approx(kReversalProbability).epsilon(1e-9));
  const LongRun b = integrate_long(cfg.initial, d, integrator_from_config(cfg));
  CHECK(a.trajectory.manifest.stats.steps == b.trajectory.manifest.stats.steps);
}

TEST_CASE("split into figure panels") {
  IntegratorConfig ic;
  const Trajectory tr =
      integrate({4.0, 1.0, 0.0}, 1e4, figure_drive(), CoefficientSource::analytic(), ic);
  const auto five = split_intervals(tr.samples, kDefaultSplitBoundaries);
  REQUIRE(five.size() == 5);
  CHECK(five[0].front().tau == 0.0);
  CHECK(five[0].back().tau < 1469.0);
  CHECK(five[1].front().tau == 1469.0);
  CHECK(five[4].front().tau == 7196.0);
  CHECK(five[4].back().tau == 1e4);
  std::size_t total = 0;
  for (const auto& seg : five) total += seg.size();
  CHECK(total == tr.samples.size());

  const auto one = split_intervals(tr.samples, {});
  REQUIRE(one.size() == 1);
  CHECK(one[0].size() == tr.samples.size());

  const double mid[] = {5000.0};
  const auto two = split_intervals(tr.samples, mid);
  REQUIRE(two.size() == 2);
  CHECK(two[0].back().tau < 5000.0);
  CHECK(two[1].front().tau == 5000.0);

  const double outside[] = {2e4};
  CHECK_THROWS_AS(split_intervals(tr.samples, outside), Error);
  const double unsorted[] = {3000.0, 2000.0};
  CHECK_THROWS_AS(split_intervals(tr.samples, unsorted), Error);
}

TEST_CASE("invalid inputs") {
  const DriveParameters d = figure_drive();
  IntegratorConfig ic;
  auto kind_of = [&](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return static_cast<int>(e.kind());
    }
    return -1;
  };
  const auto analytic = CoefficientSource::analytic();
  CHECK(kind_of([&] { integrate({4.0, 0.0, 0.0}, 10.0, d, analytic, ic); }) ==
        static_cast<int>(ErrorKind::AxisProximity));
  CHECK(kind_of([&] { integrate({4.0, 5e-4, 0.0}, 10.0, d, analytic, ic); }) ==
        static_cast<int>(ErrorKind::AxisProximity));
  CHECK(kind_of([&] { integrate({-1.0, 1.0, 0.0}, 10.0, d, analytic, ic); }) ==
        static_cast<int>(ErrorKind::InvalidParameter));
  CHECK(kind_of([&] { integrate({4.0, 4.0, 0.0}, 10.0, d, analytic, ic); }) ==
        static_cast<int>(ErrorKind::InvalidParameter));
  CHECK(kind_of([&] { integrate({4.0, 1.0, 0.0}, 0.0, d, analytic, ic); }) ==
        static_cast<int>(ErrorKind::InvalidParameter));
  IntegratorConfig bad = ic;
  bad.rel_tol = 0.0;
  CHECK(kind_of([&] { integrate({4.0, 1.0, 0.0}, 10.0, d, analytic, bad); }) ==
        static_cast<int>(ErrorKind::InvalidParameter));
  bad = ic;
  bad.max_step = bad.min_step;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("step underflow reports the last good state") {
  IntegratorConfig ic;
  ic.rel_tol = 1e-15;
  ic.abs_tol = 1e-18;
  ic.min_step = 0.5;
  try {
    integrate({4.0, 1.0, 0.0}, 100.0, figure_drive(), CoefficientSource::analytic(), ic);
    FAIL("expected underflow");
  } catch (const IntegrationError& e) {
    CHECK(e.kind() == ErrorKind::StepUnderflow);
    CHECK(e.xi() > 0.0);
    CHECK(std::string(e.what()).find("underflow") != std::string::npos);
  }
}

TEST_CASE("dwelling below the density floor is reported, not fatal") {
  IntegratorConfig ic;
  ic.rho_floor = 1.0;
  const Trajectory tr =
      integrate({4.0, 1.0, 0.0}, 50.0, figure_drive(), CoefficientSource::analytic(), ic);
  CHECK(tr.samples.back().tau == 50.0);
  CHECK(tr.manifest.stats.node_dwell_events == 1);
  bool warned = false;
  for (const auto& w : tr.manifest.warnings) warned |= w.find("node dwell") != std::string::npos;
  CHECK(warned);
  for (const auto& s : tr.samples) {
    CHECK(s.clipped);
    CHECK(s.energy_eV == kClippedEnergy_eV);
  }
}
