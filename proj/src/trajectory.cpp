#include "bohm/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bohm/energy.hpp"
#include "bohm/error.hpp"
#include "bohm/ode.hpp"

namespace bohm {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorKind::InvalidParameter, message);
}

// State layout: (xi, theta, phi) and, for numeric coefficients, the packed
// (Re c_a, Im c_a, Re c_b, Im c_b).
template <std::size_t N>
struct System {
  static_assert(N == 3 || N == 7);

  const DriveParameters& drive;
  const CoefficientSource& source;
  const FieldOptions& field;

  CoefficientState coeffs(double tau, const ode::State<N>& y) const {
    if constexpr (N == 7) {
      return {{y[3], y[4]}, {y[5], y[6]}, tau};
    } else {
      return evaluate_source(source, tau, drive);
    }
  }

  void operator()(double tau, const ode::State<N>& y, ode::State<N>& dy) const {
    const SpatialPoint p{y[0], y[1], y[2]};
    const WaveAmplitude w = eval_wave(p, coeffs(tau, y));
    const ScaledVelocity v = velocity_from_wave(w, p, field);
    dy[0] = v.dxi;
    dy[1] = v.dtheta;
    dy[2] = v.dphi;
    if constexpr (N == 7) {
      rate_equations(tau, y.data() + 3, dy.data() + 3, drive);
    }
  }
};

template <std::size_t N>
ode::State<N> initial_state(const SpatialPoint& p) {
  ode::State<N> y{};
  y[0] = p.xi;
  y[1] = p.theta;
  y[2] = p.phi;
  if constexpr (N == 7) y[3] = 1.0;
  return y;
}

ode::StepControl step_control(const IntegratorConfig& c) {
  ode::StepControl s;
  s.rel_tol = c.rel_tol;
  s.abs_tol = c.abs_tol;
  s.max_step = c.max_step;
  s.min_step = c.min_step;
  return s;
}

// Drives the stepper to the last target, calling on_output(tau, y) at each
// target in order. Monitors the axis and the density floor.
template <std::size_t N, class OnOutput>
IntegratorStats drive_stepper(const System<N>& sys, const ode::State<N>& y0,
                              std::span<const double> targets,
                              const IntegratorConfig& config,
                              std::vector<std::string>* warnings,
                              OnOutput&& on_output) {
  IntegratorStats stats;
  stats.min_rho = std::numeric_limits<double>::infinity();
  if (targets.empty()) return stats;

  const double t_end = targets.back();
  std::size_t next = 0;
  auto rho_at = [&sys](double tau, const ode::State<N>& y) {
    return eval_wave({y[0], y[1], y[2]}, sys.coeffs(tau, y)).rho;
  };
  auto note_rho = [&stats](double rho, double tau) {
    if (rho < stats.min_rho) {
      stats.min_rho = rho;
      stats.min_rho_tau = tau;
    }
  };

  note_rho(rho_at(0.0, y0), 0.0);
  while (next < targets.size() && targets[next] <= 0.0) {
    on_output(targets[next], y0);
    ++next;
  }
  if (next == targets.size()) return stats;

  auto rhs = [&sys](double t, const ode::State<N>& y, ode::State<N>& dy) {
    sys(t, y, dy);
  };
  ode::DormandPrince45<N> stepper(step_control(config));
  stepper.start(rhs, 0.0, y0);

  int dwell = 0;
  bool dwell_reported = false;
  while (stepper.t() < t_end) {
    const auto result = stepper.try_step(rhs, t_end);
    if (result == ode::StepResult::Underflow) {
      const auto& y = stepper.y();
      std::ostringstream os;
      os << "step size underflow at tau = " << stepper.t()
         << " (last good state xi = " << y[0] << ", theta = " << y[1]
         << ", phi = " << y[2] << ")";
      throw IntegrationError(ErrorKind::StepUnderflow, os.str(), stepper.t(),
                             y[0], y[1], y[2]);
    }
    if (result == ode::StepResult::Rejected) continue;

    const auto& y = stepper.y();
    if (!std::isfinite(y[0]) || !std::isfinite(y[1]) || !std::isfinite(y[2])) {
      std::ostringstream os;
      os << "non-finite state at tau = " << stepper.t();
      throw IntegrationError(ErrorKind::StepUnderflow, os.str(), stepper.t(),
                             y[0], y[1], y[2]);
    }
    if (std::abs(std::sin(y[1])) < kAxisAbort) {
      std::ostringstream os;
      os << "trajectory reached the z axis at tau = " << stepper.t()
         << " (theta = " << y[1] << ")";
      throw IntegrationError(ErrorKind::AxisProximity, os.str(), stepper.t(),
                             y[0], y[1], y[2]);
    }
    const double rho = rho_at(stepper.t(), y);
    note_rho(rho, stepper.t());
    if (rho < config.rho_floor) {
      if (++dwell > kNodeDwellSteps && !dwell_reported) {
        ++stats.node_dwell_events;
        dwell_reported = true;
        if (warnings) {
          std::ostringstream os;
          os << "node dwell: density below floor for more than "
             << kNodeDwellSteps << " steps near tau = " << stepper.t();
          warnings->push_back(os.str());
        }
      }
    } else {
      dwell = 0;
      dwell_reported = false;
    }

    while (next < targets.size() && targets[next] <= stepper.t()) {
      const double ts = targets[next];
      on_output(ts, ts == stepper.t() ? y : stepper.dense(ts));
      ++next;
    }
  }

  const auto& s = stepper.stats();
  stats.steps = s.accepted;
  stats.rejections = s.rejected;
  stats.evaluations = s.evaluations;
  return stats;
}

std::vector<double> output_grid(double tau_max, double stride) {
  std::vector<double> grid;
  const auto n = static_cast<long>(std::floor(tau_max / stride + 1e-9));
  grid.reserve(static_cast<std::size_t>(n) + 2);
  for (long i = 0; i <= n; ++i) grid.push_back(static_cast<double>(i) * stride);
  if (grid.back() < tau_max) grid.push_back(tau_max);
  return grid;
}

template <std::size_t N>
Trajectory integrate_impl(const SpatialPoint& initial, double tau_max,
                          const DriveParameters& drive,
                          const CoefficientSource& source,
                          const IntegratorConfig& config,
                          const FieldOptions& field) {
  FieldOptions f = field;
  f.rho_floor = config.rho_floor;
  const System<N> sys{drive, source, f};
  const SurfaceInvariant surface = surface_constant(initial.xi, initial.theta);

  Trajectory out;
  RunManifest& m = out.manifest;
  m.drive = drive;
  m.initial = initial;
  m.config = config;
  m.source = source;
  m.tau_max = tau_max;
  m.warnings = drive_warnings(drive);

  const auto grid = output_grid(tau_max, config.output_stride);
  out.samples.reserve(grid.size());
  auto record = [&](double tau, const ode::State<N>& y) {
    TrajectorySample s;
    s.tau = tau;
    s.point = {y[0], y[1], y[2]};
    const CoefficientState c = sys.coeffs(tau, y);
    const WaveAmplitude w = eval_wave(s.point, c);
    s.rho = w.rho;
    s.velocity = velocity_from_wave(w, s.point, f);
    const LocalEnergy e =
        local_energy(s.point, c, drive, source.driven(), config.rho_floor);
    s.energy_eV = e.total_eV;
    s.clipped = e.clipped;
    s.cb_sq = std::norm(c.c_b);
    try {
      s.surface_residual = surface_residual(s.point, surface);
    } catch (const Error&) {
      s.surface_residual = std::numeric_limits<double>::quiet_NaN();
    }
    out.samples.push_back(s);
  };
  m.stats = drive_stepper<N>(sys, initial_state<N>(initial), grid, config,
                             &m.warnings, record);
  return out;
}

}  // namespace

void IntegratorConfig::validate() const {
  require(std::isfinite(rel_tol) && rel_tol > 0.0, "integrate.rel_tol must be positive");
  require(std::isfinite(abs_tol) && abs_tol > 0.0, "integrate.abs_tol must be positive");
  require(std::isfinite(min_step) && min_step > 0.0, "integrate.min_step must be positive");
  require(std::isfinite(max_step) && max_step > min_step,
          "integrate.max_step must exceed min_step");
  require(std::isfinite(rho_floor) && rho_floor > 0.0, "integrate.rho_floor must be positive");
  require(std::isfinite(output_stride) && output_stride > 0.0,
          "integrate.output_stride must be positive");
}

void validate_initial_point(const SpatialPoint& p) {
  require(std::isfinite(p.xi) && p.xi > 0.0, "initial.xi must be positive");
  require(std::isfinite(p.theta), "initial.theta must be finite");
  require(std::isfinite(p.phi), "initial.phi must be finite");
  if (p.theta >= 0.0 && p.theta <= kPi && std::sin(p.theta) < kAxisInitMin) {
    std::ostringstream os;
    os << "initial.theta = " << p.theta
       << " violates the axis exclusion (sin(theta) must be >= 1e-3)";
    throw Error(ErrorKind::AxisProximity, os.str());
  }
  require(p.theta > 0.0 && p.theta < kPi, "initial.theta must lie in (0, pi)");
}

Trajectory integrate(const SpatialPoint& initial, double tau_max,
                     const DriveParameters& drive,
                     const CoefficientSource& source,
                     const IntegratorConfig& config, const FieldOptions& field) {
  validate_initial_point(initial);
  config.validate();
  require(std::isfinite(tau_max) && tau_max > 0.0, "tau_max must be positive");
  if (source.mode == CoefficientMode::NumericOde) {
    return integrate_impl<7>(initial, tau_max, drive, source, config, field);
  }
  return integrate_impl<3>(initial, tau_max, drive, source, config, field);
}

LongRun integrate_long(const SpatialPoint& initial, const DriveParameters& drive,
                       const IntegratorConfig& config,
                       const CoefficientSource& source) {
  LongRun run;
  run.trajectory = integrate(initial, kLongRunTau, drive, source, config);
  run.reversal_tau = 2.0 * kPi / drive.sigma_s;
  const double depth = std::abs(drive.nu_s / drive.sigma_s);
  const double ratio = std::sqrt(kReversalProbability) / depth;
  const double half_width =
      ratio >= 1.0 ? kPi / drive.sigma_s : 2.0 / drive.sigma_s * std::asin(ratio);
  run.reversal_window = {std::max(0.0, run.reversal_tau - half_width),
                         std::min(kLongRunTau, run.reversal_tau + half_width)};
  if (run.reversal_window.first >= run.reversal_window.second) {
    run.trajectory.manifest.warnings.push_back(
        "reversal time lies beyond the long-run span");
  } else {
    run.trajectory.manifest.reversal_window = run.reversal_window;
  }
  return run;
}

std::vector<SpatialPoint> integrate_to(const SpatialPoint& initial,
                                       std::span<const double> targets,
                                       const DriveParameters& drive,
                                       const CoefficientSource& source,
                                       const IntegratorConfig& config,
                                       IntegratorStats* stats) {
  validate_initial_point(initial);
  require(std::is_sorted(targets.begin(), targets.end()),
          "integration targets must be sorted");
  FieldOptions f;
  f.rho_floor = config.rho_floor;
  std::vector<SpatialPoint> out;
  out.reserve(targets.size());
  auto collect = [&out](double, const auto& y) {
    out.push_back({y[0], y[1], y[2]});
  };
  IntegratorStats s;
  if (source.mode == CoefficientMode::NumericOde) {
    const System<7> sys{drive, source, f};
    s = drive_stepper<7>(sys, initial_state<7>(initial), targets, config,
                         nullptr, collect);
  } else {
    const System<3> sys{drive, source, f};
    s = drive_stepper<3>(sys, initial_state<3>(initial), targets, config,
                         nullptr, collect);
  }
  if (stats) *stats = s;
  return out;
}

std::vector<std::vector<TrajectorySample>> split_intervals(
    std::span<const TrajectorySample> trajectory,
    std::span<const double> boundaries) {
  require(std::is_sorted(boundaries.begin(), boundaries.end()) &&
              std::adjacent_find(boundaries.begin(), boundaries.end()) ==
                  boundaries.end(),
          "split boundaries must be strictly increasing");
  if (!boundaries.empty()) {
    require(!trajectory.empty(), "cannot split an empty trajectory");
    const double lo = trajectory.front().tau;
    const double hi = trajectory.back().tau;
    for (double b : boundaries) {
      if (!(b > lo && b < hi)) {
        std::ostringstream os;
        os << "split boundary " << b << " outside the trajectory span [" << lo
           << ", " << hi << "]";
        throw Error(ErrorKind::InvalidParameter, os.str());
      }
    }
  }

  std::vector<std::vector<TrajectorySample>> out(boundaries.size() + 1);
  std::size_t seg = 0;
  for (const auto& s : trajectory) {
    while (seg < boundaries.size() && s.tau >= boundaries[seg]) ++seg;
    out[seg].push_back(s);
  }
  return out;
}

}  // namespace bohm
