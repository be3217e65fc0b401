#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bohm/drive.hpp"
#include "bohm/pilot.hpp"
#include "bohm/wavefield.hpp"

namespace bohm {

inline constexpr const char* kSoftwareVersion = "bohmtraj 1.0.0";

struct IntegratorConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double max_step = 1.0;
  double min_step = 1e-12;
  double rho_floor = kDefaultRhoFloor;
  double output_stride = 1.0;

  /// Throws Error(InvalidParameter) naming the offending field.
  void validate() const;
};

struct TrajectorySample {
  double tau = 0.0;
  SpatialPoint point;
  ScaledVelocity velocity;
  double energy_eV = 0.0;
  double cb_sq = 0.0;
  double surface_residual = 0.0;
  double rho = 0.0;
  bool clipped = false;
};

struct IntegratorStats {
  long steps = 0;
  long rejections = 0;
  long evaluations = 0;
  double min_rho = 0.0;
  double min_rho_tau = 0.0;
  long node_dwell_events = 0;
};

struct RunManifest {
  DriveParameters drive;
  SpatialPoint initial;
  IntegratorConfig config;
  CoefficientSource source;
  double tau_max = 0.0;
  IntegratorStats stats;
  std::vector<std::string> warnings;
  std::string version = kSoftwareVersion;
  /// Set by integrate_long: window where |c_b|^2 < kReversalProbability.
  std::optional<std::pair<double, double>> reversal_window;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  RunManifest manifest;
};

/// Consecutive accepted steps below rho_floor that trigger a dwell warning.
inline constexpr int kNodeDwellSteps = 10;

/// Throws AxisProximity for sin(theta0) < 1e-3 and InvalidParameter for
/// xi0 <= 0 or non-finite values.
void validate_initial_point(const SpatialPoint& p);

/// Integrates (xi, theta, phi) over [0, tau_max] with the Dormand-Prince 5(4)
/// pair and samples the dense output every output_stride (plus tau_max).
/// Throws IntegrationError on step underflow or axis approach.
Trajectory integrate(const SpatialPoint& initial, double tau_max,
                     const DriveParameters& drive,
                     const CoefficientSource& source,
                     const IntegratorConfig& config,
                     const FieldOptions& field = {});

inline constexpr double kLongRunTau = 2e4;

struct LongRun {
  Trajectory trajectory;
  double reversal_tau = 0.0;  // 2 pi omega0 / sigma
  /// Interval inside the run where |c_b|^2 < kReversalProbability.
  std::pair<double, double> reversal_window{0.0, 0.0};
};

inline constexpr double kReversalProbability = 0.02;

LongRun integrate_long(const SpatialPoint& initial, const DriveParameters& drive,
                       const IntegratorConfig& config,
                       const CoefficientSource& source = CoefficientSource::analytic());

/// Final positions at each of the sorted `targets` (no per-sample
/// observables). Used by the ensemble engine.
std::vector<SpatialPoint> integrate_to(const SpatialPoint& initial,
                                       std::span<const double> targets,
                                       const DriveParameters& drive,
                                       const CoefficientSource& source,
                                       const IntegratorConfig& config,
                                       IntegratorStats* stats = nullptr);

/// Boundaries of the five figure panels.
inline constexpr double kDefaultSplitBoundaries[] = {1469.0, 2992.0, 4844.0,
                                                     7196.0};

/// Non-overlapping segments: a sample with tau >= boundary belongs to the
/// later segment. Throws InvalidParameter for boundaries that are unsorted or
/// outside the sampled span.
std::vector<std::vector<TrajectorySample>> split_intervals(
    std::span<const TrajectorySample> trajectory,
    std::span<const double> boundaries);

}  // namespace bohm
