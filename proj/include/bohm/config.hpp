#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bohm/drive.hpp"
#include "bohm/trajectory.hpp"
#include "bohm/wavefield.hpp"

namespace bohm {

struct DriveSection {
  double E0_volts_per_meter = 8.8e7;
  double detuning_per_second = 1.55e12;
  std::optional<double> omega0_per_second;
  std::optional<double> nu_override_per_second;
};

struct CoefficientSection {
  std::string mode = "analytic";  // analytic | numeric | frozen | printed
  double c1_re = 1.0, c1_im = 0.0;
  double c2_re = 0.0, c2_im = 0.0;
};

struct IntegrateSection {
  double tau_max = 1e4;
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double max_step = 1.0;
  double min_step = 1e-12;
  double rho_floor = kDefaultRhoFloor;
  double output_stride = 1.0;
};

struct EnsembleSection {
  long count = 10000;
  std::uint64_t seed = 1;
  std::vector<double> tau_targets{0.0, 2000.0};
  int bins = 20;
  double xi_max = 12.0;
  unsigned threads = 0;
};

struct OutputSection {
  std::string directory = "out";
  std::vector<std::string> formats{"csv", "json"};
};

/// Flat `[section]` / `key = value` document. Lines starting with `#` or `;`
/// are comments. Units are part of the key names.
struct RunConfig {
  DriveSection drive;
  SpatialPoint initial{4.0, 1.0, 0.0};
  CoefficientSection coefficients;
  IntegrateSection integrate;
  EnsembleSection ensemble;
  OutputSection output;
};

/// Throws Error(Config) naming the line and key for syntax errors, unknown
/// sections or keys, duplicates and unparsable values.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Canonical rendering: fixed section and key order, shortest round-trip
/// numbers. parse_config(serialize_config(c)) reproduces c exactly.
std::string serialize_config(const RunConfig& config);

/// Checks every physical value against the module preconditions. Throws
/// Error(Config) naming the key; the axis check mentions axis exclusion.
void validate_config(const RunConfig& config, bool need_ensemble = false);

DriveParameters drive_from_config(const RunConfig& config);
CoefficientSource source_from_config(const RunConfig& config);
IntegratorConfig integrator_from_config(const RunConfig& config);

/// Built-in presets "fig1" (xi = 4, theta = 1) and "fig2" (xi = 3.2,
/// theta = 2). Throws Error(Config) for other names.
RunConfig preset_config(std::string_view name);

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

}  // namespace bohm
