#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bohm/config.hpp"
#include "bohm/error.hpp"
#include "bohm/pilot.hpp"

namespace bohm {

/// Process exit codes. Every failure mode has its own value.
enum class ExitCode : int {
  Ok = 0,
  Internal = 1,
  ConfigError = 2,
  IntegrationFailure = 3,
  AxisAbort = 4,
  EnsembleDropout = 5,
  VerifyFailure = 6,
  ParseError = 7,
  IoError = 8,
};

ExitCode exit_code_for(const Error& e);

struct CommandOptions {
  std::optional<std::string> config_path;
  std::optional<std::string> preset;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  bool long_run = false;          // simulate: integrate to the reversal
  double coefficient_stride = 1.0;  // coefficients: scan spacing
};

/// The preset or the config file (not both; neither selects the defaults),
/// then the --out and --seed overrides. Throws Error(Config).
RunConfig resolve_config(const CommandOptions& options);

int cmd_simulate(const CommandOptions& options, std::ostream& log);
int cmd_ensemble(const CommandOptions& options, std::ostream& log);
int cmd_coefficients(const CommandOptions& options, std::ostream& log);
int cmd_plotdata(const std::filesystem::path& csv, const std::string& mode,
                 const std::filesystem::path& out_dir, std::ostream& log);

struct VerifyItem {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  /// Debug hooks for fault injection into the velocity field.
  FieldOptions field;
  std::uint64_t seed = 12345;
};

std::vector<VerifyItem> run_verify_suite(const VerifyOptions& options);
int cmd_verify(const VerifyOptions& options, std::ostream& log);

}  // namespace bohm
