#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bohm/config.hpp"
#include "bohm/ensemble.hpp"
#include "bohm/trajectory.hpp"

namespace bohm {

inline constexpr int kSchemaVersion = 1;

inline constexpr const char* kTrajectoryHeader =
    "tau,xi,theta,phi,x,y,z,dxi_dtau,dtheta_dtau,dphi_dtau,energy_eV,cb_sq,"
    "surface_residual,rho,clipped";

inline constexpr const char* kCoefficientHeader =
    "tau,ca_re,ca_im,cb_re,cb_im,cb_sq,T,Tprime";

void write_trajectory_csv(std::ostream& os, std::span<const TrajectorySample> samples);

/// Throws Error(Parse) naming the 1-based line for a bad header, wrong field
/// count or unparsable number.
std::vector<TrajectorySample> read_trajectory_csv(std::istream& is);
std::vector<TrajectorySample> read_trajectory_csv(const std::filesystem::path& path);

std::string manifest_json(const RunManifest& manifest, const RunConfig& config);

struct CoefficientRow {
  double tau = 0.0;
  CoefficientState c;
  double T = 0.0;
  double Tprime = 0.0;
};

/// Uniform scan over [0, tau_max] every `stride` (plus tau_max).
std::vector<CoefficientRow> coefficient_scan(double tau_max, double stride,
                                             const DriveParameters& drive);
void write_coefficients_csv(std::ostream& os, std::span<const CoefficientRow> rows);

struct EnsembleReport {
  std::vector<EnsembleSummary> summaries;
  double calibration_baseline = 0.0;  // two-sample TV at the same count
  long count = 0;
  std::uint64_t seed = 0;
};

/// The report's "summary" object holds everything deterministic; the
/// top-level "generated_at" timestamp sits outside it.
std::string ensemble_json(const EnsembleReport& report, const RunConfig& config);
void write_histogram_csv(std::ostream& os, std::span<const EnsembleSummary> summaries);

enum class PlotMode { ThreeD, Split, Phi, Dphi, Energy };

/// Throws Error(Config) for unknown names.
PlotMode parse_plot_mode(std::string_view name);

/// Writes whitespace-delimited files into `dir` and returns their paths.
/// Split mode writes five files using the default segment boundaries.
std::vector<std::filesystem::path> write_plot_data(
    std::span<const TrajectorySample> samples, PlotMode mode,
    const std::filesystem::path& dir);

/// Writes `content` to `path`, creating parent directories. Error(Io) on
/// failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace bohm
