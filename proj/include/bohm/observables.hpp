#pragma once

#include <span>
#include <vector>

#include "bohm/trajectory.hpp"

namespace bohm {

struct SeriesPoint {
  double tau = 0.0;
  double value = 0.0;
};

/// The analytic dphi/dtau stored on each sample. Throws InvalidParameter for
/// fewer than two samples.
std::vector<SeriesPoint> angular_velocity_series(std::span<const TrajectorySample> samples);

std::vector<SeriesPoint> energy_series(std::span<const TrajectorySample> samples);

/// Local energies above this value lie in the continuum; an excursion there
/// marks a close approach to a node of psi.
inline constexpr double kSpikeThreshold_eV = 0.0;

struct EnergySpike {
  double tau_start = 0.0;
  double tau_end = 0.0;
  double peak_tau = 0.0;
  double peak_eV = 0.0;
  double min_rho = 0.0;
  bool clipped = false;
};

/// Maximal runs of consecutive samples that are clipped or whose energy
/// exceeds `threshold_eV`.
std::vector<EnergySpike> find_energy_spikes(std::span<const TrajectorySample> samples,
                                            double threshold_eV = kSpikeThreshold_eV);

/// Median of the finite, unclipped energies with tau in [lo, hi]; NaN if none.
double median_energy(std::span<const TrajectorySample> samples, double lo, double hi);

/// Mean of dphi/dtau over samples with tau in [lo, hi]; NaN if none.
double mean_angular_velocity(std::span<const TrajectorySample> samples, double lo, double hi);

}  // namespace bohm
