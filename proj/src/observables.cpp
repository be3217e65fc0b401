#include "bohm/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bohm/error.hpp"

namespace bohm {

std::vector<SeriesPoint> angular_velocity_series(std::span<const TrajectorySample> samples) {
  if (samples.size() < 2) {
    throw Error(ErrorKind::InvalidParameter, "angular velocity series needs at least two samples");
  }
  std::vector<SeriesPoint> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back({s.tau, s.velocity.dphi});
  return out;
}

std::vector<SeriesPoint> energy_series(std::span<const TrajectorySample> samples) {
  std::vector<SeriesPoint> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back({s.tau, s.energy_eV});
  return out;
}

std::vector<EnergySpike> find_energy_spikes(std::span<const TrajectorySample> samples,
                                            double threshold_eV) {
  std::vector<EnergySpike> out;
  bool open = false;
  EnergySpike cur;
  for (const auto& s : samples) {
    const bool hot = s.clipped || s.energy_eV > threshold_eV;
    if (hot) {
      if (!open) {
        cur = {};
        cur.tau_start = s.tau;
        cur.peak_eV = -std::numeric_limits<double>::infinity();
        cur.min_rho = s.rho;
        open = true;
      }
      cur.tau_end = s.tau;
      cur.clipped = cur.clipped || s.clipped;
      cur.min_rho = std::min(cur.min_rho, s.rho);
      if (s.energy_eV > cur.peak_eV) {
        cur.peak_eV = s.energy_eV;
        cur.peak_tau = s.tau;
      }
    } else if (open) {
      out.push_back(cur);
      open = false;
    }
  }
  if (open) out.push_back(cur);
  return out;
}

double median_energy(std::span<const TrajectorySample> samples, double lo, double hi) {
  std::vector<double> v;
  for (const auto& s : samples) {
    if (s.tau >= lo && s.tau <= hi && !s.clipped && std::isfinite(s.energy_eV)) {
      v.push_back(s.energy_eV);
    }
  }
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

double mean_angular_velocity(std::span<const TrajectorySample> samples, double lo, double hi) {
  double sum = 0.0;
  long n = 0;
  for (const auto& s : samples) {
    if (s.tau >= lo && s.tau <= hi) {
      sum += s.velocity.dphi;
      ++n;
    }
  }
  return n ? sum / n : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace bohm
