#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bohm/drive.hpp"
#include "bohm/trajectory.hpp"
#include "bohm/wavefield.hpp"

namespace bohm {

/// Stateless counter-based generator: the value for (seed, counter) is a
/// SplitMix64 finalization, so any partition of work across threads draws the
/// same numbers.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t counter) const;
  /// Uniform on the open interval (0, 1).
  double uniform(std::uint64_t counter) const;

 private:
  std::uint64_t seed_;
};

/// Points distributed as the 1s density: xi ~ Gamma(shape 3, rate 2) as a sum
/// of three exponentials, cos(theta) uniform on (-1, 1) with
/// |cos(theta)| > 1 - 1e-6 redrawn, phi uniform on [0, 2 pi).
std::vector<SpatialPoint> sample_initial(long count, std::uint64_t seed);

/// Mass histogram over (xi, cos theta) plus one overflow cell for xi > xi_max.
struct Histogram2D {
  int bins_xi = 20;
  int bins_cos = 20;
  double xi_max = 12.0;
  std::vector<double> mass;  // row-major [xi][cos]
  double overflow = 0.0;

  Histogram2D() = default;
  Histogram2D(int nxi, int ncos, double xmax);

  double& at(int ixi, int icos) { return mass[static_cast<std::size_t>(ixi * bins_cos + icos)]; }
  double at(int ixi, int icos) const { return mass[static_cast<std::size_t>(ixi * bins_cos + icos)]; }
  double total() const;
  void add(const SpatialPoint& p, double weight);
};

/// Bin masses of |psi(., tau)|^2 by tensor Gauss-Legendre quadrature.
Histogram2D reference_histogram(const CoefficientState& c, int nxi = 20,
                                int ncos = 20, double xi_max = 12.0);

Histogram2D empirical_histogram(std::span<const SpatialPoint> points,
                                int nxi = 20, int ncos = 20,
                                double xi_max = 12.0);

/// Half the L1 distance; both histograms must share a binning.
double total_variation(const Histogram2D& a, const Histogram2D& b);

/// Self-calibration bound: TV between two independent 1s samples of `count`
/// points, drawn from seeds derived from (but distinct from) `seed`.
double two_sample_baseline(long count, std::uint64_t seed, int bins = 20,
                           double xi_max = 12.0);

struct EnsembleOptions {
  int bins = 20;
  double xi_max = 12.0;
  unsigned threads = 0;  // 0 selects hardware concurrency
  CoefficientSource source = CoefficientSource::analytic();
};

struct EnsembleSummary {
  double tau = 0.0;
  long count = 0;
  long dropouts = 0;
  Histogram2D empirical;
  Histogram2D reference;
  double divergence = 0.0;
  double mean_energy_eV = 0.0;
  double energy_stderr_eV = 0.0;
  double expected_energy_eV = 0.0;
  long clipped_energy = 0;
};

/// Fraction of dropped trajectories above which an ensemble run fails.
inline constexpr double kMaxDropoutFraction = 1e-3;

/// Evolves every point to each sorted target and summarizes the ensemble at
/// each. Trajectories run concurrently; per-trajectory failures are counted
/// as drop-outs. Reductions happen in index order, so results do not depend
/// on the thread count.
std::vector<EnsembleSummary> evolve_ensemble(std::span<const SpatialPoint> points,
                                             std::span<const double> tau_targets,
                                             const DriveParameters& drive,
                                             const IntegratorConfig& config,
                                             const EnsembleOptions& options = {});

EnsembleSummary evolve_ensemble(std::span<const SpatialPoint> points,
                                double tau_target, const DriveParameters& drive,
                                const IntegratorConfig& config,
                                const EnsembleOptions& options = {});

}  // namespace bohm
