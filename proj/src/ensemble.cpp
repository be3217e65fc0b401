#include "bohm/ensemble.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <optional>
#include <thread>

#include "bohm/energy.hpp"
#include "bohm/error.hpp"

namespace bohm {

namespace {

// 16-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr std::array<double, 8> kGaussNodes = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
constexpr std::array<double, 8> kGaussWeights = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

template <class F>
double gauss_1d(F&& f, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double sum = 0.0;
  for (std::size_t i = 0; i < kGaussNodes.size(); ++i) {
    const double dx = half * kGaussNodes[i];
    sum += kGaussWeights[i] * (f(mid - dx) + f(mid + dx));
  }
  return sum * half;
}

int bin_index(double value, double lo, double hi, int n) {
  const int i = static_cast<int>(std::floor((value - lo) / (hi - lo) * n));
  return std::clamp(i, 0, n - 1);
}

}  // namespace

std::uint64_t CounterRng::bits(std::uint64_t counter) const {
  std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ULL * (counter + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double CounterRng::uniform(std::uint64_t counter) const {
  return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
}

std::vector<SpatialPoint> sample_initial(long count, std::uint64_t seed) {
  if (count <= 0) {
    throw Error(ErrorKind::InvalidParameter, "ensemble count must be positive");
  }
  const CounterRng rng(seed);
  std::vector<SpatialPoint> out;
  out.reserve(static_cast<std::size_t>(count));
  constexpr std::uint64_t kStream = 64;
  for (long i = 0; i < count; ++i) {
    const std::uint64_t base = static_cast<std::uint64_t>(i) * kStream;
    const double u = rng.uniform(base) * rng.uniform(base + 1) * rng.uniform(base + 2);
    const double xi = -0.5 * std::log(u);
    double mu = 0.0;
    for (std::uint64_t k = base + 4; k < base + kStream; ++k) {
      mu = 2.0 * rng.uniform(k) - 1.0;
      if (std::abs(mu) <= 1.0 - 1e-6) break;
    }
    const double phi = 2.0 * kPi * rng.uniform(base + 3);
    out.push_back({xi, std::acos(mu), phi});
  }
  return out;
}

Histogram2D::Histogram2D(int nxi, int ncos, double xmax)
    : bins_xi(nxi), bins_cos(ncos), xi_max(xmax),
      mass(static_cast<std::size_t>(nxi * ncos), 0.0) {
  if (nxi <= 0 || ncos <= 0 || !(xmax > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "histogram needs positive bins and range");
  }
}

double Histogram2D::total() const {
  double s = overflow;
  for (double m : mass) s += m;
  return s;
}

void Histogram2D::add(const SpatialPoint& p, double weight) {
  if (p.xi > xi_max) {
    overflow += weight;
    return;
  }
  at(bin_index(p.xi, 0.0, xi_max, bins_xi),
     bin_index(std::cos(p.theta), -1.0, 1.0, bins_cos)) += weight;
}

Histogram2D reference_histogram(const CoefficientState& c, int nxi, int ncos,
                                double xi_max) {
  Histogram2D h(nxi, ncos, xi_max);
  auto density = [&c](double xi, double mu) {
    return 2.0 * kPi * xi * xi * eval_wave({xi, std::acos(mu), 0.0}, c).rho;
  };
  const double dxi = xi_max / nxi;
  const double dmu = 2.0 / ncos;
  for (int i = 0; i < nxi; ++i) {
    for (int j = 0; j < ncos; ++j) {
      const double mu_lo = -1.0 + j * dmu;
      h.at(i, j) = gauss_1d(
          [&](double xi) {
            return gauss_1d([&](double mu) { return density(xi, mu); }, mu_lo,
                            mu_lo + dmu);
          },
          i * dxi, (i + 1) * dxi);
    }
  }
  // Overflow tail out to where the 2p0 density is below 1e-25.
  double tail = 0.0;
  for (double lo = xi_max; lo < 120.0; lo += 4.0) {
    tail += gauss_1d(
        [&](double xi) {
          return gauss_1d([&](double mu) { return density(xi, mu); }, -1.0, 1.0);
        },
        lo, lo + 4.0);
  }
  h.overflow = tail;
  return h;
}

Histogram2D empirical_histogram(std::span<const SpatialPoint> points, int nxi,
                                int ncos, double xi_max) {
  Histogram2D h(nxi, ncos, xi_max);
  if (points.empty()) return h;
  const double w = 1.0 / static_cast<double>(points.size());
  for (const auto& p : points) h.add(p, w);
  return h;
}

double total_variation(const Histogram2D& a, const Histogram2D& b) {
  if (a.bins_xi != b.bins_xi || a.bins_cos != b.bins_cos || a.xi_max != b.xi_max) {
    throw Error(ErrorKind::InvalidParameter, "histograms use different binnings");
  }
  double s = std::abs(a.overflow - b.overflow);
  for (std::size_t i = 0; i < a.mass.size(); ++i) s += std::abs(a.mass[i] - b.mass[i]);
  return 0.5 * s;
}

double two_sample_baseline(long count, std::uint64_t seed, int bins, double xi_max) {
  const CounterRng derive(seed);
  const auto a = sample_initial(count, derive.bits(~0ULL));
  const auto b = sample_initial(count, derive.bits(~0ULL - 1));
  return total_variation(empirical_histogram(a, bins, bins, xi_max),
                         empirical_histogram(b, bins, bins, xi_max));
}

std::vector<EnsembleSummary> evolve_ensemble(std::span<const SpatialPoint> points,
                                             std::span<const double> tau_targets,
                                             const DriveParameters& drive,
                                             const IntegratorConfig& config,
                                             const EnsembleOptions& options) {
  config.validate();
  if (points.empty()) {
    throw Error(ErrorKind::InvalidParameter, "ensemble needs at least one point");
  }
  std::vector<double> targets(tau_targets.begin(), tau_targets.end());
  std::sort(targets.begin(), targets.end());
  for (double t : targets) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
      throw Error(ErrorKind::InvalidParameter, "ensemble.tau_targets must be >= 0");
    }
  }

  // results[i] holds the point at every target, or nothing on failure.
  std::vector<std::optional<std::vector<SpatialPoint>>> results(points.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1, std::memory_order_relaxed);
      if (i >= points.size()) break;
      try {
        results[i] = integrate_to(points[i], targets, drive, options.source, config);
      } catch (const Error&) {
        results[i].reset();
      }
    }
  };
  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(points.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  std::vector<EnsembleSummary> out;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const double tau = targets[k];
    EnsembleSummary s;
    s.tau = tau;
    s.count = static_cast<long>(points.size());
    const CoefficientState c = evaluate_source(
        options.source.mode == CoefficientMode::NumericOde ? CoefficientSource::analytic()
                                                           : options.source,
        tau, drive);

    std::vector<SpatialPoint> evolved;
    evolved.reserve(points.size());
    for (const auto& r : results) {
      if (r) evolved.push_back((*r)[k]);
    }
    s.dropouts = s.count - static_cast<long>(evolved.size());
    s.empirical = empirical_histogram(evolved, options.bins, options.bins, options.xi_max);
    s.reference = reference_histogram(c, options.bins, options.bins, options.xi_max);
    s.divergence = total_variation(s.empirical, s.reference);

    double sum = 0.0, sum_sq = 0.0;
    long n = 0;
    for (const auto& p : evolved) {
      const LocalEnergy e = local_energy(p, c, drive, options.source.driven(), config.rho_floor);
      if (e.clipped) {
        ++s.clipped_energy;
        continue;
      }
      sum += e.total_eV;
      sum_sq += e.total_eV * e.total_eV;
      ++n;
    }
    if (n > 0) {
      s.mean_energy_eV = sum / n;
      const double var = n > 1 ? (sum_sq - sum * sum / n) / (n - 1) : 0.0;
      s.energy_stderr_eV = std::sqrt(std::max(var, 0.0) / n);
    }
    s.expected_energy_eV = expected_energy(c, drive, options.source.driven());
    out.push_back(std::move(s));
  }
  return out;
}

EnsembleSummary evolve_ensemble(std::span<const SpatialPoint> points,
                                double tau_target, const DriveParameters& drive,
                                const IntegratorConfig& config,
                                const EnsembleOptions& options) {
  const double targets[] = {tau_target};
  return evolve_ensemble(points, targets, drive, config, options).front();
}

}  // namespace bohm
