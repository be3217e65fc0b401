#include "bohm/io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "bohm/error.hpp"

namespace bohm {

namespace {

using nlohmann::ordered_json;

const char* mode_name(CoefficientMode m) {
  switch (m) {
    case CoefficientMode::Analytic: return "analytic";
    case CoefficientMode::Printed: return "printed";
    case CoefficientMode::Frozen: return "frozen";
    case CoefficientMode::NumericOde: return "numeric";
  }
  return "unknown";
}

// JSON has no NaN; non-finite values become null.
ordered_json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

ordered_json drive_json(const DriveParameters& d) {
  ordered_json j;
  j["E0_volts_per_meter"] = d.E0_Vpm;
  j["detuning_per_second"] = d.Omega_ps;
  j["omega0_per_second"] = d.omega0_ps;
  j["V12_joule"] = d.V12_J;
  j["nu_per_second"] = d.nu_ps;
  j["nu_overridden"] = d.nu_override.has_value();
  j["sigma_per_second"] = d.sigma_ps;
  j["nu_scaled"] = d.nu_s;
  j["sigma_scaled"] = d.sigma_s;
  j["detuning_scaled"] = d.Omega_s;
  j["field_energy_eV"] = d.field_energy_eV;
  j["E1_eV"] = d.E1_eV;
  j["E2_eV"] = d.E2_eV();
  return j;
}

ordered_json histogram_json(const Histogram2D& h) {
  ordered_json j;
  j["bins_xi"] = h.bins_xi;
  j["bins_cos_theta"] = h.bins_cos;
  j["xi_max"] = h.xi_max;
  j["mass"] = h.mass;
  j["overflow"] = h.overflow;
  return j;
}

double parse_field(const std::string& field, int line, int column) {
  double v = 0.0;
  const char* end = field.data() + field.size();
  auto [p, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || p != end) {
    throw Error(ErrorKind::Parse, "trajectory CSV line " + std::to_string(line) + ", column " +
                                      std::to_string(column) + ": cannot parse '" + field + "'");
  }
  return v;
}

}  // namespace

void write_trajectory_csv(std::ostream& os, std::span<const TrajectorySample> samples) {
  os << kTrajectoryHeader << '\n';
  for (const auto& s : samples) {
    const double st = std::sin(s.point.theta);
    const double x = s.point.xi * st * std::cos(s.point.phi);
    const double y = s.point.xi * st * std::sin(s.point.phi);
    const double z = s.point.xi * std::cos(s.point.theta);
    const double row[] = {s.tau, s.point.xi, s.point.theta, s.point.phi, x, y, z,
                          s.velocity.dxi, s.velocity.dtheta, s.velocity.dphi,
                          s.energy_eV, s.cb_sq, s.surface_residual, s.rho};
    for (double v : row) os << format_double(v) << ',';
    os << (s.clipped ? 1 : 0) << '\n';
  }
}

std::vector<TrajectorySample> read_trajectory_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorKind::Parse, "trajectory CSV line 1: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTrajectoryHeader) {
    throw Error(ErrorKind::Parse, "trajectory CSV line 1: unexpected header");
  }
  std::vector<TrajectorySample> out;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string f;
    std::istringstream ls(line);
    while (std::getline(ls, f, ',')) fields.push_back(f);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (fields.size() != 15) {
      throw Error(ErrorKind::Parse, "trajectory CSV line " + std::to_string(line_no) +
                                        ": expected 15 fields, found " +
                                        std::to_string(fields.size()));
    }
    double v[15];
    for (int i = 0; i < 15; ++i) v[i] = parse_field(fields[i], line_no, i + 1);
    TrajectorySample s;
    s.tau = v[0];
    s.point = {v[1], v[2], v[3]};
    s.velocity = {v[7], v[8], v[9]};
    s.energy_eV = v[10];
    s.cb_sq = v[11];
    s.surface_residual = v[12];
    s.rho = v[13];
    if (v[14] != 0.0 && v[14] != 1.0) {
      throw Error(ErrorKind::Parse, "trajectory CSV line " + std::to_string(line_no) +
                                        ": clipped must be 0 or 1");
    }
    s.clipped = v[14] == 1.0;
    out.push_back(s);
  }
  return out;
}

std::vector<TrajectorySample> read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return read_trajectory_csv(in);
}

std::string manifest_json(const RunManifest& m, const RunConfig& config) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["software_version"] = m.version;
  j["drive"] = drive_json(m.drive);
  j["initial"] = {{"xi", m.initial.xi}, {"theta", m.initial.theta}, {"phi", m.initial.phi}};
  j["integrator"] = {{"method", "dormand-prince-5(4)"},
                     {"rel_tol", m.config.rel_tol},
                     {"abs_tol", m.config.abs_tol},
                     {"max_step", m.config.max_step},
                     {"min_step", m.config.min_step},
                     {"rho_floor", m.config.rho_floor},
                     {"output_stride", m.config.output_stride}};
  ordered_json src = {{"mode", mode_name(m.source.mode)}};
  if (m.source.mode == CoefficientMode::Frozen) {
    src["c1"] = {m.source.c1.real(), m.source.c1.imag()};
    src["c2"] = {m.source.c2.real(), m.source.c2.imag()};
  }
  j["coefficients"] = src;
  j["tau_max"] = m.tau_max;
  j["statistics"] = {{"accepted_steps", m.stats.steps},
                     {"rejected_steps", m.stats.rejections},
                     {"rhs_evaluations", m.stats.evaluations},
                     {"min_rho", num(m.stats.min_rho)},
                     {"min_rho_tau", m.stats.min_rho_tau},
                     {"node_dwell_events", m.stats.node_dwell_events}};
  if (m.reversal_window) {
    j["reversal_window"] = {m.reversal_window->first, m.reversal_window->second};
  }
  j["warnings"] = m.warnings;
  j["config"] = serialize_config(config);
  return j.dump(2) + "\n";
}

std::vector<CoefficientRow> coefficient_scan(double tau_max, double stride,
                                             const DriveParameters& drive) {
  if (!(tau_max >= 0.0) || !(stride > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "coefficient scan needs tau_max >= 0 and stride > 0");
  }
  std::vector<CoefficientRow> rows;
  const long n = static_cast<long>(std::floor(tau_max / stride + 1e-9));
  for (long i = 0; i <= n; ++i) {
    const double tau = static_cast<double>(i) * stride;
    rows.push_back({tau, coefficients(tau, drive), envelope_T_analytic(tau, drive),
                    envelope_Tprime_analytic(tau, drive)});
  }
  if (rows.back().tau < tau_max) {
    rows.push_back({tau_max, coefficients(tau_max, drive), envelope_T_analytic(tau_max, drive),
                    envelope_Tprime_analytic(tau_max, drive)});
  }
  return rows;
}

void write_coefficients_csv(std::ostream& os, std::span<const CoefficientRow> rows) {
  os << kCoefficientHeader << '\n';
  for (const auto& r : rows) {
    os << format_double(r.tau) << ',' << format_double(r.c.c_a.real()) << ','
       << format_double(r.c.c_a.imag()) << ',' << format_double(r.c.c_b.real()) << ','
       << format_double(r.c.c_b.imag()) << ',' << format_double(std::norm(r.c.c_b)) << ','
       << format_double(r.T) << ',' << format_double(r.Tprime) << '\n';
  }
}

std::string ensemble_json(const EnsembleReport& report, const RunConfig& config) {
  ordered_json summary;
  summary["schema_version"] = kSchemaVersion;
  summary["software_version"] = kSoftwareVersion;
  summary["count"] = report.count;
  summary["seed"] = report.seed;
  summary["calibration_baseline"] = report.calibration_baseline;
  ordered_json targets = ordered_json::array();
  for (const auto& s : report.summaries) {
    ordered_json t;
    t["tau"] = s.tau;
    t["count"] = s.count;
    t["dropouts"] = s.dropouts;
    t["divergence"] = s.divergence;
    t["divergence_over_baseline"] =
        report.calibration_baseline > 0 ? num(s.divergence / report.calibration_baseline)
                                        : ordered_json(nullptr);
    t["mean_energy_eV"] = num(s.mean_energy_eV);
    t["energy_standard_error_eV"] = num(s.energy_stderr_eV);
    t["expected_energy_eV"] = num(s.expected_energy_eV);
    t["clipped_energy_samples"] = s.clipped_energy;
    t["empirical"] = histogram_json(s.empirical);
    t["reference"] = histogram_json(s.reference);
    targets.push_back(std::move(t));
  }
  summary["targets"] = std::move(targets);
  summary["config"] = serialize_config(config);

  ordered_json j;
  j["generated_at"] = utc_timestamp();
  j["summary"] = std::move(summary);
  return j.dump(2) + "\n";
}

void write_histogram_csv(std::ostream& os, std::span<const EnsembleSummary> summaries) {
  os << "tau,xi_lo,xi_hi,cos_lo,cos_hi,empirical,reference\n";
  for (const auto& s : summaries) {
    const auto& e = s.empirical;
    const double dxi = e.xi_max / e.bins_xi;
    const double dmu = 2.0 / e.bins_cos;
    for (int i = 0; i < e.bins_xi; ++i) {
      for (int k = 0; k < e.bins_cos; ++k) {
        os << format_double(s.tau) << ',' << format_double(i * dxi) << ','
           << format_double((i + 1) * dxi) << ',' << format_double(-1.0 + k * dmu) << ','
           << format_double(-1.0 + (k + 1) * dmu) << ',' << format_double(e.at(i, k)) << ','
           << format_double(s.reference.at(i, k)) << '\n';
      }
    }
    os << format_double(s.tau) << ',' << format_double(e.xi_max) << ",inf,-1,1,"
       << format_double(e.overflow) << ',' << format_double(s.reference.overflow) << '\n';
  }
}

PlotMode parse_plot_mode(std::string_view name) {
  if (name == "3d") return PlotMode::ThreeD;
  if (name == "split") return PlotMode::Split;
  if (name == "phi") return PlotMode::Phi;
  if (name == "dphi") return PlotMode::Dphi;
  if (name == "energy") return PlotMode::Energy;
  throw Error(ErrorKind::Config, "unknown plot mode '" + std::string(name) +
                                     "' (expected 3d, split, phi, dphi or energy)");
}

namespace {

void write_xyz(std::ostream& os, std::span<const TrajectorySample> samples) {
  os << "# x y z tau\n";
  for (const auto& s : samples) {
    const double st = std::sin(s.point.theta);
    os << format_double(s.point.xi * st * std::cos(s.point.phi)) << ' '
       << format_double(s.point.xi * st * std::sin(s.point.phi)) << ' '
       << format_double(s.point.xi * std::cos(s.point.theta)) << ' ' << format_double(s.tau)
       << '\n';
  }
}

}  // namespace

std::vector<std::filesystem::path> write_plot_data(std::span<const TrajectorySample> samples,
                                                   PlotMode mode,
                                                   const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, const std::string& content) {
    const auto path = dir / name;
    write_text_file(path, content);
    written.push_back(path);
  };
  std::ostringstream os;
  switch (mode) {
    case PlotMode::ThreeD:
      write_xyz(os, samples);
      emit("trajectory_3d.dat", os.str());
      break;
    case PlotMode::Split: {
      const auto segments = split_intervals(samples, kDefaultSplitBoundaries);
      for (std::size_t i = 0; i < segments.size(); ++i) {
        std::ostringstream seg;
        if (!segments[i].empty()) {
          seg << "# tau " << format_double(segments[i].front().tau) << " to "
              << format_double(segments[i].back().tau) << '\n';
        }
        write_xyz(seg, segments[i]);
        emit("trajectory_split_" + std::to_string(i + 1) + ".dat", seg.str());
      }
      break;
    }
    case PlotMode::Phi:
      os << "# tau phi\n";
      for (const auto& s : samples) os << format_double(s.tau) << ' ' << format_double(s.point.phi) << '\n';
      emit("phi.dat", os.str());
      break;
    case PlotMode::Dphi:
      os << "# tau dphi_dtau\n";
      for (const auto& s : samples) {
        os << format_double(s.tau) << ' ' << format_double(s.velocity.dphi) << '\n';
      }
      emit("dphi.dat", os.str());
      break;
    case PlotMode::Energy:
      os << "# tau energy_eV clipped\n";
      for (const auto& s : samples) {
        os << format_double(s.tau) << ' ' << format_double(s.energy_eV) << ' '
           << (s.clipped ? 1 : 0) << '\n';
      }
      emit("energy.dat", os.str());
      break;
  }
  return written;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << content;
  out.close();
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace bohm
