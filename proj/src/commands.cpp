#include "bohm/commands.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "bohm/ensemble.hpp"
#include "bohm/io.hpp"
#include "bohm/observables.hpp"
#include "bohm/trajectory.hpp"

namespace bohm {

namespace {

bool wants(const RunConfig& c, const std::string& format) {
  return std::find(c.output.formats.begin(), c.output.formats.end(), format) !=
         c.output.formats.end();
}

int code(ExitCode c) { return static_cast<int>(c); }

// Runs `body`, translating library errors to exit codes with a message.
template <class F>
int guarded(std::ostream& log, F&& body) {
  try {
    return body();
  } catch (const IntegrationError& e) {
    log << "error: " << e.what() << " (last good state tau = " << e.tau() << ", xi = " << e.xi()
        << ", theta = " << e.theta() << ", phi = " << e.phi() << ")\n";
    return code(exit_code_for(e));
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return code(exit_code_for(e));
  } catch (const std::exception& e) {
    log << "internal error: " << e.what() << '\n';
    return code(ExitCode::Internal);
  }
}

}  // namespace

ExitCode exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::InvalidParameter:
    case ErrorKind::Config:
      return ExitCode::ConfigError;
    case ErrorKind::NodeProximity:
    case ErrorKind::OffSheet:
    case ErrorKind::StepUnderflow:
      return ExitCode::IntegrationFailure;
    case ErrorKind::AxisProximity:
      return ExitCode::AxisAbort;
    case ErrorKind::Parse:
      return ExitCode::ParseError;
    case ErrorKind::Io:
      return ExitCode::IoError;
  }
  return ExitCode::Internal;
}

RunConfig resolve_config(const CommandOptions& options) {
  if (options.config_path && options.preset) {
    throw Error(ErrorKind::Config, "--config and --preset are mutually exclusive");
  }
  RunConfig cfg;
  if (options.preset) cfg = preset_config(*options.preset);
  if (options.config_path) cfg = load_config(*options.config_path);
  if (options.out_dir) cfg.output.directory = *options.out_dir;
  if (options.seed) cfg.ensemble.seed = *options.seed;
  return cfg;
}

int cmd_simulate(const CommandOptions& options, std::ostream& log) {
  return guarded(log, [&] {
    const RunConfig cfg = resolve_config(options);
    validate_config(cfg);
    const DriveParameters drive = drive_from_config(cfg);
    const CoefficientSource source = source_from_config(cfg);
    const IntegratorConfig ic = integrator_from_config(cfg);

    Trajectory tr;
    if (options.long_run) {
      LongRun run = integrate_long(cfg.initial, drive, ic, source);
      tr = std::move(run.trajectory);
      log << "reversal near tau = " << run.reversal_tau << ", |c_b|^2 < "
          << kReversalProbability << " on [" << run.reversal_window.first << ", "
          << run.reversal_window.second << "]\n";
    } else {
      tr = integrate(cfg.initial, cfg.integrate.tau_max, drive, source, ic);
    }
    for (const auto& w : tr.manifest.warnings) log << "warning: " << w << '\n';

    const std::filesystem::path dir = cfg.output.directory;
    if (wants(cfg, "csv")) {
      std::ostringstream os;
      write_trajectory_csv(os, tr.samples);
      write_text_file(dir / "trajectory.csv", os.str());
    }
    if (wants(cfg, "json")) {
      write_text_file(dir / "manifest.json", manifest_json(tr.manifest, cfg));
    }
    if (wants(cfg, "plot")) {
      for (PlotMode m : {PlotMode::ThreeD, PlotMode::Split, PlotMode::Phi, PlotMode::Dphi,
                         PlotMode::Energy}) {
        write_plot_data(tr.samples, m, dir);
      }
    }
    const auto spikes = find_energy_spikes(tr.samples);
    log << "simulate: " << tr.samples.size() << " samples, " << tr.manifest.stats.steps
        << " steps, min rho " << tr.manifest.stats.min_rho << ", " << spikes.size()
        << " energy spike(s); output in " << dir.string() << '\n';
    return code(ExitCode::Ok);
  });
}

int cmd_ensemble(const CommandOptions& options, std::ostream& log) {
  return guarded(log, [&] {
    const RunConfig cfg = resolve_config(options);
    validate_config(cfg, true);
    const DriveParameters drive = drive_from_config(cfg);
    EnsembleOptions eo;
    eo.bins = cfg.ensemble.bins;
    eo.xi_max = cfg.ensemble.xi_max;
    eo.threads = cfg.ensemble.threads;
    eo.source = source_from_config(cfg);
    if (eo.source.mode == CoefficientMode::Frozen && std::norm(eo.source.c2) != 0.0) {
      throw Error(ErrorKind::Config,
                  "coefficients: ensemble sampling draws from the 1s density and needs c2 = 0");
    }
    const IntegratorConfig ic = integrator_from_config(cfg);

    const auto points = sample_initial(cfg.ensemble.count, cfg.ensemble.seed);
    EnsembleReport report;
    report.count = cfg.ensemble.count;
    report.seed = cfg.ensemble.seed;
    report.summaries = evolve_ensemble(points, cfg.ensemble.tau_targets, drive, ic, eo);
    report.calibration_baseline =
        two_sample_baseline(cfg.ensemble.count, cfg.ensemble.seed, eo.bins, eo.xi_max);

    const std::filesystem::path dir = cfg.output.directory;
    write_text_file(dir / "ensemble_summary.json", ensemble_json(report, cfg));
    std::ostringstream hist;
    write_histogram_csv(hist, report.summaries);
    write_text_file(dir / "histogram.csv", hist.str());

    bool too_many_dropouts = false;
    for (const auto& s : report.summaries) {
      log << "tau = " << s.tau << ": divergence " << s.divergence << " (baseline "
          << report.calibration_baseline << "), mean energy " << s.mean_energy_eV << " +- "
          << s.energy_stderr_eV << " eV (expected " << s.expected_energy_eV << "), drop-outs "
          << s.dropouts << '\n';
      if (static_cast<double>(s.dropouts) >= kMaxDropoutFraction * static_cast<double>(s.count)) {
        too_many_dropouts = true;
      }
    }
    if (too_many_dropouts) {
      log << "error: drop-out fraction reached " << kMaxDropoutFraction
          << "; report written to " << dir.string() << '\n';
      return code(ExitCode::EnsembleDropout);
    }
    return code(ExitCode::Ok);
  });
}

int cmd_coefficients(const CommandOptions& options, std::ostream& log) {
  return guarded(log, [&] {
    const RunConfig cfg = resolve_config(options);
    const DriveParameters drive = drive_from_config(cfg);
    const double tau_max = cfg.integrate.tau_max;
    if (!(tau_max >= 0.0)) throw Error(ErrorKind::Config, "integrate.tau_max must be >= 0");
    const auto rows = coefficient_scan(tau_max, options.coefficient_stride, drive);
    std::ostringstream os;
    write_coefficients_csv(os, rows);
    const std::filesystem::path dir = cfg.output.directory;
    write_text_file(dir / "coefficients.csv", os.str());
    const auto peak = std::max_element(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
      return std::norm(a.c.c_b) < std::norm(b.c.c_b);
    });
    log << "coefficients: " << rows.size() << " rows; max |c_b|^2 = " << std::norm(peak->c.c_b)
        << " at tau = " << peak->tau << '\n';
    return code(ExitCode::Ok);
  });
}

int cmd_plotdata(const std::filesystem::path& csv, const std::string& mode,
                 const std::filesystem::path& out_dir, std::ostream& log) {
  return guarded(log, [&] {
    const PlotMode m = parse_plot_mode(mode);
    const auto samples = read_trajectory_csv(csv);
    const auto files = write_plot_data(samples, m, out_dir);
    for (const auto& f : files) log << "wrote " << f.string() << '\n';
    return code(ExitCode::Ok);
  });
}

int cmd_verify(const VerifyOptions& options, std::ostream& log) {
  return guarded(log, [&] {
    const auto items = run_verify_suite(options);
    int failed = 0;
    for (const auto& item : items) {
      log << (item.pass ? "PASS " : "FAIL ") << item.name;
      if (!item.detail.empty()) log << ": " << item.detail;
      log << '\n';
      if (!item.pass) ++failed;
    }
    log << items.size() - static_cast<std::size_t>(failed) << '/' << items.size() << " passed\n";
    return code(failed ? ExitCode::VerifyFailure : ExitCode::Ok);
  });
}

}  // namespace bohm
