// bohmtraj: command-line front end for the trajectory simulator.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bohm/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Spin-dependent Bohmian trajectories of a driven hydrogen 1s-2p0 transition"};
  app.require_subcommand(1);
  app.set_version_flag("--version", bohm::kSoftwareVersion);

  bohm::CommandOptions opts;
  std::string config, preset, out;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "Run configuration file")->check(CLI::ExistingFile);
    sub->add_option("--preset", preset, "Built-in configuration")
        ->check(CLI::IsMember({"fig1", "fig2"}));
    sub->add_option("--out", out, "Output directory (overrides output.directory)");
    sub->add_option("--seed", seed, "Ensemble seed (overrides ensemble.seed)");
  };

  auto* simulate = app.add_subcommand("simulate", "Integrate one trajectory");
  add_common(simulate);
  simulate->add_flag("--long", opts.long_run, "Integrate to tau = 2e4, past the reversal");

  auto* ensemble = app.add_subcommand("ensemble", "Evolve a 1s-distributed ensemble");
  add_common(ensemble);

  auto* coeffs = app.add_subcommand("coefficients", "Scan the state coefficients");
  add_common(coeffs);
  coeffs->add_option("--stride", opts.coefficient_stride, "Scan spacing in scaled time")
      ->check(CLI::PositiveNumber);

  bohm::VerifyOptions vopts;
  auto* verify = app.add_subcommand("verify", "Run the invariant suite");
  bool no_spin = false, flip_cross = false;
  verify->add_flag("--debug-disable-spin", no_spin)->group("");
  verify->add_flag("--debug-flip-cross", flip_cross)->group("");

  std::string csv, mode = "3d";
  auto* plot = app.add_subcommand("plotdata", "Write plot files from a trajectory CSV");
  plot->add_option("csv", csv, "Trajectory CSV")->required();
  plot->add_option("--mode", mode, "3d, split, phi, dphi or energy");
  plot->add_option("--out", out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(bohm::ExitCode::ConfigError);
  }

  auto option = [](const CLI::App* sub, const char* name) { return sub->count(name) > 0; };
  for (CLI::App* sub : {simulate, ensemble, coeffs}) {
    if (!sub->parsed()) continue;
    if (option(sub, "--config")) opts.config_path = config;
    if (option(sub, "--preset")) opts.preset = preset;
    if (option(sub, "--out")) opts.out_dir = out;
    if (option(sub, "--seed")) opts.seed = seed;
  }

  if (simulate->parsed()) return bohm::cmd_simulate(opts, std::cerr);
  if (ensemble->parsed()) return bohm::cmd_ensemble(opts, std::cerr);
  if (coeffs->parsed()) return bohm::cmd_coefficients(opts, std::cerr);
  if (verify->parsed()) {
    vopts.field.spin_term = !no_spin;
    vopts.field.flip_cross = flip_cross;
    return bohm::cmd_verify(vopts, std::cout);
  }
  return bohm::cmd_plotdata(csv, mode, out.empty() ? std::string(".") : out, std::cerr);
}
