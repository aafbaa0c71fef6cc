// `sqkd` command-line front end: emits the noise-threshold table and
// key-rate curves, runs protocol simulations, and executes the
// bound-soundness verification campaign.

#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "commands.hpp"
#include "sqkd/serialize.hpp"
#include "sqkd/version.hpp"

namespace {

void add_common(CLI::App* cmd, sqkd::cli::CommonOptions& opts, bool with_format = true) {
  cmd->add_option("--seed", opts.seed, "master RNG seed");
  cmd->add_option("--out", opts.out, "output path (default: per-command name in . or $SQKD_OUT_DIR)");
  if (with_format)
    cmd->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--jobs", opts.jobs, "worker threads for parallel inner loops")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulator and security-analysis toolkit for a semiquantum key "
               "distribution protocol"};
  app.set_version_flag("--version", sqkd::kVersion);
  app.require_subcommand(1);

  sqkd::cli::CommonOptions table1_opts, curve_opts, sim_opts, verify_opts;

  // table1
  auto* table1 = app.add_subcommand(
      "table1", "noise thresholds for the 3x3 grid of Q_Z/Q_X multipliers");
  std::optional<double> cell_zeta, cell_xi;
  int precision = 6;
  table1->add_option("--zeta", cell_zeta, "single-cell mode: Q_Z multiplier");
  table1->add_option("--xi", cell_xi, "single-cell mode: Q_X multiplier");
  table1->add_option("--precision", precision, "decimals for printed roots")
      ->check(CLI::Range(1, 17));
  add_common(table1, table1_opts);

  // curve
  auto* curve = app.add_subcommand("curve", "key-rate bound sampled along a noise ray");
  double zeta = 1.0, xi = 1.0, q_max = 0.1;
  std::size_t steps = 101;
  curve->add_option("--zeta", zeta, "Q_Z multiplier")->required();
  curve->add_option("--xi", xi, "Q_X multiplier")->required();
  curve->add_option("--q-max", q_max, "largest Q on the curve")->required();
  curve->add_option("--steps", steps, "number of points (>= 2)")->required();
  add_common(curve, curve_opts);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo protocol runs from a config file");
  std::string config_path;
  std::size_t trials = 1;
  bool with_transcripts = false;
  simulate->add_option("--config", config_path, "protocol config file")->required();
  simulate->add_option("--trials", trials, "number of independent runs")
      ->check(CLI::PositiveNumber);
  simulate->add_flag("--transcripts", with_transcripts, "embed per-trial transcripts");
  add_common(simulate, sim_opts, /*with_format=*/false);

  // verify-bound
  auto* verify = app.add_subcommand(
      "verify-bound", "check the closed-form bound against exact rates of random attacks");
  std::size_t samples = 10000, d1 = 2, d2 = 2;
  verify->add_option("--samples", samples, "number of random attacks");
  verify->add_option("--d1", d1, "outbound-leg ancilla dimension (1, 2 or 4)");
  verify->add_option("--d2", d2, "return-leg ancilla dimension (1, 2 or 4)");
  add_common(verify, verify_opts, /*with_format=*/false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (table1->parsed())
      return sqkd::cli::cmd_table1(table1_opts, cell_zeta, cell_xi, precision);
    if (curve->parsed())
      return sqkd::cli::cmd_curve(curve_opts, zeta, xi, q_max, steps);
    if (simulate->parsed())
      return sqkd::cli::cmd_simulate(sim_opts, config_path, trials, with_transcripts);
    if (verify->parsed())
      return sqkd::cli::cmd_verify_bound(verify_opts, samples, d1, d2);
  } catch (const sqkd::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
