#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qnet/config.hpp"
#include "qnet/errors.hpp"
#include "qnet/run.hpp"

namespace {

struct CliOptions {
  std::string positional_config;
  std::string config_flag;
  std::string out_flag;
  std::string seed_flag;
  std::string threads_flag;
};

void add_common_options(CLI::App* sub, CliOptions& opts) {
  sub->add_option("config-file", opts.positional_config,
                  "Config file (TOML)");
  sub->add_option("--config", opts.config_flag, "Config file (TOML)");
  sub->add_option("--out", opts.out_flag,
                  "Output directory (overrides run.out_dir)");
  sub->add_option("--seed", opts.seed_flag, "Override run.seed");
  sub->add_option("--threads", opts.threads_flag, "Override run.threads");
}

int dispatch(const std::string& verb, const CliOptions& opts) {
  const std::string path =
      opts.config_flag.empty() ? opts.positional_config : opts.config_flag;
  if (path.empty()) {
    throw qnet::ConfigError("no config file given (pass a path or --config)");
  }
  qnet::Config cfg = qnet::Config::from_file(path);
  cfg.load_env_overrides("QNET_");
  if (!opts.seed_flag.empty()) cfg.set_flag("run.seed", opts.seed_flag);
  if (!opts.threads_flag.empty()) {
    cfg.set_flag("run.threads", opts.threads_flag);
  }
  std::string out_dir = cfg.get_string("run.out_dir", "out");
  if (!opts.out_flag.empty()) out_dir = opts.out_flag;

  if (verb == "run") {
    qnet::run_experiment(cfg, out_dir);
  } else if (verb == "synth") {
    qnet::synthesize_experiment(cfg, out_dir);
  } else {
    qnet::run_ensemble(cfg, out_dir);
  }
  std::cerr << "wrote outputs to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "qnet: single-excitation transport on tight-binding networks and "
      "their coupled-RLC circuit equivalents"};
  app.require_subcommand(1);

  CliOptions opts;
  CLI::App* run_cmd = app.add_subcommand(
      "run", "Simulate one experiment; write trajectories and metrics");
  add_common_options(run_cmd, opts);
  CLI::App* synth_cmd = app.add_subcommand(
      "synth", "Emit component values and DAC codes for a circuit");
  add_common_options(synth_cmd, opts);
  CLI::App* ensemble_cmd = app.add_subcommand(
      "ensemble", "Average a disorder ensemble; write mean map and metrics");
  add_common_options(ensemble_cmd, opts);
  app.add_subcommand("presets", "List bundled presets and their components");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand("presets")) {
      std::cout << qnet::presets_listing();
      return 0;
    }
    std::string verb = "run";
    if (app.got_subcommand(synth_cmd)) verb = "synth";
    if (app.got_subcommand(ensemble_cmd)) verb = "ensemble";
    (void)run_cmd;
    return dispatch(verb, opts);
  } catch (const qnet::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const qnet::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  } catch (const qnet::ControlOutOfRange& e) {
    std::cerr << "synthesis error: " << e.what() << "\n";
    return 5;
  } catch (const qnet::InfeasibleInductance& e) {
    std::cerr << "synthesis error: " << e.what() << "\n";
    return 5;
  } catch (const qnet::PositiveJUnsupported& e) {
    std::cerr << "synthesis error: " << e.what() << "\n";
    return 5;
  } catch (const qnet::Error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
