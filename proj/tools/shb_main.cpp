// Command-line front end: spectra, hole dynamics and parameter fits for
// microwave spin spectroscopy in rare-earth-doped crystals.
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "shb/commands.hpp"
#include "shb/config.hpp"
#include "shb/csv.hpp"
#include "shb/errors.hpp"
#include "shb/units.hpp"
#include "shb/version.hpp"

namespace {

/// CLI override strings carry unit suffixes just like config values
/// ("--B 185mT", "--T 81.9mK", "--burn-time 3s").
std::optional<double> parse_override(const std::string& text, shb::io::Quantity quantity) {
  if (text.empty()) {
    return std::nullopt;
  }
  return shb::io::parse_quantity(text, quantity);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin spectroscopy and spectral hole burning toolkit"};
  app.set_version_flag("--version", std::string(shb::version));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  std::string field_text, temperature_text, burn_time_text;
  std::string input_path;
  std::string sweep_mode;
  int bootstrap = 0;

  // Shared options are registered per subcommand so `shb fit-line --help`
  // shows everything relevant to it.
  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "experiment config file")->required();
    cmd->add_option("--out", out_dir, "output directory (default .)");
    cmd->add_option("--format", format, "output format: csv | json-records")
        ->check(CLI::IsMember({"csv", "json-records"}));
    cmd->add_option("--seed", seed, "RNG seed (required for stochastic options)");
  };
  const auto add_field = [&](CLI::App* cmd) {
    cmd->add_option("--B", field_text, "static field override, e.g. 185mT");
  };
  const auto add_temperature = [&](CLI::App* cmd) {
    cmd->add_option("--T", temperature_text, "spin temperature override, e.g. 81.9mK");
  };
  const auto add_input = [&](CLI::App* cmd) {
    cmd->add_option("--input", input_path, "input data file (CSV)")->required();
  };
  const auto add_bootstrap = [&](CLI::App* cmd) {
    cmd->add_option("--bootstrap", bootstrap,
                    "residual-bootstrap draws for uncertainties (needs --seed)");
  };

  CLI::App* spectrum = app.add_subcommand("simulate-spectrum",
                                          "absorption spectrum at a fixed field");
  add_common(spectrum);
  add_field(spectrum);
  add_temperature(spectrum);

  CLI::App* map = app.add_subcommand("simulate-map", "absorption map over field x frequency");
  add_common(map);
  add_temperature(map);

  CLI::App* hole = app.add_subcommand(
      "simulate-hole", "hole burn/recovery trace, profile evolution and rate scan");
  add_common(hole);
  add_field(hole);
  hole->add_option("--burn-time", burn_time_text, "burn duration override, e.g. 3s");

  CLI::App* fit_line = app.add_subcommand("fit-line", "Lorentzian fit of a line profile");
  add_common(fit_line);
  add_input(fit_line);
  add_bootstrap(fit_line);

  CLI::App* fit_recovery = app.add_subcommand("fit-recovery",
                                              "exponential fit of a recovery trace");
  add_common(fit_recovery);
  add_input(fit_recovery);
  add_bootstrap(fit_recovery);

  CLI::App* fit_relaxation = app.add_subcommand(
      "fit-relaxation", "relaxation-model fit of rates vs field or temperature");
  add_common(fit_relaxation);
  add_input(fit_relaxation);
  add_bootstrap(fit_relaxation);
  add_field(fit_relaxation);
  fit_relaxation->add_option("--sweep-mode", sweep_mode, "swept variable: field | temperature")
      ->check(CLI::IsMember({"field", "temperature"}));

  CLI::App* fit_temperature = app.add_subcommand(
      "fit-temperature", "Boltzmann spin-temperature fit of line areas vs field");
  add_common(fit_temperature);
  add_input(fit_temperature);
  add_bootstrap(fit_temperature);

  CLI::App* link = app.add_subcommand("link-budget",
                                      "acting power, field and Rabi frequency at the spins");
  add_common(link);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help text or the parse error
    return code == 0 ? 0 : shb::io::exit_usage;
  }

  try {
    shb::io::CommandArgs args;
    args.out_dir = out_dir;
    args.format = format;
    args.seed = seed;
    args.field_override = parse_override(field_text, shb::io::Quantity::Field);
    args.temperature_override = parse_override(temperature_text, shb::io::Quantity::Temperature);
    args.burn_time_override = parse_override(burn_time_text, shb::io::Quantity::Time);
    if (!input_path.empty()) {
      args.input_path = input_path;
    }
    if (!sweep_mode.empty()) {
      args.sweep_mode = sweep_mode;
    }
    args.bootstrap = bootstrap;
    args.config_path = config_path;
    args.config_text = shb::io::read_file(config_path);

    const shb::io::ExperimentConfig config = shb::io::parse_config(args.config_text);
    return shb::io::run_command(app.get_subcommands().front()->get_name(), args, config);
  } catch (const shb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return shb::io::exit_config;
  } catch (const shb::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return shb::io::exit_io;
  } catch (const shb::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return shb::io::exit_input;
  }
}
