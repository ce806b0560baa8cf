#include "shb/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <random>
#include <span>

#include <json.hpp>

#include "shb/csv.hpp"
#include "shb/errors.hpp"
#include "shb/fit_models.hpp"
#include "shb/hole.hpp"
#include "shb/spectrum.hpp"
#include "shb/units.hpp"
#include "shb/version.hpp"

namespace shb::io {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

/// Bookkeeping for one command run: output files plus the manifest that makes
/// the run reproducible (canonical config, seed, overrides, input digests).
class RunContext {
 public:
  RunContext(std::string command, const CommandArgs& args, const ExperimentConfig& config)
      : command_(std::move(command)), args_(args) {
    fs::create_directories(args.out_dir);
    manifest_["command"] = command_;
    manifest_["version"] = shb::version;
    manifest_["seed"] = args.seed ? json(*args.seed) : json(nullptr);
    manifest_["format"] = args.format;
    manifest_["config_path"] = args.config_path;
    manifest_["config_digest"] = content_digest(args.config_text);
    manifest_["config_canonical"] = serialize_config(config);
    json overrides = json::object();
    if (args.field_override) {
      overrides["B"] = *args.field_override;
    }
    if (args.temperature_override) {
      overrides["T"] = *args.temperature_override;
    }
    if (args.burn_time_override) {
      overrides["burn_time"] = *args.burn_time_override;
    }
    if (args.sweep_mode) {
      overrides["sweep_mode"] = *args.sweep_mode;
    }
    if (args.bootstrap > 0) {
      overrides["bootstrap"] = args.bootstrap;
    }
    manifest_["overrides"] = overrides;
    manifest_["inputs"] = json::array();
    manifest_["outputs"] = json::array();
  }

  std::string out_path(const std::string& filename) const {
    return (fs::path(args_.out_dir) / filename).string();
  }

  void note_input(const std::string& path, std::string_view content) {
    manifest_["inputs"].push_back({{"path", path}, {"digest", content_digest(content)}});
  }

  /// Writes rows in the requested format and records the file in the manifest.
  std::string write_records(const std::string& stem, const std::vector<std::string>& comments,
                            const std::vector<std::string>& columns,
                            const std::vector<std::vector<double>>& rows) {
    std::string path;
    if (args_.format == "json-records") {
      path = out_path(stem + ".json");
      write_json_records(path, columns, rows);
    } else {
      path = out_path(stem + ".csv");
      write_csv(path, comments, columns, rows);
    }
    note_output(path);
    return path;
  }

  void write_text(const std::string& filename, std::string_view content) {
    const std::string path = out_path(filename);
    write_file(path, content);
    note_output(path);
  }

  void write_json(const std::string& filename, const json& value) {
    write_text(filename, value.dump(2) + "\n");
  }

  /// Writes the manifest last so it can list every output with its digest.
  void finish() {
    std::string stem = command_;
    std::replace(stem.begin(), stem.end(), '-', '_');
    const std::string path = out_path(stem + "_manifest.json");
    write_file(path, manifest_.dump(2) + "\n");
    std::cout << "wrote " << path << "\n";
  }

 private:
  void note_output(const std::string& path) {
    // Manifest paths are relative to the manifest itself, so two runs of the
    // same command into different directories stay byte-identical.
    manifest_["outputs"].push_back({{"path", fs::path(path).filename().string()},
                                    {"digest", content_digest(read_file(path))}});
    std::cout << "wrote " << path << "\n";
  }

  std::string command_;
  const CommandArgs& args_;
  json manifest_;
};

double resolved_field(const CommandArgs& args, const ExperimentConfig& config) {
  const double b = args.field_override.value_or(config.sweep.field);
  if (!(b > 0.0)) {
    throw InputError("field must be positive, got " + format_double(b) + " T");
  }
  return b;
}

double resolved_spin_temperature(const CommandArgs& args, const ExperimentConfig& config) {
  const double t = args.temperature_override.value_or(config.spin_temperature);
  if (!(t > 0.0)) {
    throw InputError("spin temperature must be positive, got " + format_double(t) + " K");
  }
  return t;
}

json fit_report_json(const fit::FitResult& result) {
  json params = json::object();
  for (const auto& [name, value] : result.params) {
    params[name] = {{"value", value},
                    {"sigma", result.sigma.count(name) ? result.sigma.at(name) : 0.0}};
  }
  return {{"params", params},
          {"converged", result.converged},
          {"degenerate", result.degenerate},
          {"iterations", result.iterations},
          {"r_squared", result.r_squared},
          {"initial_cost", result.initial_cost},
          {"final_cost", result.final_cost},
          {"covariance_condition", result.covariance_condition},
          {"message", result.message}};
}

std::string fit_report_text(const std::string& title, const fit::FitResult& result) {
  std::string out = "# " + title + "\n";
  for (const auto& [name, value] : result.params) {
    out += name + " = " + format_double(value);
    if (result.sigma.count(name)) {
      out += " +- " + format_double(result.sigma.at(name));
    }
    out += "\n";
  }
  out += "r_squared = " + format_double(result.r_squared) + "\n";
  out += "converged = " + std::string(result.converged ? "true" : "false") + "\n";
  out += "iterations = " + std::to_string(result.iterations) + "\n";
  if (result.degenerate) {
    out += "warning = degenerate fit (covariance condition " +
           format_double(result.covariance_condition) + " > 1e8)\n";
  }
  if (!result.message.empty()) {
    out += "message = " + result.message + "\n";
  }
  return out;
}

void print_fit_summary(const fit::FitResult& result) {
  for (const auto& [name, value] : result.params) {
    std::cout << name << " = " << format_double(value);
    if (result.sigma.count(name) && result.sigma.at(name) > 0.0) {
      std::cout << " +- " << format_double(result.sigma.at(name));
    }
    std::cout << "\n";
  }
  std::cout << "converged = " << (result.converged ? "true" : "false") << "\n";
}

/// Residual bootstrap: refit on yhat + resampled residuals, report the
/// spread of each parameter across draws.
json bootstrap_sigma(const fit::FitResult& base, std::span<const double> y, int draws,
                     std::uint64_t seed,
                     const std::function<fit::FitResult(const std::vector<double>&)>& refit) {
  std::vector<double> yhat(y.size());
  for (std::size_t k = 0; k < y.size(); ++k) {
    yhat[k] = y[k] - base.residuals[k];
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, y.size() - 1);
  std::map<std::string, std::vector<double>> samples;
  for (int d = 0; d < draws; ++d) {
    std::vector<double> y_star(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) {
      y_star[k] = yhat[k] + base.residuals[pick(rng)];
    }
    const fit::FitResult r = refit(y_star);
    if (!r.converged) {
      continue;
    }
    for (const auto& [name, value] : r.params) {
      samples[name].push_back(value);
    }
  }
  json out = json::object();
  for (const auto& [name, values] : samples) {
    if (values.size() < 2) {
      continue;
    }
    double mean = 0.0;
    for (const double v : values) {
      mean += v;
    }
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (const double v : values) {
      var += (v - mean) * (v - mean);
    }
    var /= static_cast<double>(values.size() - 1);
    out[name] = {{"sigma", std::sqrt(var)}, {"draws", values.size()}};
  }
  return out;
}

TraceFile load_input(const CommandArgs& args, RunContext& run) {
  if (!args.input_path) {
    throw IoError("this command needs an input file (--input PATH)");
  }
  const std::string content = read_file(*args.input_path);
  run.note_input(*args.input_path, content);
  return parse_trace_text(content, *args.input_path);
}

void require_seed_for_bootstrap(const CommandArgs& args) {
  if (args.bootstrap > 0 && !args.seed) {
    throw InputError("--bootstrap is stochastic and needs --seed");
  }
}

// ---- commands ----

void cmd_simulate_spectrum(const CommandArgs& args, const ExperimentConfig& config,
                           RunContext& run) {
  const double field_t = resolved_field(args, config);
  const double ts = resolved_spin_temperature(args, config);
  const auto ensemble = config.build_ensemble();
  const auto field = spin::FieldPoint::along(config.field_direction, field_t);
  const auto lines = spin::ensemble_transitions(ensemble, field, ts, config.drive_direction);
  const auto freq_axis =
      spectrum::linspace(config.sweep.freq_min, config.sweep.freq_max, config.sweep.freq_steps);
  const auto grid = spectrum::synthesize_absorption(lines, config.linewidth, field_t, freq_axis);

  std::vector<std::vector<double>> rows;
  rows.reserve(freq_axis.size());
  for (std::size_t j = 0; j < freq_axis.size(); ++j) {
    rows.push_back({field_t, freq_axis[j], grid.amplitude(0, static_cast<Eigen::Index>(j))});
  }
  run.write_records("spectrum", {"absorption spectrum at fixed field"},
                    {"field_T", "frequency_Hz", "amplitude"}, rows);

  json line_list = json::array();
  for (const auto& line : lines) {
    line_list.push_back({{"site", line.site_label},
                         {"frequency_Hz", line.frequency},
                         {"matrix_element_sq", line.matrix_element_sq},
                         {"population_weight", line.population_weight},
                         {"abundance", line.abundance}});
  }
  run.write_json("spectrum_lines.json", line_list);
}

void cmd_simulate_map(const CommandArgs& args, const ExperimentConfig& config, RunContext& run) {
  const double ts = resolved_spin_temperature(args, config);
  const auto ensemble = config.build_ensemble();
  const auto field_axis = spectrum::linspace(config.sweep.field_min, config.sweep.field_max,
                                             config.sweep.field_steps);
  const auto freq_axis =
      spectrum::linspace(config.sweep.freq_min, config.sweep.freq_max, config.sweep.freq_steps);
  const auto grid =
      spectrum::synthesize_field_map(ensemble, config.linewidth, field_axis, freq_axis, ts,
                                     config.field_direction, config.drive_direction);

  std::vector<std::vector<double>> rows;
  rows.reserve(field_axis.size() * freq_axis.size());
  for (std::size_t i = 0; i < field_axis.size(); ++i) {
    for (std::size_t j = 0; j < freq_axis.size(); ++j) {
      rows.push_back({field_axis[i], freq_axis[j],
                      grid.amplitude(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
    }
  }
  run.write_records("map", {"absorption map over field x frequency"},
                    {"field_T", "frequency_Hz", "amplitude"}, rows);
}

void cmd_simulate_hole(const CommandArgs& args, const ExperimentConfig& config, RunContext& run) {
  const double field_t = resolved_field(args, config);
  const std::string site = config.reference_site_label(config.hole.site);
  const double g_eff = config.site_g_eff(site);
  const double rate =
      dynamics::total_relaxation_rate(config.relaxation, g_eff, field_t,
                                      config.cryostat_temperature);

  // Bloch burn + recovery trace.
  dynamics::DriveParams drive = config.drive;
  if (args.burn_time_override) {
    drive.burn_duration = *args.burn_time_override;
    if (drive.burn_duration < 0.0) {
      throw InputError("--burn-time must be non-negative");
    }
  }
  const auto trace =
      dynamics::simulate_hole_burning(drive, rate, config.observe_duration, config.bloch_step);
  std::vector<std::vector<double>> trace_rows;
  trace_rows.reserve(trace.times.size());
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    trace_rows.push_back({trace.times[k], trace.hole_amplitude[k]});
  }
  run.write_records("burn_trace", {"hole amplitude from burn start through free decay"},
                    {"time_s", "amplitude"}, trace_rows);

  // The fittable saturation-recovery trace starts at burn end, time re-zeroed
  // (the measurement sequence probes the hole only after the pump stops).
  std::vector<std::vector<double>> recovery_rows;
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    if (trace.times[k] >= drive.burn_duration) {
      recovery_rows.push_back({trace.times[k] - drive.burn_duration, trace.hole_amplitude[k]});
    }
  }
  run.write_records("recovery", {"saturation recovery trace (t = 0 at burn end)"},
                    {"time_s", "amplitude"}, recovery_rows);

  // Hole profile evolution over the configured delay times.
  const double parent_fwhm = spectrum::linewidth_at(config.linewidth, field_t);
  spectrum::HoleProfileParams hole;
  hole.center = 0.0;
  hole.width = config.hole.width_hz.value_or(config.hole.relative_width * parent_fwhm);
  hole.depth = config.hole.depth;
  hole.gamma_sd = config.hole.gamma_sd;
  const double rate_inside = config.hole.rate_inside.value_or(rate);
  const double rate_outside = config.hole.rate_outside.value_or(2.0 * rate_inside);
  const double half_width = 0.5 * hole.width;
  const auto rate_profile = [&](double detuning) {
    return std::abs(detuning) <= half_width ? rate_inside : rate_outside;
  };
  const auto detuning_axis =
      spectrum::linspace(-0.5 * config.hole.span_factor * parent_fwhm,
                         0.5 * config.hole.span_factor * parent_fwhm, config.hole.points);

  std::vector<std::vector<double>> hole_rows;
  json refits = json::array();
  for (const double t : config.hole.times) {
    const auto evolved = spectrum::evolve_hole(hole, rate_profile, t, detuning_axis);
    for (std::size_t k = 0; k < evolved.detuning.size(); ++k) {
      hole_rows.push_back({evolved.detuning[k], evolved.depth[k], t});
    }
    refits.push_back({{"time_s", t},
                      {"refit_fwhm_Hz", evolved.refit_fwhm},
                      {"refit_depth", evolved.refit_depth},
                      {"refit_converged", evolved.refit_converged}});
  }
  run.write_records("hole_evolution", {"spectral hole profile vs delay time"},
                    {"detuning_Hz", "amplitude", "time_s"}, hole_rows);
  run.write_json("hole_refits.json",
                 {{"site", site},
                  {"g_eff", g_eff},
                  {"field_T", field_t},
                  {"parent_fwhm_Hz", parent_fwhm},
                  {"rate_inside_Hz", rate_inside},
                  {"rate_outside_Hz", rate_outside},
                  {"snapshots", refits}});

  // Relaxation-rate scan: the decay rates behind the trace, per temperature.
  const auto field_axis = spectrum::linspace(config.sweep.field_min, config.sweep.field_max,
                                             config.sweep.field_steps);
  std::vector<std::vector<double>> rate_rows;
  for (const double t_cryo : config.sweep.temperatures) {
    const double ts_eff = dynamics::effective_temperature(t_cryo, config.relaxation.t_min);
    for (const double b : field_axis) {
      const double r_ff = dynamics::flip_flop_rate(g_eff, b, ts_eff, config.relaxation.w_ff);
      const double r_d = dynamics::direct_rate(g_eff, b, ts_eff, config.relaxation.w_d);
      rate_rows.push_back({b, t_cryo, ts_eff, r_ff, r_d, r_ff + r_d});
    }
  }
  run.write_records("rates", {"relaxation-rate scan over field and temperature"},
                    {"B_T", "T_K", "Ts_K", "R_ff_Hz", "R_d_Hz", "R_total_Hz"}, rate_rows);
}

void cmd_fit_line(const CommandArgs& args, const ExperimentConfig& config, RunContext& run) {
  require_seed_for_bootstrap(args);
  const TraceFile input = load_input(args, run);
  const auto freq = input.values("frequency_Hz");
  const auto amp = input.values("amplitude");
  fit::FitResult result = fit::fit_lorentzian(freq, amp);

  json report = fit_report_json(result);
  if (args.bootstrap > 0 && result.converged) {
    report["bootstrap"] = bootstrap_sigma(
        result, amp, args.bootstrap, *args.seed,
        [&](const std::vector<double>& y) { return fit::fit_lorentzian(freq, y); });
  }
  run.write_text("fit_line_report.txt", fit_report_text("Lorentzian line fit", result));
  run.write_json("fit_line_report.json", report);
  print_fit_summary(result);
  (void)config;
}

void cmd_fit_recovery(const CommandArgs& args, const ExperimentConfig& config, RunContext& run) {
  require_seed_for_bootstrap(args);
  const TraceFile input = load_input(args, run);
  dynamics::RecoveryTrace trace;
  trace.times = input.values("time_s");
  trace.hole_amplitude = input.values("amplitude");
  fit::FitResult result = fit::fit_exponential_recovery(trace);

  json report = fit_report_json(result);
  if (args.bootstrap > 0 && result.converged) {
    report["bootstrap"] = bootstrap_sigma(
        result, trace.hole_amplitude, args.bootstrap, *args.seed,
        [&](const std::vector<double>& y) {
          dynamics::RecoveryTrace t2{trace.times, y};
          return fit::fit_exponential_recovery(t2);
        });
  }
  run.write_text("fit_recovery_report.txt",
                 fit_report_text("Exponential recovery fit", result));
  run.write_json("fit_recovery_report.json", report);
  print_fit_summary(result);
  (void)config;
}

void cmd_fit_relaxation(const CommandArgs& args, const ExperimentConfig& config, RunContext& run) {
  require_seed_for_bootstrap(args);
  const std::string mode_name = args.sweep_mode.value_or("field");
  fit::RelaxationSweep mode;
  if (mode_name == "field") {
    mode = fit::RelaxationSweep::Field;
  } else if (mode_name == "temperature") {
    mode = fit::RelaxationSweep::Temperature;
  } else {
    throw InputError("--sweep-mode must be 'field' or 'temperature', got '" + mode_name + "'");
  }

  const TraceFile input = load_input(args, run);
  const auto swept = input.values(mode == fit::RelaxationSweep::Field ? "B_T" : "T_K");
  const auto rate = input.values("R_total_Hz");
  const std::string site = config.reference_site_label(config.hole.site);
  const double g_eff = config.site_g_eff(site);
  const double fixed_field =
      mode == fit::RelaxationSweep::Temperature ? resolved_field(args, config) : 0.0;

  fit::FitResult result = fit::fit_relaxation_model(swept, rate, mode, g_eff, fixed_field);

  json report = fit_report_json(result);
  report["mode"] = mode_name;
  report["site"] = site;
  report["g_eff"] = g_eff;
  if (mode == fit::RelaxationSweep::Temperature) {
    report["fixed_field_T"] = fixed_field;
  }
  if (args.bootstrap > 0 && result.converged) {
    report["bootstrap"] = bootstrap_sigma(
        result, rate, args.bootstrap, *args.seed, [&](const std::vector<double>& y) {
          return fit::fit_relaxation_model(swept, y, mode, g_eff, fixed_field);
        });
  }
  run.write_text("fit_relaxation_report.txt",
                 fit_report_text("Relaxation model fit (" + mode_name + " sweep)", result));
  run.write_json("fit_relaxation_report.json", report);
  print_fit_summary(result);
}

void cmd_fit_temperature(const CommandArgs& args, const ExperimentConfig& config,
                         RunContext& run) {
  require_seed_for_bootstrap(args);
  const TraceFile input = load_input(args, run);
  const auto field = input.values("B_T");
  const auto area = input.values("area");
  const std::string site = config.reference_site_label(config.hole.site);
  const double g_eff = config.site_g_eff(site);

  fit::FitResult result =
      fit::fit_boltzmann_temperature(field, area, g_eff, config.fit.boltzmann_form);

  json report = fit_report_json(result);
  report["site"] = site;
  report["g_eff"] = g_eff;
  report["form"] = config.fit.boltzmann_form == fit::BoltzmannForm::Logistic
                       ? "logistic"
                       : "population-difference";
  if (args.bootstrap > 0 && result.converged) {
    report["bootstrap"] = bootstrap_sigma(
        result, area, args.bootstrap, *args.seed, [&](const std::vector<double>& y) {
          return fit::fit_boltzmann_temperature(field, y, g_eff, config.fit.boltzmann_form);
        });
  }
  run.write_text("fit_temperature_report.txt",
                 fit_report_text("Spin-temperature fit", result));
  run.write_json("fit_temperature_report.json", report);
  print_fit_summary(result);
}

void cmd_link_budget(const CommandArgs& args, const ExperimentConfig& config, RunContext& run) {
  const std::string site = config.reference_site_label(config.link.site);
  const double g_eff = config.site_g_eff(site);
  const auto result = dynamics::link_budget(config.link.budget, g_eff, config.link.rabi_convention);

  std::string text = "# Link budget\n";
  text += "acting_power_dbm = " + format_double(result.acting_power_dbm) + "\n";
  text += "acting_power_watts = " + format_double(result.acting_power_watts) + "\n";
  text += "b_ac_tesla = " + format_double(result.b_ac) + "\n";
  text += "rabi_hz = " + format_double(result.rabi) + "\n";
  text += "site = " + site + "\n";
  text += "g_eff = " + format_double(g_eff) + "\n";
  text += "rabi_convention = " + format_double(config.link.rabi_convention) + "\n";
  run.write_text("link_budget_report.txt", text);
  run.write_json("link_budget_report.json", {{"acting_power_dbm", result.acting_power_dbm},
                                             {"acting_power_watts", result.acting_power_watts},
                                             {"b_ac_tesla", result.b_ac},
                                             {"rabi_hz", result.rabi},
                                             {"site", site},
                                             {"g_eff", g_eff},
                                             {"rabi_convention", config.link.rabi_convention}});

  std::cout << "acting power: " << format_double(result.acting_power_dbm) << " dBm ("
            << format_double(result.acting_power_watts) << " W)\n";
  std::cout << "B_ac: " << format_double(result.b_ac) << " T\n";
  std::cout << "Rabi frequency: " << format_double(result.rabi) << " Hz (site " << site
            << ", g_eff " << format_double(g_eff) << ")\n";
  (void)args;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "simulate-spectrum", "simulate-map",   "simulate-hole",   "fit-line",
      "fit-recovery",      "fit-relaxation", "fit-temperature", "link-budget"};
  return names;
}

int run_command(const std::string& name, const CommandArgs& args,
                const ExperimentConfig& config) {
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    std::cerr << "unknown command '" << name << "'; available:";
    for (const auto& n : names) {
      std::cerr << " " << n;
    }
    std::cerr << "\n";
    return exit_usage;
  }
  if (args.format != "csv" && args.format != "json-records") {
    std::cerr << "unknown format '" << args.format << "' (use csv or json-records)\n";
    return exit_usage;
  }

  try {
    RunContext run(name, args, config);
    if (name == "simulate-spectrum") {
      cmd_simulate_spectrum(args, config, run);
    } else if (name == "simulate-map") {
      cmd_simulate_map(args, config, run);
    } else if (name == "simulate-hole") {
      cmd_simulate_hole(args, config, run);
    } else if (name == "fit-line") {
      cmd_fit_line(args, config, run);
    } else if (name == "fit-recovery") {
      cmd_fit_recovery(args, config, run);
    } else if (name == "fit-relaxation") {
      cmd_fit_relaxation(args, config, run);
    } else if (name == "fit-temperature") {
      cmd_fit_temperature(args, config, run);
    } else {
      cmd_link_budget(args, config, run);
    }
    run.finish();
    return exit_ok;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return exit_io;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return exit_input;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return exit_io;
  }
}

}  // namespace shb::io
