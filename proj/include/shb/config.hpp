#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "shb/bloch.hpp"
#include "shb/fit_models.hpp"
#include "shb/lineshape.hpp"
#include "shb/link_budget.hpp"
#include "shb/relaxation.hpp"
#include "shb/spin_system.hpp"

namespace shb::io {

/// Declarative description of one site, as written in the config file.
/// Effective-g mode is a scalar g with I = 0; full-tensor mode carries the
/// 3x3 tensors as principal values plus Euler frames.
struct SiteSpec {
  std::string label;
  bool full_tensor = false;
  double g_value = 2.0;
  Eigen::Vector3d g_principal = Eigen::Vector3d::Zero();
  Eigen::Vector3d g_euler_deg = Eigen::Vector3d::Zero();
  Eigen::Vector3d a_principal = Eigen::Vector3d::Zero();
  Eigen::Vector3d a_euler_deg = Eigen::Vector3d::Zero();
  Eigen::Vector3d q_principal = Eigen::Vector3d::Zero();
  Eigen::Vector3d q_euler_deg = Eigen::Vector3d::Zero();
  double electron_spin = 0.5;
  double nuclear_spin = 0.0;
  double misalign_b_d2_deg = 0.0;
  double misalign_d1_b_deg = 0.0;
  std::optional<double> abundance;  // omitted everywhere -> equal split
  std::string isotope;

  spin::SpinSystem build(double resolved_abundance) const;
};

struct SweepConfig {
  double field_min = 0.070;  // T
  double field_max = 0.300;
  int field_steps = 24;
  double freq_min = 1e9;  // Hz
  double freq_max = 8e9;
  int freq_steps = 2801;
  double field = 0.185;  // single-field commands
  std::vector<double> temperatures = {0.020, 0.050, 0.100, 0.200, 0.400};  // K
};

struct HoleConfig {
  double depth = 0.075;
  double relative_width = 0.65;       // fraction of the parent FWHM
  std::optional<double> width_hz;     // absolute width, overrides relative
  double gamma_sd = 1e3;              // Hz
  std::optional<double> rate_inside;  // Hz; default: total relaxation rate
  std::optional<double> rate_outside; // Hz; default: 2x inside
  std::vector<double> times = {0.0, 5.0, 10.0, 20.0, 40.0};  // s
  double span_factor = 4.0;  // detuning span in parent FWHM units
  int points = 801;
  std::string site;  // reference site label; default: first site
};

struct LinkConfig {
  dynamics::LinkBudget budget{15.0, {-55.0, -40.0}, -20.0, 1.65e-3};
  double rabi_convention = dynamics::default_rabi_convention;
  std::string site;  // g-factor source for the Rabi conversion
};

struct FitConfig {
  fit::BoltzmannForm boltzmann_form = fit::BoltzmannForm::Logistic;
};

struct ExperimentConfig {
  std::vector<SiteSpec> sites;  // sorted by label
  spectrum::LinewidthModel linewidth{17e6, 0.21e9};
  double spin_temperature = 0.070;      // K, for population weights
  double cryostat_temperature = 0.011;  // K
  dynamics::RelaxationParams relaxation{0.050, 23.0, 0.070};
  dynamics::DriveParams drive{3.9, 0.0, 3.0, 0.5};
  double observe_duration = 60.0;  // s
  double bloch_step = 0.005;       // s
  Eigen::Vector3d field_direction{0.0, 1.0, 1.0};  // normalized at parse
  Eigen::Vector3d drive_direction{1.0, 0.0, 0.0};
  SweepConfig sweep;
  HoleConfig hole;
  LinkConfig link;
  FitConfig fit;
  std::string output_dir = ".";

  std::vector<spin::SpinSystem> build_ensemble() const;
  const SiteSpec& site(const std::string& label) const;
  std::string reference_site_label(const std::string& requested = "") const;
  /// Effective g of a site along the configured field direction.
  double site_g_eff(const std::string& label) const;
};

/// Parses and fully validates a key-value config document. Unknown sections
/// or keys are rejected; missing required keys are reported by name;
/// dimensioned keys demand unit suffixes.
ExperimentConfig parse_config(const std::string& text);

/// Canonical serialization: sections and keys in fixed order, values in
/// canonical units at 17 significant digits. parse(serialize(parse(t)))
/// equals parse(t).
std::string serialize_config(const ExperimentConfig& config);

}  // namespace shb::io
