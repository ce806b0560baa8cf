#pragma once

#include <vector>

namespace shb::dynamics {

/// Gain/attenuation chain from the source to the field at the spins.
/// `kappa` converts the acting power to the RMS microwave field amplitude,
/// B_ac = kappa * sqrt(P).
struct LinkBudget {
  double source_power_dbm = 0.0;
  std::vector<double> attenuation_stages_db;  // negative values
  double mode_coupling_db = 0.0;
  double kappa = 0.0;  // tesla per sqrt(watt)
};

struct LinkBudgetResult {
  double acting_power_dbm = 0.0;
  double acting_power_watts = 0.0;
  double b_ac = 0.0;  // tesla, RMS
  double rabi = 0.0;  // Hz
};

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

/// Rabi frequency xi * g * (mu_B/h) * B_ac. The convention factor xi absorbs
/// the rotating-wave treatment of the drive; the default 1/2 halves a linear
/// drive of the given RMS amplitude.
inline constexpr double default_rabi_convention = 0.5;

double rabi_frequency(double g_eff, double b_ac_tesla, double xi = default_rabi_convention);

/// Acting power = source + sum(stages) + mode coupling, then the field and
/// Rabi frequency that power produces at the spins.
LinkBudgetResult link_budget(const LinkBudget& lb, double g_eff,
                             double xi = default_rabi_convention);

}  // namespace shb::dynamics
