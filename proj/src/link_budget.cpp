#include "shb/link_budget.hpp"

#include <cmath>
#include <numeric>

#include "shb/constants.hpp"
#include "shb/errors.hpp"

namespace shb::dynamics {

double dbm_to_watts(double dbm) {
  return 1e-3 * std::pow(10.0, dbm / 10.0);
}

double watts_to_dbm(double watts) {
  if (!(watts > 0.0)) {
    throw InputError("watts_to_dbm: power must be positive");
  }
  return 10.0 * std::log10(watts / 1e-3);
}

double rabi_frequency(double g_eff, double b_ac_tesla, double xi) {
  if (g_eff < 0.0 || b_ac_tesla < 0.0 || xi <= 0.0) {
    throw InputError("rabi_frequency: g, field and convention factor must be non-negative");
  }
  return xi * g_eff * constants::mu_b_over_h * b_ac_tesla;
}

LinkBudgetResult link_budget(const LinkBudget& lb, double g_eff, double xi) {
  if (!(lb.kappa > 0.0)) {
    throw InputError("link_budget: kappa must be positive");
  }
  LinkBudgetResult out;
  out.acting_power_dbm = lb.source_power_dbm + lb.mode_coupling_db +
                         std::accumulate(lb.attenuation_stages_db.begin(),
                                         lb.attenuation_stages_db.end(), 0.0);
  out.acting_power_watts = dbm_to_watts(out.acting_power_dbm);
  out.b_ac = lb.kappa * std::sqrt(out.acting_power_watts);
  out.rabi = rabi_frequency(g_eff, out.b_ac, xi);
  return out;
}

}  // namespace shb::dynamics
