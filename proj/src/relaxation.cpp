#include "shb/relaxation.hpp"

#include <cmath>

#include "shb/constants.hpp"
#include "shb/errors.hpp"

namespace shb::dynamics {

namespace {

/// Zeeman splitting over thermal energy: g mu_B B / (2 k_B Ts).
double thermal_argument(double g_eff, double field_tesla, double spin_temperature) {
  if (!(spin_temperature > 0.0)) {
    throw InputError("relaxation: spin temperature must be positive");
  }
  if (field_tesla < 0.0) {
    throw InputError("relaxation: field must be non-negative");
  }
  return g_eff * constants::bohr_magneton * field_tesla /
         (2.0 * constants::k_boltzmann * spin_temperature);
}

}  // namespace

double flip_flop_rate(double g_eff, double field_tesla, double spin_temperature, double w_ff) {
  const double t = std::tanh(thermal_argument(g_eff, field_tesla, spin_temperature));
  return w_ff * t * t;
}

double direct_rate(double g_eff, double field_tesla, double spin_temperature, double w_d) {
  const double x = thermal_argument(g_eff, field_tesla, spin_temperature);
  if (x == 0.0) {
    // coth diverges but g^5 B^5 wins: the product goes to zero with B.
    return 0.0;
  }
  const double gb = g_eff * field_tesla;
  return w_d * std::pow(gb, 5) / std::tanh(x);
}

double effective_temperature(double cryostat_temperature, double t_min) {
  return std::hypot(t_min, cryostat_temperature);
}

double total_relaxation_rate(const RelaxationParams& params, double g_eff, double field_tesla,
                             double cryostat_temperature) {
  const double ts = effective_temperature(cryostat_temperature, params.t_min);
  return flip_flop_rate(g_eff, field_tesla, ts, params.w_ff) +
         direct_rate(g_eff, field_tesla, ts, params.w_d);
}

double polarization_field(double spin_temperature) {
  return 2.0 * spin_temperature;
}

}  // namespace shb::dynamics
