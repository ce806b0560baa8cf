#pragma once

namespace shb::dynamics {

/// Coefficients of the two relaxation channels active below 1 K plus the
/// minimum spin temperature the ensemble can reach.
struct RelaxationParams {
  double w_ff = 0.0;   // Hz, flip-flop coefficient
  double w_d = 0.0;    // Hz * T^-5, direct-process coefficient
  double t_min = 0.0;  // K
};

/// w_ff * tanh^2(g mu_B B / (2 k_B Ts)). Throws InputError for Ts <= 0 or B < 0.
double flip_flop_rate(double g_eff, double field_tesla, double spin_temperature, double w_ff);

/// w_d * g^5 B^5 * coth(g mu_B B / (2 k_B Ts)); the B -> 0 limit value 0 is
/// returned for B = 0. Throws InputError for Ts <= 0 or B < 0.
double direct_rate(double g_eff, double field_tesla, double spin_temperature, double w_d);

/// Spin temperature vs cryostat temperature: t_min * sqrt(1 + (T/t_min)^2).
double effective_temperature(double cryostat_temperature, double t_min);

/// Flip-flop plus direct rate, evaluated at the effective spin temperature.
double total_relaxation_rate(const RelaxationParams& params, double g_eff, double field_tesla,
                             double cryostat_temperature);

/// Field below which the ensemble is not polarized to the ground state:
/// B_pol = 2 (T/K) * Ts.
double polarization_field(double spin_temperature);

}  // namespace shb::dynamics
