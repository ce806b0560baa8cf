#pragma once

#include <vector>

namespace shb::dynamics {

/// Resonant-frame drive parameters. `rabi` and `detuning` are cycle
/// frequencies in Hz (the precession terms carry the 2*pi); `transverse_rate`
/// is the phenomenological Gamma_2 decay rate in 1/s.
struct DriveParams {
  double rabi = 0.0;
  double detuning = 0.0;
  double burn_duration = 0.0;
  double transverse_rate = 0.0;
};

struct BlochState {
  double u = 0.0;
  double v = 0.0;
  double w = 1.0;
};

/// One RK4 step of
///   du/dt =  2*pi*detuning * v - gamma2 * u
///   dv/dt = -2*pi*detuning * u + 2*pi*rabi * w - gamma2 * v
///   dw/dt = -2*pi*rabi * v - r1 * (w - w_eq)
BlochState bloch_rk4_step(const BlochState& s, double rabi_hz, double detuning_hz, double gamma2,
                          double r1, double w_eq, double dt);

/// Saturation-recovery trace: hole amplitude (equilibrium population
/// difference minus instantaneous) sampled every `step` from burn start
/// through `observe_duration` of free decay.
struct RecoveryTrace {
  std::vector<double> times;           // s, ascending, from burn start
  std::vector<double> hole_amplitude;  // dimensionless, >= 0 up to integrator noise
};

/// Integrates the Bloch equations under resonant-frame drive for
/// drive.burn_duration, then with the drive off for observe_duration.
/// Durations are rounded to whole steps. Throws InputError unless
/// 0 < step <= 0.1 / max(rabi, transverse_rate, relaxation_rate).
RecoveryTrace simulate_hole_burning(const DriveParams& drive, double relaxation_rate,
                                    double observe_duration, double step);

}  // namespace shb::dynamics
