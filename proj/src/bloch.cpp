#include "shb/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "shb/errors.hpp"

namespace shb::dynamics {

namespace {

struct Derivative {
  double du, dv, dw;
};

Derivative bloch_rhs(const BlochState& s, double omega_rabi, double omega_det, double gamma2,
                     double r1, double w_eq) {
  return {omega_det * s.v - gamma2 * s.u,
          -omega_det * s.u + omega_rabi * s.w - gamma2 * s.v,
          -omega_rabi * s.v - r1 * (s.w - w_eq)};
}

}  // namespace

BlochState bloch_rk4_step(const BlochState& s, double rabi_hz, double detuning_hz, double gamma2,
                          double r1, double w_eq, double dt) {
  const double omega_rabi = 2.0 * std::numbers::pi * rabi_hz;
  const double omega_det = 2.0 * std::numbers::pi * detuning_hz;

  const Derivative k1 = bloch_rhs(s, omega_rabi, omega_det, gamma2, r1, w_eq);
  const BlochState s2{s.u + 0.5 * dt * k1.du, s.v + 0.5 * dt * k1.dv, s.w + 0.5 * dt * k1.dw};
  const Derivative k2 = bloch_rhs(s2, omega_rabi, omega_det, gamma2, r1, w_eq);
  const BlochState s3{s.u + 0.5 * dt * k2.du, s.v + 0.5 * dt * k2.dv, s.w + 0.5 * dt * k2.dw};
  const Derivative k3 = bloch_rhs(s3, omega_rabi, omega_det, gamma2, r1, w_eq);
  const BlochState s4{s.u + dt * k3.du, s.v + dt * k3.dv, s.w + dt * k3.dw};
  const Derivative k4 = bloch_rhs(s4, omega_rabi, omega_det, gamma2, r1, w_eq);

  return {s.u + dt / 6.0 * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du),
          s.v + dt / 6.0 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv),
          s.w + dt / 6.0 * (k1.dw + 2.0 * k2.dw + 2.0 * k3.dw + k4.dw)};
}

RecoveryTrace simulate_hole_burning(const DriveParams& drive, double relaxation_rate,
                                    double observe_duration, double step) {
  if (drive.rabi < 0.0 || drive.burn_duration < 0.0 || drive.transverse_rate < 0.0 ||
      relaxation_rate < 0.0 || observe_duration < 0.0) {
    throw InputError("simulate_hole_burning: negative rate or duration");
  }
  const double fastest = std::max({drive.rabi, drive.transverse_rate, relaxation_rate});
  if (!(step > 0.0) || (fastest > 0.0 && step > 0.1 / fastest)) {
    throw InputError(
        "simulate_hole_burning: step must satisfy 0 < step <= "
        "0.1/max(rabi, transverse_rate, relaxation_rate)");
  }

  const long burn_steps = std::lround(drive.burn_duration / step);
  const long decay_steps = std::lround(observe_duration / step);
  const double w_eq = 1.0;

  RecoveryTrace trace;
  trace.times.reserve(burn_steps + decay_steps + 1);
  trace.hole_amplitude.reserve(burn_steps + decay_steps + 1);

  BlochState state;  // starts at thermal equilibrium (0, 0, w_eq)
  state.w = w_eq;
  auto record = [&](long k) {
    trace.times.push_back(k * step);
    trace.hole_amplitude.push_back(w_eq - state.w);
  };

  record(0);
  for (long k = 0; k < burn_steps; ++k) {
    state = bloch_rk4_step(state, drive.rabi, drive.detuning, drive.transverse_rate,
                           relaxation_rate, w_eq, step);
    record(k + 1);
  }
  for (long k = 0; k < decay_steps; ++k) {
    state = bloch_rk4_step(state, 0.0, drive.detuning, drive.transverse_rate, relaxation_rate,
                           w_eq, step);
    record(burn_steps + k + 1);
  }
  return trace;
}

}  // namespace shb::dynamics
