#pragma once

namespace shb::spectrum {

/// Field-dependent inhomogeneous FWHM: Gamma(B) = gamma0 + delta_gamma * B.
struct LinewidthModel {
  double gamma0 = 0.0;       // Hz, zero-field FWHM
  double delta_gamma = 0.0;  // Hz per tesla
};

/// Throws InputError for B < 0.
double linewidth_at(const LinewidthModel& model, double field_tesla);

/// A * (G/2)^2 / (delta^2 + (G/2)^2); peak value A at delta = 0, half maximum
/// at |delta| = fwhm/2.
double lorentzian(double delta_hz, double fwhm_hz, double amplitude);

struct LorentzianParams {
  double center = 0.0;     // Hz
  double fwhm = 0.0;       // Hz
  double amplitude = 1.0;  // arbitrary units
};

}  // namespace shb::spectrum
