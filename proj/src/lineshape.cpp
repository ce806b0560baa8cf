#include "shb/lineshape.hpp"

#include <cmath>

#include "shb/errors.hpp"

namespace shb::spectrum {

double linewidth_at(const LinewidthModel& model, double field_tesla) {
  if (field_tesla < 0.0) {
    throw InputError("linewidth_at: field must be non-negative");
  }
  return model.gamma0 + model.delta_gamma * field_tesla;
}

double lorentzian(double delta_hz, double fwhm_hz, double amplitude) {
  const double half = 0.5 * fwhm_hz;
  const double half_sq = half * half;
  return amplitude * half_sq / (delta_hz * delta_hz + half_sq);
}

}  // namespace shb::spectrum
