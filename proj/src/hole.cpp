#include "shb/hole.hpp"

#include <cmath>

#include "shb/errors.hpp"
#include "shb/fit_models.hpp"

namespace shb::spectrum {

HoledProfile apply_spectral_hole(const LorentzianParams& parent, const HoleProfileParams& hole,
                                 const std::vector<double>& frequency_axis) {
  if (!(parent.fwhm > 0.0) || !(hole.width > 0.0)) {
    throw InputError("apply_spectral_hole: widths must be positive");
  }
  if (hole.depth < 0.0 || hole.depth > 1.0) {
    throw InputError("apply_spectral_hole: depth must lie in [0, 1]");
  }

  HoledProfile out;
  out.frequency = frequency_axis;
  out.amplitude.resize(frequency_axis.size());

  // The kernel amplitude is depth x the parent's peak, so a centered hole of
  // depth 1 burns to full transparency; off-center holes deeper than the
  // local absorption clip at zero and bump the counter.
  const double kernel_amp = hole.depth * parent.amplitude;

  for (std::size_t k = 0; k < frequency_axis.size(); ++k) {
    const double f = frequency_axis[k];
    const double value = lorentzian(f - parent.center, parent.fwhm, parent.amplitude) -
                         lorentzian(f - hole.center, hole.width, kernel_amp);
    if (value < 0.0) {
      ++out.clipped;
      out.amplitude[k] = 0.0;
    } else {
      out.amplitude[k] = value;
    }
  }
  return out;
}

EvolvedHole evolve_hole(const HoleProfileParams& hole,
                        const std::function<double(double)>& rate_profile, double t_seconds,
                        const std::vector<double>& detuning_axis) {
  if (t_seconds < 0.0) {
    throw InputError("evolve_hole: time must be non-negative");
  }
  if (!(hole.width > 0.0)) {
    throw InputError("evolve_hole: hole width must be positive");
  }

  EvolvedHole out;
  out.detuning = detuning_axis;
  out.depth.resize(detuning_axis.size());
  for (std::size_t k = 0; k < detuning_axis.size(); ++k) {
    const double r = rate_profile(detuning_axis[k]);
    if (r < 0.0) {
      throw InputError("evolve_hole: rate profile must be non-negative");
    }
    out.depth[k] =
        lorentzian(detuning_axis[k], hole.width, hole.depth) * std::exp(-r * t_seconds);
  }

  if (detuning_axis.size() >= 5) {
    const fit::FitResult refit = fit::fit_lorentzian(out.detuning, out.depth);
    out.refit_converged = refit.converged;
    if (refit.converged) {
      out.refit_fwhm = refit.params.at("fwhm");
      out.refit_depth = refit.params.at("amplitude") + refit.params.at("offset");
    }
  }
  return out;
}

}  // namespace shb::spectrum
