#pragma once

#include <functional>
#include <vector>

#include "shb/lineshape.hpp"
#include "shb/nlls.hpp"

namespace shb::spectrum {

/// A spectral hole carved into a parent absorption line. `depth` is the
/// fraction of the parent peak removed at the hole center; `gamma_sd` is the
/// spectral-diffusion floor and enters only as a recorded parameter.
struct HoleProfileParams {
  double center = 0.0;    // Hz, absolute
  double width = 0.0;     // Hz, FWHM of the hole kernel
  double depth = 0.0;     // in [0, 1]
  double gamma_sd = 0.0;  // Hz
};

/// Parent line minus a Lorentzian kernel of amplitude depth * parent peak,
/// clipped at zero. `clipped` counts grid points that went negative before
/// clipping; a nonzero count signals parameter misuse, not an error.
struct HoledProfile {
  std::vector<double> frequency;  // Hz, the input grid
  std::vector<double> amplitude;
  int clipped = 0;
};

HoledProfile apply_spectral_hole(const LorentzianParams& parent, const HoleProfileParams& hole,
                                 const std::vector<double>& frequency_axis);

/// Hole dip at time t on a detuning grid (Hz relative to the hole center):
/// depth(delta, t) = depth * L(delta; width) * exp(-R(delta) t), with the
/// refitted Lorentzian width and depth reported alongside.
struct EvolvedHole {
  std::vector<double> detuning;  // Hz
  std::vector<double> depth;
  double refit_fwhm = 0.0;
  double refit_depth = 0.0;
  bool refit_converged = false;
};

/// `rate_profile` maps detuning to a non-negative decay rate in Hz; a
/// negative rate anywhere on the grid throws InputError, as does t < 0.
EvolvedHole evolve_hole(const HoleProfileParams& hole,
                        const std::function<double(double)>& rate_profile, double t_seconds,
                        const std::vector<double>& detuning_axis);

}  // namespace shb::spectrum
