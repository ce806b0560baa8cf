#pragma once

#include <span>

#include "shb/bloch.hpp"
#include "shb/nlls.hpp"

namespace shb::fit {

/// offset + Lorentzian(center, fwhm, amplitude). Initial guesses come from
/// the argmax and the half-maximum crossing span. Data without a peak
/// (max/median < 1.2) returns a non-converged result instead of fitting.
/// Requires at least 5 points.
FitResult fit_lorentzian(std::span<const double> frequency, std::span<const double> amplitude);

/// amplitude * exp(-rate * t) + offset. Reports `tau` = 1/rate with the
/// propagated uncertainty. Non-decaying traces return non-converged.
/// Requires at least 6 points with ascending times.
FitResult fit_exponential_recovery(const dynamics::RecoveryTrace& trace);

/// Weighted straight-line fit of Gamma_FWHM(B) = gamma0 + delta_gamma * B.
/// Needs at least two points at two distinct fields; a single field value is
/// an input error.
FitResult fit_linewidth_law(std::span<const double> field_tesla, std::span<const double> fwhm_hz,
                            std::span<const double> weights = {});

/// Absorption-area vs field models for the spin-temperature extraction,
/// x = g mu_B B / (k_B Ts):
///   Logistic            area = scale * exp(x)/(1 + exp(x))
///   PopulationDifference area = scale * tanh(x/2)
enum class BoltzmannForm { Logistic, PopulationDifference };

/// Requires >= 4 points spanning a factor >= 2 in field. Areas that carry no
/// temperature information (no improvement over a constant) come back
/// non-converged.
FitResult fit_boltzmann_temperature(std::span<const double> field_tesla,
                                    std::span<const double> area, double g_eff,
                                    BoltzmannForm form = BoltzmannForm::Logistic);

enum class RelaxationSweep { Field, Temperature };

/// Total rate R = w_ff tanh^2(u) + w_d g^5 B^5 coth(u), u = g mu_B B/(2 k_B Ts).
/// Field mode sweeps B with the spin temperature as the third free parameter;
/// temperature mode sweeps the cryostat temperature at `fixed_field_tesla`
/// with Ts = sqrt(t_min^2 + T^2) and t_min free. Requires >= 5 points. A
/// covariance condition number above 1e8 sets the `degenerate` warning flag.
FitResult fit_relaxation_model(std::span<const double> swept, std::span<const double> rate_hz,
                               RelaxationSweep mode, double g_eff,
                               double fixed_field_tesla = 0.0);

}  // namespace shb::fit
