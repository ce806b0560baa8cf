#include "shb/fit_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <vector>

#include "shb/constants.hpp"
#include "shb/errors.hpp"
#include "shb/lineshape.hpp"
#include "shb/relaxation.hpp"

namespace shb::fit {

namespace {

double median_of(std::span<const double> v) {
  std::vector<double> tmp(v.begin(), v.end());
  const std::size_t mid = tmp.size() / 2;
  std::nth_element(tmp.begin(), tmp.begin() + mid, tmp.end());
  return tmp[mid];
}

FitResult not_converged(std::string message) {
  FitResult out;
  out.converged = false;
  out.message = std::move(message);
  return out;
}

/// Lowest-final-cost result over a deterministic list of initial guesses;
/// converged results win over non-converged ones at any cost.
FitResult best_of_starts(const ModelSpec& base, std::span<const double> x,
                         std::span<const double> y,
                         const std::vector<std::vector<double>>& starts) {
  FitResult best;
  bool have = false;
  for (const auto& init : starts) {
    ModelSpec m = base;
    for (std::size_t i = 0; i < init.size(); ++i) {
      m.params[i].init = init[i];
    }
    FitResult r = nlls_fit(m, x, y);
    const bool better = !have || (r.converged && !best.converged) ||
                        (r.converged == best.converged && r.final_cost < best.final_cost);
    if (better) {
      best = std::move(r);
      have = true;
    }
  }
  return best;
}

}  // namespace

FitResult fit_lorentzian(std::span<const double> frequency, std::span<const double> amplitude) {
  if (frequency.size() != amplitude.size()) {
    throw InputError("fit_lorentzian: frequency and amplitude lengths differ");
  }
  if (frequency.size() < 5) {
    throw InputError("fit_lorentzian: need at least 5 points");
  }

  const auto max_it = std::max_element(amplitude.begin(), amplitude.end());
  const double peak = *max_it;
  const double med = median_of(amplitude);
  if (peak <= 0.0 || (med > 0.0 && peak / med < 1.2)) {
    return not_converged("no peak above the baseline (max/median < 1.2)");
  }

  const std::size_t peak_idx = static_cast<std::size_t>(max_it - amplitude.begin());
  const double offset0 = *std::min_element(amplitude.begin(), amplitude.end());
  const double amp0 = peak - offset0;
  const double half = offset0 + 0.5 * amp0;

  // Half-maximum crossing span around the peak for the width guess.
  std::size_t left = peak_idx, right = peak_idx;
  while (left > 0 && amplitude[left - 1] >= half) {
    --left;
  }
  while (right + 1 < amplitude.size() && amplitude[right + 1] >= half) {
    ++right;
  }
  const double span = std::abs(frequency[right] - frequency[left]);
  const double axis_span = std::abs(frequency.back() - frequency.front());
  const double fwhm0 = span > 0.0 ? span : std::max(axis_span / 10.0, 1e-12);

  ModelSpec model;
  model.id = "lorentzian";
  model.params = {{"center", frequency[peak_idx]},
                  {"fwhm", fwhm0, 0.0, std::numeric_limits<double>::infinity(), true},
                  {"amplitude", std::max(amp0, 1e-12 * peak), 0.0,
                   std::numeric_limits<double>::infinity(), true},
                  {"offset", offset0}};
  model.func = [](double x, std::span<const double> p) {
    return p[3] + spectrum::lorentzian(x - p[0], p[1], p[2]);
  };
  return nlls_fit(model, frequency, amplitude);
}

FitResult fit_exponential_recovery(const dynamics::RecoveryTrace& trace) {
  const auto& t = trace.times;
  const auto& y = trace.hole_amplitude;
  if (t.size() != y.size()) {
    throw InputError("fit_exponential_recovery: times and amplitudes lengths differ");
  }
  if (t.size() < 6) {
    throw InputError("fit_exponential_recovery: need at least 6 points");
  }
  if (!std::is_sorted(t.begin(), t.end())) {
    throw InputError("fit_exponential_recovery: times must be ascending");
  }

  // A decaying trace has its early mean above its late mean.
  const std::size_t third = std::max<std::size_t>(t.size() / 3, 1);
  double head = 0.0, tail = 0.0;
  for (std::size_t k = 0; k < third; ++k) {
    head += y[k];
    tail += y[y.size() - 1 - k];
  }
  if (!(head > tail)) {
    return not_converged("trace does not decay");
  }

  const double offset0 = y.back();
  const double amp0 = std::max(y.front() - offset0, 1e-12 * std::abs(y.front()) + 1e-300);
  // Half-life guess: first time the excess drops below half its initial value.
  double rate0 = 1.0 / std::max(t.back() - t.front(), 1e-12);
  for (std::size_t k = 1; k < t.size(); ++k) {
    if (y[k] - offset0 <= 0.5 * amp0 && t[k] > t.front()) {
      rate0 = std::numbers::ln2_v<double> / (t[k] - t.front());
      break;
    }
  }

  ModelSpec model;
  model.id = "exponential_recovery";
  model.params = {{"amplitude", amp0, 0.0, std::numeric_limits<double>::infinity(), true},
                  {"rate", rate0, 0.0, std::numeric_limits<double>::infinity(), true},
                  {"offset", offset0}};
  const double t0 = t.front();
  model.func = [t0](double x, std::span<const double> p) {
    return p[0] * std::exp(-p[1] * (x - t0)) + p[2];
  };
  FitResult out = nlls_fit(model, t, y);

  if (out.params.count("rate") && out.params["rate"] > 0.0) {
    const double rate = out.params["rate"];
    out.params["tau"] = 1.0 / rate;
    out.sigma["tau"] = out.sigma["rate"] / (rate * rate);
  }
  return out;
}

FitResult fit_linewidth_law(std::span<const double> field_tesla, std::span<const double> fwhm_hz,
                            std::span<const double> weights) {
  if (field_tesla.size() != fwhm_hz.size()) {
    throw InputError("fit_linewidth_law: field and width lengths differ");
  }
  if (!weights.empty() && weights.size() != field_tesla.size()) {
    throw InputError("fit_linewidth_law: weights length differs from data length");
  }
  const std::set<double> distinct(field_tesla.begin(), field_tesla.end());
  if (field_tesla.size() < 2 || distinct.size() < 2) {
    throw InputError("fit_linewidth_law: need at least two distinct field values");
  }

  // Closed-form weighted least squares for Gamma = gamma0 + delta_gamma * B.
  const std::size_t n = field_tesla.size();
  double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double w = weights.empty() ? 1.0 : weights[k];
    const double w2 = w * w;
    sw += w2;
    sx += w2 * field_tesla[k];
    sy += w2 * fwhm_hz[k];
    sxx += w2 * field_tesla[k] * field_tesla[k];
    sxy += w2 * field_tesla[k] * fwhm_hz[k];
  }
  const double det = sw * sxx - sx * sx;
  if (!(det > 0.0)) {
    throw InputError("fit_linewidth_law: degenerate field values");
  }
  const double slope = (sw * sxy - sx * sy) / det;
  const double intercept = (sy * sxx - sx * sxy) / det;

  FitResult out;
  out.params["gamma0"] = intercept;
  out.params["delta_gamma"] = slope;
  out.converged = true;
  out.iterations = 0;

  double sse = 0.0, ss_tot = 0.0;
  const double ymean = sy / sw;
  out.residuals.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = weights.empty() ? 1.0 : weights[k];
    const double r = w * (fwhm_hz[k] - (intercept + slope * field_tesla[k]));
    out.residuals[k] = r;
    sse += r * r;
    const double d = w * (fwhm_hz[k] - ymean);
    ss_tot += d * d;
  }
  out.initial_cost = sse;
  out.final_cost = sse;
  out.r_squared = ss_tot > 0.0 ? 1.0 - sse / ss_tot : 1.0;

  const double variance = n > 2 ? sse / static_cast<double>(n - 2) : 0.0;
  Eigen::Matrix2d cov;
  cov << sxx, -sx, -sx, sw;
  cov *= variance / det;
  out.covariance = cov;
  out.sigma["gamma0"] = std::sqrt(std::max(cov(0, 0), 0.0));
  out.sigma["delta_gamma"] = std::sqrt(std::max(cov(1, 1), 0.0));

  Eigen::Matrix2d normal;
  normal << sw, sx, sx, sxx;
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(normal);
  out.covariance_condition = es.eigenvalues().minCoeff() > 0.0
                                 ? es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff()
                                 : std::numeric_limits<double>::infinity();
  out.degenerate = out.covariance_condition > 1e8;
  return out;
}

FitResult fit_boltzmann_temperature(std::span<const double> field_tesla,
                                    std::span<const double> area, double g_eff,
                                    BoltzmannForm form) {
  if (field_tesla.size() != area.size()) {
    throw InputError("fit_boltzmann_temperature: field and area lengths differ");
  }
  if (field_tesla.size() < 4) {
    throw InputError("fit_boltzmann_temperature: need at least 4 points");
  }
  const auto [min_it, max_it] = std::minmax_element(field_tesla.begin(), field_tesla.end());
  if (*min_it < 0.0) {
    throw InputError("fit_boltzmann_temperature: fields must be non-negative");
  }
  if (*min_it > 0.0 && *max_it / *min_it < 2.0) {
    throw InputError("fit_boltzmann_temperature: fields must span a factor of 2");
  }
  if (!(g_eff > 0.0)) {
    throw InputError("fit_boltzmann_temperature: g_eff must be positive");
  }

  const double zeeman_scale = g_eff * constants::bohr_magneton / constants::k_boltzmann;  // x = this*B/Ts
  const bool logistic = form == BoltzmannForm::Logistic;
  ModelSpec model;
  model.id = logistic ? "boltzmann_logistic" : "boltzmann_population_difference";
  model.fixed["g_eff"] = g_eff;
  model.params = {{"ts", 0.1, 0.0, std::numeric_limits<double>::infinity(), true},
                  {"scale", 1.0, 0.0, std::numeric_limits<double>::infinity(), true}};
  model.func = [zeeman_scale, logistic](double b, std::span<const double> p) {
    const double x = zeeman_scale * b / p[0];
    if (logistic) {
      // exp(x)/(1+exp(x)) evaluated as 1/(1+exp(-x)) to avoid overflow
      return p[1] / (1.0 + std::exp(-x));
    }
    return p[1] * std::tanh(0.5 * x);
  };

  // Deterministic multistart over plausible spin temperatures; the scale
  // guess rescales the max area by the shape value at the largest field.
  const double area_max = *std::max_element(area.begin(), area.end());
  std::vector<std::vector<double>> starts;
  for (const double ts0 : {0.01, 0.03, 0.08, 0.2, 0.5, 2.0}) {
    const double x_max = zeeman_scale * *max_it / ts0;
    const double shape = logistic ? 1.0 / (1.0 + std::exp(-x_max)) : std::tanh(0.5 * x_max);
    starts.push_back({ts0, std::max(area_max / std::max(shape, 1e-3), 1e-300)});
  }
  FitResult out = best_of_starts(model, field_tesla, area, starts);

  // Flat areas leave the temperature unbounded above: flag when the fit does
  // not beat a constant model.
  double mean = 0.0;
  for (const double a : area) {
    mean += a;
  }
  mean /= static_cast<double>(area.size());
  double sse_const = 0.0;
  for (const double a : area) {
    sse_const += (a - mean) * (a - mean);
  }
  if (out.final_cost > 0.99 * sse_const || out.params["ts"] > 100.0) {
    out.converged = false;
    out.message = "areas carry no temperature information (flat within noise)";
  }
  return out;
}

FitResult fit_relaxation_model(std::span<const double> swept, std::span<const double> rate_hz,
                               RelaxationSweep mode, double g_eff, double fixed_field_tesla) {
  if (swept.size() != rate_hz.size()) {
    throw InputError("fit_relaxation_model: swept and rate lengths differ");
  }
  if (swept.size() < 5) {
    throw InputError("fit_relaxation_model: need at least 5 points");
  }
  if (!(g_eff > 0.0)) {
    throw InputError("fit_relaxation_model: g_eff must be positive");
  }
  const bool field_mode = mode == RelaxationSweep::Field;
  if (!field_mode && !(fixed_field_tesla > 0.0)) {
    throw InputError("fit_relaxation_model: temperature mode needs a positive fixed field");
  }

  ModelSpec model;
  model.fixed["g_eff"] = g_eff;
  const auto inf = std::numeric_limits<double>::infinity();
  if (field_mode) {
    model.id = "relaxation_vs_field";
    model.params = {{"w_ff", 0.05, 0.0, inf, true},
                    {"w_d", 20.0, 0.0, inf, true},
                    {"ts", 0.07, 0.0, inf, true}};
    model.func = [g_eff](double b, std::span<const double> p) {
      return dynamics::flip_flop_rate(g_eff, b, p[2], p[0]) +
             dynamics::direct_rate(g_eff, b, p[2], p[1]);
    };
  } else {
    model.id = "relaxation_vs_temperature";
    model.fixed["field"] = fixed_field_tesla;
    model.params = {{"w_ff", 0.05, 0.0, inf, true},
                    {"w_d", 20.0, 0.0, inf, true},
                    {"t_min", 0.07, 0.0, inf, true}};
    const double b = fixed_field_tesla;
    model.func = [g_eff, b](double t_cryostat, std::span<const double> p) {
      const double ts = dynamics::effective_temperature(t_cryostat, p[2]);
      return dynamics::flip_flop_rate(g_eff, b, ts, p[0]) +
             dynamics::direct_rate(g_eff, b, ts, p[1]);
    };
  }

  // Heuristic starts: the flip-flop term saturates at w_ff, so seed it from
  // the low-field (or low-T) rates; seed w_d from the remainder at the
  // largest swept value where the direct term dominates.
  const double r_max = *std::max_element(rate_hz.begin(), rate_hz.end());
  const double b_big = field_mode ? *std::max_element(swept.begin(), swept.end())
                                  : fixed_field_tesla;
  std::vector<std::vector<double>> starts;
  for (const double t0 : {0.03, 0.07, 0.15}) {
    for (const double frac : {0.3, 0.8}) {
      const double w_ff0 = std::max(frac * r_max, 1e-6);
      const double direct_unit = dynamics::direct_rate(g_eff, b_big, t0, 1.0);
      const double w_d0 =
          direct_unit > 0.0 ? std::max((r_max - w_ff0) / direct_unit, 1e-6) : 1.0;
      starts.push_back({w_ff0, w_d0, t0});
    }
  }
  return best_of_starts(model, swept, rate_hz, starts);
}

}  // namespace shb::fit
