#include "shb/spectrum.hpp"

#include <cmath>

#include "shb/errors.hpp"

namespace shb::spectrum {

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 2 || !(hi > lo)) {
    throw InputError("linspace: need n >= 2 and hi > lo");
  }
  std::vector<double> axis(n);
  const double step = (hi - lo) / (n - 1);
  for (int k = 0; k < n; ++k) {
    axis[k] = lo + k * step;
  }
  axis.back() = hi;  // land exactly on the endpoint
  return axis;
}

SpectrumGrid synthesize_absorption(const std::vector<spin::TransitionLine>& lines,
                                   const LinewidthModel& model, double field_tesla,
                                   const std::vector<double>& frequency_axis) {
  const double fwhm = linewidth_at(model, field_tesla);
  if (!(fwhm > 0.0)) {
    throw InputError("synthesize_absorption: linewidth must be positive");
  }

  SpectrumGrid grid;
  grid.frequency_axis = frequency_axis;
  grid.field_axis = {field_tesla};
  grid.amplitude = Eigen::MatrixXd::Zero(1, static_cast<Eigen::Index>(frequency_axis.size()));

  for (const auto& line : lines) {
    const double weight = line.matrix_element_sq * line.population_weight * line.abundance;
    if (weight == 0.0) {
      continue;
    }
    for (std::size_t j = 0; j < frequency_axis.size(); ++j) {
      grid.amplitude(0, static_cast<Eigen::Index>(j)) +=
          lorentzian(frequency_axis[j] - line.frequency, fwhm, weight);
    }
  }
  return grid;
}

SpectrumGrid synthesize_field_map(const std::vector<spin::SpinSystem>& ensemble,
                                  const LinewidthModel& model,
                                  const std::vector<double>& field_axis,
                                  const std::vector<double>& frequency_axis,
                                  double spin_temperature, const Eigen::Vector3d& field_direction,
                                  const Eigen::Vector3d& drive_direction) {
  spin::validate_ensemble(ensemble);

  SpectrumGrid grid;
  grid.frequency_axis = frequency_axis;
  grid.field_axis = field_axis;
  grid.amplitude = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(field_axis.size()),
                                         static_cast<Eigen::Index>(frequency_axis.size()));

  for (std::size_t i = 0; i < field_axis.size(); ++i) {
    const auto field = spin::FieldPoint::along(field_direction, field_axis[i]);
    const auto lines =
        spin::ensemble_transitions(ensemble, field, spin_temperature, drive_direction);
    const SpectrumGrid row = synthesize_absorption(lines, model, field_axis[i], frequency_axis);
    grid.amplitude.row(static_cast<Eigen::Index>(i)) = row.amplitude.row(0);
  }
  return grid;
}

}  // namespace shb::spectrum
