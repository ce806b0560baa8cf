#pragma once

#include <Eigen/Dense>
#include <vector>

#include "shb/lineshape.hpp"
#include "shb/spin_system.hpp"
#include "shb/transitions.hpp"

namespace shb::spectrum {

/// Absorption amplitude over a frequency axis (single row) or over
/// field x frequency axes. amplitude(i, j) belongs to field_axis[i],
/// frequency_axis[j]. Amplitudes are arbitrary units.
struct SpectrumGrid {
  std::vector<double> frequency_axis;  // Hz, ascending
  std::vector<double> field_axis;      // tesla, ascending; length 1 for a sweep row
  Eigen::MatrixXd amplitude;
};

std::vector<double> linspace(double lo, double hi, int n);

/// Sum of Lorentzians, one per line, each weighted by
/// matrix_element_sq * population_weight * abundance and broadened to the
/// field-dependent FWHM. An empty line list yields a zero spectrum.
SpectrumGrid synthesize_absorption(const std::vector<spin::TransitionLine>& lines,
                                   const LinewidthModel& model, double field_tesla,
                                   const std::vector<double>& frequency_axis);

/// One synthesize_absorption row per field point; rows are independent.
SpectrumGrid synthesize_field_map(const std::vector<spin::SpinSystem>& ensemble,
                                  const LinewidthModel& model,
                                  const std::vector<double>& field_axis,
                                  const std::vector<double>& frequency_axis,
                                  double spin_temperature, const Eigen::Vector3d& field_direction,
                                  const Eigen::Vector3d& drive_direction);

}  // namespace shb::spectrum
