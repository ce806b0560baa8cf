#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "shb/hamiltonian.hpp"
#include "shb/spin_system.hpp"

namespace shb::spin {

/// One allowed microwave transition between eigenlevels.
struct TransitionLine {
  double frequency = 0.0;          // Hz, (E_upper - E_lower)/h
  double matrix_element_sq = 0.0;  // |<upper| d.g.S |lower>|^2, dimensionless
  double population_weight = 0.0;  // p_lower - p_upper, in [-1, 1]
  int lower_index = 0;
  int upper_index = 0;
  std::string site_label;
  std::string isotope_label;
  double abundance = 1.0;
};

/// Thermal occupation p_i = exp(-E_i/kTs)/Z, evaluated with max-subtraction.
/// Throws InputError for Ts <= 0.
Eigen::VectorXd boltzmann_populations(const EnergyLevels& levels, double spin_temperature);

/// Lines with matrix_element_sq below `cutoff` times the strongest line are
/// dropped. Zero-frequency (degenerate) pairs are never reported.
inline constexpr double default_intensity_cutoff = 1e-6;

std::vector<TransitionLine> allowed_transitions(const SpinSystem& sys, const FieldPoint& field,
                                                double spin_temperature,
                                                const Eigen::Vector3d& drive_direction,
                                                double cutoff = default_intensity_cutoff);

/// All sites' lines, abundance-tagged and sorted by frequency. Validates the
/// ensemble abundances first.
std::vector<TransitionLine> ensemble_transitions(const std::vector<SpinSystem>& ensemble,
                                                 const FieldPoint& field, double spin_temperature,
                                                 const Eigen::Vector3d& drive_direction,
                                                 double cutoff = default_intensity_cutoff);

}  // namespace shb::spin
