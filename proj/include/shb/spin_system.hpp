#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "shb/tensor.hpp"

namespace shb::spin {

/// Angular-momentum operators for one spin j in the |m> basis, m ascending
/// from -j to +j.
struct SpinOperators {
  Eigen::MatrixXcd sx, sy, sz;
};

SpinOperators spin_operators(double spin);

/// One paramagnetic species: electron spin S (1/2 here), nuclear spin I
/// (0 or 7/2), its interaction tensors and its fraction of the ensemble.
/// Hyperfine (A) and quadrupole (Q) tensors are required exactly when I > 0.
struct SpinSystem {
  double electron_spin = 0.5;
  double nuclear_spin = 0.0;
  InteractionTensor g;
  std::optional<InteractionTensor> a;
  std::optional<InteractionTensor> q;
  std::string site_label;
  std::string isotope_label;
  double abundance = 1.0;

  int electron_dim() const { return static_cast<int>(2 * electron_spin + 1.5); }
  int nuclear_dim() const { return static_cast<int>(2 * nuclear_spin + 1.5); }
  int dim() const { return electron_dim() * nuclear_dim(); }

  /// Scalar-g, I = 0 site ("effective-g" mode).
  static SpinSystem with_effective_g(std::string site_label, double g_value, double abundance);
};

/// Static field: magnitude in tesla and a unit direction in the crystal frame.
struct FieldPoint {
  double magnitude = 0.0;
  Eigen::Vector3d direction = Eigen::Vector3d::UnitZ();

  /// Normalizes `direction`; throws InputError for zero vectors or
  /// negative magnitude.
  static FieldPoint along(const Eigen::Vector3d& direction, double magnitude);

  Eigen::Vector3d vector() const { return magnitude * direction; }
};

/// Throws ConfigError unless the abundances sum to 1 within 1e-9.
void validate_ensemble(const std::vector<SpinSystem>& ensemble);

}  // namespace shb::spin
