#include "shb/spin_system.hpp"

#include <cmath>
#include <numeric>

#include "shb/errors.hpp"

namespace shb::spin {

SpinOperators spin_operators(double spin) {
  const double twice = 2.0 * spin;
  if (spin < 0.0 || std::abs(twice - std::round(twice)) > 1e-12) {
    throw InputError("spin must be a non-negative half-integer");
  }
  const int dim = static_cast<int>(std::round(twice)) + 1;

  SpinOperators ops;
  ops.sx = Eigen::MatrixXcd::Zero(dim, dim);
  ops.sy = Eigen::MatrixXcd::Zero(dim, dim);
  ops.sz = Eigen::MatrixXcd::Zero(dim, dim);

  // Basis |m>, m = -j .. +j ascending. S+|m> = sqrt(j(j+1) - m(m+1)) |m+1>.
  for (int k = 0; k < dim; ++k) {
    const double m = -spin + k;
    ops.sz(k, k) = m;
    if (k + 1 < dim) {
      const double raise = std::sqrt(spin * (spin + 1.0) - m * (m + 1.0));
      ops.sx(k + 1, k) += 0.5 * raise;
      ops.sx(k, k + 1) += 0.5 * raise;
      ops.sy(k + 1, k) += std::complex<double>(0.0, -0.5) * raise;
      ops.sy(k, k + 1) += std::complex<double>(0.0, 0.5) * raise;
    }
  }
  return ops;
}

SpinSystem SpinSystem::with_effective_g(std::string site_label, double g_value, double abundance) {
  SpinSystem sys;
  sys.electron_spin = 0.5;
  sys.nuclear_spin = 0.0;
  sys.g = InteractionTensor::isotropic(g_value);
  sys.site_label = std::move(site_label);
  sys.abundance = abundance;
  return sys;
}

FieldPoint FieldPoint::along(const Eigen::Vector3d& direction, double magnitude) {
  const double norm = direction.norm();
  if (!(norm > 0.0) || !direction.allFinite()) {
    throw InputError("field direction must be a nonzero finite vector");
  }
  if (magnitude < 0.0) {
    throw InputError("field magnitude must be non-negative");
  }
  FieldPoint f;
  f.magnitude = magnitude;
  f.direction = direction / norm;
  return f;
}

void validate_ensemble(const std::vector<SpinSystem>& ensemble) {
  if (ensemble.empty()) {
    throw ConfigError("ensemble must contain at least one site");
  }
  double total = 0.0;
  for (const auto& sys : ensemble) {
    if (sys.abundance < 0.0) {
      throw ConfigError("site abundance must be non-negative");
    }
    total += sys.abundance;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ConfigError("site abundances must sum to 1");
  }
}

}  // namespace shb::spin
