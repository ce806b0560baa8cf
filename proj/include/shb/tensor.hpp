#pragma once

#include <Eigen/Dense>
#include <string>

namespace shb::spin {

/// One 3x3 interaction tensor (g, A or Q) plus the ZYZ Euler angles, in
/// degrees, that rotate its principal frame into the crystal frame.
/// Units of `matrix` depend on role: dimensionless for g, Hz for A and Q.
struct InteractionTensor {
  Eigen::Matrix3d matrix = Eigen::Matrix3d::Zero();
  Eigen::Vector3d frame_euler_deg = Eigen::Vector3d::Zero();

  static InteractionTensor isotropic(double value);
  static InteractionTensor from_principal(const Eigen::Vector3d& values,
                                          const Eigen::Vector3d& euler_deg = Eigen::Vector3d::Zero());

  /// R * M * R^T with R composed from frame_euler_deg.
  Eigen::Matrix3d in_crystal_frame() const;
};

/// Small static misalignment of a site's tensor frame relative to the nominal
/// crystal axes, expressed as in-plane rotation angles. Crystal axes are
/// x = D1, y = D2, z = b; a b-D2 plane tilt rotates about D1, a D1-b plane
/// tilt rotates about D2.
struct OrientationCorrection {
  double euler_b_d2_deg = 0.0;
  double euler_d1_b_deg = 0.0;
  std::string applies_to;
};

/// Active ZYZ rotation matrix from Euler angles in degrees:
/// R = Rz(alpha) * Ry(beta) * Rz(gamma).
Eigen::Matrix3d euler_rotation(const Eigen::Vector3d& euler_deg);

/// Conjugates the tensor matrix by the rotation from `euler_deg`; the result
/// carries zero frame angles (the rotation has been applied). Principal
/// values are preserved.
InteractionTensor rotate_tensor(const InteractionTensor& t, const Eigen::Vector3d& euler_deg);

InteractionTensor apply_misalignment(const InteractionTensor& t, const OrientationCorrection& corr);

/// Effective g-factor along a unit direction d: sqrt(d . (G G^T) . d) with G
/// the crystal-frame tensor. Throws InputError for a non-unit direction.
double effective_g(const InteractionTensor& g, const Eigen::Vector3d& direction);

}  // namespace shb::spin
