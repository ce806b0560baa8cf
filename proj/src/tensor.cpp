#include "shb/tensor.hpp"

#include <cmath>
#include <numbers>

#include "shb/errors.hpp"

namespace shb::spin {

namespace {

Eigen::Matrix3d rot_z(double rad) {
  Eigen::Matrix3d r;
  r << std::cos(rad), -std::sin(rad), 0.0, std::sin(rad), std::cos(rad), 0.0, 0.0, 0.0, 1.0;
  return r;
}

Eigen::Matrix3d rot_y(double rad) {
  Eigen::Matrix3d r;
  r << std::cos(rad), 0.0, std::sin(rad), 0.0, 1.0, 0.0, -std::sin(rad), 0.0, std::cos(rad);
  return r;
}

Eigen::Matrix3d rot_x(double rad) {
  Eigen::Matrix3d r;
  r << 1.0, 0.0, 0.0, 0.0, std::cos(rad), -std::sin(rad), 0.0, std::sin(rad), std::cos(rad);
  return r;
}

constexpr double deg = std::numbers::pi / 180.0;

}  // namespace

InteractionTensor InteractionTensor::isotropic(double value) {
  InteractionTensor t;
  t.matrix = value * Eigen::Matrix3d::Identity();
  return t;
}

InteractionTensor InteractionTensor::from_principal(const Eigen::Vector3d& values,
                                                    const Eigen::Vector3d& euler_deg) {
  InteractionTensor t;
  t.matrix = values.asDiagonal();
  t.frame_euler_deg = euler_deg;
  return t;
}

Eigen::Matrix3d euler_rotation(const Eigen::Vector3d& euler_deg) {
  if (!euler_deg.allFinite()) {
    throw InputError("euler angles must be finite");
  }
  return rot_z(euler_deg[0] * deg) * rot_y(euler_deg[1] * deg) * rot_z(euler_deg[2] * deg);
}

Eigen::Matrix3d InteractionTensor::in_crystal_frame() const {
  if (frame_euler_deg.isZero()) {
    return matrix;
  }
  const Eigen::Matrix3d r = euler_rotation(frame_euler_deg);
  return r * matrix * r.transpose();
}

InteractionTensor rotate_tensor(const InteractionTensor& t, const Eigen::Vector3d& euler_deg) {
  const Eigen::Matrix3d r = euler_rotation(euler_deg);
  InteractionTensor out;
  out.matrix = r * t.matrix * r.transpose();
  return out;
}

InteractionTensor apply_misalignment(const InteractionTensor& t, const OrientationCorrection& corr) {
  // b-D2 plane tilt = rotation about x (D1), D1-b plane tilt = rotation about y (D2).
  const Eigen::Matrix3d r = rot_x(corr.euler_b_d2_deg * deg) * rot_y(corr.euler_d1_b_deg * deg);
  InteractionTensor out;
  out.matrix = r * t.in_crystal_frame() * r.transpose();
  return out;
}

double effective_g(const InteractionTensor& g, const Eigen::Vector3d& direction) {
  if (std::abs(direction.norm() - 1.0) > 1e-12) {
    throw InputError("effective_g: direction must be a unit vector");
  }
  const Eigen::Matrix3d gg = g.in_crystal_frame();
  return std::sqrt(direction.dot(gg * gg.transpose() * direction));
}

}  // namespace shb::spin
