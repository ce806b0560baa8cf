#pragma once

#include <Eigen/Dense>

namespace shb::testing {

/// Cyclic Jacobi eigensolver for complex Hermitian matrices, written
/// independently of the library's eigensolve so the two can cross-check
/// each other. Returns ascending eigenvalues; `vectors` columns match.
struct JacobiResult {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
};

JacobiResult jacobi_hermitian(const Eigen::MatrixXcd& matrix);

}  // namespace shb::testing
