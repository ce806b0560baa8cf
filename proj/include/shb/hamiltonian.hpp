#pragma once

#include <Eigen/Dense>

#include "shb/spin_system.hpp"

namespace shb::spin {

/// Eigen-decomposition of a spin Hamiltonian. Energies are in joules,
/// ascending; `states` columns are the matching eigenvectors in the product
/// basis |m_S> (x) |m_I>, m ascending, electron index major.
struct EnergyLevels {
  Eigen::VectorXd energies;
  Eigen::MatrixXcd states;
};

/// H = mu_B B.g.S + h S.A.I + h I.Q.I on the product basis, in joules.
/// Throws ConfigError when A or Q is missing for I > 0.
Eigen::MatrixXcd build_hamiltonian(const SpinSystem& sys, const FieldPoint& field);

/// Hermitian eigensolve with deterministic ordering: ascending eigenvalues,
/// degenerate groups sorted by the dominant component of their eigenvectors,
/// phases fixed so the dominant component is real non-negative.
/// Throws InputError when the relative asymmetry exceeds 1e-9.
EnergyLevels eigensolve(const Eigen::MatrixXcd& hamiltonian);

}  // namespace shb::spin
