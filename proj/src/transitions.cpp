#include "shb/transitions.hpp"

#include <algorithm>
#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

#include "shb/constants.hpp"
#include "shb/errors.hpp"

namespace shb::spin {

Eigen::VectorXd boltzmann_populations(const EnergyLevels& levels, double spin_temperature) {
  if (!(spin_temperature > 0.0)) {
    throw InputError("boltzmann_populations: spin temperature must be positive");
  }
  const double beta = 1.0 / (constants::k_boltzmann * spin_temperature);
  // Subtract the minimum energy before exponentiating so large splittings
  // underflow to 0 instead of overflowing the partition sum.
  const double e_min = levels.energies.minCoeff();
  Eigen::VectorXd p = (-(levels.energies.array() - e_min) * beta).exp();
  p /= p.sum();
  return p;
}

std::vector<TransitionLine> allowed_transitions(const SpinSystem& sys, const FieldPoint& field,
                                                double spin_temperature,
                                                const Eigen::Vector3d& drive_direction,
                                                double cutoff) {
  if (std::abs(drive_direction.norm() - 1.0) > 1e-9) {
    throw InputError("allowed_transitions: drive direction must be a unit vector");
  }

  const Eigen::MatrixXcd h = build_hamiltonian(sys, field);
  const EnergyLevels levels = eigensolve(h);
  const Eigen::VectorXd pops = boltzmann_populations(levels, spin_temperature);

  // Coupling operator for an ac field along d: d.g.S on the electron factor.
  const SpinOperators s_ops = spin_operators(sys.electron_spin);
  const Eigen::Vector3d w = sys.g.in_crystal_frame().transpose() * drive_direction;
  Eigen::MatrixXcd coupling = w[0] * s_ops.sx + w[1] * s_ops.sy + w[2] * s_ops.sz;
  const int ni = sys.nuclear_dim();
  if (ni > 1) {
    coupling = Eigen::kroneckerProduct(coupling, Eigen::MatrixXcd::Identity(ni, ni)).eval();
  }
  const Eigen::MatrixXcd coupling_eig = levels.states.adjoint() * coupling * levels.states;

  const int n = static_cast<int>(levels.energies.size());
  std::vector<TransitionLine> lines;
  double strongest = 0.0;
  for (int lo = 0; lo < n; ++lo) {
    for (int up = lo + 1; up < n; ++up) {
      const double freq = (levels.energies[up] - levels.energies[lo]) / constants::planck;
      if (freq <= 0.0) {
        continue;
      }
      TransitionLine line;
      line.frequency = freq;
      line.matrix_element_sq = std::norm(coupling_eig(up, lo));
      line.population_weight = pops[lo] - pops[up];
      line.lower_index = lo;
      line.upper_index = up;
      line.site_label = sys.site_label;
      line.isotope_label = sys.isotope_label;
      line.abundance = sys.abundance;
      strongest = std::max(strongest, line.matrix_element_sq);
      lines.push_back(std::move(line));
    }
  }

  std::erase_if(lines, [&](const TransitionLine& l) {
    return l.matrix_element_sq < cutoff * strongest;
  });
  std::sort(lines.begin(), lines.end(),
            [](const TransitionLine& a, const TransitionLine& b) { return a.frequency < b.frequency; });
  return lines;
}

std::vector<TransitionLine> ensemble_transitions(const std::vector<SpinSystem>& ensemble,
                                                 const FieldPoint& field, double spin_temperature,
                                                 const Eigen::Vector3d& drive_direction,
                                                 double cutoff) {
  validate_ensemble(ensemble);
  std::vector<TransitionLine> all;
  for (const auto& sys : ensemble) {
    auto lines = allowed_transitions(sys, field, spin_temperature, drive_direction, cutoff);
    all.insert(all.end(), std::make_move_iterator(lines.begin()),
               std::make_move_iterator(lines.end()));
  }
  std::sort(all.begin(), all.end(),
            [](const TransitionLine& a, const TransitionLine& b) { return a.frequency < b.frequency; });
  return all;
}

}  // namespace shb::spin
