#include "shb/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unsupported/Eigen/KroneckerProduct>

#include "shb/constants.hpp"
#include "shb/errors.hpp"

namespace shb::spin {

namespace {

/// Contraction sum_ab v_a M_ab Op_b for a vector of operator components.
Eigen::MatrixXcd contract_vector(const Eigen::Vector3d& v, const Eigen::Matrix3d& m,
                                 const SpinOperators& ops) {
  const Eigen::Vector3d w = m.transpose() * v;  // (v.M)_b = sum_a v_a M_ab
  return w[0] * ops.sx + w[1] * ops.sy + w[2] * ops.sz;
}

/// Bilinear form sum_ab OpL_a M_ab OpR_b, with OpL acting on the left factor
/// and OpR on the right factor of the product space.
Eigen::MatrixXcd contract_bilinear(const SpinOperators& left, const Eigen::Matrix3d& m,
                                   const SpinOperators& right, int left_dim, int right_dim) {
  const Eigen::MatrixXcd il = Eigen::MatrixXcd::Identity(left_dim, left_dim);
  const Eigen::MatrixXcd ir = Eigen::MatrixXcd::Identity(right_dim, right_dim);
  const Eigen::MatrixXcd ls[3] = {Eigen::kroneckerProduct(left.sx, ir),
                                  Eigen::kroneckerProduct(left.sy, ir),
                                  Eigen::kroneckerProduct(left.sz, ir)};
  const Eigen::MatrixXcd rs[3] = {Eigen::kroneckerProduct(il, right.sx),
                                  Eigen::kroneckerProduct(il, right.sy),
                                  Eigen::kroneckerProduct(il, right.sz)};
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(left_dim * right_dim, left_dim * right_dim);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      if (m(a, b) != 0.0) {
        out += m(a, b) * ls[a] * rs[b];
      }
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXcd build_hamiltonian(const SpinSystem& sys, const FieldPoint& field) {
  const SpinOperators s_ops = spin_operators(sys.electron_spin);
  const int ne = sys.electron_dim();
  const int ni = sys.nuclear_dim();

  // Electron Zeeman term: mu_B B.g.S, extended over the nuclear factor.
  const Eigen::MatrixXcd zeeman_e =
      constants::bohr_magneton * contract_vector(field.vector(), sys.g.in_crystal_frame(), s_ops);
  Eigen::MatrixXcd h = Eigen::kroneckerProduct(zeeman_e, Eigen::MatrixXcd::Identity(ni, ni));

  if (sys.nuclear_spin > 0.0) {
    if (!sys.a || !sys.q) {
      throw ConfigError("site '" + sys.site_label +
                        "': hyperfine and quadrupole tensors are required when I > 0");
    }
    const SpinOperators i_ops = spin_operators(sys.nuclear_spin);
    // h S.A.I with A in Hz; S acts on the electron factor, I on the nuclear.
    h += constants::planck *
         contract_bilinear(s_ops, sys.a->in_crystal_frame(), i_ops, ne, ni);
    // h I.Q.I lives entirely on the nuclear factor.
    Eigen::MatrixXcd quad_nuc = Eigen::MatrixXcd::Zero(ni, ni);
    const Eigen::Matrix3d qm = sys.q->in_crystal_frame();
    const Eigen::MatrixXcd is[3] = {i_ops.sx, i_ops.sy, i_ops.sz};
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        if (qm(a, b) != 0.0) {
          quad_nuc += qm(a, b) * is[a] * is[b];
        }
      }
    }
    h += constants::planck * Eigen::kroneckerProduct(Eigen::MatrixXcd::Identity(ne, ne), quad_nuc);
  }
  return h;
}

EnergyLevels eigensolve(const Eigen::MatrixXcd& hamiltonian) {
  const double scale = hamiltonian.cwiseAbs().maxCoeff();
  const double asym = (hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff();
  if (scale > 0.0 && asym > 1e-9 * scale) {
    throw InputError("eigensolve: matrix is not Hermitian");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hamiltonian);
  if (solver.info() != Eigen::Success) {
    throw InputError("eigensolve: decomposition failed");
  }

  EnergyLevels out;
  out.energies = solver.eigenvalues();
  out.states = solver.eigenvectors();

  const int n = static_cast<int>(out.energies.size());
  const double degeneracy_tol = std::max(1e-12 * std::max(scale, 1e-300), 1e-300);

  // Within each degenerate group, order columns by the row index of their
  // largest-magnitude component so repeated runs agree, then fix each phase
  // so that component is real and non-negative.
  auto dominant_row = [&](int col) {
    int row = 0;
    out.states.col(col).cwiseAbs().maxCoeff(&row);
    return row;
  };
  int start = 0;
  while (start < n) {
    int stop = start + 1;
    while (stop < n && out.energies[stop] - out.energies[start] <= degeneracy_tol) {
      ++stop;
    }
    if (stop - start > 1) {
      std::vector<int> order(stop - start);
      std::iota(order.begin(), order.end(), start);
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return dominant_row(a) < dominant_row(b); });
      Eigen::MatrixXcd block(n, stop - start);
      Eigen::VectorXd evals(stop - start);
      for (int k = 0; k < stop - start; ++k) {
        block.col(k) = out.states.col(order[k]);
        evals[k] = out.energies[order[k]];
      }
      out.states.middleCols(start, stop - start) = block;
      out.energies.segment(start, stop - start) = evals;
    }
    start = stop;
  }
  for (int col = 0; col < n; ++col) {
    const int row = dominant_row(col);
    const std::complex<double> lead = out.states(row, col);
    if (std::abs(lead) > 0.0) {
      out.states.col(col) *= std::conj(lead) / std::abs(lead);
    }
  }
  return out;
}

}  // namespace shb::spin
