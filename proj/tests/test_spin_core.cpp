// Spin-core checks: tensor algebra, Hamiltonian construction, the
// deterministic eigensolver and thermal transition enumeration. The
// eigensolver is cross-checked against an independent Jacobi implementation
// (support/jacobi.cpp) so a shared bug cannot hide.
#include <cmath>
#include <complex>
#include <random>

#include <doctest.h>

#include "shb/constants.hpp"
#include "shb/errors.hpp"
#include "shb/hamiltonian.hpp"
#include "shb/spin_system.hpp"
#include "shb/tensor.hpp"
#include "shb/transitions.hpp"
#include "support/jacobi.hpp"

using namespace shb;
using spin::FieldPoint;
using spin::InteractionTensor;
using spin::SpinSystem;

namespace {

Eigen::MatrixXcd random_hermitian(int n, std::mt19937& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m(i, j) = std::complex<double>(dist(rng), dist(rng));
    }
  }
  return 0.5 * (m + m.adjoint());
}

Eigen::Vector3d random_unit(std::mt19937& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::Vector3d v;
  do {
    v = Eigen::Vector3d(dist(rng), dist(rng), dist(rng));
  } while (v.norm() < 1e-6);
  return v.normalized();
}

}  // namespace

TEST_CASE("euler rotations are proper orthogonal") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> angle(-180.0, 180.0);
  for (int k = 0; k < 50; ++k) {
    const Eigen::Vector3d e(angle(rng), angle(rng), angle(rng));
    const Eigen::Matrix3d r = spin::euler_rotation(e);
    CHECK((r * r.transpose() - Eigen::Matrix3d::Identity()).norm() < 1e-12);
    CHECK(r.determinant() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK((spin::euler_rotation(Eigen::Vector3d::Zero()) - Eigen::Matrix3d::Identity()).norm() ==
        0.0);
}

TEST_CASE("rotate_tensor preserves spectrum and trace") {
  const InteractionTensor t = InteractionTensor::from_principal({2.0, 4.0, 6.0});

  SUBCASE("identity rotation is a no-op") {
    const InteractionTensor r = spin::rotate_tensor(t, Eigen::Vector3d::Zero());
    CHECK((r.matrix - t.matrix).norm() == 0.0);
    CHECK(r.frame_euler_deg.norm() == 0.0);
  }

  SUBCASE("90 degree rotation about z permutes x and y") {
    const InteractionTensor r = spin::rotate_tensor(t, {90.0, 0.0, 0.0});
    CHECK(r.matrix(0, 0) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(r.matrix(1, 1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.matrix(2, 2) == doctest::Approx(6.0).epsilon(1e-12));
  }

  SUBCASE("random rotations keep trace and eigenvalues") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> angle(-180.0, 180.0);
    for (int k = 0; k < 25; ++k) {
      const InteractionTensor r = spin::rotate_tensor(t, {angle(rng), angle(rng), angle(rng)});
      CHECK(r.matrix.trace() == doctest::Approx(12.0).epsilon(1e-12));
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(r.matrix);
      CHECK(es.eigenvalues()[0] == doctest::Approx(2.0).epsilon(1e-10));
      CHECK(es.eigenvalues()[1] == doctest::Approx(4.0).epsilon(1e-10));
      CHECK(es.eigenvalues()[2] == doctest::Approx(6.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("effective_g along selected directions") {
  SUBCASE("isotropic tensor gives its scalar for any direction") {
    const InteractionTensor g = InteractionTensor::isotropic(1.41);
    std::mt19937 rng(17);
    for (int k = 0; k < 20; ++k) {
      CHECK(spin::effective_g(g, random_unit(rng)) == doctest::Approx(1.41).epsilon(1e-12));
    }
  }

  SUBCASE("principal axes return the principal values") {
    const InteractionTensor g = InteractionTensor::from_principal({2.0, 4.0, 6.0});
    CHECK(spin::effective_g(g, Eigen::Vector3d::UnitX()) == doctest::Approx(2.0));
    CHECK(spin::effective_g(g, Eigen::Vector3d::UnitY()) == doctest::Approx(4.0));
    CHECK(spin::effective_g(g, Eigen::Vector3d::UnitZ()) == doctest::Approx(6.0));
  }

  SUBCASE("body diagonal of diag(2,4,6) is sqrt(56/3)") {
    const InteractionTensor g = InteractionTensor::from_principal({2.0, 4.0, 6.0});
    const Eigen::Vector3d d = Eigen::Vector3d::Ones().normalized();
    CHECK(spin::effective_g(g, d) == doctest::Approx(std::sqrt(56.0 / 3.0)).epsilon(1e-12));
  }

  SUBCASE("non-unit direction is rejected") {
    const InteractionTensor g = InteractionTensor::isotropic(2.0);
    CHECK_THROWS_AS(spin::effective_g(g, {1.0, 1.0, 0.0}), InputError);
  }
}

TEST_CASE("spin operators obey the angular momentum algebra") {
  for (const double j : {0.5, 3.5}) {
    const auto ops = spin::spin_operators(j);
    const int dim = static_cast<int>(2 * j + 1.5);
    REQUIRE(ops.sx.rows() == dim);

    // Commutator [Sx, Sy] = i Sz and cyclic.
    const std::complex<double> i_unit(0.0, 1.0);
    CHECK((ops.sx * ops.sy - ops.sy * ops.sx - i_unit * ops.sz).norm() < 1e-13);
    CHECK((ops.sy * ops.sz - ops.sz * ops.sy - i_unit * ops.sx).norm() < 1e-13);

    // Casimir S^2 = j(j+1) Id.
    const Eigen::MatrixXcd s2 = ops.sx * ops.sx + ops.sy * ops.sy + ops.sz * ops.sz;
    CHECK((s2 - j * (j + 1) * Eigen::MatrixXcd::Identity(dim, dim)).norm() < 1e-13);

    // Sz diagonal with m ascending.
    CHECK(ops.sz(0, 0).real() == doctest::Approx(-j));
    CHECK(ops.sz(dim - 1, dim - 1).real() == doctest::Approx(j));
  }
}

TEST_CASE("two-level Zeeman splitting matches g mu_B B") {
  const SpinSystem sys = SpinSystem::with_effective_g("test", 2.0, 1.0);
  const FieldPoint field = FieldPoint::along(Eigen::Vector3d::UnitZ(), 0.1);
  const auto levels = spin::eigensolve(spin::build_hamiltonian(sys, field));
  const double splitting_hz = (levels.energies[1] - levels.energies[0]) / constants::planck;
  CHECK(splitting_hz == doctest::Approx(2.0 * constants::mu_b_over_h * 0.1).epsilon(1e-12));
  // ~2.799 GHz: the g = 2, 100 mT textbook point.
  CHECK(splitting_hz == doctest::Approx(2.79924899e9).epsilon(1e-8));
}

TEST_CASE("zero field collapses the Zeeman Hamiltonian") {
  const SpinSystem sys = SpinSystem::with_effective_g("test", 1.41, 1.0);
  const FieldPoint field = FieldPoint::along(Eigen::Vector3d::UnitZ(), 0.0);
  CHECK(spin::build_hamiltonian(sys, field).norm() == 0.0);
}

TEST_CASE("hyperfine coupling with I = 7/2 builds a 16-dim Hamiltonian") {
  SpinSystem sys;
  sys.electron_spin = 0.5;
  sys.nuclear_spin = 3.5;
  sys.g = InteractionTensor::isotropic(2.0);
  sys.a = InteractionTensor::isotropic(100e6);  // Hz
  sys.q = InteractionTensor::isotropic(0.0);
  sys.site_label = "hf";
  REQUIRE(sys.dim() == 16);

  SUBCASE("zero field: h A S.I multiplet structure") {
    // S.I eigenvalues (F(F+1) - S(S+1) - I(I+1))/2: F = 4 gives +7/4
    // (9 states), F = 3 gives -9/4 (7 states).
    const FieldPoint field = FieldPoint::along(Eigen::Vector3d::UnitZ(), 0.0);
    const auto levels = spin::eigensolve(spin::build_hamiltonian(sys, field));
    int low = 0, high = 0;
    for (int k = 0; k < 16; ++k) {
      const double f_hz = levels.energies[k] / constants::planck;
      if (std::abs(f_hz - (-225e6)) < 1.0) {
        ++low;
      } else if (std::abs(f_hz - 175e6) < 1.0) {
        ++high;
      }
    }
    CHECK(low == 7);
    CHECK(high == 9);
  }

  SUBCASE("missing A tensor for I > 0 is rejected") {
    sys.a.reset();
    const FieldPoint field = FieldPoint::along(Eigen::Vector3d::UnitZ(), 0.1);
    CHECK_THROWS_AS(spin::build_hamiltonian(sys, field), ConfigError);
  }
}

TEST_CASE("eigensolve ordering, reconstruction and oracle agreement") {
  SUBCASE("diagonal input keeps ascending order and unit vectors") {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(3, 3);
    h(0, 0) = 2.0;
    h(1, 1) = -1.0;
    h(2, 2) = 0.5;
    const auto levels = spin::eigensolve(h);
    CHECK(levels.energies[0] == doctest::Approx(-1.0));
    CHECK(levels.energies[1] == doctest::Approx(0.5));
    CHECK(levels.energies[2] == doctest::Approx(2.0));
    CHECK(std::abs(levels.states(1, 0)) == doctest::Approx(1.0));
    CHECK(levels.states(1, 0).real() > 0.0);  // phase fixed real non-negative
  }

  SUBCASE("random Hermitian matrices: unitarity, reconstruction, Jacobi cross-check") {
    std::mt19937 rng(19);
    for (const int n : {2, 4, 16}) {
      for (int rep = 0; rep < 5; ++rep) {
        const Eigen::MatrixXcd h = random_hermitian(n, rng);
        const auto levels = spin::eigensolve(h);

        for (int k = 1; k < n; ++k) {
          CHECK(levels.energies[k] >= levels.energies[k - 1]);
        }
        const Eigen::MatrixXcd vtv = levels.states.adjoint() * levels.states;
        CHECK((vtv - Eigen::MatrixXcd::Identity(n, n)).norm() < 1e-10);

        const Eigen::MatrixXcd recon =
            levels.states * levels.energies.asDiagonal() * levels.states.adjoint();
        CHECK((recon - h).norm() <= 1e-10 * h.norm());

        const auto oracle = testing::jacobi_hermitian(h);
        for (int k = 0; k < n; ++k) {
          CHECK(levels.energies[k] ==
                doctest::Approx(oracle.values[k]).epsilon(1e-10).scale(h.norm()));
        }
      }
    }
  }

  SUBCASE("non-Hermitian input is rejected") {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2, 2);
    h(0, 1) = 1.0;
    h(1, 0) = 0.5;  // asymmetric
    CHECK_THROWS_AS(spin::eigensolve(h), InputError);
  }
}

TEST_CASE("boltzmann populations") {
  const SpinSystem sys = SpinSystem::with_effective_g("test", 1.41, 1.0);
  const FieldPoint field = FieldPoint::along(Eigen::Vector3d::UnitZ(), 0.185);
  const auto levels = spin::eigensolve(spin::build_hamiltonian(sys, field));

  SUBCASE("normalized and non-negative at any temperature") {
    for (const double ts : {1e-6, 0.0819, 300.0}) {
      const auto p = spin::boltzmann_populations(levels, ts);
      CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(p.minCoeff() >= 0.0);
    }
  }

  SUBCASE("cold limit piles everything into the ground state") {
    const auto p = spin::boltzmann_populations(levels, 1e-6);
    CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("hot limit is uniform") {
    const auto p = spin::boltzmann_populations(levels, 1e6);
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-6));
  }

  SUBCASE("two-level value at the measured spin temperature") {
    // p_lower = 1/(1 + exp(-h f / k Ts)) for the site's own line...
    const double f = (levels.energies[1] - levels.energies[0]) / constants::planck;
    const double x = constants::planck * f / (constants::k_boltzmann * 0.0819);
    const auto p = spin::boltzmann_populations(levels, 0.0819);
    CHECK(p[0] == doctest::Approx(1.0 / (1.0 + std::exp(-x))).epsilon(1e-12));

    // ...and the frozen value for a splitting of exactly 3.651 GHz.
    spin::EnergyLevels pump;
    pump.energies = Eigen::Vector2d(0.0, constants::planck * 3.651e9);
    pump.states = Eigen::MatrixXcd::Identity(2, 2);
    const auto p_pump = spin::boltzmann_populations(pump, 0.0819);
    CHECK(p_pump[0] == doctest::Approx(0.89467812).epsilon(1e-8));
  }

  SUBCASE("equal splitting to k_B Ts gives the e-fold ratio") {
    // Engineered so Delta E = k_B Ts exactly: p_lower = 1/(1 + 1/e).
    spin::EnergyLevels two;
    two.energies = Eigen::Vector2d(0.0, constants::k_boltzmann * 0.1);
    two.states = Eigen::MatrixXcd::Identity(2, 2);
    const auto p = spin::boltzmann_populations(two, 0.1);
    CHECK(p[0] == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))).epsilon(1e-12));
    CHECK(p[0] == doctest::Approx(0.7310585786).epsilon(1e-9));
  }

  SUBCASE("non-positive temperature is rejected") {
    CHECK_THROWS_AS(spin::boltzmann_populations(levels, 0.0), InputError);
    CHECK_THROWS_AS(spin::boltzmann_populations(levels, -1.0), InputError);
  }
}

TEST_CASE("allowed transitions for the effective-g site") {
  const SpinSystem sys = SpinSystem::with_effective_g("S1b", 1.41, 1.0);
  const Eigen::Vector3d field_dir = Eigen::Vector3d(0.0, 1.0, 1.0).normalized();
  const FieldPoint field = FieldPoint::along(field_dir, 0.185);
  const Eigen::Vector3d drive = Eigen::Vector3d::UnitX();

  const auto lines = spin::allowed_transitions(sys, field, 0.070, drive);
  REQUIRE(lines.size() == 1);

  SUBCASE("pump-line anchor at 185 mT") {
    CHECK(lines[0].frequency == doctest::Approx(3.651e9).epsilon(1e-3 / 3.651));  // +- 1 MHz
    CHECK(lines[0].frequency == doctest::Approx(3.65092049e9).epsilon(1e-8));
  }

  SUBCASE("line bookkeeping") {
    CHECK(lines[0].matrix_element_sq >= 0.0);
    CHECK(lines[0].population_weight > 0.0);
    CHECK(lines[0].population_weight <= 1.0);
    CHECK(lines[0].lower_index == 0);
    CHECK(lines[0].upper_index == 1);
    // Spin-1/2 with the drive orthogonal to the field: |<1| d.S |0>|^2 = 1/4,
    // scaled by g^2 through the tensor contraction.
    CHECK(lines[0].matrix_element_sq == doctest::Approx(1.41 * 1.41 / 4.0).epsilon(1e-9));
  }

  SUBCASE("frequency is invariant under field reversal") {
    const FieldPoint reversed = FieldPoint::along(-field_dir, 0.185);
    const auto rev = spin::allowed_transitions(sys, reversed, 0.070, drive);
    REQUIRE(rev.size() == 1);
    CHECK(rev[0].frequency == doctest::Approx(lines[0].frequency).epsilon(1e-12));
  }
}

TEST_CASE("hyperfine site with small A keeps 8 dominant lines") {
  SpinSystem sys;
  sys.electron_spin = 0.5;
  sys.nuclear_spin = 3.5;
  sys.g = InteractionTensor::isotropic(2.0);
  sys.a = InteractionTensor::isotropic(5e6);  // well below the Zeeman scale
  sys.q = InteractionTensor::isotropic(0.0);
  sys.site_label = "hf";

  const FieldPoint field = FieldPoint::along(Eigen::Vector3d::UnitZ(), 0.2);
  const auto lines =
      spin::allowed_transitions(sys, field, 0.070, Eigen::Vector3d::UnitX(), 1e-3);

  // Delta m_I = 0 family: one electron flip per nuclear projection.
  CHECK(lines.size() == 8);
  for (const auto& line : lines) {
    CHECK(line.frequency > 0.0);
    CHECK(line.matrix_element_sq > 0.0);
  }
}

TEST_CASE("ensemble transitions are sorted and abundance-tagged") {
  std::vector<SpinSystem> ensemble;
  ensemble.push_back(SpinSystem::with_effective_g("S2b", 2.87, 0.5));
  ensemble.push_back(SpinSystem::with_effective_g("S1b", 1.41, 0.5));

  const FieldPoint field =
      FieldPoint::along(Eigen::Vector3d(0.0, 1.0, 1.0).normalized(), 0.185);
  const auto lines =
      spin::ensemble_transitions(ensemble, field, 0.070, Eigen::Vector3d::UnitX());
  REQUIRE(lines.size() == 2);
  CHECK(lines[0].site_label == "S1b");
  CHECK(lines[1].site_label == "S2b");
  CHECK(lines[0].frequency < lines[1].frequency);
  CHECK(lines[0].abundance == doctest::Approx(0.5));

  SUBCASE("abundances must sum to one") {
    ensemble[0].abundance = 0.6;
    CHECK_THROWS_AS(
        spin::ensemble_transitions(ensemble, field, 0.070, Eigen::Vector3d::UnitX()),
        ConfigError);
  }
}

TEST_CASE("property: Hamiltonians are Hermitian for random draws") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> g_dist(0.5, 15.0);
  std::uniform_real_distribution<double> b_dist(0.01, 0.5);
  for (int k = 0; k < 50; ++k) {
    const SpinSystem sys = SpinSystem::with_effective_g("p", g_dist(rng), 1.0);
    const FieldPoint field = FieldPoint::along(random_unit(rng), b_dist(rng));
    const Eigen::MatrixXcd h = spin::build_hamiltonian(sys, field);
    CHECK((h - h.adjoint()).norm() <= 1e-12 * std::max(h.norm(), 1.0));
  }
}

TEST_CASE("property: transition frequency is linear in field") {
  const SpinSystem sys = SpinSystem::with_effective_g("lin", 1.87, 1.0);
  const Eigen::Vector3d dir = Eigen::Vector3d(0.0, 1.0, 1.0).normalized();
  const double slope_expected = 1.87 * constants::mu_b_over_h;
  for (const double b : {0.05, 0.10, 0.20, 0.30}) {
    const auto lines = spin::allowed_transitions(
        sys, FieldPoint::along(dir, b), 0.070, Eigen::Vector3d::UnitX());
    REQUIRE(lines.size() == 1);
    CHECK(lines[0].frequency / b == doctest::Approx(slope_expected).epsilon(1e-9));
  }
}

TEST_CASE("property: eigensolve splitting matches analytic Zeeman over 100 draws") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> g_dist(0.2, 15.0);
  std::uniform_real_distribution<double> b_dist(0.001, 1.0);
  for (int k = 0; k < 100; ++k) {
    const double g = g_dist(rng);
    const double b = b_dist(rng);
    const SpinSystem sys = SpinSystem::with_effective_g("z", g, 1.0);
    const auto levels =
        spin::eigensolve(spin::build_hamiltonian(sys, FieldPoint::along(random_unit(rng), b)));
    const double splitting = levels.energies[1] - levels.energies[0];
    const double expected = g * constants::bohr_magneton * b;
    CHECK(splitting == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("field point and ensemble validation") {
  CHECK_THROWS_AS(FieldPoint::along(Eigen::Vector3d::Zero(), 0.1), InputError);
  CHECK_THROWS_AS(FieldPoint::along(Eigen::Vector3d::UnitZ(), -0.1), InputError);
  const FieldPoint f = FieldPoint::along({0.0, 3.0, 4.0}, 0.2);
  CHECK(f.direction.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.vector().norm() == doctest::Approx(0.2).epsilon(1e-12));

  std::vector<SpinSystem> bad;
  bad.push_back(SpinSystem::with_effective_g("a", 2.0, 0.7));
  bad.push_back(SpinSystem::with_effective_g("b", 2.0, 0.7));
  CHECK_THROWS_AS(spin::validate_ensemble(bad), ConfigError);
}
