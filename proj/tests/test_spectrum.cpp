// Spectrum checks: the linewidth law, Lorentzian lineshape, absorption
// synthesis over frequency and field grids, and spectral-hole carving and
// time evolution.
#include <cmath>
#include <vector>

#include <doctest.h>

#include "shb/constants.hpp"
#include "shb/errors.hpp"
#include "shb/hole.hpp"
#include "shb/lineshape.hpp"
#include "shb/spectrum.hpp"
#include "shb/spin_system.hpp"
#include "shb/transitions.hpp"

using namespace shb;
using spectrum::LinewidthModel;
using spectrum::LorentzianParams;
using spin::FieldPoint;
using spin::SpinSystem;

namespace {

// The shipped Er:YSO ensemble, effective-g mode, equal abundances.
std::vector<SpinSystem> er_ensemble() {
  std::vector<SpinSystem> out;
  out.push_back(SpinSystem::with_effective_g("S1a", 13.11, 0.25));
  out.push_back(SpinSystem::with_effective_g("S1b", 1.41, 0.25));
  out.push_back(SpinSystem::with_effective_g("S2a", 1.87, 0.25));
  out.push_back(SpinSystem::with_effective_g("S2b", 2.87, 0.25));
  return out;
}

const Eigen::Vector3d field_dir = Eigen::Vector3d(0.0, 1.0, 1.0).normalized();
const Eigen::Vector3d drive_dir = Eigen::Vector3d::UnitX();
const LinewidthModel er_widths{17e6, 0.21e9};  // 17 MHz + 0.21 MHz/mT

std::size_t argmax_in(const std::vector<double>& axis, const Eigen::RowVectorXd& row, double lo,
                      double hi) {
  std::size_t best = 0;
  double best_v = -1.0;
  for (std::size_t k = 0; k < axis.size(); ++k) {
    if (axis[k] >= lo && axis[k] <= hi && row[static_cast<Eigen::Index>(k)] > best_v) {
      best_v = row[static_cast<Eigen::Index>(k)];
      best = k;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("linewidth law anchors") {
  CHECK(spectrum::linewidth_at(er_widths, 0.0) == doctest::Approx(17e6));
  CHECK(spectrum::linewidth_at(er_widths, 0.167) == doctest::Approx(52.07e6).epsilon(1e-12));
  CHECK(spectrum::linewidth_at(er_widths, 0.185) == doctest::Approx(55.85e6).epsilon(1e-12));
  CHECK_THROWS_AS(spectrum::linewidth_at(er_widths, -0.01), InputError);
}

TEST_CASE("lorentzian shape: peak, half maximum and integral") {
  const double fwhm = 52.07e6;
  const double amp = 3.0;
  CHECK(spectrum::lorentzian(0.0, fwhm, amp) == doctest::Approx(amp).epsilon(1e-15));
  CHECK(spectrum::lorentzian(fwhm / 2.0, fwhm, amp) == doctest::Approx(amp / 2.0).epsilon(1e-12));
  CHECK(spectrum::lorentzian(-fwhm / 2.0, fwhm, amp) ==
        doctest::Approx(amp / 2.0).epsilon(1e-12));

  // Trapezoid integral over +-500 FWHM vs the analytic pi*A*FWHM/2; the
  // missing tails account for ~0.06%, inside the 0.1% budget.
  const double span = 500.0 * fwhm;
  const int n = 2'000'001;
  const double h = 2.0 * span / (n - 1);
  double integral = 0.0;
  for (int k = 0; k < n; ++k) {
    const double x = -span + k * h;
    const double w = (k == 0 || k == n - 1) ? 0.5 : 1.0;
    integral += w * spectrum::lorentzian(x, fwhm, amp);
  }
  integral *= h;
  const double analytic = std::numbers::pi * amp * fwhm / 2.0;
  CHECK(integral == doctest::Approx(analytic).epsilon(1e-3));
}

TEST_CASE("linspace endpoints are exact") {
  const auto axis = spectrum::linspace(1e9, 8e9, 2801);
  REQUIRE(axis.size() == 2801);
  CHECK(axis.front() == 1e9);
  CHECK(axis.back() == 8e9);
  const double step = axis[1] - axis[0];
  CHECK(step == doctest::Approx(2.5e6).epsilon(1e-12));
}

TEST_CASE("single-line synthesis peaks on the line") {
  const SpinSystem site = SpinSystem::with_effective_g("S1b", 1.41, 1.0);
  const FieldPoint field = FieldPoint::along(field_dir, 0.185);
  const auto lines = spin::allowed_transitions(site, field, 0.070, drive_dir);
  REQUIRE(lines.size() == 1);

  const auto axis = spectrum::linspace(1e9, 8e9, 2801);
  const auto grid = spectrum::synthesize_absorption(lines, er_widths, 0.185, axis);
  REQUIRE(grid.amplitude.rows() == 1);
  REQUIRE(grid.amplitude.cols() == 2801);

  Eigen::Index idx = 0;
  grid.amplitude.row(0).maxCoeff(&idx);
  const double step = axis[1] - axis[0];
  CHECK(std::abs(axis[static_cast<std::size_t>(idx)] - lines[0].frequency) <= step);

  SUBCASE("positivity everywhere") { CHECK(grid.amplitude.minCoeff() >= 0.0); }
}

TEST_CASE("er ensemble spectrum shows three peaks, the high-g site sits outside") {
  const FieldPoint field = FieldPoint::along(field_dir, 0.185);
  const auto lines = spin::ensemble_transitions(er_ensemble(), field, 0.070, drive_dir);

  // The g = 13.11 site resonates far above the grid.
  double high_g_freq = 0.0;
  for (const auto& line : lines) {
    if (line.site_label == "S1a") {
      high_g_freq = line.frequency;
    }
  }
  CHECK(high_g_freq == doctest::Approx(33.9458e9).epsilon(1e-4));
  CHECK(high_g_freq > 8e9);

  const auto axis = spectrum::linspace(1e9, 8e9, 2801);
  const auto grid = spectrum::synthesize_absorption(lines, er_widths, 0.185, axis);
  const double step = axis[1] - axis[0];

  const auto row = grid.amplitude.row(0);
  CHECK(std::abs(axis[argmax_in(axis, row, 3.2e9, 4.2e9)] - 3.651e9) <= step + 1e6);
  CHECK(std::abs(axis[argmax_in(axis, row, 4.4e9, 5.4e9)] - 4.841e9) <= step + 1e6);
  CHECK(std::abs(axis[argmax_in(axis, row, 7.0e9, 8.0e9)] - 7.431e9) <= step + 1e6);
}

TEST_CASE("spectrum additivity and zero cases") {
  const FieldPoint field = FieldPoint::along(field_dir, 0.185);
  const auto axis = spectrum::linspace(1e9, 8e9, 701);

  const SpinSystem a = SpinSystem::with_effective_g("a", 1.41, 1.0);
  const SpinSystem b = SpinSystem::with_effective_g("b", 2.87, 1.0);
  const auto lines_a = spin::allowed_transitions(a, field, 0.070, drive_dir);
  const auto lines_b = spin::allowed_transitions(b, field, 0.070, drive_dir);
  auto both = lines_a;
  both.insert(both.end(), lines_b.begin(), lines_b.end());

  const auto ga = spectrum::synthesize_absorption(lines_a, er_widths, 0.185, axis);
  const auto gb = spectrum::synthesize_absorption(lines_b, er_widths, 0.185, axis);
  const auto gboth = spectrum::synthesize_absorption(both, er_widths, 0.185, axis);
  CHECK((gboth.amplitude - (ga.amplitude + gb.amplitude)).norm() == 0.0);

  SUBCASE("no lines means a zero spectrum") {
    const auto empty = spectrum::synthesize_absorption({}, er_widths, 0.185, axis);
    CHECK(empty.amplitude.norm() == 0.0);
  }

  SUBCASE("zero-weight lines contribute nothing") {
    auto dead = lines_a;
    dead[0].population_weight = 0.0;
    const auto gd = spectrum::synthesize_absorption(dead, er_widths, 0.185, axis);
    CHECK(gd.amplitude.norm() == 0.0);
  }
}

TEST_CASE("field map rows match independent single-field synthesis") {
  const auto ensemble = er_ensemble();
  const auto field_axis = spectrum::linspace(0.070, 0.300, 5);
  const auto freq_axis = spectrum::linspace(1e9, 8e9, 351);

  const auto map = spectrum::synthesize_field_map(ensemble, er_widths, field_axis, freq_axis,
                                                  0.070, field_dir, drive_dir);
  REQUIRE(map.amplitude.rows() == 5);
  REQUIRE(map.amplitude.cols() == 351);
  CHECK(map.amplitude.minCoeff() >= 0.0);

  for (int i = 0; i < 5; ++i) {
    const FieldPoint field = FieldPoint::along(field_dir, field_axis[static_cast<std::size_t>(i)]);
    const auto lines = spin::ensemble_transitions(ensemble, field, 0.070, drive_dir);
    const auto row = spectrum::synthesize_absorption(
        lines, er_widths, field_axis[static_cast<std::size_t>(i)], freq_axis);
    CHECK((map.amplitude.row(i) - row.amplitude.row(0)).norm() == 0.0);
  }

  SUBCASE("ridge anchor: S1b line at 167 mT") {
    const FieldPoint field = FieldPoint::along(field_dir, 0.167);
    const auto lines = spin::allowed_transitions(
        SpinSystem::with_effective_g("S1b", 1.41, 1.0), field, 0.070, drive_dir);
    REQUIRE(lines.size() == 1);
    CHECK(lines[0].frequency == doctest::Approx(3.29569580e9).epsilon(1e-8));
  }
}

TEST_CASE("apply_spectral_hole carves the documented dip") {
  const LorentzianParams parent{3.651e9, 52e6, 1.0};
  const auto axis = spectrum::linspace(parent.center - 2.0 * parent.fwhm,
                                       parent.center + 2.0 * parent.fwhm, 801);

  SUBCASE("zero depth leaves the parent untouched") {
    spectrum::HoleProfileParams hole{parent.center, 0.65 * parent.fwhm, 0.0, 1e3};
    const auto holed = spectrum::apply_spectral_hole(parent, hole, axis);
    for (std::size_t k = 0; k < axis.size(); ++k) {
      CHECK(holed.amplitude[k] ==
            spectrum::lorentzian(axis[k] - parent.center, parent.fwhm, parent.amplitude));
    }
    CHECK(holed.clipped == 0);
  }

  SUBCASE("7.5% depth leaves 92.5% of the peak at the center") {
    spectrum::HoleProfileParams hole{parent.center, 0.65 * parent.fwhm, 0.075, 1e3};
    const auto holed = spectrum::apply_spectral_hole(parent, hole, axis);
    // The axis midpoint is exactly the parent center.
    const std::size_t mid = axis.size() / 2;
    CHECK(axis[mid] == doctest::Approx(parent.center));
    CHECK(holed.amplitude[mid] == doctest::Approx(0.925 * parent.amplitude).epsilon(1e-12));
    CHECK(holed.clipped == 0);
  }

  SUBCASE("holed profile never exceeds the parent") {
    spectrum::HoleProfileParams hole{parent.center + parent.fwhm, 0.65 * parent.fwhm, 0.075,
                                     1e3};
    const auto holed = spectrum::apply_spectral_hole(parent, hole, axis);
    for (std::size_t k = 0; k < axis.size(); ++k) {
      const double p =
          spectrum::lorentzian(axis[k] - parent.center, parent.fwhm, parent.amplitude);
      CHECK(holed.amplitude[k] <= p + 1e-15);
      CHECK(holed.amplitude[k] >= 0.0);
    }

    // The carved-out dip (parent minus holed) is the hole kernel itself, so
    // its maximum sits at the hole center.
    std::size_t dip_idx = 0;
    double dip_best = -1.0;
    for (std::size_t k = 0; k < axis.size(); ++k) {
      const double p =
          spectrum::lorentzian(axis[k] - parent.center, parent.fwhm, parent.amplitude);
      if (p - holed.amplitude[k] > dip_best) {
        dip_best = p - holed.amplitude[k];
        dip_idx = k;
      }
    }
    const double step = axis[1] - axis[0];
    CHECK(std::abs(axis[dip_idx] - hole.center) <= step);
  }

  SUBCASE("depth outside [0, 1] is rejected") {
    spectrum::HoleProfileParams hole{parent.center, 0.65 * parent.fwhm, 1.5, 1e3};
    CHECK_THROWS_AS(spectrum::apply_spectral_hole(parent, hole, axis), InputError);
  }
}

TEST_CASE("evolve_hole decay and apparent narrowing") {
  spectrum::HoleProfileParams hole{0.0, 0.65 * 52e6, 0.075, 1e3};
  const auto axis = spectrum::linspace(-2.0 * 52e6, 2.0 * 52e6, 801);

  SUBCASE("t = 0 returns the unevolved kernel") {
    const auto evolved = spectrum::evolve_hole(hole, [](double) { return 0.1; }, 0.0, axis);
    for (std::size_t k = 0; k < axis.size(); ++k) {
      CHECK(evolved.depth[k] ==
            doctest::Approx(spectrum::lorentzian(axis[k], hole.width, hole.depth))
                .epsilon(1e-15));
    }
  }

  SUBCASE("uniform rate preserves the width and scales the depth") {
    const double r = 0.0687;
    const double t = 10.0;
    const auto evolved = spectrum::evolve_hole(hole, [r](double) { return r; }, t, axis);
    REQUIRE(evolved.refit_converged);
    CHECK(evolved.refit_fwhm == doctest::Approx(hole.width).epsilon(1e-6));
    CHECK(evolved.refit_depth ==
          doctest::Approx(hole.depth * std::exp(-r * t)).epsilon(1e-6));
  }

  SUBCASE("faster decay outside the FWHM narrows the refitted hole") {
    const double r_in = 0.0687;
    const auto rate = [&](double delta) {
      return std::abs(delta) <= hole.width / 2.0 ? r_in : 2.0 * r_in;
    };
    double previous = 1e18;
    for (const double t : {0.0, 5.0, 10.0, 20.0, 40.0}) {
      const auto evolved = spectrum::evolve_hole(hole, rate, t, axis);
      REQUIRE(evolved.refit_converged);
      CHECK(evolved.refit_fwhm < previous);
      previous = evolved.refit_fwhm;
    }
  }

  SUBCASE("negative time or rate is rejected") {
    CHECK_THROWS_AS(spectrum::evolve_hole(hole, [](double) { return 0.1; }, -1.0, axis),
                    InputError);
    CHECK_THROWS_AS(spectrum::evolve_hole(hole, [](double) { return -0.1; }, 1.0, axis),
                    InputError);
  }
}
