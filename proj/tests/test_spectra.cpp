#include "dalorenz/error.hpp"
#include "dalorenz/spectra.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace dalorenz;
using namespace dalorenz::spectra;

namespace {

flowint::HybridSystem system_in(skew4d::SurgeryMode mode, double delta = 0.1) {
  skew4d::SkewParams sp;
  sp.mode = mode;
  sp.delta = delta;
  return section::make_hybrid(model3d::LorenzParams{}, sp);
}

Vec3 at(const section::FixedPoint& f, double s = 0.0) { return Vec3(f.x1, f.x2, s); }

}  // namespace

TEST_CASE("exponents of Q match the off-tube closed form") {
  const model3d::LorenzParams lp;
  const auto q = section::orbit_q(lp);
  const auto sys = system_in(skew4d::SurgeryMode::SaddleNode);
  const auto orbit = flowint::periodic_orbit(sys, at(q), 40);
  const auto rep = lpf_exponents(orbit, 0.0, 10 * q.period);
  std::vector<double> want{std::log(lp.ear_c * std::pow(std::abs(q.x2), lp.beta())) / q.period, -2.0,
                           std::log(std::abs(q.deriv)) / q.period};
  std::sort(want.begin(), want.end());
  for (int k = 0; k < 3; ++k) CHECK(rep.exponents[k] == doctest::Approx(want[k]).epsilon(1e-9));
  CHECK(std::abs(rep.exponents[1] + 2.0) < 1e-9);
  CHECK(rep.fiber_exponent == doctest::Approx(-2.0).epsilon(1e-9));
}

TEST_CASE("fiber exponent vanishes on P in saddle-node mode") {
  const auto p = section::orbit_p(model3d::LorenzParams{});
  const auto orbit = flowint::periodic_orbit(system_in(skew4d::SurgeryMode::SaddleNode), at(p), 20);
  const auto rep = lpf_exponents(orbit, 0.0, 5 * p.period);
  CHECK(std::abs(rep.fiber_exponent) < 1e-6);
}

TEST_CASE("attractor orbit ordering") {
  const auto sys = system_in(skew4d::SurgeryMode::SaddleNode);
  Vec3 q(0.3, -0.4, 0.1);
  for (int k = 0; k < 20; ++k) q = flowint::advance_to_section(sys, q).image;
  const auto orbit = flowint::sample_orbit(sys, q, 1000);
  const auto rep = lpf_exponents(orbit, 0.0, 20.0);
  REQUIRE(rep.exponents.size() == 3);
  CHECK(rep.exponents[0] < rep.exponents[1]);
  CHECK(rep.exponents[1] < rep.exponents[2]);
  CHECK(rep.exponents[2] > 0.0);
  CHECK(rep.window_T > 1000.0);
}

TEST_CASE("domination margins") {
  // Off the tube: N^ss is dominated by the rest.
  const auto none = system_in(skew4d::SurgeryMode::None);
  Vec3 q(0.3, -0.4, 0.1);
  for (int k = 0; k < 20; ++k) q = flowint::advance_to_section(none, q).image;
  const auto orbit = flowint::sample_orbit(none, q, 300);
  CHECK(domination_check(orbit, Split::OneTwo, 5.0, 10.0).margin > 0.0);

  // On P in saddle-node mode: N2 dominates the neutral fiber, while the flow
  // direction and the fiber are both neutral.
  const auto p = section::orbit_p(model3d::LorenzParams{});
  const auto sn = system_in(skew4d::SurgeryMode::SaddleNode);
  const auto po = flowint::periodic_orbit(sn, at(p), 20);
  const auto two_one = domination_check(po, Split::TwoOne, p.period, 5 * p.period);
  CHECK(two_one.margin > 0.0);
  CHECK(two_one.margin == doctest::Approx(std::log(std::abs(p.deriv)) / p.period).epsilon(1e-6));
  CHECK(std::abs(domination_check(po, Split::FlowVsFiber, p.period, p.period).margin) < 1e-6);
}

TEST_CASE("sectional rate on P") {
  const auto p = section::orbit_p(model3d::LorenzParams{});
  const auto orbit = flowint::periodic_orbit(system_in(skew4d::SurgeryMode::SaddleNode), at(p), 30);
  const auto s = sectional_expansion_rate(orbit, p.period, 10 * p.period);
  CHECK(s.gamma == doctest::Approx(std::log(std::abs(p.deriv)) / p.period).epsilon(1e-9));
}

TEST_CASE("sectional rate inside the linear block") {
  const Vec4 rates(-3.0, 1.8, -1.0, -2.0);
  const flowint::Field<4> lin = [&](const Vec4& x) {
    FieldEval4 f;
    f.value = rates.cwiseProduct(x);
    f.jacobian = rates.asDiagonal();
    return f;
  };
  const auto seg = flowint::integrate_tangent<4>(lin, Vec4(0.0, 0.01, 1.0, 0.0), 2.0, flowint::IntegratorConfig{});
  const auto s = sectional_expansion_rate(seg, 0.5);
  CHECK(s.gamma == doctest::Approx(0.8).epsilon(1e-8));
}

TEST_CASE("sectional rate on attractor orbits") {
  const auto sys = system_in(skew4d::SurgeryMode::SaddleNode);
  Vec3 q(-0.2, 0.7, 0.0);
  for (int k = 0; k < 20; ++k) q = flowint::advance_to_section(sys, q).image;
  const auto orbit = flowint::sample_orbit(sys, q, 60);
  CHECK(sectional_expansion_rate(orbit, 1.0, 20.0, 120.0).gamma >= 0.01);
  CHECK_THROWS_AS(sectional_expansion_rate(orbit, 1e6), Error);
}

TEST_CASE("Floquet data of Q") {
  const model3d::LorenzParams lp;
  const auto q = section::orbit_q(lp);
  for (auto mode : {skew4d::SurgeryMode::None, skew4d::SurgeryMode::SaddleNode, skew4d::SurgeryMode::Triplet}) {
    const auto f = floquet(system_in(mode), at(q));
    CHECK(f.index == 2);
    CHECK(f.period == doctest::Approx(3.003).epsilon(1e-3));
    CHECK(f.fiber_multiplier == doctest::Approx(std::exp(-2.0 * q.period)).epsilon(1e-9));
    CHECK(f.flow_multiplier == doctest::Approx(1.0).epsilon(1e-9));
    std::vector<double> want{lp.ear_c * std::pow(std::abs(q.x2), lp.beta()), std::exp(-2.0 * q.period), 1.0,
                             std::abs(q.deriv)};
    std::sort(want.begin(), want.end());
    auto got = f.moduli;
    std::sort(got.begin(), got.end());
    for (int k = 0; k < 4; ++k) CHECK(got[k] == doctest::Approx(want[k]).epsilon(1e-9));
  }
}

TEST_CASE("triplet surgery multipliers") {
  const auto p = section::orbit_p(model3d::LorenzParams{});
  const auto sys = system_in(skew4d::SurgeryMode::Triplet, 0.1);
  const auto mid = floquet(sys, at(p));
  CHECK(mid.index == 1);
  CHECK(mid.fiber_multiplier == doctest::Approx(std::exp(0.05 * p.period)).epsilon(1e-9));
  CHECK(mid.fiber_multiplier == doctest::Approx(1.162).epsilon(2e-3));
  for (double s : {0.1, -0.1}) {
    const auto side = floquet(sys, at(p, s));
    CHECK(side.index == 2);
    CHECK(side.fiber_multiplier == doctest::Approx(std::exp(-0.1 * p.period)).epsilon(1e-9));
    CHECK(side.fiber_multiplier == doctest::Approx(0.7406).epsilon(2e-3));
  }
  const auto flat = floquet(system_in(skew4d::SurgeryMode::Triplet, 0.0), at(p));
  CHECK(std::abs(flat.fiber_multiplier - 1.0) < 1e-9);
}

TEST_CASE("Floquet rejects non-periodic points") {
  const auto p = section::orbit_p(model3d::LorenzParams{});
  try {
    floquet(system_in(skew4d::SurgeryMode::SaddleNode), at(p, 0.1));
    FAIL("expected NonPeriodic");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonPeriodic);
  }
}

TEST_CASE("singularity spectrum and flow angle") {
  const auto s = singularity_spectrum(model3d::LorenzParams{}, skew4d::SkewParams{});
  const std::vector<double> want{-3.0, -2.0, -1.0, 1.8};
  for (int k = 0; k < 4; ++k) CHECK(s[k] == doctest::Approx(want[k]));
  double prev = 10.0;
  for (double x2 : {1e-1, 1e-3, 1e-6}) {
    const double a = flow_angle_near_singularity(model3d::LorenzParams{}, 0.5, x2);
    CHECK(a < prev);
    prev = a;
  }
}
