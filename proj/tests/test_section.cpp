#include "dalorenz/error.hpp"
#include "dalorenz/section.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace dalorenz;
using namespace dalorenz::section;

namespace {

HybridSystem defaults() { return make_hybrid(model3d::LorenzParams{}, skew4d::SkewParams{}); }

// Plain bisection on offset - B x^alpha - x over (0, 1).
double right_root(double lo, double hi) {
  auto g = [](double x) { return 0.95 - 1.85 * std::pow(x, 5.0 / 9.0) - x; };
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("hybrid return map closed form") {
  const auto r = return_map(defaults(), Vec3(0.2, 0.25, 0.0));
  CHECK(r.image(1) == doctest::Approx(0.95 - 1.85 * std::pow(0.25, 5.0 / 9.0)).epsilon(1e-14));
  CHECK(r.image(1) == doctest::Approx(0.0934).epsilon(1e-3));
  CHECK(r.time == doctest::Approx(std::log(4.0) / 1.8 + 2.1).epsilon(1e-14));
  CHECK(r.image(2) == 0.0);
}

TEST_CASE("off-tube fiber contracts at rate theta") {
  const double s = 1e-3;
  const auto r = return_map(defaults(), Vec3(0.2, -0.25, s));
  CHECK_FALSE(r.tube_hit);
  CHECK(r.time == doctest::Approx(2.8702).epsilon(1e-4));
  CHECK(r.image(2) / s == doctest::Approx(std::exp(-2.0 * r.time)).epsilon(1e-9));
}

TEST_CASE("return derivative matches finite differences") {
  for (auto mode : {skew4d::SurgeryMode::SaddleNode, skew4d::SurgeryMode::Triplet}) {
    skew4d::SkewParams sp;
    sp.mode = mode;
    const auto sys = make_hybrid(model3d::LorenzParams{}, sp);
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int tested = 0, in_tube = 0;
    while (tested < 50) {
      // Bias half the samples into the tube around P.
      const Vec2 c = tested % 2 ? Vec2(sys.anchor.section_point + 0.15 * Vec2(u(gen), u(gen))) : Vec2(u(gen), u(gen));
      const Vec3 q(c(0), c(1), 0.3 * u(gen));
      if (std::abs(q(1)) < 0.02 || std::abs(q(1)) > 1.0) continue;
      ++tested;
      const auto r = return_map(sys, q);
      in_tube += r.tube_hit ? 1 : 0;
      Mat3 fd;
      for (int j = 0; j < 3; ++j) {
        Vec3 h = Vec3::Zero();
        h(j) = 1e-7;
        fd.col(j) = (return_map(sys, q + h).image - return_map(sys, q - h).image) / 2e-7;
      }
      const double scale = std::max(1.0, r.deriv.cwiseAbs().maxCoeff());
      CHECK((fd - r.deriv).cwiseAbs().maxCoeff() < 1e-5 * scale);
    }
    CHECK(in_tube > 5);
  }
}

TEST_CASE("fixed points of the quotient map") {
  const model3d::LorenzParams lp;
  const auto fps = find_fixed_points(lp);
  REQUIRE(fps.size() == 2);
  const auto p = orbit_p(lp);
  const auto q = orbit_q(lp);
  const double x = right_root(1e-6, 1.0);
  CHECK(p.x2 == doctest::Approx(x).epsilon(1e-10));
  CHECK(p.x2 == doctest::Approx(0.197).epsilon(3e-3));
  CHECK(q.x2 == doctest::Approx(-p.x2).epsilon(1e-12));
  CHECK(p.side == 1);
  CHECK(q.side == -1);
  const double slope = 1.85 * (5.0 / 9.0) * std::pow(x, 5.0 / 9.0 - 1.0);
  CHECK(std::abs(p.deriv) == doctest::Approx(slope).epsilon(1e-9));
  CHECK(std::abs(p.deriv) > 1.0);

  // Period-one returns close up.
  const auto sys = defaults();
  for (const auto& f : {p, q}) {
    const auto r = return_map(sys, Vec3(f.x1, f.x2, 0.0));
    CHECK((r.image - Vec3(f.x1, f.x2, 0.0)).norm() < 1e-10);
    CHECK(r.time == doctest::Approx(f.period).epsilon(1e-12));
  }
  CHECK(q.period == doctest::Approx(3.003).epsilon(1e-3));
}

TEST_CASE("cone check examples") {
  const Eigen::VectorXd e2 = Vec2::UnitY();
  const auto base = model3d::base_return(model3d::LorenzParams{}, Vec2(0.2, 0.25));
  CHECK(cone_check(base.deriv, 1.0, 0.5, e2, e2).pass);
  model3d::LorenzParams lp;
  lp.ear_c = 0.1;
  CHECK(cone_check(model3d::base_return(lp, Vec2(0.2, 0.25)).deriv, 1.0, 0.5, e2, e2).pass);

  const auto id = cone_check(Mat2::Identity(), 1.0, 0.5, e2, e2);
  CHECK_FALSE(id.pass);
  CHECK(id.worst_ratio == doctest::Approx(2.0));

  const auto diag = cone_check(Vec2(0.1, 2.0).asDiagonal().toDenseMatrix(), 1.0, 0.5, e2, e2);
  CHECK(diag.pass);
  CHECK(diag.worst_ratio == doctest::Approx(0.1));

  // A rotation by 90 degrees sends the cone outside itself.
  Mat2 rot;
  rot << 0, -1, 1, 0;
  CHECK_FALSE(cone_check(rot, 1.0, 1.0, e2, e2).pass);

  // 3D: the section derivative keeps D_1 inside D_1.
  const Eigen::VectorXd e2_3 = Vec3::UnitY();
  const auto r = return_map(defaults(), Vec3(0.3, -0.6, 0.2));
  CHECK(cone_check(r.deriv, 1.0, 1.0, e2_3, e2_3).pass);
  CHECK_FALSE(cone_check(Mat3::Identity(), 1.0, 0.5, e2_3, e2_3).pass);
}

TEST_CASE("cone membership and adapted norm") {
  const Cone c = section_cone(3, 0.5);
  CHECK(c.contains(Vec3(0.3, 1.0, 0.3)));
  CHECK_FALSE(c.contains(Vec3(0.6, 1.0, 0.0)));
  CHECK(c.contains(Vec3(0.0, -1.0, 0.5)));
  CHECK(c.adapted_norm(Vec3(0.3, 2.0, 0.4)) == doctest::Approx(2.0));
  CHECK(c.adapted_norm(Vec3(1.0, 0.1, 0.0)) == doctest::Approx(2.0));
}

TEST_CASE("expansion examples") {
  const model3d::LorenzParams lp;
  const double al = lp.alpha();
  const auto far = model3d::base_return(lp, Vec2(0.1, 0.9));
  const auto g = expansion_check(far.deriv, section_cone(2, 1.0), 1.0);
  CHECK(g.pass);
  CHECK(g.min_growth >= 1.85 * al * std::pow(0.9, al - 1.0) * (1.0 - 1e-9));
  CHECK(g.min_growth == doctest::Approx(1.076).epsilon(2e-3));

  const auto near = model3d::base_return(lp, Vec2(0.1, 1e-4));
  const auto gn = expansion_check(near.deriv, section_cone(2, 1.0), 3.0);
  CHECK(gn.pass);
  CHECK(gn.min_growth == doctest::Approx(1.85 * al * std::pow(1e-4, al - 1.0)).epsilon(1e-3));
  CHECK(gn.min_growth == doctest::Approx(61.0).epsilon(0.02));

  CHECK(expansion_check(Mat2::Identity() * 0.1, section_cone(2, 1.0), 0.0).pass);
}

TEST_CASE("cu-curve along the cone axis grows to eps0") {
  const auto sys = defaults();
  const model3d::LorenzParams lp;
  const auto tr = iterate_cu_curve(sys, make_segment(Vec3(0.1, 0.6, 0.0), Vec3::UnitY(), 1e-3), 0.2, 200);
  CHECK(tr.reached);
  CHECK(tr.k_eps >= 0);
  CHECK(tr.k_eps <= 192);
  for (std::size_t k = 0; k < tr.growth.size(); ++k) {
    if (!tr.split[k]) CHECK(tr.growth[k] >= 1.85 * lp.alpha() * (1.0 - 1e-9));
  }
  CHECK(tr.lengths.front() == doctest::Approx(1e-3).epsilon(1e-9));
  CHECK(tr.lengths[tr.k_eps] >= 0.2);
}

TEST_CASE("cu-curve straddling L is split") {
  const auto sys = defaults();
  const auto tr = iterate_cu_curve(sys, make_segment(Vec3(0.3, 1e-4, 0.0), Vec3::UnitY(), 1e-3), 0.2, 200);
  REQUIRE_FALSE(tr.split.empty());
  CHECK(tr.split[0]);
  CHECK(tr.crossed);
  const auto [a, b] = tr.pieces[0];
  CHECK(std::max(a, b) >= 0.5 * tr.lengths[0] * (1.0 - 1e-9));
  CHECK(a + b == doctest::Approx(tr.lengths[0]).epsilon(1e-9));
}

TEST_CASE("cu-curve outside the cone is rejected") {
  const auto sys = defaults();
  try {
    iterate_cu_curve(sys, make_segment(Vec3(0.1, 0.5, 0.0), Vec3(1.0, 0.2, 0.0), 1e-3), 0.2, 10);
    FAIL("expected a precondition error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }
}

TEST_CASE("curve lengths") {
  CuCurve c{{Vec3(0, 0, 0), Vec3(0.5, 1, 0), Vec3(0.5, 2, 0)}};
  CHECK(curve_euclid_length(c) == doctest::Approx(std::sqrt(1.25) + 1.0));
  CHECK(curve_length(c, 1.0) == doctest::Approx(2.0));
  CHECK(curve_length(c, 0.25) == doctest::Approx(3.0));
}

TEST_CASE("classical model through the common interface") {
  ClassicalSystem cs;
  const Model m = cs;
  CHECK_THROWS_AS(return_map(m, Vec3(100.0, 100.0, 0.0)), Error);
}
