#include "dalorenz/error.hpp"
#include "dalorenz/section.hpp"
#include "dalorenz/systems.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace dalorenz;
using namespace dalorenz::flowint;

namespace {

const Vec4 kRates(-3.0, 1.8, -1.0, -2.0);

FieldEval4 linear4(const Vec4& x) {
  FieldEval4 f;
  f.value = kRates.cwiseProduct(x);
  f.jacobian = kRates.asDiagonal();
  return f;
}

IntegratorConfig tight() {
  IntegratorConfig c;
  c.rel_tol = 1e-13;
  c.abs_tol = 1e-13;
  c.event_refine_tol = 1e-13;
  return c;
}

Field<4> lorenz4() {
  ClassicalSystem cs;
  return classical_field4(cs);
}

}  // namespace

TEST_CASE("linear 4D flow matches the exponential") {
  const Vec4 x0(0.2, 0.25, 1.0, 0.1);
  const auto seg = integrate<4>(linear4, x0, 0.5, IntegratorConfig{});
  CHECK(seg.times.back() == 0.5);
  for (std::size_t k = 0; k < seg.size(); ++k) {
    const Vec4 exact = (kRates * seg.times[k]).array().exp().matrix().cwiseProduct(x0);
    CHECK((seg.states[k] - exact).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("zero duration") {
  const Vec4 x0(0.2, 0.25, 1.0, 0.1);
  const auto seg = integrate<4>(linear4, x0, 0.0, IntegratorConfig{});
  CHECK(seg.size() == 1);
  CHECK(seg.states[0] == x0);
}

TEST_CASE("classical flow forward then backward") {
  ClassicalSystem cs;
  const auto f3 = classical_field3(cs.cp);
  const auto fwd = integrate<3>(f3, Point3(1, 1, 1), 1.0, tight());
  const auto back = integrate<3>(f3, fwd.states.back(), -1.0, tight());
  CHECK(back.times.back() == -1.0);
  CHECK((back.states.back() - Point3(1, 1, 1)).norm() < 1e-6);
}

TEST_CASE("linear tangent frames are diagonal exponentials") {
  const auto seg = integrate_tangent<4>(linear4, Vec4(0.2, 0.25, 1.0, 0.1), 2.0, IntegratorConfig{});
  REQUIRE(seg.has_frames());
  for (std::size_t k = 0; k < seg.size(); k += 3) {
    const Mat4 exact = (kRates * seg.times[k]).array().exp().matrix().asDiagonal();
    CHECK((seg.frame(k) - exact).norm() / exact.norm() < 1e-9);
  }
}

TEST_CASE("classical tangent frame matches finite differences of the flow map") {
  const auto f4 = lorenz4();
  const Vec4 x0(1.0, 1.0, 1.0, 0.1);
  const auto seg = integrate_tangent<4>(f4, x0, 1.0, tight());
  const Mat4 phi = seg.frame(seg.size() - 1);
  for (int j = 0; j < 4; ++j) {
    Vec4 h = Vec4::Zero();
    h(j) = 1e-6;
    const Vec4 col =
        (integrate<4>(f4, x0 + h, 1.0, tight()).states.back() - integrate<4>(f4, x0 - h, 1.0, tight()).states.back()) /
        2e-6;
    CHECK((col - phi.col(j)).cwiseAbs().maxCoeff() < 1e-5);
  }
  // Fiber row and column are trivial for the classical backend.
  CHECK(phi(3, 3) == doctest::Approx(std::exp(-2.0)).epsilon(1e-10));
}

TEST_CASE("tangent cocycle") {
  const auto f4 = lorenz4();
  const Vec4 x0(1.0, 1.0, 1.0, 0.1);
  const IntegratorConfig cfg;
  const auto a = integrate_tangent<4>(f4, x0, 1.0, cfg);
  const auto b = integrate_tangent<4>(f4, a.states.back(), 1.0, cfg);
  const auto c = integrate_tangent<4>(f4, x0, 2.0, cfg);
  const Mat4 whole = c.frame(c.size() - 1);
  const Mat4 prod = b.frame(b.size() - 1) * a.frame(a.size() - 1);
  CHECK((whole - prod).norm() / whole.norm() < 1e-8);
  CHECK(whole.determinant() > 0.0);
}

TEST_CASE("domain exit is located on the boundary") {
  const Field<4> f = linear4;
  const Domain<4> inside = [](const Vec4& x) { return 1.0 - x(1); };
  const auto seg = integrate<4>(f, Vec4(0.2, 0.25, 1.0, 0.1), 10.0, IntegratorConfig{}, inside);
  CHECK(seg.terminal_event == "domain-exit");
  CHECK(std::abs(seg.times.back() - std::log(4.0) / 1.8) < 1e-10);
  CHECK(std::abs(seg.states.back()(1) - 1.0) < 1e-12);
}

TEST_CASE("integrator configuration is checked") {
  IntegratorConfig c;
  c.rel_tol = -1.0;
  CHECK_THROWS_AS(c.validate(), Error);
  IntegratorConfig d;
  d.max_step = 0.0;
  CHECK_THROWS_AS(d.validate(), Error);
}

TEST_CASE("hybrid advance to section") {
  const auto sys = section::make_hybrid(model3d::LorenzParams{}, skew4d::SkewParams{});
  const auto r = advance_to_section(sys, Vec3(0.2, 0.25, 0.0));
  CHECK(r.time == doctest::Approx(std::log(4.0) / 1.8 + 2.1).epsilon(1e-14));
  CHECK(r.time == doctest::Approx(0.7702 + 2.1).epsilon(1e-4));

  for (double x1 : {-0.7, 0.0, 0.4}) {
    for (double side : {-1.0, 1.0}) CHECK(advance_to_section(sys, Vec3(x1, side, 0.1)).time == 2.1);
  }
  try {
    advance_to_section(sys, Vec3(0.1, 1e-12, 0.0));
    FAIL("expected a stable-manifold error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OnStableManifold);
  }
  CHECK_THROWS_AS(advance_to_section(sys, Vec3(0.1, 1.2, 0.0)), Error);
}

TEST_CASE("fiber transit sensitivities") {
  skew4d::SkewParams sp;
  sp.mode = skew4d::SurgeryMode::Triplet;
  const IntegratorConfig cfg;
  for (double s0 : {-0.15, 0.03, 0.12}) {
    for (double b : {0.0, 0.5, 1.0}) {
      const auto f = fiber_transit(sp, s0, b, 2.3, cfg);
      const double h = 1e-6;
      const double ds = (fiber_transit(sp, s0 + h, b, 2.3, cfg).s - fiber_transit(sp, s0 - h, b, 2.3, cfg).s) / (2 * h);
      CHECK(f.xi_s == doctest::Approx(ds).epsilon(1e-6));
      if (b > 0.0 && b < 1.0) {
        const double db = (fiber_transit(sp, s0, b + h, 2.3, cfg).s - fiber_transit(sp, s0, b - h, 2.3, cfg).s) / (2 * h);
        CHECK(f.xi_b == doctest::Approx(db).epsilon(1e-5));
      }
    }
  }
  sp.mode = skew4d::SurgeryMode::None;
  CHECK(fiber_transit(sp, 0.3, 1.0, 1.5, cfg).s == doctest::Approx(0.3 * std::exp(-3.0)).epsilon(1e-14));
}

TEST_CASE("plane determinant") {
  const auto seg = integrate_tangent<4>(linear4, Vec4(0.2, 0.25, 1.0, 0.1), 1.0, IntegratorConfig{});
  for (double t : {0.0, seg.times[seg.size() / 2], seg.times.back()}) {
    CHECK(flow_det2(seg, Vec4::UnitY(), Vec4::UnitZ(), t) == doctest::Approx(std::exp(0.8 * t)).epsilon(1e-9));
  }
  CHECK(flow_det2(seg, Vec4::UnitY(), Vec4::UnitZ(), 0.0) == 1.0);
}

TEST_CASE("plane determinant on the classical backend") {
  const auto f4 = lorenz4();
  const Vec4 x0(1.0, 1.0, 1.0, 0.0);
  const auto seg = integrate_tangent<4>(f4, x0, 5.0, IntegratorConfig{});
  const Vec4 v = seg.velocities[0];
  std::mt19937_64 gen(1);
  std::normal_distribution<double> n;
  Vec4 w(n(gen), n(gen), n(gen), n(gen));
  w -= w.dot(v) / v.squaredNorm() * v;
  const double det = flow_det2(seg, v, w, 5.0);
  CHECK(det > 0.0);
  // Oracle: area ratio from the cumulative frame, via QR of the image pair.
  Eigen::Matrix<double, 4, 2> m;
  m << v.normalized(), w.normalized();
  Eigen::HouseholderQR<Eigen::Matrix<double, 4, 2>> qr(seg.frame(seg.size() - 1) * m);
  const Eigen::Matrix<double, 4, 2> rr = qr.matrixQR();
  CHECK(det == doctest::Approx(std::abs(rr(0, 0) * rr(1, 1))).epsilon(1e-6));
}

TEST_CASE("classical advance to section") {
  ClassicalSystem cs;
  const auto f3 = classical_field3(cs.cp);
  const auto seg = integrate<3>(f3, Point3(1, 1, 1), 20.0, cs.cfg);
  Vec3 q = Vec3::Zero();
  for (std::size_t k = 1; k < seg.size(); ++k) {
    if (seg.times[k] > 5.0 && seg.states[k - 1](2) > 27.0 && seg.states[k](2) <= 27.0) {
      q = Vec3(seg.states[k](0), seg.states[k](1), 0.1);
      break;
    }
  }
  const auto land = advance_to_section(cs, q);
  const auto r = advance_to_section(cs, land.image);
  CHECK(r.time > 0.0);
  CHECK(r.image(2) == doctest::Approx(land.image(2) * std::exp(-2.0 * r.time)).epsilon(1e-8));
  Mat3 fd;
  for (int j = 0; j < 3; ++j) {
    Vec3 h = Vec3::Zero();
    h(j) = 1e-6;
    fd.col(j) = (advance_to_section(cs, land.image + h).image - advance_to_section(cs, land.image - h).image) / 2e-6;
  }
  CHECK((fd - r.deriv).cwiseAbs().maxCoeff() < 1e-5);
  // Lifted point has z' < 0; the other half of the plane is rejected.
  const Point4 x = classical_lift(cs, land.image);
  CHECK(x(2) == doctest::Approx(27.0));
}

TEST_CASE("Benettin spectrum of a linear field") {
  const Field<3> lin = [](const Vec3& x) {
    FieldEval3 f;
    const Vec3 r(0.5, -0.2, -1.5);
    f.value = r.cwiseProduct(x);
    f.jacobian = r.asDiagonal();
    return f;
  };
  const auto le = benettin_spectrum(lin, Point3(0.1, 0.2, 0.3), 20.0, 0.0, 0.5, IntegratorConfig{});
  CHECK(le[0] == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(le[1] == doctest::Approx(-0.2).epsilon(1e-8));
  CHECK(le[2] == doctest::Approx(-1.5).epsilon(1e-8));
}
