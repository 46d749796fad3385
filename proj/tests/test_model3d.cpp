#include "dalorenz/error.hpp"
#include "dalorenz/flowint.hpp"
#include "dalorenz/model3d.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace dalorenz;
using namespace dalorenz::model3d;

namespace {

bool fails(const ValidationReport& r, const std::string& name) {
  const auto* c = r.find(name);
  return c != nullptr && !c->pass;
}

}  // namespace

TEST_CASE("default and reference parameters pass the gate") {
  LorenzParams p;
  const auto r = validate_params(p);
  CHECK(r.passed());
  for (const auto& c : r.checks) CHECK_MESSAGE(c.margin > 0.0, c.name);
  CHECK(p.alpha() == doctest::Approx(5.0 / 9.0));
  CHECK(p.ear_B * p.alpha() == doctest::Approx(1.0278).epsilon(1e-4));

  p.ear_c = 0.1;
  CHECK(validate_params(p).passed());
}

TEST_CASE("gate rejects bad eigenvalue orderings") {
  LorenzParams p;
  p.lambda_u = 0.5;
  CHECK(fails(validate_params(p), "lambda_c+lambda_u>0"));

  LorenzParams q;
  q.lambda_s = -1.0;
  q.lambda_c = -3.0;
  q.lambda_u = 2.0;
  CHECK(fails(validate_params(q), "lambda_s<lambda_c"));
}

TEST_CASE("classical gate") {
  CHECK(validate_params(ClassicalParams{}).passed());
  ClassicalParams cp;
  cp.rho = 0.5;
  CHECK(fails(validate_params(cp), "rho>1"));
}

TEST_CASE("linear block field") {
  LorenzParams p;
  CHECK(eval_field3(p, Point3::Zero()).value.norm() == 0.0);
  const auto f = eval_field3(p, Point3(0.2, 0.25, 1.0));
  CHECK(f.value(0) == doctest::Approx(-0.6));
  CHECK(f.value(1) == doctest::Approx(0.45));
  CHECK(f.value(2) == doctest::Approx(-1.0));
  const auto g = eval_field3(p, Point3(-0.3, 0.7, 0.4));
  CHECK((g.jacobian - Vec3(-3.0, 1.8, -1.0).asDiagonal().toDenseMatrix()).norm() == 0.0);
  CHECK_THROWS_AS(eval_field3(p, Point3(0.0, 1.5, 0.5)), Error);
}

TEST_CASE("linear exit matches closed form and the integrator") {
  LorenzParams p;
  const auto e = linear_exit(p, Point3(0.2, 0.25, 1.0));
  CHECK(e.exit_time == doctest::Approx(std::log(4.0) / 1.8).epsilon(1e-14));
  CHECK(e.exit_time == doctest::Approx(0.7702).epsilon(1e-4));
  CHECK(e.exit_point(0) == doctest::Approx(0.0198).epsilon(2e-3));
  CHECK(e.exit_point(1) == 1.0);
  CHECK(e.exit_point(2) == doctest::Approx(0.4629).epsilon(1e-4));
  CHECK(e.side == 1);

  // Independent oracle: integrate the linear field until x2 reaches 1.
  const flowint::Field<3> field = [&](const Vec3& x) { return linear_field3(p, x); };
  const flowint::Domain<3> inside = [](const Vec3& x) { return 1.0 - x(1); };
  const auto seg = flowint::integrate<3>(field, Point3(0.2, 0.25, 1.0), 5.0, flowint::IntegratorConfig{}, inside);
  REQUIRE(seg.terminal_event == "domain-exit");
  CHECK(std::abs(seg.times.back() - e.exit_time) < 1e-9);
  CHECK((seg.states.back() - e.exit_point).norm() < 1e-9);
}

TEST_CASE("linear exit special entries") {
  LorenzParams p;
  const auto on_face = linear_exit(p, Point3(0.0, 1.0, 1.0));
  CHECK(on_face.exit_time == 0.0);
  CHECK(on_face.exit_point == Point3(0.0, 1.0, 1.0));

  const auto left = linear_exit(p, Point3(0.5, -0.5, 1.0));
  CHECK(left.side == -1);
  CHECK(left.exit_time == doctest::Approx(std::log(2.0) / 1.8).epsilon(1e-14));
  CHECK(left.exit_time == doctest::Approx(0.3851).epsilon(1e-4));
  CHECK(left.exit_point(1) == -1.0);

  CHECK_THROWS_AS(linear_exit(p, Point3(0.1, 0.0, 1.0)), Error);
}

TEST_CASE("ear map arithmetic") {
  LorenzParams p;
  p.ear_c = 0.1;
  const auto e = linear_exit(p, Point3(0.2, 0.25, 1.0));
  const auto img = ear_map(p, e);
  const double x1 = e.exit_point(0), x3 = e.exit_point(2);
  CHECK(img.image(1) == doctest::Approx(0.95 - 1.85 * x3).epsilon(1e-14));
  CHECK(img.image(0) == doctest::Approx(0.1 * x1 + 0.2 * x3).epsilon(1e-14));
  CHECK(img.image(1) == doctest::Approx(0.0936).epsilon(2e-3));
  CHECK(img.image(0) == doctest::Approx(0.0946).epsilon(2e-3));
  CHECK(img.transit == p.tau_E);
}

TEST_CASE("ear image at the cusp and leaf preservation") {
  LorenzParams p;
  for (int side : {1, -1}) {
    ExitState e;
    e.side = side;
    // Exits near the cusp come from entries near L, so x1 shrinks with x3.
    const double x3 = 1e-14;
    e.exit_point = Point3(0.3 * std::pow(x3, p.beta() / p.alpha()), side, x3);
    const auto img = ear_map(p, e);
    CHECK(std::abs(img.image(0)) < 1e-12);
    CHECK(img.image(1) == doctest::Approx(side * 0.95));
  }
  ExitState a, b;
  a.exit_point = Point3(0.1, 1.0, 0.37);
  b.exit_point = Point3(-0.6, 1.0, 0.37);
  CHECK(ear_map(p, a).image(1) == ear_map(p, b).image(1));
}

TEST_CASE("classical Lorenz field") {
  ClassicalParams cp;
  CHECK(classical_field(cp, Point3::Zero()).value.norm() == 0.0);
  const double r = std::sqrt(cp.beta * (cp.rho - 1.0));
  CHECK(classical_field(cp, Point3(r, r, cp.rho - 1.0)).value.norm() < 1e-12);
  CHECK(classical_field(cp, classical_equilibrium(cp, -1)).value.norm() < 1e-12);

  Eigen::EigenSolver<Mat3> es(classical_field(cp, Point3::Zero()).jacobian);
  std::vector<double> got;
  for (int k = 0; k < 3; ++k) got.push_back(es.eigenvalues()(k).real());
  std::sort(got.begin(), got.end());
  const double disc = std::sqrt(11.0 * 11.0 + 4.0 * 10.0 * 27.0);
  CHECK(got[0] == doctest::Approx(0.5 * (-11.0 - disc)).epsilon(1e-12));
  CHECK(got[1] == doctest::Approx(-8.0 / 3.0).epsilon(1e-12));
  CHECK(got[2] == doctest::Approx(0.5 * (-11.0 + disc)).epsilon(1e-12));
  CHECK(got[2] == doctest::Approx(11.8277).epsilon(1e-5));
  CHECK(got[0] == doctest::Approx(-22.8277).epsilon(1e-5));
}

TEST_CASE("classical Jacobian matches finite differences") {
  ClassicalParams cp;
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int k = 0; k < 20; ++k) {
    const Point3 x(u(gen), u(gen), u(gen) + 25.0);
    Mat3 fd;
    for (int j = 0; j < 3; ++j) {
      Vec3 h = Vec3::Zero();
      h(j) = 1e-6;
      fd.col(j) = (classical_field(cp, x + h).value - classical_field(cp, x - h).value) / 2e-6;
    }
    CHECK((fd - classical_field(cp, x).jacobian).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("one-dimensional map") {
  LorenzParams p;
  CHECK(one_dim_map(p, 1.0) == doctest::Approx(0.95 - 1.85));
  CHECK(one_dim_map(p, 0.25) == doctest::Approx(0.95 - 1.85 * std::pow(0.25, 5.0 / 9.0)));
  CHECK(one_dim_map(p, -0.25) == doctest::Approx(-one_dim_map(p, 0.25)));
  const double h = 1e-7;
  for (double x : {-0.8, -0.2, 0.05, 0.4, 0.9}) {
    const double fd = (one_dim_map(p, x + h) - one_dim_map(p, x - h)) / (2 * h);
    CHECK(one_dim_map_deriv(p, x) == doctest::Approx(fd).epsilon(1e-6));
  }
  for (double x : {-0.9, -0.3, 0.3, 0.9}) CHECK(std::abs(one_dim_map_deriv(p, x)) > 1.0);
}

TEST_CASE("base return derivative matches finite differences") {
  LorenzParams p;
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int tested = 0;
  while (tested < 50) {
    const Vec2 q(u(gen), u(gen));
    if (std::abs(q(1)) < 0.01) continue;
    ++tested;
    const auto r = base_return(p, q);
    Mat2 fd;
    for (int j = 0; j < 2; ++j) {
      Vec2 h = Vec2::Zero();
      h(j) = 1e-7;
      fd.col(j) = (base_return(p, q + h).image - base_return(p, q - h).image) / 2e-7;
    }
    CHECK((fd - r.deriv).cwiseAbs().maxCoeff() < 1e-5 * std::max(1.0, r.deriv.cwiseAbs().maxCoeff()));
    CHECK(r.time >= p.tau_E);
  }
}

TEST_CASE("base return limit at the leaf") {
  LorenzParams p;
  const Vec2 lim = base_return_limit(p, 1);
  const auto near = base_return(p, Vec2(0.3, 1e-14));
  CHECK((near.image - lim).norm() < 1e-6);
}

TEST_CASE("entry projection is invariant along the linear flow") {
  LorenzParams p;
  const Point3 x0(0.3, 0.1, 1.0);
  Eigen::Matrix<double, 2, 3> jac;
  const Vec2 pi0 = entry_projection(p, x0);
  for (double t : {0.2, 0.7, 1.2}) {
    const Point3 xt(0.3 * std::exp(-3.0 * t), 0.1 * std::exp(1.8 * t), std::exp(-t));
    CHECK((entry_projection(p, xt, &jac) - pi0).norm() < 1e-12);
  }
  const Point3 x(0.2, 0.3, 0.6);
  entry_projection(p, x, &jac);
  for (int j = 0; j < 3; ++j) {
    Vec3 h = Vec3::Zero();
    h(j) = 1e-6;
    const Vec2 fd = (entry_projection(p, x + h) - entry_projection(p, x - h)) / 2e-6;
    CHECK((fd - jac.col(j)).norm() < 1e-6);
  }
}
