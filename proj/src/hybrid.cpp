#include "dalorenz/systems.hpp"

#include <cmath>

namespace dalorenz::flowint {

namespace sk = dalorenz::skew4d;

FiberTransit fiber_transit(const sk::SkewParams& sp, double s0, double b, double t, const IntegratorConfig& cfg) {
  FiberTransit out;
  if (b <= 0.0 || sp.mode == sk::SurgeryMode::None) {
    // off the tube the fiber is linear; grad b vanishes wherever b does
    const double e = std::exp(-sp.theta * t);
    out.s = s0 * e;
    out.xi_s = e;
    out.xi_b = 0.0;
    out.rate = -sp.theta * out.s;
    return out;
  }
  out.s = s0;
  if (t > 0.0) {
    Dopri5<3> ode(
        [&sp, b](const Vec3& y) {
          const sk::TransitRate r = sk::transit_rate(sp, y(0), b);
          return Vec3(r.sdot, r.d_ds * y(1), r.d_ds * y(2) + r.d_db);
        },
        cfg);
    ode.reset(0.0, Vec3(s0, 1.0, 0.0));
    while (ode.t() < t) ode.step(t);
    out.s = ode.y()(0);
    out.xi_s = ode.y()(1);
    out.xi_b = ode.y()(2);
  }
  out.rate = sk::transit_rate(sp, out.s, b).sdot;
  return out;
}

ReturnResult advance_to_section(const HybridSystem& sys, const Vec3& q) {
  if (std::abs(q(0)) > 1.0 + 1e-12 || std::abs(q(1)) > 1.0 + 1e-12 || std::abs(q(2)) > 1.0 + 1e-12) {
    throw Error(ErrorKind::OutOfDomain, "advance_to_section: section point outside [-1,1]^3");
  }
  if (std::abs(q(1)) < sys.on_leaf_tol) {
    throw Error(ErrorKind::OnStableManifold, "advance_to_section: point on L (x2 within the on-leaf tolerance)");
  }
  const model3d::BaseReturn base = model3d::base_return(sys.lp, q.head<2>());
  Vec2 gb = Vec2::Zero();
  const double b = sk::base_factor_section(sys.sp, sys.anchor, q.head<2>(), &gb);
  const FiberTransit fib = fiber_transit(sys.sp, q(2), b, base.time, sys.cfg);
  if (!std::isfinite(fib.s) || std::abs(fib.s) > 1.0 + 1e-9) {
    throw Error(ErrorKind::Escape, "advance_to_section: fiber coordinate left [-1, 1]");
  }
  ReturnResult r;
  r.image << base.image, fib.s;
  r.time = base.time;
  r.tube_hit = b > 0.0;
  r.deriv.setZero();
  r.deriv.topLeftCorner<2, 2>() = base.deriv;
  // return time depends on x2 only: t = tau_E - log|x2| / lambda_u
  const double dt_dx2 = -1.0 / (sys.lp.lambda_u * q(1));
  r.deriv(2, 0) = fib.xi_b * gb(0);
  r.deriv(2, 1) = fib.xi_b * gb(1) + fib.rate * dt_dx2;
  r.deriv(2, 2) = fib.xi_s;
  return r;
}

Vec4 hybrid_velocity(const HybridSystem& sys, const Point4& x, double b) {
  const FieldEval3 base = model3d::linear_field3(sys.lp, x.head<3>());
  Vec4 v;
  v << base.value, sk::transit_rate(sys.sp, x(3), b).sdot;
  return v;
}

namespace {

Vec3 base_grad(const HybridSystem& sys, const Point3& x) {
  Vec3 g = Vec3::Zero();
  sk::base_factor(sys.sp, sys.lp, sys.anchor, x, &g);
  return g;
}

}  // namespace

OrbitSegment<4> sample_orbit(const HybridSystem& sys, const Vec3& q0, int returns, double max_dt,
                             std::vector<std::size_t>* entries) {
  const auto& lp = sys.lp;
  OrbitSegment<4> seg;
  Vec3 q = q0;
  double t = 0.0;
  auto push = [&](double time, const Point4& x, double b) {
    seg.times.push_back(time);
    seg.states.push_back(x);
    seg.velocities.push_back(hybrid_velocity(sys, x, b));
  };
  for (int k = 0; k < returns; ++k) {
    if (std::abs(q(1)) < sys.on_leaf_tol) {
      throw Error(ErrorKind::OnStableManifold, "sample_orbit: orbit fell on L");
    }
    const double b = sk::base_factor_section(sys.sp, sys.anchor, q.head<2>());
    const Point4 entry(q(0), q(1), 1.0, q(2));
    if (k == 0) push(t, entry, b);
    if (entries) entries->push_back(seg.times.size() - 1);

    const double a = std::abs(q(1));
    const int side = q(1) < 0.0 ? -1 : 1;
    const double t_lin = -std::log(a) / lp.lambda_u;
    const int n_sub = t_lin > 0.0 ? static_cast<int>(std::ceil(t_lin / max_dt)) : 0;
    Point4 x = entry;
    for (int j = 1; j <= n_sub; ++j) {
      const double h = t_lin / n_sub;
      const double tj = t_lin * j / n_sub;
      Point4 nx;
      if (j == n_sub) {
        nx << q(0) * std::pow(a, lp.beta()), static_cast<double>(side), std::pow(a, lp.alpha()), 0.0;
      } else {
        nx << q(0) * std::exp(lp.lambda_s * tj), q(1) * std::exp(lp.lambda_u * tj), std::exp(lp.lambda_c * tj),
            0.0;
      }
      const FiberTransit fib = fiber_transit(sys.sp, x(3), b, h, sys.cfg);
      nx(3) = fib.s;
      Mat4 m = Mat4::Zero();
      m(0, 0) = std::exp(lp.lambda_s * h);
      m(1, 1) = std::exp(lp.lambda_u * h);
      m(2, 2) = std::exp(lp.lambda_c * h);
      if (fib.xi_b != 0.0) m.block<1, 3>(3, 0) = fib.xi_b * base_grad(sys, x.head<3>()).transpose();
      m(3, 3) = fib.xi_s;
      seg.steps.push_back(m);
      push(t + tj, nx, b);
      x = nx;
    }
    // exit face -> next entry through the ear
    const double sg = side;
    const Vec4 xe = hybrid_velocity(sys, x, b);
    const double x1e = x(0), x3e = x(2);
    const FiberTransit fib = fiber_transit(sys.sp, x(3), b, lp.tau_E, sys.cfg);
    Vec3 nq(sg * (lp.ear_c * x1e + lp.ear_d * x3e), sg * (lp.ear_offset - lp.ear_B * x3e), fib.s);
    const double b_next = sk::base_factor_section(sys.sp, sys.anchor, nq.head<2>());
    const Point4 next(nq(0), nq(1), 1.0, nq(2));
    // The tube factor jumps at the section when s != 0, so the fiber speed
    // is discontinuous there. Sending X(exit) to the velocity of the new
    // transit is the saltation correction; section tangents are unaffected.
    const Vec4 xn = hybrid_velocity(sys, next, b_next);
    Mat4 d = Mat4::Zero();
    d(0, 0) = sg * lp.ear_c;
    d(0, 2) = sg * lp.ear_d;
    d(1, 2) = -sg * lp.ear_B;
    if (fib.xi_b != 0.0) d.block<1, 3>(3, 0) = fib.xi_b * base_grad(sys, x.head<3>()).transpose();
    d(3, 3) = fib.xi_s;
    const Eigen::RowVector4d e2 = Eigen::RowVector4d(0.0, 1.0, 0.0, 0.0) / xe(1);
    const Mat4 m = xn * e2 + d * (Mat4::Identity() - xe * e2);
    seg.steps.push_back(m);
    t += t_lin + lp.tau_E;
    push(t, next, b_next);
    q = nq;
  }
  if (entries) entries->push_back(seg.times.size() - 1);
  return seg;
}

OrbitSegment<4> periodic_orbit(const HybridSystem& sys, const Vec3& p, int periods) {
  const OrbitSegment<4> one = sample_orbit(sys, p, 1);
  const double period = one.times.back();
  OrbitSegment<4> seg;
  seg.times.push_back(0.0);
  seg.states.push_back(one.states.front());
  seg.velocities.push_back(one.velocities.front());
  for (int k = 0; k < periods; ++k) {
    for (std::size_t i = 1; i < one.size(); ++i) {
      seg.times.push_back(k * period + one.times[i]);
      seg.states.push_back(one.states[i]);
      seg.velocities.push_back(one.velocities[i]);
      seg.steps.push_back(one.steps[i - 1]);
    }
  }
  return seg;
}

}  // namespace dalorenz::flowint
