#include "dalorenz/systems.hpp"

#include <cmath>

namespace dalorenz::flowint {

Point4 classical_lift(const ClassicalSystem& sys, const Vec3& q) {
  return Point4(q(0), q(1), sys.cp.rho - 1.0, q(2));
}

Field<3> classical_field3(const model3d::ClassicalParams& cp) {
  return [cp](const Vec3& x) { return model3d::classical_field(cp, x); };
}

Field<4> classical_field4(const ClassicalSystem& sys) {
  skew4d::SkewParams sp;
  sp.theta = sys.theta;
  sp.mode = skew4d::SurgeryMode::None;
  const model3d::ClassicalParams cp = sys.cp;
  return [sp, cp](const Vec4& x) { return skew4d::classical_field4(sp, cp, x); };
}

ReturnResult advance_to_section(const ClassicalSystem& sys, const Vec3& q) {
  const Point4 p = classical_lift(sys, q);
  const double level = sys.cp.rho - 1.0;
  const Field<4> field = classical_field4(sys);
  if (!(field(p).value(2) < 0.0)) {
    throw Error(ErrorKind::OutOfDomain, "advance_to_section: point is not on the downward section z = rho - 1");
  }
  Dopri5<20> ode(tangent_rhs<4>(field), sys.cfg);
  ode.reset(0.0, pack_tangent<4>(p, Mat4::Identity()));
  auto g = [level](const TangentState<4>& y) { return y(2) - level; };
  double g_prev = 0.0;
  while (ode.t() < sys.max_return_time) {
    ode.step(sys.max_return_time);
    const double gn = g(ode.y());
    if (g_prev > 0.0 && gn <= 0.0) {
      const double tc = ode.locate(g, g_prev, gn);
      const TangentState<4> yc = ode.dense(tc);
      Point4 x = yc.head<4>();
      x(2) = level;
      const Mat4 phi = unpack_frame<4>(yc);
      const Vec4 v = field(x).value;
      // project along the flow onto the section
      const Mat4 proj = Mat4::Identity() - v * Eigen::RowVector4d(0.0, 0.0, 1.0 / v(2), 0.0);
      const Mat4 d = proj * phi;
      const int idx[3] = {0, 1, 3};
      ReturnResult r;
      r.image << x(0), x(1), x(3);
      r.time = tc;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) r.deriv(i, j) = d(idx[i], idx[j]);
      }
      r.tube_hit = false;
      return r;
    }
    g_prev = gn;
  }
  throw Error(ErrorKind::Escape, "advance_to_section: no return within max_return_time");
}

std::vector<double> benettin_spectrum(const Field<3>& field, const Point3& x0, double horizon, double transient,
                                      double renorm_dt, const IntegratorConfig& cfg) {
  if (!(horizon > 0.0) || !(renorm_dt > 0.0)) {
    throw Error(ErrorKind::DegenerateInput, "benettin_spectrum: horizon and renorm_dt must be positive");
  }
  Point3 x = x0;
  if (transient > 0.0) {
    Dopri5<3> warm([&field](const Vec3& y) { return field(y).value; }, cfg);
    warm.reset(0.0, x);
    while (warm.t() < transient) warm.step(transient);
    x = warm.y();
  }
  Dopri5<12> ode(tangent_rhs<3>(field), cfg);
  ode.keep_step_size(true);
  Mat3 q = Mat3::Identity();
  Vec3 acc = Vec3::Zero();
  const long n = static_cast<long>(std::llround(horizon / renorm_dt));
  double t = 0.0;
  for (long k = 0; k < n; ++k) {
    ode.reset(t, pack_tangent<3>(x, q));
    const double t_next = (k + 1) * renorm_dt;
    while (ode.t() < t_next) ode.step(t_next);
    t = t_next;
    x = ode.y().head<3>();
    Eigen::HouseholderQR<Mat3> qr(unpack_frame<3>(ode.y()));
    const Mat3 r = qr.matrixQR().triangularView<Eigen::Upper>();
    q = qr.householderQ();
    for (int i = 0; i < 3; ++i) acc(i) += std::log(std::abs(r(i, i)));
  }
  const double total = n * renorm_dt;
  return {acc(0) / total, acc(1) / total, acc(2) / total};
}

}  // namespace dalorenz::flowint
