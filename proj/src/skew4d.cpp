#include "dalorenz/skew4d.hpp"

#include "dalorenz/error.hpp"

#include <cmath>

namespace dalorenz::skew4d {

std::string to_string(SurgeryMode mode) {
  switch (mode) {
    case SurgeryMode::None: return "none";
    case SurgeryMode::SaddleNode: return "saddle-node";
    case SurgeryMode::Triplet: return "triplet";
  }
  return "none";
}

SurgeryMode parse_mode(const std::string& text) {
  if (text == "none") return SurgeryMode::None;
  if (text == "saddle-node" || text == "saddlenode") return SurgeryMode::SaddleNode;
  if (text == "triplet") return SurgeryMode::Triplet;
  throw Error(ErrorKind::Config, "unknown surgery mode '" + text + "' (none | saddle-node | triplet)");
}

double smoothstep_down(double u, double* du) {
  if (u <= 0.0) {
    if (du) *du = 0.0;
    return 1.0;
  }
  if (u >= 1.0) {
    if (du) *du = 0.0;
    return 0.0;
  }
  const double u2 = u * u;
  if (du) *du = -30.0 * u2 * (1.0 - u) * (1.0 - u);
  return 1.0 - u2 * u * (10.0 - 15.0 * u + 6.0 * u2);
}

double fiber_profile(const SkewParams& p, double s, double* ds) {
  if (p.mode == SurgeryMode::Triplet) {
    const double a = std::abs(s);
    if (a <= p.s_plateau) {
      if (ds) *ds = 0.0;
      return 1.0;
    }
    const double width = p.s_max - p.s_plateau;
    double d = 0.0;
    const double v = smoothstep_down((a - p.s_plateau) / width, &d);
    if (ds) *ds = d * (s < 0.0 ? -1.0 : 1.0) / width;
    return v;
  }
  // single maximum at s = 0
  const double w = s * s / (p.s_max * p.s_max);
  double d = 0.0;
  const double v = smoothstep_down(w, &d);
  if (ds) *ds = d * 2.0 * s / (p.s_max * p.s_max);
  return v;
}

double base_factor_section(const SkewParams& p, const PeriodicOrbitRef& anchor, const Vec2& q, Vec2* grad) {
  const Vec2 diff = q - anchor.section_point;
  const double r2 = p.tube_radius * p.tube_radius;
  const double w = diff.squaredNorm() / r2;
  double d = 0.0;
  const double v = smoothstep_down(w, &d);
  if (grad) *grad = d * 2.0 * diff / r2;
  return v;
}

double base_factor(const SkewParams& p, const model3d::LorenzParams& lp, const PeriodicOrbitRef& anchor,
                   const Point3& x, Vec3* grad) {
  if (grad) grad->setZero();
  // below this height the entry point is numerically at L0, far outside the tube
  if (!(x(2) > 1e-100)) return 0.0;
  Eigen::Matrix<double, 2, 3> jac;
  const Vec2 q = model3d::entry_projection(lp, x, &jac);
  if (!q.allFinite() || !jac.allFinite()) return 0.0;
  Vec2 g;
  const double v = base_factor_section(p, anchor, q, &g);
  if (grad && v > 0.0) *grad = jac.transpose() * g;
  return v;
}

BumpValue bump(const SkewParams& p, const model3d::LorenzParams& lp, const Point4& q,
               const PeriodicOrbitRef& anchor) {
  BumpValue out;
  Vec3 gb;
  const double b = base_factor(p, lp, anchor, q.head<3>(), &gb);
  if (b == 0.0) return out;
  double dchi = 0.0;
  const double chi = fiber_profile(p, q(3), &dchi);
  out.value = b * chi;
  out.grad.head<3>() = chi * gb;
  out.grad(3) = b * dchi;
  return out;
}

FiberLaw fiber_law(const SkewParams& p, double s, double eta) {
  FiberLaw f;
  const double th = p.theta;
  switch (p.mode) {
    case SurgeryMode::None:
      f.sdot = -th * s;
      f.d_ds = -th;
      f.d_deta = 0.0;
      break;
    case SurgeryMode::SaddleNode:
      f.sdot = -th * s * (1.0 - eta);
      f.d_ds = -th * (1.0 - eta);
      f.d_deta = th * s;
      break;
    case SurgeryMode::Triplet: {
      const double cubic = s * (s * s - p.delta * p.delta);
      f.sdot = -th * s * (1.0 - eta) - eta * p.kappa * cubic;
      f.d_ds = -th * (1.0 - eta) - eta * p.kappa * (3.0 * s * s - p.delta * p.delta);
      f.d_deta = th * s - p.kappa * cubic;
      break;
    }
  }
  return f;
}

FiberEval fiber_field(const SkewParams& p, const Point4& q, const BumpValue& eta) {
  const FiberLaw f = fiber_law(p, q(3), eta.value);
  FiberEval out;
  out.sdot = f.sdot;
  out.dsdot_ds = f.d_ds + f.d_deta * eta.grad(3);
  out.dsdot_dx = f.d_deta * eta.grad.head<3>();
  return out;
}

TransitRate transit_rate(const SkewParams& p, double s, double b) {
  double dchi = 0.0;
  const double chi = b > 0.0 ? fiber_profile(p, s, &dchi) : 0.0;
  const FiberLaw f = fiber_law(p, s, b * chi);
  return {f.sdot, f.d_ds + f.d_deta * b * dchi, f.d_deta * chi};
}

FieldEval4 hybrid_field4(const SkewParams& p, const model3d::LorenzParams& lp, const PeriodicOrbitRef& anchor,
                         const Point4& q) {
  const FieldEval3 base = model3d::linear_field3(lp, q.head<3>());
  const BumpValue eta = bump(p, lp, q, anchor);
  const FiberEval fib = fiber_field(p, q, eta);
  FieldEval4 out;
  out.value << base.value, fib.sdot;
  out.jacobian.setZero();
  out.jacobian.topLeftCorner<3, 3>() = base.jacobian;
  out.jacobian.block<1, 3>(3, 0) = fib.dsdot_dx.transpose();
  out.jacobian(3, 3) = fib.dsdot_ds;
  return out;
}

FieldEval4 eval_field4(const SkewParams& p, const model3d::LorenzParams& lp, const PeriodicOrbitRef& anchor,
                       const Point4& q) {
  if (!model3d::in_linear_block(q.head<3>())) {
    throw Error(ErrorKind::OutOfDomain, "eval_field4: base point outside the linear block");
  }
  return hybrid_field4(p, lp, anchor, q);
}

FieldEval4 classical_field4(const SkewParams& p, const model3d::ClassicalParams& cp, const Point4& q) {
  const FieldEval3 base = model3d::classical_field(cp, q.head<3>());
  FieldEval4 out;
  out.value << base.value, -p.theta * q(3);
  out.jacobian.setZero();
  out.jacobian.topLeftCorner<3, 3>() = base.jacobian;
  out.jacobian(3, 3) = -p.theta;
  return out;
}

ValidationReport validate_theta(const SkewParams& p, const model3d::LorenzParams& lp) {
  ValidationReport r;
  const double ls0 = lp.strong_stable_rate();
  r.add("lambda_s0<-theta", "Eq(2)", "lambda^s_0 < -theta", -p.theta - ls0);
  r.add("-theta<lambda_c", "Eq(2)", "-theta < lambda^c", lp.lambda_c + p.theta);
  return r;
}

ValidationReport validate_skew(const SkewParams& p, const Vec2& p0, const Vec2& q0) {
  ValidationReport r;
  r.add("theta>0", "Sec3.2", "theta > 0", p.theta);
  r.add("tube_radius>0", "Sec3.2", "tube_radius > 0", p.tube_radius);
  r.add("s_plateau>0", "Sec3.4", "0 < s_plateau", p.s_plateau);
  r.add("s_plateau<s_max", "Sec3.4", "s_plateau < s_max", p.s_max - p.s_plateau);
  r.add("s_max<=1", "Sec3.2", "s_max <= 1", 1.0 - p.s_max + 1e-300);
  r.add("kappa>0", "Sec3.4", "kappa > 0", p.kappa);
  r.add("delta>=0", "Sec3.4", "delta >= 0", p.delta + 1e-300);
  r.add("delta<s_plateau", "Sec3.4", "delta < s_plateau", p.s_plateau - p.delta);
  r.add("tube_clear_of_Q", "Sec3.2", "tube_radius < |P0 - Q0| / 2", 0.5 * (p0 - q0).norm() - p.tube_radius);
  r.add("tube_clear_of_L", "Sec3.2", "tube_radius < |x2(P0)|", std::abs(p0(1)) - p.tube_radius);
  return r;
}

}  // namespace dalorenz::skew4d
