#include "dalorenz/model3d.hpp"

#include "dalorenz/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dalorenz {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OutOfDomain: return "out-of-domain";
    case ErrorKind::OnStableManifold: return "on-stable-manifold";
    case ErrorKind::Escape: return "escape";
    case ErrorKind::DegenerateInput: return "degenerate-input";
    case ErrorKind::NearSingularity: return "near-singularity";
    case ErrorKind::NonPeriodic: return "non-periodic";
    case ErrorKind::StepUnderflow: return "step-underflow";
    case ErrorKind::DegenerateCurve: return "degenerate-curve";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

namespace model3d {

namespace {

int sign_of(double v) { return v < 0.0 ? -1 : 1; }

}  // namespace

double LorenzParams::strong_stable_rate() const {
  if (ear_c <= 0.0) return lambda_s;
  return std::max(lambda_s, std::log(ear_c) / tau_E);
}

ValidationReport validate_params(const LorenzParams& p) {
  ValidationReport r;
  r.add("lambda_s<lambda_c", "P1", "lambda_s < lambda_c", p.lambda_c - p.lambda_s);
  r.add("lambda_c<0", "P1", "lambda_c < 0", -p.lambda_c);
  r.add("lambda_u>0", "P1", "lambda_u > 0", p.lambda_u);
  r.add("lambda_c+lambda_u>0", "P1", "lambda_c + lambda_u > 0", p.lambda_c + p.lambda_u);
  if (p.lambda_u > 0.0) {
    const double a = p.alpha();
    const double b = p.beta();
    r.add("B*alpha>1", "P5", "ear_B * alpha > 1", p.ear_B * a - 1.0);
    r.add("ear_image_inside", "P2", "ear_B - ear_offset < 1", 1.0 - (p.ear_B - p.ear_offset));
    r.add("ear_offset<1", "P2", "ear_offset < 1", 1.0 - p.ear_offset);
    r.add("ear_c>0", "P2", "ear_c > 0", p.ear_c);
    if (p.ear_B > 0.0 && a > 0.0) {
      const double bound = p.ear_d / p.ear_B + p.ear_c * (1.0 + b) / (p.ear_B * a);
      r.add("cone_bound", "P3", "ear_d/B + ear_c(1+beta)/(B alpha) < 1/2", 0.5 - bound);
    }
  }
  r.add("tau_E>2", "C1", "tau_E > 2", p.tau_E - 2.0);
  return r;
}

ValidationReport validate_params(const ClassicalParams& p) {
  ValidationReport r;
  r.add("sigma>0", "classical", "sigma > 0", p.sigma);
  r.add("beta>0", "classical", "beta > 0", p.beta);
  r.add("rho>1", "classical", "rho > 1", p.rho - 1.0);
  return r;
}

bool in_linear_block(const Point3& x, double slack) {
  return std::abs(x(0)) <= 1.0 + slack && std::abs(x(1)) <= 1.0 + slack && x(2) >= -slack &&
         x(2) <= 1.0 + slack;
}

FieldEval3 linear_field3(const LorenzParams& p, const Point3& x) {
  FieldEval3 out;
  out.value << p.lambda_s * x(0), p.lambda_u * x(1), p.lambda_c * x(2);
  out.jacobian = Vec3(p.lambda_s, p.lambda_u, p.lambda_c).asDiagonal();
  return out;
}

FieldEval3 eval_field3(const LorenzParams& p, const Point3& x) {
  if (!in_linear_block(x)) {
    throw Error(ErrorKind::OutOfDomain, "eval_field3: point outside the linear block (ears are jump maps)");
  }
  return linear_field3(p, x);
}

ExitState linear_exit(const LorenzParams& p, const Point3& entry) {
  if (std::abs(entry(2) - 1.0) > 1e-12 || std::abs(entry(0)) > 1.0 || std::abs(entry(1)) > 1.0) {
    throw Error(ErrorKind::OutOfDomain, "linear_exit: entry must lie on Sigma0 = {x3 = 1, |x1|,|x2| <= 1}");
  }
  if (entry(1) == 0.0) {
    throw Error(ErrorKind::OnStableManifold, "linear_exit: x2 = 0, orbit converges to the singularity");
  }
  const double a = std::abs(entry(1));
  ExitState e;
  e.side = sign_of(entry(1));
  e.exit_time = -std::log(a) / p.lambda_u;
  e.exit_point << entry(0) * std::pow(a, p.beta()), static_cast<double>(e.side), std::pow(a, p.alpha());
  const double t = e.exit_time;
  e.exit_deriv = Vec3(std::exp(p.lambda_s * t), std::exp(p.lambda_u * t), std::exp(p.lambda_c * t)).asDiagonal();
  return e;
}

EarImage ear_map(const LorenzParams& p, const ExitState& e) {
  const double s = e.side;
  const double x1 = e.exit_point(0);
  const double x3 = e.exit_point(2);
  EarImage out;
  out.image << s * (p.ear_c * x1 + p.ear_d * x3), s * (p.ear_offset - p.ear_B * x3);
  out.deriv << s * p.ear_c, s * p.ear_d, 0.0, -s * p.ear_B;
  out.transit = p.tau_E;
  return out;
}

FieldEval3 classical_field(const ClassicalParams& p, const Point3& x) {
  FieldEval3 out;
  const double X = x(0), Y = x(1), Z = x(2);
  out.value << p.sigma * (Y - X), X * (p.rho - Z) - Y, X * Y - p.beta * Z;
  out.jacobian << -p.sigma, p.sigma, 0.0,
                  p.rho - Z, -1.0, -X,
                  Y, X, -p.beta;
  return out;
}

double one_dim_map(const LorenzParams& p, double x2) {
  return sign_of(x2) * (p.ear_offset - p.ear_B * std::pow(std::abs(x2), p.alpha()));
}

double one_dim_map_deriv(const LorenzParams& p, double x2) {
  const double a = p.alpha();
  return -p.ear_B * a * std::pow(std::abs(x2), a - 1.0);
}

BaseReturn base_return(const LorenzParams& p, const Vec2& q) {
  const ExitState e = linear_exit(p, Point3(q(0), q(1), 1.0));
  const EarImage ear = ear_map(p, e);
  const double a = std::abs(q(1));
  const double sg = e.side;
  const double al = p.alpha();
  const double be = p.beta();
  // d(x1_exit, x3_exit) / d(x1, x2)
  Mat2 to_face;
  to_face << std::pow(a, be), q(0) * be * std::pow(a, be - 1.0) * sg,
             0.0, al * std::pow(a, al - 1.0) * sg;
  BaseReturn out;
  out.image = ear.image;
  out.deriv = ear.deriv * to_face;
  out.time = e.exit_time + ear.transit;
  out.side = e.side;
  return out;
}

Vec2 base_return_limit(const LorenzParams& p, int side) {
  return Vec2(0.0, side * p.ear_offset);
}

Vec2 entry_projection(const LorenzParams& p, const Point3& x, Eigen::Matrix<double, 2, 3>* jac) {
  const double k1 = -p.lambda_s / p.lambda_c;
  const double k2 = -p.lambda_u / p.lambda_c;
  const double x3 = x(2);
  if (!(x3 > 0.0)) {
    throw Error(ErrorKind::OutOfDomain, "entry_projection: requires x3 > 0");
  }
  const double p1 = std::pow(x3, k1);
  const double p2 = std::pow(x3, k2);
  if (jac) {
    *jac << p1, 0.0, k1 * x(0) * p1 / x3,
            0.0, p2, k2 * x(1) * p2 / x3;
  }
  return Vec2(x(0) * p1, x(1) * p2);
}

Point3 classical_equilibrium(const ClassicalParams& p, int branch) {
  if (branch == 0) return Point3::Zero();
  const double r = std::sqrt(p.beta * (p.rho - 1.0));
  const double s = branch > 0 ? 1.0 : -1.0;
  return Point3(s * r, s * r, p.rho - 1.0);
}

}  // namespace model3d
}  // namespace dalorenz
