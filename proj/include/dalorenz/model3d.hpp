#pragma once

// Three-dimensional Lorenz fields.
//
// Hybrid geometric backend: exact linear flow
//   x1' = lambda_s x1,  x2' = lambda_u x2,  x3' = lambda_c x3
// on the block {|x1| <= 1, |x2| <= 1, 0 <= x3 <= 1}, entered through the
// section Sigma0 = {x3 = 1} and left through the faces {x2 = +-1}. Each face
// is glued back onto Sigma0 by an affine "ear" map taking tau_E time units.
//
// Classical backend: the original Lorenz equations, used to cross-check the
// integrator and the exponent pipeline on a smooth field.

#include "dalorenz/types.hpp"

namespace dalorenz::model3d {

struct LorenzParams {
  double lambda_s = -3.0;
  double lambda_c = -1.0;
  double lambda_u = 1.8;
  double ear_B = 1.85;
  double ear_offset = 0.95;
  double ear_c = 0.01;
  double ear_d = 0.2;
  double tau_E = 2.1;
  double gamma = 0.01;

  /// Exponent of the one-dimensional map, -lambda_c / lambda_u.
  double alpha() const { return -lambda_c / lambda_u; }
  /// Strong-stable contraction exponent across the block, -lambda_s / lambda_u.
  double beta() const { return -lambda_s / lambda_u; }
  /// Worst time-one contraction along the strong-stable direction: the block
  /// contracts at lambda_s, the ear at log(ear_c) / tau_E.
  double strong_stable_rate() const;
};

struct ClassicalParams {
  double sigma = 10.0;
  double rho = 28.0;
  double beta = 8.0 / 3.0;
};

struct ExitState {
  Point3 exit_point;
  double exit_time = 0.0;
  Mat3 exit_deriv = Mat3::Identity();
  int side = 1;
};

/// Ear image on Sigma0 in section coordinates (x1, x2). `deriv` maps exit
/// face tangents (dx1, dx3) to section tangents.
struct EarImage {
  Vec2 image;
  Mat2 deriv;
  double transit = 0.0;
};

/// Closed-form first return R0 on Sigma0 \ L0.
struct BaseReturn {
  Vec2 image;
  Mat2 deriv;
  double time = 0.0;
  int side = 1;
};

ValidationReport validate_params(const LorenzParams& p);
ValidationReport validate_params(const ClassicalParams& p);

bool in_linear_block(const Point3& x, double slack = 1e-12);

/// Linear field and its constant Jacobian. Throws OutOfDomain outside the block.
FieldEval3 eval_field3(const LorenzParams& p, const Point3& x);
/// Same formula without the domain check (used inside integrator stages).
FieldEval3 linear_field3(const LorenzParams& p, const Point3& x);

ExitState linear_exit(const LorenzParams& p, const Point3& entry);
EarImage ear_map(const LorenzParams& p, const ExitState& e);

FieldEval3 classical_field(const ClassicalParams& p, const Point3& x);

/// The quotient map f(x2) = sign(x2) (offset - B |x2|^alpha) and its derivative.
double one_dim_map(const LorenzParams& p, double x2);
double one_dim_map_deriv(const LorenzParams& p, double x2);

/// R0 composed from linear_exit and ear_map, in section coordinates.
BaseReturn base_return(const LorenzParams& p, const Vec2& q);
/// One-sided limit of R0 at L0 from the given side: the cusp tip.
Vec2 base_return_limit(const LorenzParams& p, int side);

/// Entry point on Sigma0 of the linear-block orbit through x; constant along
/// the linear flow. Requires 0 < x3 <= 1.
Vec2 entry_projection(const LorenzParams& p, const Point3& x, Eigen::Matrix<double, 2, 3>* jac = nullptr);

/// Equilibria of the classical system: origin and C+-.
Point3 classical_equilibrium(const ClassicalParams& p, int branch);

}  // namespace dalorenz::model3d
