#pragma once

// Four-dimensional skew product X(x, s) = (X0(x), fiber(x, s)) on B3 x [-1, 1].
//
// The fiber field is modified by a bump eta supported on a tube around the
// periodic orbit P0 x {0}. Three surgery modes:
//   None        s' = -theta s
//   SaddleNode  s' = -theta s (1 - eta)                      (eta = 1 only on P)
//   Triplet     s' = -theta s (1 - eta) - eta kappa s (s^2 - delta^2)
// In Triplet mode eta has a fiber plateau |s| <= s_plateau over P0 so that
// P0 x {0, +-delta} are all periodic orbits.

#include "dalorenz/model3d.hpp"
#include "dalorenz/types.hpp"

#include <string>

namespace dalorenz::skew4d {

enum class SurgeryMode { None, SaddleNode, Triplet };

std::string to_string(SurgeryMode mode);
SurgeryMode parse_mode(const std::string& text);

struct SkewParams {
  double theta = 2.0;
  double tube_radius = 0.17;
  double s_plateau = 0.2;
  double s_max = 0.4;
  double kappa = 5.0;
  double delta = 0.1;
  SurgeryMode mode = SurgeryMode::SaddleNode;
};

/// Where the orbit P0 crosses Sigma0, in section coordinates (x1, x2).
struct PeriodicOrbitRef {
  Vec2 section_point = Vec2::Zero();
};

struct BumpValue {
  double value = 0.0;
  Vec4 grad = Vec4::Zero();
};

/// Quintic smoothstep going down: 1 at u <= 0, 0 at u >= 1, flat at both ends.
double smoothstep_down(double u, double* du = nullptr);

/// Fiber factor of the bump for the current mode.
double fiber_profile(const SkewParams& p, double s, double* ds = nullptr);

/// Base factor of the bump for a point of Sigma0.
double base_factor_section(const SkewParams& p, const PeriodicOrbitRef& anchor, const Vec2& q,
                           Vec2* grad = nullptr);

/// Base factor for a point of the linear block, carried from its entry point.
double base_factor(const SkewParams& p, const model3d::LorenzParams& lp, const PeriodicOrbitRef& anchor,
                   const Point3& x, Vec3* grad = nullptr);

BumpValue bump(const SkewParams& p, const model3d::LorenzParams& lp, const Point4& q,
               const PeriodicOrbitRef& anchor);

/// Partial derivatives of the fiber law G(s, eta) at fixed eta.
struct FiberLaw {
  double sdot = 0.0;
  double d_ds = 0.0;
  double d_deta = 0.0;
};
FiberLaw fiber_law(const SkewParams& p, double s, double eta);

struct FiberEval {
  double sdot = 0.0;
  double dsdot_ds = 0.0;    // includes eta's s-gradient
  Vec3 dsdot_dx = Vec3::Zero();
};
FiberEval fiber_field(const SkewParams& p, const Point4& q, const BumpValue& eta);

/// Fiber rate along a transit whose base factor is the constant b.
struct TransitRate {
  double sdot = 0.0;
  double d_ds = 0.0;
  double d_db = 0.0;
};
TransitRate transit_rate(const SkewParams& p, double s, double b);

/// 4D field on the linear block of the hybrid backend. Throws OutOfDomain.
FieldEval4 eval_field4(const SkewParams& p, const model3d::LorenzParams& lp, const PeriodicOrbitRef& anchor,
                       const Point4& q);
/// Unchecked variant for integrator stages that may overshoot the block.
FieldEval4 hybrid_field4(const SkewParams& p, const model3d::LorenzParams& lp, const PeriodicOrbitRef& anchor,
                         const Point4& q);
/// Classical Lorenz base with an unmodified fiber, s' = -theta s.
FieldEval4 classical_field4(const SkewParams& p, const model3d::ClassicalParams& cp, const Point4& q);

ValidationReport validate_theta(const SkewParams& p, const model3d::LorenzParams& lp);
/// Surgery constants and the tube placement relative to Q0 and L0.
ValidationReport validate_skew(const SkewParams& p, const Vec2& p0, const Vec2& q0);

}  // namespace dalorenz::skew4d
