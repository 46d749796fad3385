#pragma once

// The two 4D backends seen through the global cross-section.
//
// Hybrid: Sigma = {x3 = 1} x [-1, 1] with section coordinates (x1, x2, s).
// Returns are closed form in the base; the fiber is integrated along the
// transit with the tube factor held at its entry value (the tube is carried
// by the flow, see skew4d::base_factor).
//
// Classical: Sigma = {z = rho - 1, z' < 0} with coordinates (x, y, s) and an
// unmodified fiber s' = -theta s.

#include "dalorenz/flowint.hpp"
#include "dalorenz/model3d.hpp"
#include "dalorenz/skew4d.hpp"

#include <vector>

namespace dalorenz::flowint {

struct ReturnResult {
  Vec3 image = Vec3::Zero();
  double time = 0.0;
  Mat3 deriv = Mat3::Identity();  // rows/cols in section coordinates
  bool tube_hit = false;
};

struct HybridSystem {
  model3d::LorenzParams lp;
  skew4d::SkewParams sp;
  skew4d::PeriodicOrbitRef anchor;
  IntegratorConfig cfg;
  double on_leaf_tol = 1e-10;
};

struct ClassicalSystem {
  model3d::ClassicalParams cp;
  double theta = 2.0;
  IntegratorConfig cfg;
  double max_return_time = 50.0;
};

/// Fiber state after time t from s0 with constant tube factor b, with its
/// sensitivities to s0 and to b.
struct FiberTransit {
  double s = 0.0;
  double xi_s = 1.0;
  double xi_b = 0.0;
  double rate = 0.0;  // s' at the end
};
FiberTransit fiber_transit(const skew4d::SkewParams& sp, double s0, double b, double t, const IntegratorConfig& cfg);

ReturnResult advance_to_section(const HybridSystem& sys, const Vec3& q);
ReturnResult advance_to_section(const ClassicalSystem& sys, const Vec3& q);

/// 4D velocity of the hybrid system at a block point whose entry tube factor is b.
Vec4 hybrid_velocity(const HybridSystem& sys, const Point4& x, double b);

/// Hybrid orbit from the section point q over `returns` returns, with the
/// tangent cocycle. Samples: each entry, the linear interior every <= max_dt,
/// and each exit. Across an ear the step maps X(exit) to X(next entry) and
/// exit-face tangents by the ear derivative. `entries` receives the sample
/// indices of the section entries.
OrbitSegment<4> sample_orbit(const HybridSystem& sys, const Vec3& q, int returns, double max_dt = 0.5,
                             std::vector<std::size_t>* entries = nullptr);

/// `periods` copies of the one-return orbit through the period-one point p.
/// Long forward sampling would drift off an unstable periodic orbit, so the
/// single period is sampled once and repeated.
OrbitSegment<4> periodic_orbit(const HybridSystem& sys, const Vec3& p, int periods);

/// Point of the classical section with section coordinates q.
Point4 classical_lift(const ClassicalSystem& sys, const Vec3& q);
Field<4> classical_field4(const ClassicalSystem& sys);
Field<3> classical_field3(const model3d::ClassicalParams& cp);

/// Benettin QR spectrum of a 3D field, largest first; renormalization every renorm_dt.
std::vector<double> benettin_spectrum(const Field<3>& field, const Point3& x0, double horizon, double transient,
                                      double renorm_dt, const IntegratorConfig& cfg);

}  // namespace dalorenz::flowint
