#pragma once

// Global cross-section engine: first returns, fixed points of the
// one-dimensional quotient map, cone checks and cu-curve iteration.

#include "dalorenz/systems.hpp"

#include <variant>
#include <vector>

namespace dalorenz::section {

using SectionPoint = Vec3;  // (x1, x2, s)
using flowint::ClassicalSystem;
using flowint::HybridSystem;
using flowint::ReturnResult;

using Model = std::variant<HybridSystem, ClassicalSystem>;

ReturnResult return_map(const Model& model, const SectionPoint& q);

struct FixedPoint {
  double x2 = 0.0;
  int side = 1;
  double deriv = 0.0;   // f'(x2)
  double x1 = 0.0;      // x1 of the period-one return
  double period = 0.0;  // return time
};

/// Fixed points of f on each wing: bisection, then Newton to 1e-12.
std::vector<FixedPoint> find_fixed_points(const model3d::LorenzParams& lp);

/// Right-wing fixed point P0 (throws DegenerateInput if there is none).
FixedPoint orbit_p(const model3d::LorenzParams& lp);
/// Left-wing fixed point Q0.
FixedPoint orbit_q(const model3d::LorenzParams& lp);

skew4d::PeriodicOrbitRef make_anchor(const model3d::LorenzParams& lp);
HybridSystem make_hybrid(const model3d::LorenzParams& lp, const skew4d::SkewParams& sp,
                         const flowint::IntegratorConfig& cfg = {});

/// Double cone {v : |v_perp| <= width |v . axis|}.
struct Cone {
  Eigen::VectorXd axis;
  double width = 1.0;

  bool contains(const Eigen::VectorXd& v, double slack = 0.0) const;
  /// Norm adapted to the cone: max(|v_axis|, |v_perp| / width).
  double adapted_norm(const Eigen::VectorXd& v) const;
};

/// Section cone with axis e2: D_width = {|(v1, vs)| <= width |v2|} in dimension 2 or 3.
Cone section_cone(int dim, double width);

struct ConeResult {
  bool pass = false;
  double worst_ratio = 0.0;
};

/// Images of the input cone's boundary rays against the output cone. Exact in
/// 2D; `rays` boundary rays in 3D. A cone whose two nappes get mixed fails
/// with worst_ratio = +inf.
ConeResult cone_check(const Eigen::MatrixXd& deriv, double alpha_in, double alpha_out,
                      const Eigen::VectorXd& axis_in, const Eigen::VectorXd& axis_out, int rays = 64);

struct ExpansionResult {
  bool pass = false;
  double min_growth = 0.0;
};

/// min N(D v) / N(v) over sampled v in the cone, N the cone-adapted norm.
ExpansionResult expansion_check(const Eigen::MatrixXd& deriv, const Cone& cone, double lambda_floor,
                                int samples = 257);

/// Piecewise-linear curve in section coordinates.
struct CuCurve {
  std::vector<SectionPoint> nodes;
};

CuCurve make_segment(const SectionPoint& center, const Vec3& direction, double length, int nodes = 32);

struct CurveOptions {
  double alpha = 1.0;            // cone width for the precondition and the adapted length
  double chord_tol = 1e-6;       // image refinement
  int min_nodes = 32;
  int max_depth = 40;            // bisection depth cap per chord
  std::size_t max_nodes = 200000;
  bool continue_to_crossing = false;
};

struct CurveTrace {
  std::vector<double> lengths;         // adapted length of J_k, k = 0..
  std::vector<double> euclid_lengths;
  std::vector<double> growth;          // len(J_{k+1}) / len(J_k)
  std::vector<bool> split;             // J_k crossed L and was cut
  std::vector<std::pair<double, double>> pieces;  // both piece lengths at each split
  int k_eps = -1;                       // first k with len(J_k) >= eps0
  int iterates = 0;
  bool reached = false;
  bool crossed = false;
  CuCurve final_curve;
};

/// Iterate J under the hybrid return map. When J_k crosses L it is cut there
/// and the longer piece kept. Stops when the length reaches eps0 (and, with
/// continue_to_crossing, once a crossing has been seen) or after k_max maps.
CurveTrace iterate_cu_curve(const HybridSystem& sys, const CuCurve& j, double eps0, int k_max,
                            const CurveOptions& opts = {});

/// Adapted and Euclidean length of a polyline.
double curve_length(const CuCurve& c, double alpha);
double curve_euclid_length(const CuCurve& c);

}  // namespace dalorenz::section
