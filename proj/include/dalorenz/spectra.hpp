#pragma once

// Exponents of the linear Poincare flow (the tangent cocycle modulo the flow
// direction), domination margins, sectional expansion and Floquet data.

#include "dalorenz/section.hpp"

#include <complex>
#include <limits>
#include <string>
#include <vector>

namespace dalorenz::spectra {

using flowint::OrbitSegment;

/// Normal-space QR accumulation along an orbit. Columns start from the
/// projections of (e2, e_s, e1), i.e. the expected order fast to slow.
struct QrTrace {
  std::vector<double> times;        // sample times after burn-in
  std::vector<Vec3> log_growth;     // per step log |R_kk|, one entry per step
  Eigen::Matrix<double, 4, 3> final_frame;
};

/// Runs the accumulation from the first sample at time >= burn_in.
QrTrace normal_qr(const OrbitSegment<4>& orbit, double burn_in = 0.0, double near_sing = 1e-6);

struct ExponentReport {
  double window_T = 0.0;
  std::vector<double> exponents;        // ascending
  std::vector<double> subspace_angles;  // vs (N2, N^I, N^ss), radians
  double fiber_exponent = 0.0;          // log of the invariant fiber direction's growth / T
  std::string orbit_id;
};

/// Finite-time normal exponents over [burn_in, burn_in + T] (T <= 0: to the end).
ExponentReport lpf_exponents(const OrbitSegment<4>& orbit, double T = 0.0, double burn_in = 0.0);

enum class Split { OneTwo, TwoOne, FlowVsFiber };

struct DominationResult {
  double margin = 0.0;
  double worst_start = 0.0;
  std::size_t windows = 0;
};

/// Minimum over sliding windows of length >= T_window of (slowest top rate -
/// fastest bottom rate). FlowVsFiber compares the growth of the flow
/// direction with that of the fiber direction.
DominationResult domination_check(const OrbitSegment<4>& orbit, Split split, double T_window, double burn_in = 0.0);

struct SectionalResult {
  double gamma = 0.0;
  double worst_start = 0.0;
  double worst_length = 0.0;
};

/// Area growth rate of span{X, v} where v is carried by the cocycle from the
/// N2 reference direction; min over windows of length >= w after burn_in.
SectionalResult sectional_expansion_rate(const OrbitSegment<4>& orbit, double w, double burn_in = 0.0,
                                         double t_end = std::numeric_limits<double>::infinity());

struct FloquetReport {
  double period = 0.0;
  std::vector<std::complex<double>> multipliers;
  std::vector<double> moduli;
  int index = 0;
  double fiber_multiplier = 0.0;
  double flow_multiplier = 0.0;
  double residual = 0.0;
  Mat4 monodromy = Mat4::Identity();
};

/// Floquet data of the hybrid periodic orbit through the section point p
/// (period-one return). Throws NonPeriodic if the return residual exceeds tol.
FloquetReport floquet(const flowint::HybridSystem& sys, const Vec3& p, double tol = 1e-9);

/// Eigenvalues of the 4D Jacobian at the singularity, ascending by real part.
std::vector<double> singularity_spectrum(const model3d::LorenzParams& lp, const skew4d::SkewParams& sp);

/// Angle between the flow direction and the x2x3 plane at the point of the
/// linear transit closest to the singularity, for entries (x1, x2) on Sigma0.
double flow_angle_near_singularity(const model3d::LorenzParams& lp, double x1, double x2);

}  // namespace dalorenz::spectra
