#include "dalorenz/spectra.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace dalorenz::spectra {

namespace {

constexpr double kTimeSlack = 1e-9;

std::size_t first_index_at(const OrbitSegment<4>& orbit, double t) {
  std::size_t i = 0;
  while (i + 1 < orbit.times.size() && orbit.times[i] < t - kTimeSlack) ++i;
  return i;
}

std::size_t last_index_at(const OrbitSegment<4>& orbit, double t) {
  std::size_t j = orbit.times.size() - 1;
  while (j > 0 && orbit.times[j] > t + kTimeSlack) --j;
  return j;
}

Vec4 unit_flow(const OrbitSegment<4>& orbit, std::size_t i) {
  const double n = orbit.velocities[i].norm();
  if (!(n > 0.0)) throw Error(ErrorKind::NearSingularity, "flow direction vanishes along the orbit");
  return orbit.velocities[i] / n;
}

Vec4 project_out(const Vec4& v, const Vec4& u) { return v - v.dot(u) * u; }

QrTrace run_qr(const OrbitSegment<4>& orbit, double burn_in, double t_end, double near_sing) {
  if (!orbit.has_frames() || orbit.size() < 2) {
    throw Error(ErrorKind::DegenerateInput, "orbit has no tangent propagators");
  }
  for (const auto& x : orbit.states) {
    if (x.head<3>().norm() < near_sing) {
      throw Error(ErrorKind::NearSingularity, "orbit passes within the exclusion radius of the singularity");
    }
  }
  const std::size_t i0 = first_index_at(orbit, burn_in);
  const std::size_t i1 = last_index_at(orbit, t_end);
  if (i1 <= i0) throw Error(ErrorKind::DegenerateInput, "empty time window");

  // frames are carried from the first sample; only growth after burn-in is kept
  const Vec4 u0 = unit_flow(orbit, 0);
  Eigen::Matrix<double, 4, 3> refs;
  refs.col(0) = project_out(Vec4::UnitY(), u0);
  refs.col(1) = project_out(Vec4::UnitW(), u0);
  refs.col(2) = project_out(Vec4::UnitX(), u0);
  Eigen::HouseholderQR<Eigen::Matrix<double, 4, 3>> qr0(refs);
  Eigen::Matrix<double, 4, 3> q = qr0.householderQ() * Eigen::Matrix<double, 4, 3>::Identity();

  QrTrace tr;
  tr.times.push_back(orbit.times[i0]);
  for (std::size_t k = 0; k < i1; ++k) {
    Eigen::Matrix<double, 4, 3> v = orbit.steps[k] * q;
    const Vec4 u = unit_flow(orbit, k + 1);
    v -= u * (u.transpose() * v);
    Eigen::HouseholderQR<Eigen::Matrix<double, 4, 3>> qr(v);
    const auto& r = qr.matrixQR();
    q = qr.householderQ() * Eigen::Matrix<double, 4, 3>::Identity();
    Vec3 lg;
    for (int c = 0; c < 3; ++c) {
      lg(c) = std::log(std::abs(r(c, c)));
      if (r(c, c) < 0.0) q.col(c) = -q.col(c);
    }
    if (k < i0) continue;
    tr.log_growth.push_back(lg);
    tr.times.push_back(orbit.times[k + 1]);
  }
  tr.final_frame = q;
  return tr;
}

double angle_to(const Vec4& a, const Vec4& b) {
  const double c = std::abs(a.dot(b)) / (a.norm() * b.norm());
  return std::acos(std::min(1.0, c));
}

}  // namespace

QrTrace normal_qr(const OrbitSegment<4>& orbit, double burn_in, double near_sing) {
  return run_qr(orbit, burn_in, std::numeric_limits<double>::infinity(), near_sing);
}

ExponentReport lpf_exponents(const OrbitSegment<4>& orbit, double T, double burn_in) {
  const double t_end = T > 0.0 ? burn_in + T : std::numeric_limits<double>::infinity();
  const QrTrace tr = run_qr(orbit, burn_in, t_end, 1e-6);
  const double span = tr.times.back() - tr.times.front();
  Vec3 sum = Vec3::Zero();
  for (const auto& g : tr.log_growth) sum += g;
  ExponentReport rep;
  rep.window_T = span;
  rep.exponents = {sum(0) / span, sum(1) / span, sum(2) / span};
  std::sort(rep.exponents.begin(), rep.exponents.end());

  const std::size_t i0 = first_index_at(orbit, burn_in);
  double fib = 0.0;
  for (std::size_t k = i0; k < i0 + tr.log_growth.size(); ++k) fib += std::log(std::abs(orbit.steps[k](3, 3)));
  rep.fiber_exponent = fib / span;

  const std::size_t iend = i0 + tr.log_growth.size();
  const Vec4 u = unit_flow(orbit, iend);
  rep.subspace_angles = {angle_to(tr.final_frame.col(0), project_out(Vec4::UnitY(), u)),
                         angle_to(tr.final_frame.col(1), project_out(Vec4::UnitW(), u)),
                         angle_to(tr.final_frame.col(2), project_out(Vec4::UnitX(), u))};
  return rep;
}

namespace {

/// Calls visit(i, j) for every window [times[i], times[j]] of length >= w
/// with j minimal.
template <class Visit>
void for_windows(const std::vector<double>& times, double w, Visit visit) {
  std::size_t j = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (j < i) j = i;
    while (j < times.size() && times[j] - times[i] < w - kTimeSlack) ++j;
    if (j >= times.size()) break;
    visit(i, j);
  }
}

}  // namespace

DominationResult domination_check(const OrbitSegment<4>& orbit, Split split, double T_window, double burn_in) {
  if (!(T_window > 0.0)) throw Error(ErrorKind::DegenerateInput, "domination_check: window must be positive");
  DominationResult res;
  res.margin = std::numeric_limits<double>::infinity();
  if (split == Split::FlowVsFiber) {
    if (!orbit.has_frames()) throw Error(ErrorKind::DegenerateInput, "orbit has no tangent propagators");
    const std::size_t i0 = first_index_at(orbit, burn_in);
    std::vector<double> times(orbit.times.begin() + i0, orbit.times.end());
    std::vector<double> fiber(times.size(), 0.0);
    for (std::size_t k = 1; k < times.size(); ++k) {
      fiber[k] = fiber[k - 1] + std::log(std::abs(orbit.steps[i0 + k - 1](3, 3)));
    }
    for_windows(times, T_window, [&](std::size_t i, std::size_t j) {
      const double len = times[j] - times[i];
      const double flow = std::log(orbit.velocities[i0 + j].norm() / orbit.velocities[i0 + i].norm()) / len;
      const double fib = (fiber[j] - fiber[i]) / len;
      const double m = flow - fib;
      ++res.windows;
      if (m < res.margin) {
        res.margin = m;
        res.worst_start = times[i];
      }
    });
  } else {
    const QrTrace tr = normal_qr(orbit, burn_in);
    std::vector<Vec3> prefix(tr.times.size(), Vec3::Zero());
    for (std::size_t k = 1; k < prefix.size(); ++k) prefix[k] = prefix[k - 1] + tr.log_growth[k - 1];
    for_windows(tr.times, T_window, [&](std::size_t i, std::size_t j) {
      const Vec3 r = (prefix[j] - prefix[i]) / (tr.times[j] - tr.times[i]);
      const double m = split == Split::OneTwo ? std::min(r(0), r(1)) - r(2) : r(0) - std::max(r(1), r(2));
      ++res.windows;
      if (m < res.margin) {
        res.margin = m;
        res.worst_start = tr.times[i];
      }
    });
  }
  if (res.windows == 0) throw Error(ErrorKind::DegenerateInput, "orbit shorter than one window");
  return res;
}

SectionalResult sectional_expansion_rate(const OrbitSegment<4>& orbit, double w, double burn_in, double t_end) {
  if (!orbit.has_frames()) throw Error(ErrorKind::DegenerateInput, "orbit has no tangent propagators");
  if (!(w > 0.0)) throw Error(ErrorKind::DegenerateInput, "sectional_expansion_rate: window must be positive");
  const std::size_t i0 = first_index_at(orbit, burn_in);
  Vec4 v = project_out(Vec4::UnitY(), unit_flow(orbit, 0)).normalized();
  std::vector<double> times{orbit.times[i0]};
  std::vector<double> prefix{0.0};
  for (std::size_t k = 0; k + 1 < orbit.size() && orbit.times[k + 1] <= t_end + kTimeSlack; ++k) {
    const double before = orbit.velocities[k].norm();  // area of (X, v) with v unit and normal to X
    const Vec4 nv = orbit.steps[k] * v;
    const Vec4 nu = unit_flow(orbit, k + 1);
    const Vec4 perp = project_out(nv, nu);
    const double after = orbit.velocities[k + 1].norm() * perp.norm();
    v = perp.normalized();
    if (k < i0) continue;
    prefix.push_back(prefix.back() + std::log(after / before));
    times.push_back(orbit.times[k + 1]);
  }
  SectionalResult res;
  res.gamma = std::numeric_limits<double>::infinity();
  bool any = false;
  for_windows(times, w, [&](std::size_t i, std::size_t j) {
    const double len = times[j] - times[i];
    const double rate = (prefix[j] - prefix[i]) / len;
    any = true;
    if (rate < res.gamma) {
      res.gamma = rate;
      res.worst_start = times[i];
      res.worst_length = len;
    }
  });
  if (!any) throw Error(ErrorKind::DegenerateInput, "orbit shorter than one window");
  return res;
}

FloquetReport floquet(const flowint::HybridSystem& sys, const Vec3& p, double tol) {
  const flowint::ReturnResult ret = flowint::advance_to_section(sys, p);
  FloquetReport rep;
  rep.residual = (ret.image - p).cwiseAbs().maxCoeff();
  if (!(rep.residual <= tol)) {
    throw Error(ErrorKind::NonPeriodic, "floquet: return residual above tolerance");
  }
  const OrbitSegment<4> orbit = flowint::sample_orbit(sys, p, 1);
  rep.period = orbit.times.back();
  rep.monodromy = orbit.propagator(0, orbit.size() - 1);
  Eigen::EigenSolver<Mat4> es(rep.monodromy);
  const Eigen::Vector4cd vals = es.eigenvalues();
  const Eigen::Matrix4cd vecs = es.eigenvectors();
  const Eigen::Vector4cd flow = orbit.velocities.front().normalized().cast<std::complex<double>>();

  int flow_idx = 0, fiber_idx = -1;
  double best_flow = -1.0;
  for (int i = 0; i < 4; ++i) {
    const double align = std::abs(vecs.col(i).dot(flow)) / vecs.col(i).norm();
    if (align > best_flow) {
      best_flow = align;
      flow_idx = i;
    }
  }
  double best_fiber = -1.0;
  for (int i = 0; i < 4; ++i) {
    if (i == flow_idx) continue;
    const double align = std::abs(vecs(3, i)) / vecs.col(i).norm();
    if (align > best_fiber) {
      best_fiber = align;
      fiber_idx = i;
    }
  }
  for (int i = 0; i < 4; ++i) {
    rep.multipliers.push_back(vals(i));
    rep.moduli.push_back(std::abs(vals(i)));
    if (i != flow_idx && std::abs(vals(i)) < 1.0) ++rep.index;
  }
  rep.flow_multiplier = vals(flow_idx).real();
  rep.fiber_multiplier = vals(fiber_idx).real();
  return rep;
}

std::vector<double> singularity_spectrum(const model3d::LorenzParams& lp, const skew4d::SkewParams& sp) {
  skew4d::PeriodicOrbitRef anchor;
  try {
    anchor = section::make_anchor(lp);
  } catch (const Error&) {
    // no periodic orbit: the bump is irrelevant at the singularity anyway
  }
  const FieldEval4 fe = skew4d::eval_field4(sp, lp, anchor, Point4::Zero());
  Eigen::EigenSolver<Mat4> es(fe.jacobian, false);
  std::vector<double> out;
  for (int i = 0; i < 4; ++i) out.push_back(es.eigenvalues()(i).real());
  std::sort(out.begin(), out.end());
  return out;
}

double flow_angle_near_singularity(const model3d::LorenzParams& lp, double x1, double x2) {
  const double t_lin = -std::log(std::abs(x2)) / lp.lambda_u;
  constexpr int kSamples = 4001;
  double best = std::numeric_limits<double>::infinity();
  Point3 at = Point3::Zero();
  for (int i = 0; i < kSamples; ++i) {
    const double t = t_lin * i / (kSamples - 1);
    const Point3 x(x1 * std::exp(lp.lambda_s * t), x2 * std::exp(lp.lambda_u * t), std::exp(lp.lambda_c * t));
    if (x.norm() < best) {
      best = x.norm();
      at = x;
    }
  }
  const Vec3 v = model3d::linear_field3(lp, at).value;
  return std::asin(std::min(1.0, std::abs(v(0)) / v.norm()));
}

}  // namespace dalorenz::spectra
