#include "dalorenz/flowint.hpp"

#include <cmath>

namespace dalorenz::flowint {

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || !(max_step > 0.0) || !(event_refine_tol > 0.0)) {
    throw Error(ErrorKind::Config, "integrator tolerances and max_step must be positive");
  }
  if (event_refine_tol > abs_tol) {
    throw Error(ErrorKind::Config, "integrator.event_refine_tol must not exceed integrator.abs_tol");
  }
}

namespace {

template <int N>
double logdet2(const OrbitSegment<N>& seg, const VecN<N>& v, const VecN<N>& w, double t) {
  if (!seg.has_frames()) throw Error(ErrorKind::DegenerateInput, "flow_det2: segment has no tangent frames");
  Eigen::Matrix<double, N, 2> pair;
  pair.col(0) = v;
  pair.col(1) = w;
  const double gram = (pair.transpose() * pair).determinant();
  if (!(gram > 1e-24 * v.squaredNorm() * w.squaredNorm()) || !(gram > 0.0)) {
    throw Error(ErrorKind::DegenerateInput, "flow_det2: plane vectors are dependent");
  }
  const std::size_t end = sample_index(seg, t);
  // transport an orthonormal basis of the plane and accumulate QR growth
  Eigen::HouseholderQR<Eigen::Matrix<double, N, 2>> qr(pair);
  Eigen::Matrix<double, N, 2> q = qr.householderQ() * Eigen::Matrix<double, N, 2>::Identity();
  double acc = 0.0;
  for (std::size_t k = 0; k < end; ++k) {
    const Eigen::Matrix<double, N, 2> img = seg.steps[k] * q;
    Eigen::HouseholderQR<Eigen::Matrix<double, N, 2>> step(img);
    const auto& r = step.matrixQR();
    acc += std::log(std::abs(r(0, 0) * r(1, 1)));
    q = step.householderQ() * Eigen::Matrix<double, N, 2>::Identity();
  }
  return acc;
}

}  // namespace

double flow_logdet2(const OrbitSegment<4>& seg, const Vec4& v, const Vec4& w, double t) {
  return logdet2<4>(seg, v, w, t);
}
double flow_logdet2(const OrbitSegment<3>& seg, const Vec3& v, const Vec3& w, double t) {
  return logdet2<3>(seg, v, w, t);
}
double flow_det2(const OrbitSegment<4>& seg, const Vec4& v, const Vec4& w, double t) {
  return std::exp(logdet2<4>(seg, v, w, t));
}
double flow_det2(const OrbitSegment<3>& seg, const Vec3& v, const Vec3& w, double t) {
  return std::exp(logdet2<3>(seg, v, w, t));
}

}  // namespace dalorenz::flowint
