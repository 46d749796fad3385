#pragma once

// Adaptive Dormand-Prince 5(4) integration with dense output, event location
// and tangent (variational) propagation.

#include "dalorenz/error.hpp"
#include "dalorenz/types.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace dalorenz::flowint {

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.5;
  double event_refine_tol = 1e-12;
  long max_steps = 100'000'000;

  void validate() const;
};

/// Sampled trajectory. `steps[i]` is the tangent propagator from times[i] to
/// times[i+1]; cumulative frames overflow on long orbits, so they are only
/// formed on request.
template <int N>
struct OrbitSegment {
  std::vector<double> times;
  std::vector<VecN<N>> states;
  std::vector<VecN<N>> velocities;
  std::vector<MatN<N>> steps;
  std::string terminal_event;  // empty, or "domain-exit"

  std::size_t size() const { return times.size(); }
  bool has_frames() const { return !times.empty() && steps.size() + 1 == times.size(); }

  /// Phi over [times[i], times[j]].
  MatN<N> propagator(std::size_t i, std::size_t j) const {
    MatN<N> m = MatN<N>::Identity();
    for (std::size_t k = i; k < j; ++k) m = steps[k] * m;
    return m;
  }
  MatN<N> frame(std::size_t i) const { return propagator(0, i); }
};

template <int N>
using Field = std::function<FieldEval<N>(const VecN<N>&)>;

template <int M>
class Dopri5 {
 public:
  using State = VecN<M>;
  using Rhs = std::function<State(const State&)>;

  Dopri5(Rhs f, IntegratorConfig cfg) : f_(std::move(f)), cfg_(cfg) {}

  /// Start (or restart) at (t, y) integrating in the direction of `dir`.
  void reset(double t, const State& y, double dir = 1.0) {
    t_ = t_old_ = t;
    y_ = y_old_ = y;
    dir_ = dir < 0.0 ? -1.0 : 1.0;
    k1_ = f_(y_);
    if (h_ == 0.0 || !keep_step_) h_ = initial_step();
    facold_ = 1e-4;
    rejected_ = false;
  }

  /// Keep the current step size across reset() (used when the state is
  /// modified between steps, e.g. frame renormalization).
  void keep_step_size(bool keep) { keep_step_ = keep; }

  /// One accepted step that does not pass t_limit.
  void step(double t_limit) {
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                     a76 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;
    constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                     d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                     d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;
    constexpr double beta = 0.04, expo1 = 0.2 - beta * 0.75, safe = 0.9;
    constexpr double facc1 = 1.0 / 0.2, facc2 = 1.0 / 10.0;
    (void)c2; (void)c3; (void)c4; (void)c5;

    for (;;) {
      const double remaining = std::abs(t_limit - t_);
      if (remaining == 0.0) return;
      double habs = std::min({std::abs(h_), cfg_.max_step, remaining});
      const bool last = habs >= remaining;
      if (habs < 1e-15 * std::max(1.0, std::abs(t_))) {
        throw Error(ErrorKind::StepUnderflow, "integrator step size underflow");
      }
      if (++nsteps_ > cfg_.max_steps) throw Error(ErrorKind::StepUnderflow, "integrator step budget exhausted");
      const double h = dir_ * habs;

      const State k2 = f_(y_ + h * (a21 * k1_));
      const State k3 = f_(y_ + h * (a31 * k1_ + a32 * k2));
      const State k4 = f_(y_ + h * (a41 * k1_ + a42 * k2 + a43 * k3));
      const State k5 = f_(y_ + h * (a51 * k1_ + a52 * k2 + a53 * k3 + a54 * k4));
      const State k6 = f_(y_ + h * (a61 * k1_ + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      const State y1 = y_ + h * (a71 * k1_ + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
      const State k7 = f_(y1);
      const State errv = h * (e1 * k1_ + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      double err = 0.0;
      for (int i = 0; i < M; ++i) {
        const double sk = cfg_.abs_tol + cfg_.rel_tol * std::max(std::abs(y_(i)), std::abs(y1(i)));
        const double q = errv(i) / sk;
        err += q * q;
      }
      err = std::sqrt(err / M);

      if (!std::isfinite(err)) {
        h_ = 0.25 * h;
        rejected_ = true;
        continue;
      }
      const double fac11 = std::pow(err, expo1);
      double fac = fac11 / std::pow(facold_, beta);
      fac = std::max(facc2, std::min(facc1, fac / safe));
      double hnew = h / fac;

      if (err <= 1.0) {
        facold_ = std::max(err, 1e-4);
        r1_ = y_;
        r2_ = y1 - y_;
        r3_ = h * k1_ - r2_;
        r4_ = r2_ - h * k7 - r3_;
        r5_ = h * (d1 * k1_ + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
        t_old_ = t_;
        y_old_ = y_;
        h_last_ = h;
        y_ = y1;
        k1_ = k7;
        t_ = last ? t_limit : t_ + h;
        if (rejected_) hnew = dir_ * std::min(std::abs(hnew), habs);
        rejected_ = false;
        h_ = hnew;
        return;
      }
      h_ = h / std::min(facc1, fac11 / safe);
      rejected_ = true;
    }
  }

  double t() const { return t_; }
  double t_old() const { return t_old_; }
  const State& y() const { return y_; }
  const State& y_old() const { return y_old_; }
  const State& dydt() const { return k1_; }
  long steps_taken() const { return nsteps_; }

  /// Continuous extension on the last accepted step.
  State dense(double t) const {
    if (t == t_) return y_;
    const double th = (t - t_old_) / h_last_;
    const double th1 = 1.0 - th;
    return r1_ + th * (r2_ + th1 * (r3_ + th * (r4_ + th1 * r5_)));
  }

  /// Root of g on the last step given g at both ends with opposite signs
  /// (Illinois variant of regula falsi on the dense output).
  double locate(const std::function<double(const State&)>& g, double ga, double gb) const {
    double a = t_old_, b = t_;
    double fa = ga, fb = gb;
    int side = 0;
    for (int it = 0; it < 200 && std::abs(b - a) > cfg_.event_refine_tol; ++it) {
      double c = (a * fb - b * fa) / (fb - fa);
      // keep the iterate strictly inside the bracket
      if (!(c > std::min(a, b) && c < std::max(a, b))) c = 0.5 * (a + b);
      const double fc = g(dense(c));
      if (fc == 0.0) return c;
      if ((fc > 0.0) == (fb > 0.0)) {
        b = c;
        fb = fc;
        if (side == -1) fa *= 0.5;
        side = -1;
      } else {
        a = c;
        fa = fc;
        if (side == 1) fb *= 0.5;
        side = 1;
      }
    }
    return std::abs(fa) < std::abs(fb) ? a : b;
  }

 private:
  double initial_step() {
    double dnf = 0.0, dny = 0.0;
    for (int i = 0; i < M; ++i) {
      const double sk = cfg_.abs_tol + cfg_.rel_tol * std::abs(y_(i));
      dnf += (k1_(i) / sk) * (k1_(i) / sk);
      dny += (y_(i) / sk) * (y_(i) / sk);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
    h = std::min(h, cfg_.max_step);
    const State f1 = f_(y_ + dir_ * h * k1_);
    double der2 = 0.0;
    for (int i = 0; i < M; ++i) {
      const double sk = cfg_.abs_tol + cfg_.rel_tol * std::abs(y_(i));
      der2 += ((f1(i) - k1_(i)) / sk) * ((f1(i) - k1_(i)) / sk);
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
    return dir_ * std::min({100.0 * h, h1, cfg_.max_step});
  }

  Rhs f_;
  IntegratorConfig cfg_;
  State y_ = State::Zero(), y_old_ = State::Zero(), k1_ = State::Zero();
  State r1_ = State::Zero(), r2_ = State::Zero(), r3_ = State::Zero(), r4_ = State::Zero(),
        r5_ = State::Zero();
  double t_ = 0.0, t_old_ = 0.0, h_ = 0.0, h_last_ = 1.0, dir_ = 1.0, facold_ = 1e-4;
  bool rejected_ = false;
  bool keep_step_ = false;
  long nsteps_ = 0;
};

/// Domain indicator: positive inside, negative outside.
template <int N>
using Domain = std::function<double(const VecN<N>&)>;

/// Adaptive integration of x' = field(x) from t = 0 to t_end (either sign).
/// Samples every accepted step. Leaving the domain ends the segment at the
/// located boundary crossing with terminal_event = "domain-exit".
template <int N>
OrbitSegment<N> integrate(const Field<N>& field, const VecN<N>& x0, double t_end, const IntegratorConfig& cfg,
                          const Domain<N>& domain = nullptr) {
  cfg.validate();
  OrbitSegment<N> seg;
  seg.times.push_back(0.0);
  seg.states.push_back(x0);
  seg.velocities.push_back(field(x0).value);
  if (t_end == 0.0) return seg;
  Dopri5<N> ode([&](const VecN<N>& x) { return field(x).value; }, cfg);
  ode.reset(0.0, x0, t_end);
  double g_prev = domain ? domain(x0) : 1.0;
  while (ode.t() != t_end) {
    ode.step(t_end);
    if (domain) {
      const double g = domain(ode.y());
      if (g < 0.0 && g_prev >= 0.0) {
        const double tc = ode.locate(domain, g_prev, g);
        const VecN<N> xc = ode.dense(tc);
        seg.times.push_back(tc);
        seg.states.push_back(xc);
        seg.velocities.push_back(field(xc).value);
        seg.terminal_event = "domain-exit";
        return seg;
      }
      g_prev = g;
    }
    seg.times.push_back(ode.t());
    seg.states.push_back(ode.y());
    seg.velocities.push_back(field(ode.y()).value);
  }
  return seg;
}

/// Packing of (x, Phi) for the variational equation.
template <int N>
using TangentState = VecN<N + N * N>;

template <int N>
TangentState<N> pack_tangent(const VecN<N>& x, const MatN<N>& phi) {
  TangentState<N> y;
  y.template head<N>() = x;
  y.template tail<N * N>() = Eigen::Map<const VecN<N * N>>(phi.data());
  return y;
}

template <int N>
MatN<N> unpack_frame(const TangentState<N>& y) {
  return Eigen::Map<const MatN<N>>(y.template tail<N * N>().data());
}

template <int N>
typename Dopri5<N + N * N>::Rhs tangent_rhs(const Field<N>& field) {
  return [field](const TangentState<N>& y) {
    const FieldEval<N> fe = field(y.template head<N>());
    const MatN<N> phi = unpack_frame<N>(y);
    return pack_tangent<N>(fe.value, fe.jacobian * phi);
  };
}

/// integrate() together with the variational equation Phi' = DX Phi. The
/// frame is restarted from the identity after every step so that `steps`
/// holds bounded per-step propagators.
template <int N>
OrbitSegment<N> integrate_tangent(const Field<N>& field, const VecN<N>& x0, double t_end,
                                  const IntegratorConfig& cfg, const Domain<N>& domain = nullptr) {
  cfg.validate();
  OrbitSegment<N> seg;
  seg.times.push_back(0.0);
  seg.states.push_back(x0);
  seg.velocities.push_back(field(x0).value);
  if (t_end == 0.0) return seg;
  Dopri5<N + N * N> ode(tangent_rhs<N>(field), cfg);
  ode.keep_step_size(true);
  const MatN<N> id = MatN<N>::Identity();
  ode.reset(0.0, pack_tangent<N>(x0, id), t_end);
  double g_prev = domain ? domain(x0) : 1.0;
  while (ode.t() != t_end) {
    ode.step(t_end);
    VecN<N> x = ode.y().template head<N>();
    MatN<N> phi = unpack_frame<N>(ode.y());
    double t = ode.t();
    bool stop = false;
    if (domain) {
      const double g = domain(x);
      if (g < 0.0 && g_prev >= 0.0) {
        auto gx = [&](const TangentState<N>& y) { return domain(VecN<N>(y.template head<N>())); };
        t = ode.locate(gx, g_prev, g);
        const TangentState<N> yc = ode.dense(t);
        x = yc.template head<N>();
        phi = unpack_frame<N>(yc);
        stop = true;
      }
      g_prev = g;
    }
    seg.times.push_back(t);
    seg.states.push_back(x);
    seg.velocities.push_back(field(x).value);
    seg.steps.push_back(phi);
    if (stop) {
      seg.terminal_event = "domain-exit";
      return seg;
    }
    ode.reset(t, pack_tangent<N>(x, id), t_end);
  }
  return seg;
}

/// Area growth |det(Phi_t restricted to span{v, w})| as a Gram-determinant
/// ratio; t must be one of the segment's sample times.
double flow_det2(const OrbitSegment<4>& seg, const Vec4& v, const Vec4& w, double t);
double flow_det2(const OrbitSegment<3>& seg, const Vec3& v, const Vec3& w, double t);

/// Log of the same ratio, safe on long segments.
double flow_logdet2(const OrbitSegment<4>& seg, const Vec4& v, const Vec4& w, double t);
double flow_logdet2(const OrbitSegment<3>& seg, const Vec3& v, const Vec3& w, double t);

/// Index of the sample at time t (within a relative tolerance of 1e-9).
template <int N>
std::size_t sample_index(const OrbitSegment<N>& seg, double t) {
  for (std::size_t i = 0; i < seg.times.size(); ++i) {
    if (std::abs(seg.times[i] - t) <= 1e-9 * std::max(1.0, std::abs(t))) return i;
  }
  throw Error(ErrorKind::DegenerateInput, "time is not a sample of the segment");
}

}  // namespace dalorenz::flowint
