#include "dalorenz/section.hpp"

#include <cmath>
#include <limits>

namespace dalorenz::section {

ReturnResult return_map(const Model& model, const SectionPoint& q) {
  return std::visit([&q](const auto& sys) { return flowint::advance_to_section(sys, q); }, model);
}

namespace {

FixedPoint polish(const model3d::LorenzParams& lp, double lo, double hi) {
  auto h = [&lp](double x) { return model3d::one_dim_map(lp, x) - x; };
  double flo = h(lo);
  for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = h(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 50; ++it) {
    const double dx = h(x) / (model3d::one_dim_map_deriv(lp, x) - 1.0);
    x -= dx;
    if (std::abs(dx) < 1e-15) break;
  }
  FixedPoint fp;
  fp.x2 = x;
  fp.side = x < 0.0 ? -1 : 1;
  fp.deriv = model3d::one_dim_map_deriv(lp, x);
  const double a = std::abs(x);
  const double sg = fp.side;
  fp.x1 = sg * lp.ear_d * std::pow(a, lp.alpha()) / (1.0 - sg * lp.ear_c * std::pow(a, lp.beta()));
  fp.period = lp.tau_E - std::log(a) / lp.lambda_u;
  return fp;
}

}  // namespace

std::vector<FixedPoint> find_fixed_points(const model3d::LorenzParams& lp) {
  std::vector<FixedPoint> out;
  auto h = [&lp](double x) { return model3d::one_dim_map(lp, x) - x; };
  constexpr int kGrid = 400;
  for (int side : {1, -1}) {
    // scan (0, 1] or [-1, 0) away from the singular point x2 = 0
    double prev_x = side * 1e-12;
    double prev = h(prev_x);
    for (int i = 1; i <= kGrid; ++i) {
      const double x = side * static_cast<double>(i) / kGrid;
      const double v = h(x);
      if (v == 0.0 || (v > 0.0) != (prev > 0.0)) {
        out.push_back(polish(lp, std::min(prev_x, x), std::max(prev_x, x)));
      }
      prev_x = x;
      prev = v;
    }
  }
  return out;
}

FixedPoint orbit_p(const model3d::LorenzParams& lp) {
  for (const auto& fp : find_fixed_points(lp)) {
    if (fp.side > 0) return fp;
  }
  throw Error(ErrorKind::DegenerateInput, "no fixed point of f on the right wing");
}

FixedPoint orbit_q(const model3d::LorenzParams& lp) {
  for (const auto& fp : find_fixed_points(lp)) {
    if (fp.side < 0) return fp;
  }
  throw Error(ErrorKind::DegenerateInput, "no fixed point of f on the left wing");
}

skew4d::PeriodicOrbitRef make_anchor(const model3d::LorenzParams& lp) {
  const FixedPoint p = orbit_p(lp);
  skew4d::PeriodicOrbitRef ref;
  ref.section_point = Vec2(p.x1, p.x2);
  return ref;
}

HybridSystem make_hybrid(const model3d::LorenzParams& lp, const skew4d::SkewParams& sp,
                         const flowint::IntegratorConfig& cfg) {
  HybridSystem sys;
  sys.lp = lp;
  sys.sp = sp;
  sys.anchor = make_anchor(lp);
  sys.cfg = cfg;
  return sys;
}

// ---------------------------------------------------------------- cones

bool Cone::contains(const Eigen::VectorXd& v, double slack) const {
  const Eigen::VectorXd a = axis.normalized();
  const double comp = v.dot(a);
  return (v - comp * a).norm() <= width * std::abs(comp) * (1.0 + slack);
}

double Cone::adapted_norm(const Eigen::VectorXd& v) const {
  const Eigen::VectorXd a = axis.normalized();
  const double comp = v.dot(a);
  return std::max(std::abs(comp), (v - comp * a).norm() / width);
}

Cone section_cone(int dim, double width) {
  Cone c;
  c.axis = Eigen::VectorXd::Zero(dim);
  c.axis(1) = 1.0;
  c.width = width;
  return c;
}

namespace {

/// Orthonormal basis of the complement of a unit axis.
Eigen::MatrixXd complement(const Eigen::VectorXd& axis) {
  const int n = static_cast<int>(axis.size());
  Eigen::MatrixXd m(n, n);
  m.col(0) = axis;
  m.rightCols(n - 1) = Eigen::MatrixXd::Identity(n, n).leftCols(n - 1);
  // pick identity columns least aligned with the axis
  int skip = 0;
  axis.cwiseAbs().maxCoeff(&skip);
  int col = 1;
  for (int i = 0; i < n && col < n; ++i) {
    if (i == skip) continue;
    m.col(col++) = Eigen::VectorXd::Unit(n, i);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  return q.rightCols(n - 1);
}

std::vector<Eigen::VectorXd> boundary_rays(const Eigen::VectorXd& axis, double alpha, int rays) {
  const Eigen::MatrixXd perp = complement(axis);
  std::vector<Eigen::VectorXd> out;
  if (axis.size() == 2) {
    out.push_back(axis + alpha * perp.col(0));
    out.push_back(axis - alpha * perp.col(0));
    return out;
  }
  for (int k = 0; k < rays; ++k) {
    const double phi = 2.0 * M_PI * k / rays;
    out.push_back(axis + alpha * (std::cos(phi) * perp.col(0) + std::sin(phi) * perp.col(1)));
  }
  return out;
}

void require_nonsingular(const Eigen::MatrixXd& d) {
  if (d.rows() != d.cols() || d.rows() < 2 || d.rows() > 3) {
    throw Error(ErrorKind::DegenerateInput, "cone checks need a 2x2 or 3x3 derivative");
  }
  // Only injectivity matters for the boundary-ray argument; near L the
  // derivative is legitimately very anisotropic (det ~ 1e-16 next to entries ~ 1e2).
  if (!d.allFinite() || d.determinant() == 0.0) {
    throw Error(ErrorKind::DegenerateInput, "singular derivative");
  }
}

}  // namespace

ConeResult cone_check(const Eigen::MatrixXd& deriv, double alpha_in, double alpha_out,
                      const Eigen::VectorXd& axis_in, const Eigen::VectorXd& axis_out, int rays) {
  require_nonsingular(deriv);
  const Eigen::VectorXd ai = axis_in.normalized();
  const Eigen::VectorXd ao = axis_out.normalized();
  ConeResult res;
  int sign = 0;
  bool mixed = false;
  for (const auto& r : boundary_rays(ai, alpha_in, rays)) {
    const Eigen::VectorXd w = deriv * r;
    const double comp = w.dot(ao);
    const double perp = (w - comp * ao).norm();
    const int sg = comp > 0.0 ? 1 : (comp < 0.0 ? -1 : 0);
    if (sg == 0 || (sign != 0 && sg != sign)) mixed = true;
    if (sign == 0) sign = sg;
    const double ratio = comp == 0.0 ? std::numeric_limits<double>::infinity() : perp / (alpha_out * std::abs(comp));
    res.worst_ratio = std::max(res.worst_ratio, ratio);
  }
  if (mixed) res.worst_ratio = std::numeric_limits<double>::infinity();
  res.pass = res.worst_ratio <= 1.0;
  return res;
}

ExpansionResult expansion_check(const Eigen::MatrixXd& deriv, const Cone& cone, double lambda_floor, int samples) {
  require_nonsingular(deriv);
  const Eigen::VectorXd a = cone.axis.normalized();
  const Eigen::MatrixXd perp = complement(a);
  ExpansionResult res;
  res.min_growth = std::numeric_limits<double>::infinity();
  auto probe = [&](const Eigen::VectorXd& v) {
    res.min_growth = std::min(res.min_growth, cone.adapted_norm(deriv * v) / cone.adapted_norm(v));
  };
  if (a.size() == 2) {
    for (int i = 0; i < samples; ++i) {
      const double t = -1.0 + 2.0 * i / (samples - 1);
      probe(a + t * cone.width * perp.col(0));
    }
  } else {
    const int radial = 17, angular = 64;
    for (int i = 0; i < radial; ++i) {
      const double t = static_cast<double>(i) / (radial - 1);
      for (int k = 0; k < (i == 0 ? 1 : angular); ++k) {
        const double phi = 2.0 * M_PI * k / angular;
        probe(a + t * cone.width * (std::cos(phi) * perp.col(0) + std::sin(phi) * perp.col(1)));
      }
    }
  }
  res.pass = res.min_growth >= lambda_floor;
  return res;
}

// ---------------------------------------------------------------- cu-curves

double curve_length(const CuCurve& c, double alpha) {
  double len = 0.0;
  for (std::size_t i = 1; i < c.nodes.size(); ++i) {
    const Vec3 d = c.nodes[i] - c.nodes[i - 1];
    len += std::max(std::abs(d(1)), std::hypot(d(0), d(2)) / alpha);
  }
  return len;
}

double curve_euclid_length(const CuCurve& c) {
  double len = 0.0;
  for (std::size_t i = 1; i < c.nodes.size(); ++i) len += (c.nodes[i] - c.nodes[i - 1]).norm();
  return len;
}

CuCurve make_segment(const SectionPoint& center, const Vec3& direction, double length, int nodes) {
  CuCurve c;
  const Vec3 u = direction / curve_length(CuCurve{{Vec3::Zero(), direction}}, 1.0);
  for (int i = 0; i < nodes; ++i) {
    const double t = -0.5 + static_cast<double>(i) / (nodes - 1);
    c.nodes.push_back(center + t * length * u);
  }
  return c;
}

namespace {

struct Mapper {
  const HybridSystem& sys;
  const CurveOptions& opts;
  int side;  // wing of the piece being mapped

  Vec3 image(const Vec3& p) const {
    if (std::abs(p(1)) < sys.on_leaf_tol) {
      // one-sided limit at L: the cusp tip, fiber fully contracted
      const Vec2 tip = model3d::base_return_limit(sys.lp, side);
      return Vec3(tip(0), tip(1), 0.0);
    }
    return flowint::advance_to_section(sys, p).image;
  }

  void refine(const Vec3& a, const Vec3& b, const Vec3& fa, const Vec3& fb, int depth, std::vector<Vec3>& out) const {
    const Vec3 m = 0.5 * (a + b);
    const Vec3 fm = image(m);
    const Vec3 chord = fb - fa;
    const double cl = chord.norm();
    double err;
    if (cl == 0.0) {
      err = (fm - fa).norm();
    } else {
      const double t = std::clamp((fm - fa).dot(chord) / (cl * cl), 0.0, 1.0);
      err = (fm - (fa + t * chord)).norm();
    }
    if (err > opts.chord_tol && depth < opts.max_depth && out.size() < opts.max_nodes) {
      refine(a, m, fa, fm, depth + 1, out);
      refine(m, b, fm, fb, depth + 1, out);
    } else {
      out.push_back(fb);
    }
  }

  CuCurve map(const CuCurve& j) const {
    std::vector<Vec3> pre = j.nodes;
    // enforce the minimum node count in the preimage
    while (static_cast<int>(pre.size()) < opts.min_nodes) {
      std::vector<Vec3> finer;
      for (std::size_t i = 0; i + 1 < pre.size(); ++i) {
        finer.push_back(pre[i]);
        finer.push_back(0.5 * (pre[i] + pre[i + 1]));
      }
      finer.push_back(pre.back());
      pre.swap(finer);
    }
    std::vector<Vec3> imgs;
    imgs.reserve(pre.size());
    for (const auto& p : pre) imgs.push_back(image(p));
    CuCurve out;
    out.nodes.push_back(imgs[0]);
    for (std::size_t i = 0; i + 1 < pre.size(); ++i) {
      refine(pre[i], pre[i + 1], imgs[i], imgs[i + 1], 0, out.nodes);
    }
    return out;
  }
};

void check_precondition(const CuCurve& j, double alpha, double on_leaf_tol) {
  if (j.nodes.size() < 2) throw Error(ErrorKind::Precondition, "cu-curve needs at least two nodes");
  bool all_on_leaf = true;
  int dir = 0;
  const Cone cone = section_cone(3, alpha);
  for (std::size_t i = 0; i < j.nodes.size(); ++i) {
    if (std::abs(j.nodes[i](1)) >= on_leaf_tol) all_on_leaf = false;
    if (i == 0) continue;
    const Vec3 d = j.nodes[i] - j.nodes[i - 1];
    if (!cone.contains(d, 1e-9)) throw Error(ErrorKind::Precondition, "cu-curve chord outside the cone");
    const int sg = d(1) > 0.0 ? 1 : -1;
    if (dir != 0 && sg != dir) throw Error(ErrorKind::Precondition, "cu-curve is not monotone in x2");
    dir = sg;
  }
  if (all_on_leaf) throw Error(ErrorKind::DegenerateCurve, "cu-curve lies inside the on-leaf band of L");
}

/// First crossing of L, as (index before the crossing, crossing point).
bool find_crossing(const CuCurve& j, double tol, std::size_t& idx, Vec3& point) {
  for (std::size_t i = 0; i + 1 < j.nodes.size(); ++i) {
    const double a = j.nodes[i](1), b = j.nodes[i + 1](1);
    if (std::abs(a) < tol && i > 0) {
      idx = i;
      point = j.nodes[i];
      return true;
    }
    if ((a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0)) {
      const double lam = a / (a - b);
      idx = i;
      point = j.nodes[i] + lam * (j.nodes[i + 1] - j.nodes[i]);
      point(1) = 0.0;
      return true;
    }
  }
  return false;
}

int piece_side(const CuCurve& c) {
  double best = 0.0;
  for (const auto& p : c.nodes) {
    if (std::abs(p(1)) > std::abs(best)) best = p(1);
  }
  return best < 0.0 ? -1 : 1;
}

}  // namespace

CurveTrace iterate_cu_curve(const HybridSystem& sys, const CuCurve& j0, double eps0, int k_max,
                            const CurveOptions& opts) {
  check_precondition(j0, opts.alpha, sys.on_leaf_tol);
  CurveTrace tr;
  CuCurve j = j0;
  tr.lengths.push_back(curve_length(j, opts.alpha));
  tr.euclid_lengths.push_back(curve_euclid_length(j));
  for (int k = 0;; ++k) {
    const double len = tr.lengths.back();
    if (len >= eps0 && tr.k_eps < 0) {
      tr.k_eps = k;
      tr.reached = true;
    }
    if (tr.reached && (!opts.continue_to_crossing || tr.crossed)) break;
    if (k >= k_max) break;

    bool split = false;
    std::size_t idx = 0;
    Vec3 cut;
    while (find_crossing(j, sys.on_leaf_tol, idx, cut)) {
      CuCurve a, b;
      a.nodes.assign(j.nodes.begin(), j.nodes.begin() + idx + 1);
      if ((a.nodes.back() - cut).norm() > 0.0) a.nodes.push_back(cut);
      b.nodes.push_back(cut);
      const auto tail = j.nodes.begin() + idx + 1;
      for (auto it = tail; it != j.nodes.end(); ++it) {
        if ((*it - cut).norm() > 0.0) b.nodes.push_back(*it);
      }
      const double la = curve_length(a, opts.alpha), lb = curve_length(b, opts.alpha);
      tr.pieces.emplace_back(la, lb);
      j = la >= lb ? a : b;
      split = true;
      if (j.nodes.size() < 2) throw Error(ErrorKind::DegenerateCurve, "cu-curve collapsed onto L");
    }
    tr.split.push_back(split);
    tr.crossed = tr.crossed || split;

    Mapper m{sys, opts, piece_side(j)};
    j = m.map(j);
    tr.lengths.push_back(curve_length(j, opts.alpha));
    tr.euclid_lengths.push_back(curve_euclid_length(j));
    tr.growth.push_back(tr.lengths.back() / len);
    tr.iterates = k + 1;
  }
  tr.final_curve = j;
  return tr;
}

}  // namespace dalorenz::section
