#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace dalorenz {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

using Point3 = Vec3;  // (x1, x2, x3)
using Point4 = Vec4;  // (x1, x2, x3, s)

template <int N>
using VecN = Eigen::Matrix<double, N, 1>;
template <int N>
using MatN = Eigen::Matrix<double, N, N>;

/// Value and Jacobian of a vector field at one point.
template <int N>
struct FieldEval {
  VecN<N> value;
  MatN<N> jacobian;
};

using FieldEval3 = FieldEval<3>;
using FieldEval4 = FieldEval<4>;

/// One inequality of a parameter gate. `margin` is positive iff the
/// inequality holds, measured in the natural units of its two sides.
struct Check {
  std::string name;
  std::string anchor;      // where the inequality comes from, e.g. "P1", "Eq(2)"
  std::string inequality;  // human readable form
  bool pass = false;
  double margin = 0.0;
};

struct ValidationReport {
  std::vector<Check> checks;

  bool passed() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }
  const Check* find(const std::string& name) const {
    for (const auto& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
  void add(std::string name, std::string anchor, std::string inequality, double margin) {
    checks.push_back({std::move(name), std::move(anchor), std::move(inequality), margin > 0.0, margin});
  }
};

}  // namespace dalorenz
