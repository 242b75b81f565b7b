#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace curldirac {

using cd = std::complex<double>;

using Vec2c = Eigen::Vector2cd;
using Vec3 = Eigen::Vector3d;
using Vec3c = Eigen::Vector3cd;
using Vec4 = Eigen::Vector4d;
using Vec4c = Eigen::Vector4cd;
using Mat2c = Eigen::Matrix2cd;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat4c = Eigen::Matrix4cd;

// Thrown on malformed or out-of-domain input (maps to CLI exit code 2).
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Bispinor with eta* xi = 0; the frame correspondence is undefined there.
struct DegenerateBispinor : InputError {
  using InputError::InputError;
};

// Potential outside the operating window of the planar pencil (sup|ePhi| >= m).
struct RestrictionViolated : InputError {
  using InputError::InputError;
};

// Solver breakdown or insufficient data (maps to CLI exit code 3).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Metric signature (+1,-1,-1,-1) throughout.  Vec4 holds contravariant
// components unless a variable name says otherwise; Vec3 is the (+1,-1,-1)
// restriction with index 0 the time component.
inline double metric4(int mu) { return mu == 0 ? 1.0 : -1.0; }
inline double metric3(int mu) { return mu == 0 ? 1.0 : -1.0; }

inline Vec4 lower4(const Vec4& v) { return Vec4(v[0], -v[1], -v[2], -v[3]); }
inline Vec3 lower3(const Vec3& v) { return Vec3(v[0], -v[1], -v[2]); }

// a_mu b^mu for two contravariant arguments.
inline double minkowski4(const Vec4& a, const Vec4& b) {
  return a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3];
}
inline double minkowski3(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] - a[1] * b[1] - a[2] * b[2];
}
inline cd minkowski3c(const Vec3c& a, const Vec3c& b) {
  return a[0] * b[0] - a[1] * b[1] - a[2] * b[2];
}

}  // namespace curldirac
