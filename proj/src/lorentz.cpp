#include "curldirac/lorentz.hpp"

#include <cmath>

namespace curldirac {

namespace {

Vec3 normalized_axis(const Vec3& axis) {
  const double n = axis.norm();
  if (!(n > 0.0)) throw InputError("lorentz: zero axis");
  return axis / n;
}

Mat4c proper_action(const Mat2c& B) {
  // xi carries the defining SL(2,C) representation, eta (lower dotted
  // indices) the adjoint-inverse one.
  Mat4c S = Mat4c::Zero();
  S.block<2, 2>(0, 0) = B;
  S.block<2, 2>(2, 2) = B.adjoint().inverse();
  return S;
}

// Spatial generator of boosts: first row/column n, zero spatial block.
Mat4 boost_generator(const Vec3& n) {
  Mat4 M = Mat4::Zero();
  for (int k = 0; k < 3; ++k) {
    M(0, k + 1) = n[k];
    M(k + 1, 0) = n[k];
  }
  return M;
}

// Rotation generator: spatial block v -> n x v.
Mat4 rotation_generator(const Vec3& n) {
  Mat4 N = Mat4::Zero();
  N(1, 2) = -n[2];
  N(1, 3) = n[1];
  N(2, 1) = n[2];
  N(2, 3) = -n[0];
  N(3, 1) = -n[1];
  N(3, 2) = n[0];
  return N;
}

}  // namespace

LorentzTransform::LorentzTransform(const Mat4& lambda, const Mat4c& action, bool antilinear,
                                   bool proper, const Mat2c& lift)
    : lambda_(lambda), action_(action), antilinear_(antilinear), proper_(proper), lift_(lift) {}

LorentzTransform LorentzTransform::boost(double phi, const Vec3& axis) {
  const Vec3 n = normalized_axis(axis);
  const Mat4 M = boost_generator(n);
  const Mat4 L = Mat4::Identity() + (std::cosh(phi) - 1.0) * (M * M) - std::sinh(phi) * M;
  Mat2c ns = Mat2c::Zero();
  for (int k = 0; k < 3; ++k) ns += n[k] * sigma(k + 1);
  const Mat2c B = std::cosh(phi / 2) * Mat2c::Identity() - std::sinh(phi / 2) * ns;
  return LorentzTransform(L, proper_action(B), false, true, B);
}

LorentzTransform LorentzTransform::rotation(double theta, const Vec3& axis) {
  const Vec3 n = normalized_axis(axis);
  return rotation_quaternion(std::cos(theta / 2), std::sin(theta / 2) * n);
}

LorentzTransform LorentzTransform::rotation_quaternion(double w, const Vec3& v) {
  const double s = std::sqrt(w * w + v.squaredNorm());
  if (!(s > 0.0)) throw InputError("lorentz: zero quaternion");
  const double qw = w / s;
  const Vec3 qv = v / s;
  // Active rotation by theta = 2 atan2(|qv|, qw) about qv; the passive matrix
  // is its transpose, i.e. exp(-theta N_n).
  const Mat4 N = rotation_generator(qv.squaredNorm() > 0 ? Vec3(qv.normalized()) : Vec3(0, 0, 1));
  const double st = 2 * qw * qv.norm();             // sin(theta)
  const double vt = 2 * qv.squaredNorm();           // 1 - cos(theta)
  const Mat4 L = Mat4::Identity() + vt * (N * N) - st * N;
  Mat2c qs = Mat2c::Zero();
  for (int k = 0; k < 3; ++k) qs += qv[k] * sigma(k + 1);
  const Mat2c B = qw * Mat2c::Identity() + cd(0, 1) * qs;
  return LorentzTransform(L, proper_action(B), false, true, B);
}

LorentzTransform LorentzTransform::space_inversion() {
  Mat4 L = Mat4::Identity();
  L(1, 1) = L(2, 2) = L(3, 3) = -1.0;
  Mat4c S = Mat4c::Zero();
  S.block<2, 2>(0, 2) = cd(0, 1) * Mat2c::Identity();
  S.block<2, 2>(2, 0) = cd(0, 1) * Mat2c::Identity();
  return LorentzTransform(L, S, false, false, Mat2c::Identity());
}

LorentzTransform LorentzTransform::time_inversion() {
  Mat4 L = Mat4::Identity();
  L(0, 0) = -1.0;
  Mat4c S = Mat4c::Zero();
  S.block<2, 2>(0, 0) = sigma(2);
  S.block<2, 2>(2, 2) = sigma(2);
  return LorentzTransform(L, S, true, false, Mat2c::Identity());
}

LorentzTransform LorentzTransform::identity() {
  return LorentzTransform(Mat4::Identity(), Mat4c::Identity(), false, true, Mat2c::Identity());
}

LorentzTransform LorentzTransform::compose(const LorentzTransform& first) const {
  const Mat4 L = lambda_ * first.lambda_;
  const Mat4c S = antilinear_ ? Mat4c(action_ * first.action_.conjugate())
                              : Mat4c(action_ * first.action_);
  const bool anti = antilinear_ != first.antilinear_;
  const bool prop = proper_ && first.proper_;
  Mat2c lift = Mat2c::Identity();
  if (prop) lift = lift_ * first.lift_;
  return LorentzTransform(L, S, anti, prop, lift);
}

LorentzTransform LorentzTransform::inverse() const {
  if (!proper_) throw InputError("lorentz: inverse available for proper transforms only");
  // Lambda^{-1} = g Lambda^T g;  B^{-1} via det B = 1.
  Mat4 g = Mat4::Identity();
  g(1, 1) = g(2, 2) = g(3, 3) = -1.0;
  const Mat4 Linv = g * lambda_.transpose() * g;
  Mat2c Binv;
  Binv << lift_(1, 1), -lift_(0, 1), -lift_(1, 0), lift_(0, 0);
  return LorentzTransform(Linv, proper_action(Binv), false, true, Binv);
}

Vec4 LorentzTransform::apply(const Vec4& contravariant) const {
  return lambda_ * contravariant;
}

Bispinor LorentzTransform::apply(const Bispinor& psi) const {
  const Vec4c v = psi.vec();
  const Vec4c out = antilinear_ ? Vec4c(action_ * v.conjugate()) : Vec4c(action_ * v);
  return Bispinor::from_vec(out);
}

bool LorentzTransform::orientation_preserving() const {
  return lambda_.determinant() > 0.0;
}

const Mat2c& LorentzTransform::lift() const {
  if (!proper_) throw InputError("lorentz: spinor lift defined for proper transforms only");
  return lift_;
}

}  // namespace curldirac
