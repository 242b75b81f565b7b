#pragma once

#include "curldirac/algebra.hpp"

namespace curldirac {

// Passive Lorentz transform: x'^mu = Lambda^mu_nu x^nu, together with its
// action on bispinors.  Instances are built from the generators below and
// composed; a bare matrix without a spinor action cannot be constructed.
//
//   boost:     Lambda = exp(-phi M_n),  B = cosh(phi/2) - (n.sigma) sinh(phi/2)
//   rotation:  Lambda = exp(-theta N_n), B = cos(theta/2) + i (n.sigma) sin(theta/2)
//   space inversion: xi' = i eta, eta' = i xi
//   time inversion:  antilinear, psi' = diag(sigma^2, sigma^2) conj(psi)
//
// For proper transforms the bispinor action is diag(B, (B^dagger)^{-1}).
class LorentzTransform {
 public:
  static LorentzTransform boost(double phi, const Vec3& axis);
  static LorentzTransform rotation(double theta, const Vec3& axis);
  // Rotation straight from a unit quaternion (w, v); equals
  // rotation(2*atan2(|v|,w), v/|v|).
  static LorentzTransform rotation_quaternion(double w, const Vec3& v);
  static LorentzTransform space_inversion();
  static LorentzTransform time_inversion();
  static LorentzTransform identity();

  // this after `first`: (a.compose(b)).apply(x) == a.apply(b.apply(x)).
  LorentzTransform compose(const LorentzTransform& first) const;
  friend LorentzTransform operator*(const LorentzTransform& a, const LorentzTransform& b) {
    return a.compose(b);
  }

  // Proper transforms only; inversions must be inverted as words.
  LorentzTransform inverse() const;

  Vec4 apply(const Vec4& contravariant) const;
  Bispinor apply(const Bispinor& psi) const;

  const Mat4& lambda() const { return lambda_; }
  const Mat4c& bispinor_action() const { return action_; }
  bool antilinear() const { return antilinear_; }
  bool proper() const { return proper_; }
  // det Lambda = +1?
  bool orientation_preserving() const;
  // Lambda^0_0 > 0?  Flips the time orientation tau when false.
  bool time_preserving() const { return lambda_(0, 0) > 0.0; }
  // SL(2,C) lift; defined for proper transforms only.
  const Mat2c& lift() const;

 private:
  LorentzTransform(const Mat4& lambda, const Mat4c& action, bool antilinear, bool proper,
                   const Mat2c& lift);

  Mat4 lambda_;
  Mat4c action_;
  bool antilinear_ = false;
  bool proper_ = true;
  Mat2c lift_;
};

}  // namespace curldirac
