#pragma once

#include <array>

#include "curldirac/types.hpp"

namespace curldirac {

// Four-component spinor (xi^1, xi^2, eta_1, eta_2) in the representation
//
//   gamma^0 = [ 0  I ]        gamma^k = [ 0        -sigma^k ]
//             [ I  0 ]                  [ sigma^k   0       ]
//
// so the upper pair transforms with B and the lower pair with (B^dagger)^{-1}
// under a proper transform with SL(2,C) lift B.
struct Bispinor {
  Vec2c xi;
  Vec2c eta;

  Bispinor() : xi(Vec2c::Zero()), eta(Vec2c::Zero()) {}
  Bispinor(const Vec2c& xi_, const Vec2c& eta_) : xi(xi_), eta(eta_) {}
  Bispinor(cd x1, cd x2, cd e1, cd e2) : xi(x1, x2), eta(e1, e2) {}

  Vec4c vec() const {
    Vec4c v;
    v << xi(0), xi(1), eta(0), eta(1);
    return v;
  }
  static Bispinor from_vec(const Vec4c& v) {
    return Bispinor(v(0), v(1), v(2), v(3));
  }

  // eta* xi; the correspondence with frames degenerates when this vanishes.
  cd overlap() const { return eta.dot(xi); }  // Eigen dot conjugates the left argument
  double norm2() const { return xi.squaredNorm() + eta.squaredNorm(); }

  Bispinor operator+(const Bispinor& o) const { return {xi + o.xi, eta + o.eta}; }
  Bispinor operator-(const Bispinor& o) const { return {xi - o.xi, eta - o.eta}; }
  Bispinor operator*(cd s) const { return {s * xi, s * eta}; }
  Bispinor operator-() const { return {-xi, -eta}; }
};

// sigma^0 = I, sigma^1..3 the Pauli matrices.
const Mat2c& sigma(int mu);

// gamma^mu in the representation above; {gamma^mu, gamma^nu} = 2 g^{mu nu}.
const Mat4c& gamma(int mu);

// Relative degeneracy gate: |eta* xi| <= gate * (|xi|^2 + |eta|^2).
inline constexpr double kDegenerateGate = 1e-12;

inline bool is_degenerate(const Bispinor& psi) {
  return std::abs(psi.overlap()) <= kDegenerateGate * psi.norm2();
}

// e^{kappa lambda mu nu} f0_kappa f1_lambda f2_mu with e^{0123} = +1; the
// arguments are contravariant, the result is contravariant.  For an
// orthonormal (f0, f1, f2) this completes the tetrad.
Vec4 epsilon_contract(const Vec4& f0, const Vec4& f1, const Vec4& f2);

// [v, w]^lambda = e^{lambda mu nu} v_mu w_nu in (+1,-1,-1), e^{012} = +1;
// contravariant in, contravariant out.
Vec3 bracket3(const Vec3& v, const Vec3& w);

// Permutation signs; 0 on repeated indices.
constexpr int levi3(int a, int b, int c) {
  const int p = (b - a) * (c - a) * (c - b);
  return p > 0 ? 1 : (p < 0 ? -1 : 0);
}
constexpr int levi4(int a, int b, int c, int d) {
  const int idx[4] = {a, b, c, d};
  int sign = 1;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (idx[i] == idx[j]) return 0;
      if (idx[i] > idx[j]) sign = -sign;
    }
  }
  return sign;
}

}  // namespace curldirac
