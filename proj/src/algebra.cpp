#include "curldirac/algebra.hpp"

namespace curldirac {

namespace {

std::array<Mat2c, 4> make_sigma() {
  std::array<Mat2c, 4> s;
  const cd i(0.0, 1.0);
  s[0] << 1, 0, 0, 1;
  s[1] << 0, 1, 1, 0;
  s[2] << 0, -i, i, 0;
  s[3] << 1, 0, 0, -1;
  return s;
}

std::array<Mat4c, 4> make_gamma() {
  std::array<Mat4c, 4> g;
  for (int mu = 0; mu < 4; ++mu) {
    g[mu].setZero();
    const Mat2c& s = sigma(mu);
    if (mu == 0) {
      g[mu].block<2, 2>(0, 2) = s;
      g[mu].block<2, 2>(2, 0) = s;
    } else {
      g[mu].block<2, 2>(0, 2) = -s;
      g[mu].block<2, 2>(2, 0) = s;
    }
  }
  return g;
}

}  // namespace

const Mat2c& sigma(int mu) {
  static const std::array<Mat2c, 4> s = make_sigma();
  return s.at(static_cast<size_t>(mu));
}

const Mat4c& gamma(int mu) {
  static const std::array<Mat4c, 4> g = make_gamma();
  return g.at(static_cast<size_t>(mu));
}

Vec4 epsilon_contract(const Vec4& f0, const Vec4& f1, const Vec4& f2) {
  // f3^nu = e^{kappa lambda mu nu} f0_kappa f1_lambda f2_mu: cofactor
  // expansion of det[f0_cov; f1_cov; f2_cov; e_nu] along the last row.
  const Vec4 a = lower4(f0), b = lower4(f1), c = lower4(f2);
  Vec4 out;
  for (int nu = 0; nu < 4; ++nu) {
    // 3x3 minor of the covariant rows with column nu removed.
    int cols[3], p = 0;
    for (int j = 0; j < 4; ++j)
      if (j != nu) cols[p++] = j;
    const double det = a[cols[0]] * (b[cols[1]] * c[cols[2]] - b[cols[2]] * c[cols[1]]) -
                       a[cols[1]] * (b[cols[0]] * c[cols[2]] - b[cols[2]] * c[cols[0]]) +
                       a[cols[2]] * (b[cols[0]] * c[cols[1]] - b[cols[1]] * c[cols[0]]);
    // Sign of the permutation (cols[0], cols[1], cols[2], nu).
    const double sign = ((3 - nu) % 2 == 0) ? 1.0 : -1.0;
    out[nu] = sign * det;
  }
  return out;
}

Vec3 bracket3(const Vec3& v, const Vec3& w) {
  const Vec3 a = lower3(v), b = lower3(w);
  // e^{012} = +1.
  return Vec3(a[1] * b[2] - a[2] * b[1],
              a[2] * b[0] - a[0] * b[2],
              a[0] * b[1] - a[1] * b[0]);
}

}  // namespace curldirac
