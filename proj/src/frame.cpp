#include "curldirac/frame.hpp"

#include <cmath>
#include <sstream>

namespace curldirac {

namespace {

// a^T M b, no conjugation
cd bilinear(const Vec2c& a, const Mat2c& M, const Vec2c& b) {
  return (a.transpose() * (M * b))(0);
}

double normalize_angle(double t) {
  t = std::remainder(t, 2.0 * M_PI);
  if (t <= -M_PI) t += 2.0 * M_PI;
  return t;
}

void require_orthonormal_triple(const Vec4& f0, const Vec4& f1, const Vec4& f2, double tol) {
  double d = 0.0;
  d = std::max(d, std::abs(minkowski4(f0, f0) - 1.0));
  d = std::max(d, std::abs(minkowski4(f1, f1) + 1.0));
  d = std::max(d, std::abs(minkowski4(f2, f2) + 1.0));
  d = std::max(d, std::abs(minkowski4(f0, f1)));
  d = std::max(d, std::abs(minkowski4(f0, f2)));
  d = std::max(d, std::abs(minkowski4(f1, f2)));
  if (d > tol) {
    std::ostringstream msg;
    msg << "frame triple is not orthonormal: defect " << d << " exceeds " << tol;
    throw InputError(msg.str());
  }
}

// Shepperd-style quaternion extraction, stable for all rotation angles.
// Convention matches LorentzTransform::rotation_quaternion: the active
// rotation R = I + 2 qw [qv x] + 2 [qv x]^2.
Eigen::Vector4d quaternion_from_rotation(const Mat3& Q) {
  Eigen::Vector4d q;
  const double tr = Q.trace();
  if (tr >= Q(0, 0) && tr >= Q(1, 1) && tr >= Q(2, 2)) {
    const double t = 2.0 * std::sqrt(1.0 + tr);
    q(0) = 0.25 * t;
    q(1) = (Q(2, 1) - Q(1, 2)) / t;
    q(2) = (Q(0, 2) - Q(2, 0)) / t;
    q(3) = (Q(1, 0) - Q(0, 1)) / t;
  } else if (Q(0, 0) >= Q(1, 1) && Q(0, 0) >= Q(2, 2)) {
    const double t = 2.0 * std::sqrt(1.0 + Q(0, 0) - Q(1, 1) - Q(2, 2));
    q(0) = (Q(2, 1) - Q(1, 2)) / t;
    q(1) = 0.25 * t;
    q(2) = (Q(0, 1) + Q(1, 0)) / t;
    q(3) = (Q(0, 2) + Q(2, 0)) / t;
  } else if (Q(1, 1) >= Q(2, 2)) {
    const double t = 2.0 * std::sqrt(1.0 + Q(1, 1) - Q(0, 0) - Q(2, 2));
    q(0) = (Q(0, 2) - Q(2, 0)) / t;
    q(1) = (Q(0, 1) + Q(1, 0)) / t;
    q(2) = 0.25 * t;
    q(3) = (Q(1, 2) + Q(2, 1)) / t;
  } else {
    const double t = 2.0 * std::sqrt(1.0 + Q(2, 2) - Q(0, 0) - Q(1, 1));
    q(0) = (Q(1, 0) - Q(0, 1)) / t;
    q(1) = (Q(0, 2) + Q(2, 0)) / t;
    q(2) = (Q(1, 2) + Q(2, 1)) / t;
    q(3) = 0.25 * t;
  }
  return q;
}

}  // namespace

Vec4 dirac_current(const Bispinor& psi) {
  Vec4 j;
  j(0) = psi.xi.squaredNorm() + psi.eta.squaredNorm();
  for (int k = 1; k <= 3; ++k) {
    j(k) = std::real(psi.xi.dot(sigma(k) * psi.xi)) - std::real(psi.eta.dot(sigma(k) * psi.eta));
  }
  return j;
}

Vec4c transverse_current(const Bispinor& psi) {
  const cd i(0.0, 1.0);
  Vec4c u;
  u(0) = -2.0 * i * bilinear(psi.xi, sigma(2), psi.eta);
  for (int k = 1; k <= 3; ++k) {
    const Mat2c M = sigma(2) * sigma(k);
    u(k) = i * (bilinear(psi.xi, M, psi.eta) + bilinear(psi.eta, M, psi.xi));
  }
  return u;
}

FrameTensors bispinor_to_tensors(const Bispinor& psi, int tau) {
  if (tau != 1 && tau != -1) throw InputError("tau must be +1 or -1");
  if (is_degenerate(psi)) {
    throw DegenerateBispinor("bispinor is degenerate: |eta* xi| vanishes relative to |psi|^2");
  }
  const cd ov = 2.0 * psi.overlap();
  FrameTensors T;
  T.rho = std::abs(ov);
  T.theta = std::arg(ov);
  T.tau = tau;
  const double t = static_cast<double>(tau);
  const Vec4 j = dirac_current(psi);
  const Vec4c u = transverse_current(psi);
  T.f0 = t * j / T.rho;
  T.f1 = u.real() / T.rho;
  T.f2 = t * u.imag() / T.rho;
  T.f3 = epsilon_contract(T.f0, T.f1, T.f2);
  return T;
}

Vec4 spin_vector(const Vec4& f0, const Vec4& f1, const Vec4& f2, double ortho_tol) {
  require_orthonormal_triple(f0, f1, f2, ortho_tol);
  return epsilon_contract(f0, f1, f2);
}

Bispinor tensors_to_bispinor(double rho, double theta, int tau, const Vec4& f0, const Vec4& f1,
                             const Vec4& f2, double ortho_tol) {
  if (!(rho > 0.0)) throw InputError("rho must be positive");
  if (tau != 1 && tau != -1) throw InputError("tau must be +1 or -1");
  require_orthonormal_triple(f0, f1, f2, ortho_tol);

  // tau = -1 data maps to the tau = +1 problem with f0, f2 reversed; the
  // resulting bispinor serves both.
  Vec4 F0 = f0, F2 = f2;
  if (tau == -1) {
    F0 = -F0;
    F2 = -F2;
  }
  if (F0(0) < 1.0 - ortho_tol) {
    throw InputError("tau * f0 must be future-pointing (tau * f0^0 >= 1)");
  }

  // Passive boost taking F0 to e0, then a passive rotation aligning the
  // boosted triad with the coordinate axes.
  LorentzTransform Lb = LorentzTransform::identity();
  const Vec3 sp = F0.tail<3>();
  if (sp.norm() > 1e-14) {
    Lb = LorentzTransform::boost(std::acosh(std::max(1.0, F0(0))), sp);
  }
  const Vec4 F3 = epsilon_contract(F0, f1, F2);
  const Vec4 g1 = Lb.apply(f1);
  const Vec4 g2 = Lb.apply(F2);
  const Vec4 g3 = Lb.apply(F3);
  Mat3 Q;
  Q.col(0) = g1.tail<3>();
  Q.col(1) = g2.tail<3>();
  Q.col(2) = g3.tail<3>();
  const Eigen::Vector4d q = quaternion_from_rotation(Q);
  const LorentzTransform Lr = LorentzTransform::rotation_quaternion(q(0), q.tail<3>());

  // In the standard frame the bispinor is fixed by rho and theta alone.
  const double amp = std::sqrt(rho / 2.0);
  const cd half = std::polar(1.0, 0.5 * theta);
  const Bispinor canon(amp * half, cd(0.0), amp * std::conj(half), cd(0.0));
  return (Lr * Lb).inverse().apply(canon);
}

Bispinor tensors_to_bispinor(const FrameTensors& T, double ortho_tol) {
  return tensors_to_bispinor(T.rho, T.theta, T.tau, T.f0, T.f1, T.f2, ortho_tol);
}

FrameTensors transform(const LorentzTransform& L, const FrameTensors& T) {
  FrameTensors R;
  R.rho = T.rho;
  R.theta = normalize_angle(L.orientation_preserving() ? T.theta : -T.theta);
  R.tau = T.tau * (L.time_preserving() ? 1 : -1);
  R.f0 = L.apply(T.f0);
  R.f1 = L.apply(T.f1);
  R.f2 = L.apply(T.f2);
  R.f3 = epsilon_contract(R.f0, R.f1, R.f2);
  return R;
}

double orthonormality_defect(const Vec4& f0, const Vec4& f1, const Vec4& f2, const Vec4& f3) {
  const Vec4 f[4] = {f0, f1, f2, f3};
  double d = 0.0;
  for (int a = 0; a < 4; ++a) {
    for (int b = a; b < 4; ++b) {
      const double expect = (a == b) ? metric4(a) : 0.0;
      d = std::max(d, std::abs(minkowski4(f[a], f[b]) - expect));
    }
  }
  return d;
}

PlanarPair planar_reduce(const Bispinor& psi) {
  const double s = 1.0 / std::sqrt(2.0);
  PlanarPair p;
  p.phi_plus = s * (psi.xi(0) + psi.eta(0));
  p.phi_minus = s * (psi.xi(1) + psi.eta(1));
  p.chi_minus = s * (psi.xi(0) - psi.eta(0));
  p.chi_plus = s * (psi.xi(1) - psi.eta(1));
  return p;
}

Bispinor planar_lift(const PlanarPair& p) {
  const double s = 1.0 / std::sqrt(2.0);
  return Bispinor(s * (p.phi_plus + p.chi_minus), s * (p.phi_minus + p.chi_plus),
                  s * (p.phi_plus - p.chi_minus), s * (p.phi_minus - p.chi_plus));
}

Vec3c dyad_to_isotropic(double rho, const Vec3& f1, const Vec3& f2, double ortho_tol) {
  if (!(rho > 0.0)) throw InputError("rho must be positive");
  double d = 0.0;
  d = std::max(d, std::abs(minkowski3(f1, f1) + 1.0));
  d = std::max(d, std::abs(minkowski3(f2, f2) + 1.0));
  d = std::max(d, std::abs(minkowski3(f1, f2)));
  if (d > ortho_tol) {
    std::ostringstream msg;
    msg << "dyad is not orthonormal: defect " << d << " exceeds " << ortho_tol;
    throw InputError(msg.str());
  }
  return rho * (f1.cast<cd>() + cd(0.0, 1.0) * f2.cast<cd>());
}

}  // namespace curldirac
