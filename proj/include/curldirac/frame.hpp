#pragma once

#include "curldirac/algebra.hpp"
#include "curldirac/lorentz.hpp"

namespace curldirac {

// Tensor data equivalent to a nondegenerate bispinor modulo overall sign:
// density rho > 0, phase theta in (-pi, pi], time orientation tau = +-1 and
// the orthonormal triple f0 (unit timelike, future for tau), f1, f2 (unit
// spacelike).  f3 completes the tetrad, f3^nu = e^{kappa lambda mu nu}
// f0_kappa f1_lambda f2_mu.  All vectors are stored contravariant.
struct FrameTensors {
  double rho = 0.0;
  double theta = 0.0;
  int tau = 1;
  Vec4 f0, f1, f2, f3;
};

// j^mu = psi* gamma^0 gamma^mu psi (real, timelike, j^0 > 0 off degeneracy).
Vec4 dirac_current(const Bispinor& psi);

// u^mu = -i psi^T gamma^0 gamma^2 gamma^mu psi; Re u and Im u carry the two
// transverse frame legs.
Vec4c transverse_current(const Bispinor& psi);

// Forward map.  Throws DegenerateBispinor when |eta* xi| falls under the
// relative gate kDegenerateGate.
//   rho e^{i theta} = 2 eta* xi
//   f0 = tau j / rho,  f1 = Re u / rho,  f2 = tau Im u / rho,
//   f3 = epsilon_contract(f0, f1, f2).
FrameTensors bispinor_to_tensors(const Bispinor& psi, int tau);

// Completes an orthonormal (f0, f1, f2) to the tetrad.  Inputs are validated
// against <f_j, f_l> = g_jl within ortho_tol.
Vec4 spin_vector(const Vec4& f0, const Vec4& f1, const Vec4& f2, double ortho_tol = 1e-8);

// Inverse map, unique modulo overall sign (callers compare up to sign).
// Validates orthonormality, rho > 0, and that tau * f0 points to the future
// (tau * f0^0 >= 1).
Bispinor tensors_to_bispinor(double rho, double theta, int tau, const Vec4& f0, const Vec4& f1,
                             const Vec4& f2, double ortho_tol = 1e-8);
Bispinor tensors_to_bispinor(const FrameTensors& T, double ortho_tol = 1e-8);

// Frame data transported by a coordinate change: rho invariant, theta and tau
// flip with orientation / time orientation, f0..f2 transform as vectors and
// f3 is recompleted.
FrameTensors transform(const LorentzTransform& L, const FrameTensors& T);

// Pairwise frame inner products against the expected g_jl; returns the
// largest absolute deviation.
double orthonormality_defect(const Vec4& f0, const Vec4& f1, const Vec4& f2, const Vec4& f3);

// x^3-independent reduction: phi carries (xi + eta)/sqrt(2), chi carries
// (xi - eta)/sqrt(2), grouped into the two planar systems (phi+, chi+) and
// (phi-, chi-).
struct PlanarPair {
  cd phi_plus, phi_minus;
  cd chi_minus, chi_plus;
};

PlanarPair planar_reduce(const Bispinor& psi);
Bispinor planar_lift(const PlanarPair& p);

// u = rho (f1 + i f2) for an orthonormal spacelike dyad in (+1,-1,-1);
// isotropic: <u, u> = 0, <conj u, u> = -2 rho^2.
Vec3c dyad_to_isotropic(double rho, const Vec3& f1, const Vec3& f2, double ortho_tol = 1e-8);

}  // namespace curldirac
