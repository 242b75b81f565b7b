#pragma once

#include <array>
#include <functional>
#include <utility>
#include <vector>

#include "curldirac/frame.hpp"
#include "curldirac/sampling.hpp"

namespace curldirac {

// Pointwise check of the Lagrangian density identity: the Dirac form
// Re(psi* gamma^0 (gamma^kappa (i nabla - tau e A)_kappa - m) psi) equals the
// frame form -[1/2 <f3, div R* + grad theta> + e <f0, A> + m cos theta] rho
// on smooth nondegenerate fields.  All derivatives are order-2 central
// differences; the tensor side differentiates the frame field itself (which
// is single valued), never a reconstructed bispinor.

using BispinorField = std::function<Bispinor(const Vec4&)>;
using PotentialField = std::function<Vec4(const Vec4&)>;  // contravariant A

struct EMPotential {
  PotentialField A;  // null means A = 0
  double e = -1.0;
  bool time_independent = false;

  Vec4 eA(const Vec4& x) const { return A ? Vec4(e * A(x)) : Vec4(Vec4::Zero()); }
  static EMPotential zero() { return EMPotential{}; }
};

// Uniform n^4 grid over [origin, origin + extent]^4.
struct SpacetimeBox {
  Vec4 origin = Vec4::Zero();
  double extent = 1.0;
  int n = 9;

  double h() const { return extent / (n - 1); }
  Vec4 point(int i0, int i1, int i2, int i3) const {
    const double s = h();
    return origin + Vec4(i0 * s, i1 * s, i2 * s, i3 * s);
  }
};

using Frame4 = std::array<Vec4, 4>;          // legs f0..f3, contravariant
using Frame4Deriv = std::array<Frame4, 4>;   // [nu][leg]

// Dirac-side density; dpsi are the four partials of psi, eA holds covariant
// pairing through its contravariant components (lowered internally), tau the
// time-orientation sign of the field.
double dirac_density(const Bispinor& psi, const std::array<Bispinor, 4>& dpsi, const Vec4& eA,
                     int tau, double m);

// R_{mu lambda} = sum_{j,l} g_jl (d_nu f^j_mu) f^l_lambda for one direction
// nu (covariant indices, antisymmetric for orthonormal frames).
Mat4 rotation_tensor(const Frame4& f, const Frame4& df_nu, double ortho_tol = 1e-6);

// Hodge dual of an antisymmetric covariant 2-tensor:
// (R*)^{alpha beta} = 1/2 e^{alpha beta mu lambda} R_{mu lambda}.
Mat4 star_dual(const Mat4& R);

// (div R*)^kappa = 1/2 sum_{j,l} g_jl e^{eps kappa mu lambda}
//                  (d_eps f^j_mu) f^l_lambda.
Vec4 div_R_star(const Frame4& f, const Frame4Deriv& df);

// Frame-side density; grad_theta holds covariant components d_mu theta.
double tensor_density(double rho, double theta, const Frame4& f, const Vec4& div_Rstar,
                      const Vec4& grad_theta, const Vec4& eA, double m);

// Both sides at one point, with step h central differences.  Throws
// DegenerateBispinor if the frame map degenerates on the stencil.
std::pair<double, double> identity_point(const BispinorField& psi, const EMPotential& pot,
                                         double m, int tau, const Vec4& x, double h);

struct IdentityRow {
  Vec4 x;
  double lhs = 0.0, rhs = 0.0;
};

struct ResidualStats {
  double max_residual = 0.0;
  double mean_residual = 0.0;
  long points = 0;    // interior points evaluated
  long skipped = 0;   // stencils touching a degenerate sample, reported not fatal
};

// Residual sweep over the interior of the box.  Pointwise evaluations are
// independent (safe to parallelize over points); the stats fold is the only
// aggregation.  When rows is non-null one row per evaluated point is pushed
// in lexicographic grid order.
ResidualStats identity_residual(const BispinorField& psi, const EMPotential& pot, double m,
                                int tau, const SpacetimeBox& box,
                                std::vector<IdentityRow>* rows = nullptr);

// ---- (+1,-1,-1) reduction ----------------------------------------------

using Dyad3 = std::array<Vec3, 3>;           // f0, f1, f2 with f0 = [f1, f2]
using Dyad3Deriv = std::array<Dyad3, 3>;     // [nu][leg]

// (curl f)^lambda = e^{lambda mu nu} d_mu f_nu; df holds the partials of a
// single contravariant leg f.
Vec3 curl3(const std::array<Vec3, 3>& df);

// div r = -1/2 sum_{j,l} g_jl <f^j, curl f^l>.
double m3_div_r(const Dyad3& f, const Dyad3Deriv& df);

// One direction's rotation tensor and its axial dual R*_lambda =
// 1/2 e_{lambda mu nu} R^{mu nu} (returned contravariant), plus the least
// squares r solving d f^k = [r, f^k]; the reduction satisfies r = -R*.
Mat3 rotation_tensor_m3(const Dyad3& f, const Dyad3& df_nu);
Vec3 axial_dual_m3(const Mat3& R);
Vec3 r_from_deltas_m3(const Dyad3& f, const Dyad3& df_nu);

// [1/2 div r + e <f0, A> + sign m] rho from the dyad (f0 and its partials
// derived from f1, f2).  eA3 is contravariant.
double m3_density(double rho, const Vec3& f1, const Vec3& f2, const std::array<Vec3, 3>& df1,
                  const std::array<Vec3, 3>& df2, const Vec3& eA3, double m, int sign,
                  double ortho_tol = 1e-6);

// ---- reproducible smooth test fields ------------------------------------

// Trigonometric polynomial bispinor field: a fixed nondegenerate base plus
// `waves` cosine modes per component with integer frequencies in [-2,2]^4
// and total relative amplitude `amplitude` (small enough to keep |eta* xi|
// bounded below on the box).
BispinorField random_trig_field(Rng& rng, int waves = 3, double amplitude = 0.25);

// Smooth trigonometric potential with the same frequency family.
PotentialField random_trig_potential(Rng& rng, int waves = 2, double amplitude = 0.5);

// Free solution e^{-i m x0} (1, 0, 1, 0); both density sides vanish on it.
BispinorField plane_wave_field(double m);

}  // namespace curldirac
