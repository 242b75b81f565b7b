#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "curldirac/types.hpp"

// Planar model operator: discretization of the three component equation
// curl_A u = s*m*u on a square Dirichlet box, its reduction to the 2x2
// pencil A u = eps B u for time harmonic states, the pencil symbol, Weyl
// packet probes of the essential spectrum, gap eigenvalues, and the
// squared operator identity curl_A^2 = delta_A d_A.
//
// Conventions. The covariant derivatives are P_k = i*d_k - e*A_k with
// central differences on the grid and zero beyond the boundary, so each
// P_k is hermitian. For time harmonic states P_0 acts as multiplication
// by (eps - e*Phi). Components u^0, u^1, u^2 are stacked contravariant;
// the operator is self-adjoint in the (+,-,-) pairing, which is what the
// hermiticity check below measures.

namespace curldirac {

using SparseC = Eigen::SparseMatrix<cd>;

struct PlanarGrid {
  double half_width = 6.0;  // box is [-L, L]^2
  int n = 17;               // points per side, boundary included

  double h() const { return 2.0 * half_width / (n - 1); }
  double x1(int i) const { return -half_width + i * h(); }
  double x2(int j) const { return -half_width + j * h(); }
  int index(int i, int j) const { return i * n + j; }
  int sites() const { return n * n; }
  void validate() const;  // n >= 8 and positive spacing
};

// real samples of Phi, A1, A2 on the grid sites plus the charge; the
// coupling that enters every operator is the product e*Phi, e*A_k
struct PlanarPotential {
  Eigen::VectorXd phi, a1, a2;
  double e = -1.0;

  Eigen::VectorXd ephi() const { return e * phi; }

  static PlanarPotential zero(const PlanarGrid& g, double e = -1.0);
  // sample analytic fields on the grid
  static PlanarPotential sample(const PlanarGrid& g,
                                const std::function<double(double, double)>& phi,
                                const std::function<double(double, double)>& a1,
                                const std::function<double(double, double)>& a2, double e = -1.0);
  // named wells: "zero", or "gauss" with e*Phi = -alpha^2 exp(-(alpha r)^2)
  static PlanarPotential analytic(const PlanarGrid& g, const std::string& name, double alpha,
                                  double e = -1.0);
};

// first order building blocks shared by the assemblies
struct PlanarOperators {
  SparseC p1, p2;         // hermitian covariant derivatives
  Eigen::VectorXd ephi;   // e*Phi samples
};
PlanarOperators planar_operators(const PlanarGrid& g, const PlanarPotential& pot);

// the three component operator with curl u = mass * u as the model
// equation; sign picks the branch, eps enters through P_0
struct CurlMatrix {
  SparseC op;    // 3n^2 x 3n^2
  double mass;   // sign * m
};
CurlMatrix assemble_curl_A(const PlanarGrid& g, const PlanarPotential& pot, double m, int sign,
                           double eps = 0.0);

// defect of self-adjointness in the (+,-,-) pairing: the matrix itself is
// not hermitian, the metric weighted one is
double curl_hermiticity_defect(const CurlMatrix& c, const PlanarGrid& g);

struct PencilMatrices {
  SparseC a;      // hermitian, 2n^2 x 2n^2
  SparseC b;      // constant off diagonal blocks -+ i m
  double m = 1.0;
  int sign = 1;
};
// throws RestrictionViolated unless sup|e*Phi| < m
PencilMatrices assemble_pencil(const PlanarGrid& g, const PlanarPotential& pot, double m,
                               int sign);

// 2x2 symbol of A - eps*B at frequency xi (continuum symbol; pass the
// discrete frequencies sin(xi_k h)/h for the grid symbol)
Mat2c symbol_matrix(const Eigen::Vector2d& xi, double eps, double m, int sign);
double symbol_det(const Eigen::Vector2d& xi, double eps, double m);

// Gaussian windowed plane wave probing the essential spectrum at |eps|>m.
// The carrier is snapped to the zero circle of the discrete symbol and
// the polarization is the null vector there.
struct WeylPacket {
  Eigen::Vector2d carrier;
  double width = 8.0;           // window std dev in grid units
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  Vec2c polarization;
};
// angle picks the carrier direction; throws InputError if |eps| <= m or
// the circle radius is not representable on the grid
WeylPacket make_weyl_packet(const PlanarGrid& g, double eps, double m, int sign, double width,
                            double angle = 0.0,
                            const Eigen::Vector2d& center = Eigen::Vector2d::Zero());
// sampled 2n^2 packet vector
Eigen::VectorXcd weyl_packet_vector(const WeylPacket& p, const PlanarGrid& g);
// ||(A - eps B) u|| / ||u|| for the sampled packet
double weyl_residual(const WeylPacket& p, const PencilMatrices& pencil, const PlanarGrid& g,
                     double eps);

struct GapPair {
  double eps = 0.0;          // |eps| < m
  Eigen::VectorXcd u;        // pencil vector (u^1, u^2)
  double residual = 0.0;     // ||(A - eps B) u|| / ||u||
  double boundary_mass = 0.0;  // |u|^2 fraction on the outermost ring
};

struct PencilSpectrum {
  std::vector<double> reciprocal;   // all eigenvalues of A^{-1/2} B A^{-1/2}, ascending
  std::vector<GapPair> gap;         // bound states, ground first
  double delta_box = 0.0;           // spill of non gap eigenvalues beyond 1/m
  double max_gap_inside = 0.0;      // largest consecutive gap inside [-1/m, 1/m]
};

// dense solve of the bounded reformulation; eigenvalues with |mu| > 1/m
// split into bound states (interior mass) and box artifacts (boundary
// mass >= boundary_threshold) which only contribute to delta_box
PencilSpectrum pencil_spectrum(const PencilMatrices& pencil, const PlanarGrid& g,
                               double boundary_threshold = 0.05);

// gap eigenvalues on one branch: side +1 selects eps near +m (electron),
// -1 near -m; sorted deepest first, at most count entries
std::vector<GapPair> gap_eigenpairs(const PencilMatrices& pencil, const PlanarGrid& g, int count,
                                    int side);

// time harmonic three component vector built from a pencil eigenpair by
// restoring u^0 = -sign * i * (P2 u^1 - P1 u^2) / m
Eigen::VectorXcd lift_gap_vector(const GapPair& pair, const PlanarGrid& g,
                                 const PlanarPotential& pot, double m, int sign);

// shift and invert iteration for the gap eigenvalue nearest sigma; scales
// to grids the dense route cannot touch (sparse LU of A - sigma B, then
// power iteration on its inverse against B)
GapPair nearest_gap_state(const PencilMatrices& pencil, const PlanarGrid& g, double sigma,
                          int max_iter = 200, double tol = 1e-10);

struct SquaredIdentityReport {
  double residual = 0.0;        // ||(curl^2 - delta_A d_A) u|| / ||u||
  double commutator_gap = 0.0;  // ||(P1 P2 - P2 P1) u|| / ||u||, the magnetic term
};
SquaredIdentityReport squared_identity_residual(const PlanarGrid& g, const PlanarPotential& pot,
                                                double m, int sign, double eps, uint64_t seed);

}  // namespace curldirac
