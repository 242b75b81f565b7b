#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "curldirac/types.hpp"

// Radial bound state solvers. Three second order problems share one
// discretization: the radially separated model equation, the Klein-Gordon
// reference, and the Pauli reference for a radial electric potential.
// Each equation g'' + c1 g' + c0(spectral) g = 0 is brought to symmetric
// tridiagonal form with the integrating factor w (w'/w = c1) and solved as
// a root problem in the spectral parameter: a value is an eigenvalue iff
// the assembled matrix is singular, which bisection locates through the
// LDL^T inertia count.
//
// Boundary behavior at r = 0 follows the Frobenius exponent sigma of the
// regular solution, g ~ r^sigma:
//   model   sigma = |k| - 1 for k != 0   (indicial (sigma+1)^2 = k^2)
//           sigma = 1       for k  = 0   (indicial sigma^2 - 1 = 0)
//   KG      sigma = |n|
//   Pauli   sigma = |l|
// The model exponent is genuinely discontinuous at k = 0: the k -> 0
// limit of the k != 0 formula would give -1, but at k = 0 exactly the
// singular structure of the equation changes. The ghost node at r = 0 is
// eliminated with g(0) = g(h) when sigma = 0 (finite even limit) and
// g(0) = 0 otherwise, keeping the one sided row second order consistent.

namespace curldirac {

enum class RadialEquation { model, kg, pauli };

struct RadialGrid {
  double r_max = 40.0;  // in Compton wavelengths (m = 1 units)
  int n = 400;          // interior nodes r_i = i h, i = 1..n; g(r_max) = 0

  double h() const { return r_max / (n + 1); }
  double r(int i) const { return (i + 1) * h(); }  // i = 0..n-1
  void validate() const;                           // n >= 200, r_max > 0
};

// model channel index plus the branch, with the reference indices paired
// as |n| = |k -+ 1| (electron, eps near +m, takes the upper sign)
struct RadialChannel {
  int k = 1;
  int sign = 1;  // +1 electron branch, -1 positron branch

  int n_kg() const { return k >= sign ? k - sign : sign - k; }
  int l_pauli() const { return k - sign; }
  void validate() const;
};

// external field samples e*Phi(r) = alpha^2 Psi(alpha r), Psi Schwartz
struct ScaledPotential {
  double alpha = 0.1;
  std::function<double(double)> profile;   // Psi(s)
  std::function<double(double)> dprofile;  // Psi'(s)
  double sup_profile = 1.0;                // sup_s |Psi(s)|

  double ephi(double r) const { return alpha * alpha * profile(alpha * r); }
  double dephi(double r) const { return alpha * alpha * alpha * dprofile(alpha * r); }
  double sup_abs() const { return alpha * alpha * sup_profile; }
  void validate(double m) const;  // alpha in (0,1), sup_abs < m

  // the default attractive profile Psi(s) = -exp(-s^2)
  static ScaledPotential gaussian(double alpha);
  // e*Phi(r) = -depth * exp(-(radius r)^2) expressed in scaled form
  static ScaledPotential gaussian_well(double depth, double radius);
  static ScaledPotential zero();
};

// coefficient functions of g'' + c1 g' + c0 g = 0; closures throw
// InputError when sampled at r <= 0
struct RadialCoefficients {
  std::function<double(double)> c1, c0;
};

RadialCoefficients radial4_coefficients(int k, double m, double eps,
                                        const std::function<double(double)>& phi,
                                        const std::function<double(double)>& dphi, int sign);
RadialCoefficients kg_coefficients(int n, double m, double eps,
                                   const std::function<double(double)>& phi);
// -(1/2m)(g'' + g'/r - l^2 g/r^2) + e Phi g = E g in standard form
RadialCoefficients pauli_coefficients(int l, double m, double E,
                                      const std::function<double(double)>& phi);

int frobenius_exponent(RadialEquation eq, const RadialChannel& ch);

// symmetric tridiagonal form of the chosen equation at a fixed spectral
// value (eps for model/kg, E for pauli); singular exactly at eigenvalues.
// On the positron branch the pauli reference is routed through the mirror
// (electron in the flipped potential), the only completion consistent
// with the branch symmetry of the model equation.
struct Tridiagonal {
  Eigen::VectorXd diag;  // n entries
  Eigen::VectorXd off;   // n-1 entries
};
Tridiagonal assemble_radial_matrix(RadialEquation eq, const RadialChannel& ch,
                                   const ScaledPotential& pot, const RadialGrid& grid,
                                   double spectral, double m = 1.0);

// eigenvalues below zero via the LDL^T inertia of the tridiagonal matrix
int negative_count(const Tridiagonal& t);

struct BoundState {
  double eps = 0.0;     // model/kg eigenvalue; for pauli this is m + E
  double energy = 0.0;  // eps - m
  Eigen::VectorXd g;    // interior node values, peak normalized
  Eigen::VectorXd f;    // model only: the partner function; empty otherwise
  int nodes = 0;
  double richardson = 0.0;  // |eps(h) - eps(2h)| / 3
  double tail = 0.0;        // |g at the last interior node| / max |g|
};

// locate up to count bound states between the branch edge and the edge
// pulled in by the potential depth, ground state first; candidates that
// fail the decay check are dropped with a note in diagnostics
std::vector<BoundState> solve_bound_states(RadialEquation eq, const RadialChannel& ch,
                                           const ScaledPotential& pot, const RadialGrid& grid,
                                           int count, double m = 1.0,
                                           std::vector<std::string>* diagnostics = nullptr);

// centered first derivative on the grid, one sided at the two ends
Eigen::VectorXd radial_derivative(const Eigen::VectorXd& g, const RadialGrid& grid);

// the partner radial function of the model equation,
// f = ((k/r) g' + (k/r^2) g + sign m (eps - e Phi) g) / (k^2/r^2 + m^2)
Eigen::VectorXd reconstruct_f(const Eigen::VectorXd& g, const Eigen::VectorXd& dg, int k,
                              double m, double eps, const std::function<double(double)>& phi,
                              int sign, const RadialGrid& grid);

// max interior residual of the first order system's second row,
// g'' + g'/r - g/r^2 - (k/r) f' + (k/r^2) f - m^2 g + sign m (eps - e Phi) f,
// measured relative to the local row scale 1 + 1/r^2 (the coefficients
// blow up toward the origin, the relative defect is O(h^2) throughout)
double radial3_residual(const Eigen::VectorXd& g, const Eigen::VectorXd& f, int k, double m,
                        double eps, const ScaledPotential& pot, int sign,
                        const RadialGrid& grid);

struct SweepRow {
  double alpha = 0.0;
  double eps_model = 0.0;
  double eps_kg = 0.0;
  double eps_pauli_plus_m = 0.0;
  double delta = 0.0;           // |eps_model - eps_kg|
  double richardson_err = 0.0;  // max of the model/kg estimates
  bool usable = false;
  std::string warning;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double exponent = 0.0;  // least squares slope of log delta vs log alpha
  double exponent_stderr = 0.0;
  int usable_alphas = 0;
  bool reliable = false;  // richardson estimate < 0.1 * delta at the smallest usable alpha
  bool exact_coincidence = false;  // all deltas at the rounding floor
  double e_ratio_spread = 0.0;     // relative spread of E/alpha^2 across usable rows
  double pauli_exponent = 0.0;     // slope of log|E_model - E_pauli| vs log alpha
};

// ground state comparison across alphas on a per-alpha grid with
// r_max = 12/alpha; fewer than 3 usable alphas is an error
SweepResult scaling_sweep(const RadialChannel& ch, const ScaledPotential& shape,
                          const std::vector<double>& alphas, double m);

}  // namespace curldirac
