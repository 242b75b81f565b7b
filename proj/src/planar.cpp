#include "curldirac/planar.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "curldirac/dense.hpp"

namespace curldirac {

namespace {

using Trip = Eigen::Triplet<cd>;

void add_block(std::vector<Trip>& out, const SparseC& blk, int roff, int coff, cd scale = cd(1, 0)) {
  for (int k = 0; k < blk.outerSize(); ++k)
    for (SparseC::InnerIterator it(blk, k); it; ++it)
      out.emplace_back(roff + static_cast<int>(it.row()), coff + static_cast<int>(it.col()),
                       scale * it.value());
}

void add_diag(std::vector<Trip>& out, const Eigen::VectorXd& d, int roff, int coff, cd scale) {
  for (int i = 0; i < d.size(); ++i) out.emplace_back(roff + i, coff + i, scale * d(i));
}

void add_identity(std::vector<Trip>& out, int n, int roff, int coff, cd scale) {
  for (int i = 0; i < n; ++i) out.emplace_back(roff + i, coff + i, scale);
}

SparseC from_triplets(int rows, int cols, std::vector<Trip>& t) {
  SparseC m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

// antisymmetric central difference along axis (0 -> x1, 1 -> x2) with
// zero beyond the boundary
SparseC central_difference(const PlanarGrid& g, int axis) {
  const int n = g.n;
  const cd c(1.0 / (2.0 * g.h()), 0.0);
  std::vector<Trip> t;
  t.reserve(2 * g.sites());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int row = g.index(i, j);
      if (axis == 0) {
        if (i + 1 < n) t.emplace_back(row, g.index(i + 1, j), c);
        if (i - 1 >= 0) t.emplace_back(row, g.index(i - 1, j), -c);
      } else {
        if (j + 1 < n) t.emplace_back(row, g.index(i, j + 1), c);
        if (j - 1 >= 0) t.emplace_back(row, g.index(i, j - 1), -c);
      }
    }
  }
  return from_triplets(g.sites(), g.sites(), t);
}

SparseC diag_matrix(const Eigen::VectorXd& d, cd scale = cd(1, 0)) {
  std::vector<Trip> t;
  t.reserve(d.size());
  for (int i = 0; i < d.size(); ++i) t.emplace_back(i, i, scale * d(i));
  SparseC m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

double boundary_fraction(const Eigen::VectorXcd& u, const PlanarGrid& g) {
  const int ns = g.sites();
  double edge = 0.0, total = 0.0;
  for (int b = 0; b * ns < u.size(); ++b) {
    for (int i = 0; i < g.n; ++i) {
      for (int j = 0; j < g.n; ++j) {
        const double w = std::norm(u(b * ns + g.index(i, j)));
        total += w;
        if (i == 0 || j == 0 || i == g.n - 1 || j == g.n - 1) edge += w;
      }
    }
  }
  return total > 0 ? edge / total : 0.0;
}

void check_sign(int sign) {
  if (sign != 1 && sign != -1) throw InputError("branch sign must be +1 or -1");
}

}  // namespace

void PlanarGrid::validate() const {
  if (n < 8) throw InputError("planar grid needs at least 8 points per side");
  if (!(half_width > 0.0)) throw InputError("planar grid half width must be positive");
}

PlanarPotential PlanarPotential::zero(const PlanarGrid& g, double e) {
  PlanarPotential p;
  p.phi = Eigen::VectorXd::Zero(g.sites());
  p.a1 = Eigen::VectorXd::Zero(g.sites());
  p.a2 = Eigen::VectorXd::Zero(g.sites());
  p.e = e;
  return p;
}

PlanarPotential PlanarPotential::sample(const PlanarGrid& g,
                                        const std::function<double(double, double)>& phi,
                                        const std::function<double(double, double)>& a1,
                                        const std::function<double(double, double)>& a2,
                                        double e) {
  PlanarPotential p = zero(g, e);
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      const double x = g.x1(i), y = g.x2(j);
      const int s = g.index(i, j);
      p.phi(s) = phi(x, y);
      p.a1(s) = a1(x, y);
      p.a2(s) = a2(x, y);
    }
  }
  return p;
}

PlanarPotential PlanarPotential::analytic(const PlanarGrid& g, const std::string& name,
                                          double alpha, double e) {
  if (e == 0.0) throw InputError("charge e must be nonzero");
  if (name == "zero") return zero(g, e);
  if (name == "gauss") {
    // the attractive scaled well e*Phi = -alpha^2 exp(-(alpha r)^2)
    return sample(
        g,
        [alpha, e](double x, double y) {
          return -alpha * alpha * std::exp(-alpha * alpha * (x * x + y * y)) / e;
        },
        [](double, double) { return 0.0; }, [](double, double) { return 0.0; }, e);
  }
  throw InputError("unknown analytic potential '" + name + "' (use zero or gauss)");
}

PlanarOperators planar_operators(const PlanarGrid& g, const PlanarPotential& pot) {
  g.validate();
  if (pot.phi.size() != g.sites() || pot.a1.size() != g.sites() || pot.a2.size() != g.sites())
    throw InputError("potential samples do not match the grid");
  PlanarOperators ops;
  const cd i1(0, 1);
  ops.p1 = (i1 * central_difference(g, 0) - diag_matrix(pot.e * pot.a1)).pruned();
  ops.p2 = (i1 * central_difference(g, 1) - diag_matrix(pot.e * pot.a2)).pruned();
  ops.ephi = pot.ephi();
  return ops;
}

CurlMatrix assemble_curl_A(const PlanarGrid& g, const PlanarPotential& pot, double m, int sign,
                           double eps) {
  check_sign(sign);
  if (!(m > 0)) throw InputError("mass must be positive");
  const PlanarOperators ops = planar_operators(g, pot);
  const int ns = g.sites();
  const Eigen::VectorXd p0 = Eigen::VectorXd::Constant(ns, eps) - ops.ephi;
  const cd mi(0, -1);  // the model display carries an overall factor i
  std::vector<Trip> t;
  add_block(t, ops.p2, 0, ns, mi);
  add_block(t, ops.p1, 0, 2 * ns, -mi);
  add_block(t, ops.p2, ns, 0, mi);
  add_diag(t, p0, ns, 2 * ns, mi);
  add_block(t, ops.p1, 2 * ns, 0, -mi);
  add_diag(t, p0, 2 * ns, ns, -mi);
  CurlMatrix c;
  c.op = from_triplets(3 * ns, 3 * ns, t);
  c.mass = sign * m;
  return c;
}

double curl_hermiticity_defect(const CurlMatrix& c, const PlanarGrid& g) {
  const int ns = g.sites();
  if (c.op.rows() != 3 * ns) throw InputError("curl matrix does not match the grid");
  // weight rows by the (+,-,-) metric, then measure hermiticity
  std::vector<Trip> t;
  for (int k = 0; k < c.op.outerSize(); ++k) {
    for (SparseC::InnerIterator it(c.op, k); it; ++it) {
      const double w = it.row() < ns ? 1.0 : -1.0;
      t.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), w * it.value());
    }
  }
  SparseC weighted = from_triplets(3 * ns, 3 * ns, t);
  SparseC adj = weighted.adjoint();
  SparseC diff = weighted - adj;
  double defect = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SparseC::InnerIterator it(diff, k); it; ++it)
      defect = std::max(defect, std::abs(it.value()));
  return defect;
}

PencilMatrices assemble_pencil(const PlanarGrid& g, const PlanarPotential& pot, double m,
                               int sign) {
  check_sign(sign);
  if (!(m > 0)) throw InputError("mass must be positive");
  const PlanarOperators ops = planar_operators(g, pot);
  const double sup = ops.ephi.cwiseAbs().maxCoeff();
  if (!(sup < m)) {
    std::ostringstream msg;
    msg << "restriction sup|e*Phi| < m violated: sup|e*Phi| = " << sup << ", m = " << m;
    throw RestrictionViolated(msg.str());
  }
  const int ns = g.sites();
  const SparseC p11 = (ops.p1 * ops.p1).pruned();
  const SparseC p22 = (ops.p2 * ops.p2).pruned();
  const SparseC p21 = (ops.p2 * ops.p1).pruned();
  const SparseC p12 = (ops.p1 * ops.p2).pruned();
  const cd bm(0, -sign * m);  // upper right block of B is -+ i m

  PencilMatrices out;
  out.m = m;
  out.sign = sign;
  {
    std::vector<Trip> t;
    add_block(t, p22, 0, 0);
    add_identity(t, ns, 0, 0, m * m);
    add_block(t, p21, 0, ns, cd(-1, 0));
    add_diag(t, ops.ephi, 0, ns, bm);
    add_block(t, p12, ns, 0, cd(-1, 0));
    add_diag(t, ops.ephi, ns, 0, -bm);
    add_block(t, p11, ns, ns);
    add_identity(t, ns, ns, ns, m * m);
    out.a = from_triplets(2 * ns, 2 * ns, t);
  }
  {
    std::vector<Trip> t;
    add_identity(t, ns, 0, ns, bm);
    add_identity(t, ns, ns, 0, -bm);
    out.b = from_triplets(2 * ns, 2 * ns, t);
  }
  return out;
}

Mat2c symbol_matrix(const Eigen::Vector2d& xi, double eps, double m, int sign) {
  check_sign(sign);
  Mat2c s;
  const cd em(0, sign * eps * m);
  s(0, 0) = xi(1) * xi(1) + m * m;
  s(0, 1) = -xi(0) * xi(1) + em;
  s(1, 0) = -xi(0) * xi(1) - em;
  s(1, 1) = xi(0) * xi(0) + m * m;
  return s;
}

double symbol_det(const Eigen::Vector2d& xi, double eps, double m) {
  return (symbol_matrix(xi, eps, m, 1).determinant()).real();
}

WeylPacket make_weyl_packet(const PlanarGrid& g, double eps, double m, int sign, double width,
                            double angle, const Eigen::Vector2d& center) {
  g.validate();
  check_sign(sign);
  if (!(std::abs(eps) > m))
    throw InputError("Weyl packet needs |eps| > m: the zero circle is empty otherwise");
  if (!(width > 0)) throw InputError("packet width must be positive");
  const double k = std::sqrt(eps * eps - m * m);
  const double h = g.h();
  const Eigen::Vector2d dir(std::cos(angle), std::sin(angle));
  WeylPacket p;
  p.width = width;
  p.center = center;
  Eigen::Vector2d s;  // discrete frequencies on the symbol's zero circle
  for (int c = 0; c < 2; ++c) {
    const double target = k * dir(c) * h;
    if (std::abs(target) > 1.0)
      throw InputError("carrier frequency not representable at this grid spacing");
    p.carrier(c) = std::asin(target) / h;
    s(c) = std::sin(p.carrier(c) * h) / h;
  }
  const Mat2c sym = symbol_matrix(s, eps, m, sign);
  // null vector of the singular 2x2 symbol from its larger row
  Vec2c null_vec;
  if (std::max(std::abs(sym(0, 0)), std::abs(sym(0, 1))) >=
      std::max(std::abs(sym(1, 0)), std::abs(sym(1, 1))))
    null_vec << sym(0, 1), -sym(0, 0);
  else
    null_vec << sym(1, 1), -sym(1, 0);
  const double nn = null_vec.norm();
  if (!(nn > 0)) throw InputError("degenerate symbol: cannot build a polarization");
  p.polarization = null_vec / nn;
  return p;
}

Eigen::VectorXcd weyl_packet_vector(const WeylPacket& p, const PlanarGrid& g) {
  g.validate();
  const int ns = g.sites();
  const double sigma = p.width * g.h();
  Eigen::VectorXcd u(2 * ns);
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      const double dx = g.x1(i) - p.center(0), dy = g.x2(j) - p.center(1);
      const double window = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
      const cd wave = std::polar(window, -(p.carrier(0) * dx + p.carrier(1) * dy));
      const int s = g.index(i, j);
      u(s) = p.polarization(0) * wave;
      u(ns + s) = p.polarization(1) * wave;
    }
  }
  return u;
}

double weyl_residual(const WeylPacket& p, const PencilMatrices& pencil, const PlanarGrid& g,
                     double eps) {
  const Eigen::VectorXcd u = weyl_packet_vector(p, g);
  const double nu = u.norm();
  if (!(nu > 0)) throw InputError("packet vanishes on the grid");
  return (pencil.a * u - eps * (pencil.b * u)).norm() / nu;
}

PencilSpectrum pencil_spectrum(const PencilMatrices& pencil, const PlanarGrid& g,
                               double boundary_threshold) {
  const int dim = static_cast<int>(pencil.a.rows());
  if (dim != 2 * g.sites()) throw InputError("pencil does not match the grid");
  const double m = pencil.m;

  Eigen::MatrixXcd z = Eigen::MatrixXcd(pencil.a);
  Eigen::VectorXd lam;
  hermitian_eigen(z, lam);
  if (!(lam(0) > 0))
    throw NumericalError("pencil matrix lost positive definiteness; restriction too tight");

  // bounded reformulation: eigenvalues mu of A^{-1/2} B A^{-1/2}; bound
  // states appear as |mu| > 1/m with eps = 1/mu
  Eigen::MatrixXcd y = z;
  for (int c = 0; c < dim; ++c) y.col(c) /= std::sqrt(lam(c));
  Eigen::MatrixXcd by = pencil.b * y;
  Eigen::MatrixXcd k = y.adjoint() * by;
  k = cd(0.5, 0) * (k + k.adjoint()).eval();
  Eigen::VectorXd mu;
  hermitian_eigen(k, mu);

  PencilSpectrum out;
  out.reciprocal.assign(mu.data(), mu.data() + dim);

  const double edge = 1.0 / m;
  std::vector<double> inside;
  for (int j = 0; j < dim; ++j) {
    if (std::abs(mu(j)) <= edge * (1.0 + 1e-12)) {
      inside.push_back(mu(j));
      continue;
    }
    GapPair pair;
    pair.eps = 1.0 / mu(j);
    pair.u = y * k.col(j);
    pair.boundary_mass = boundary_fraction(pair.u, g);
    pair.residual =
        (pencil.a * pair.u - pair.eps * (pencil.b * pair.u)).norm() / pair.u.norm();
    if (pair.boundary_mass < boundary_threshold)
      out.gap.push_back(std::move(pair));
    else
      out.delta_box = std::max(out.delta_box, std::abs(mu(j)) - edge);
  }
  std::sort(out.gap.begin(), out.gap.end(), [m](const GapPair& a, const GapPair& b) {
    // deepest first: largest distance from the nearer band edge
    const double da = m - std::abs(a.eps), db = m - std::abs(b.eps);
    return da > db;
  });

  std::sort(inside.begin(), inside.end());
  double prev = -edge, widest = 0.0;
  for (const double v : inside) {
    widest = std::max(widest, v - prev);
    prev = v;
  }
  widest = std::max(widest, edge - prev);
  out.max_gap_inside = widest;
  return out;
}

std::vector<GapPair> gap_eigenpairs(const PencilMatrices& pencil, const PlanarGrid& g, int count,
                                    int side) {
  check_sign(side);
  if (count < 0) throw InputError("count must be nonnegative");
  PencilSpectrum spec = pencil_spectrum(pencil, g);
  std::vector<GapPair> out;
  for (auto& p : spec.gap) {
    if (side > 0 ? p.eps > 0 : p.eps < 0) out.push_back(std::move(p));
  }
  if (out.size() > static_cast<size_t>(count)) out.resize(count);
  return out;
}

GapPair nearest_gap_state(const PencilMatrices& pencil, const PlanarGrid& g, double sigma,
                          int max_iter, double tol) {
  if (std::abs(sigma) >= pencil.m) throw InputError("shift must lie inside the gap");
  const int dim = static_cast<int>(pencil.a.rows());
  Eigen::SparseMatrix<cd> shifted = pencil.a - cd(sigma, 0) * pencil.b;
  shifted.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<cd>> lu;
  lu.compute(shifted);
  if (lu.info() != Eigen::Success)
    throw NumericalError("sparse factorization of the shifted pencil failed");

  // block iteration: a single vector stalls on near degenerate pairs, so
  // keep a small subspace and extract the target from the projected pencil
  const int p = std::min(8, dim);
  std::mt19937_64 rng(0x71c3d5u);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd block(dim, p);
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < dim; ++i) block(i, j) = cd(gauss(rng), gauss(rng));

  GapPair out;
  out.residual = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < max_iter; ++iter) {
    Eigen::MatrixXcd w = lu.solve(pencil.b * block);
    if (lu.info() != Eigen::Success) throw NumericalError("sparse solve failed");
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(w);
    block = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, p);

    Eigen::MatrixXcd ap = block.adjoint() * (pencil.a * block);
    Eigen::MatrixXcd bp = block.adjoint() * (pencil.b * block);
    ap = 0.5 * (ap + ap.adjoint()).eval();
    bp = 0.5 * (bp + bp.adjoint()).eval();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> small(bp.partialPivLu().solve(ap));
    if (small.info() != Eigen::Success) throw NumericalError("projected pencil solve failed");

    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int j = 0; j < p; ++j) {
      const cd lam = small.eigenvalues()(j);
      if (std::abs(lam.imag()) > 1e-6 * (1.0 + std::abs(lam.real()))) continue;
      const double dist = std::abs(lam.real() - sigma);
      if (dist < best_dist) {
        best_dist = dist;
        best = j;
      }
    }
    if (best < 0) continue;
    Eigen::VectorXcd u = block * small.eigenvectors().col(best);
    u /= u.norm();
    const Eigen::VectorXcd au = pencil.a * u, bu = pencil.b * u;
    const double den = u.dot(bu).real();
    if (den == 0.0) continue;
    out.eps = u.dot(au).real() / den;
    out.u = u;
    out.residual = (au - out.eps * bu).norm();
    if (out.residual < tol) break;
  }
  if (!(out.residual < tol))
    throw NumericalError("shift and invert iteration did not converge");
  out.boundary_mass = boundary_fraction(out.u, g);
  return out;
}

Eigen::VectorXcd lift_gap_vector(const GapPair& pair, const PlanarGrid& g,
                                 const PlanarPotential& pot, double m, int sign) {
  check_sign(sign);
  const PlanarOperators ops = planar_operators(g, pot);
  const int ns = g.sites();
  if (pair.u.size() != 2 * ns) throw InputError("gap vector does not match the grid");
  const Eigen::VectorXcd u1 = pair.u.head(ns), u2 = pair.u.tail(ns);
  Eigen::VectorXcd out(3 * ns);
  out.segment(0, ns) = cd(0, -sign) / m * (ops.p2 * u1 - ops.p1 * u2);
  out.segment(ns, ns) = u1;
  out.segment(2 * ns, ns) = u2;
  return out;
}

SquaredIdentityReport squared_identity_residual(const PlanarGrid& g, const PlanarPotential& pot,
                                                double m, int sign, double eps, uint64_t seed) {
  const CurlMatrix c = assemble_curl_A(g, pot, m, sign, eps);
  const PlanarOperators ops = planar_operators(g, pot);
  const int ns = g.sites();
  const Eigen::VectorXd p0d = Eigen::VectorXd::Constant(ns, eps) - ops.ephi;

  // exterior derivative (rows T_01, T_02, T_12) and its divergence dual,
  // both assembled from the identical first order matrices
  std::vector<Trip> td;
  add_block(td, ops.p1, 0, 0, cd(-1, 0));
  add_diag(td, p0d, 0, ns, cd(-1, 0));
  add_block(td, ops.p2, ns, 0, cd(-1, 0));
  add_diag(td, p0d, ns, 2 * ns, cd(-1, 0));
  add_block(td, ops.p2, 2 * ns, ns);
  add_block(td, ops.p1, 2 * ns, 2 * ns, cd(-1, 0));
  SparseC ext = from_triplets(3 * ns, 3 * ns, td);

  std::vector<Trip> tv;
  add_block(tv, ops.p1, 0, 0);
  add_block(tv, ops.p2, 0, ns);
  add_diag(tv, p0d, ns, 0, cd(-1, 0));
  add_block(tv, ops.p2, ns, 2 * ns, cd(-1, 0));
  add_diag(tv, p0d, 2 * ns, ns, cd(-1, 0));
  add_block(tv, ops.p1, 2 * ns, 2 * ns);
  SparseC div = from_triplets(3 * ns, 3 * ns, tv);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::VectorXcd u(3 * ns);
  for (int i = 0; i < 3 * ns; ++i) u(i) = cd(nd(rng), nd(rng));

  SquaredIdentityReport rep;
  const Eigen::VectorXcd squared = c.op * (c.op * u).eval();
  const Eigen::VectorXcd viadiv = div * (ext * u).eval();
  rep.residual = (squared - viadiv).norm() / u.norm();
  const Eigen::VectorXcd w = u.head(ns);
  rep.commutator_gap = (ops.p1 * (ops.p2 * w).eval() - ops.p2 * (ops.p1 * w).eval()).norm() / w.norm();
  return rep;
}

}  // namespace curldirac
