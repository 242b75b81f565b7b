#include "curldirac/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

namespace curldirac {

namespace {

constexpr double kBisectTol = 1e-13;
constexpr double kDecayThreshold = 0.05;
constexpr int kScanSteps = 400;

void check_r(double r) {
  if (!(r > 0)) throw InputError("radial coefficient sampled at r <= 0");
}

// deterministic start vector for the inverse iteration
Eigen::VectorXd seeded_vector(int n) {
  Eigen::VectorXd v(n);
  uint64_t state = 0x9e3779b97f4a7c15ull;
  for (int i = 0; i < n; ++i) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    v(i) = static_cast<double>(state >> 11) * 0x1p-53 - 0.5;
  }
  return v;
}

}  // namespace

void RadialGrid::validate() const {
  if (n < 200) throw InputError("radial grid needs at least 200 interior nodes");
  if (!(r_max > 0)) throw InputError("radial grid extent must be positive");
}

void RadialChannel::validate() const {
  if (sign != 1 && sign != -1) throw InputError("branch sign must be +1 or -1");
}

void ScaledPotential::validate(double m) const {
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw InputError("alpha must lie in (0,1)");
  if (!(sup_abs() < m)) {
    std::ostringstream msg;
    msg << "restriction alpha^2 sup|Psi| < m violated: alpha^2 sup|Psi| = " << sup_abs()
        << ", m = " << m;
    throw RestrictionViolated(msg.str());
  }
}

ScaledPotential ScaledPotential::gaussian(double alpha) {
  ScaledPotential p;
  p.alpha = alpha;
  p.profile = [](double s) { return -std::exp(-s * s); };
  p.dprofile = [](double s) { return 2.0 * s * std::exp(-s * s); };
  p.sup_profile = 1.0;
  return p;
}

ScaledPotential ScaledPotential::gaussian_well(double depth, double radius) {
  if (!(depth > 0) || !(radius > 0)) throw InputError("well depth and radius must be positive");
  ScaledPotential p;
  p.alpha = std::sqrt(depth);
  const double c = radius / p.alpha;
  p.profile = [c](double s) { return -std::exp(-c * c * s * s); };
  p.dprofile = [c](double s) { return 2.0 * c * c * s * std::exp(-c * c * s * s); };
  p.sup_profile = 1.0;
  return p;
}

ScaledPotential ScaledPotential::zero() {
  ScaledPotential p;
  p.alpha = 0.5;
  p.profile = [](double) { return 0.0; };
  p.dprofile = [](double) { return 0.0; };
  p.sup_profile = 0.0;
  return p;
}

RadialCoefficients radial4_coefficients(int k, double m, double eps,
                                        const std::function<double(double)>& phi,
                                        const std::function<double(double)>& dphi, int sign) {
  if (sign != 1 && sign != -1) throw InputError("branch sign must be +1 or -1");
  if (!(m > 0)) throw InputError("mass must be positive");
  const double kk = static_cast<double>(k);
  RadialCoefficients co;
  co.c1 = [kk, m](double r) {
    check_r(r);
    const double k2 = kk * kk, mr2 = m * m * r * r;
    return (3.0 * k2 + mr2) / ((k2 + mr2) * r);
  };
  co.c0 = [kk, m, eps, phi, dphi, sign](double r) {
    check_r(r);
    const double k2 = kk * kk, mr2 = m * m * r * r;
    const double v = eps - phi(r);
    return (k2 - mr2) / ((k2 + mr2) * r * r) - k2 / (r * r) +
           sign * (2.0 * kk * m * v) / (k2 + mr2) + sign * (kk * dphi(r)) / (m * r) + v * v -
           m * m;
  };
  return co;
}

RadialCoefficients kg_coefficients(int n, double m, double eps,
                                   const std::function<double(double)>& phi) {
  if (!(m > 0)) throw InputError("mass must be positive");
  const double nn = static_cast<double>(n);
  RadialCoefficients co;
  co.c1 = [](double r) {
    check_r(r);
    return 1.0 / r;
  };
  co.c0 = [nn, m, eps, phi](double r) {
    check_r(r);
    const double v = eps - phi(r);
    return -nn * nn / (r * r) + v * v - m * m;
  };
  return co;
}

RadialCoefficients pauli_coefficients(int l, double m, double E,
                                      const std::function<double(double)>& phi) {
  if (!(m > 0)) throw InputError("mass must be positive");
  const double ll = static_cast<double>(l);
  RadialCoefficients co;
  co.c1 = [](double r) {
    check_r(r);
    return 1.0 / r;
  };
  co.c0 = [ll, m, E, phi](double r) {
    check_r(r);
    return -ll * ll / (r * r) + 2.0 * m * (E - phi(r));
  };
  return co;
}

int frobenius_exponent(RadialEquation eq, const RadialChannel& ch) {
  ch.validate();
  switch (eq) {
    case RadialEquation::model:
      return ch.k == 0 ? 1 : std::abs(ch.k) - 1;
    case RadialEquation::kg:
      return std::abs(ch.n_kg());
    case RadialEquation::pauli:
      return std::abs(ch.l_pauli());
  }
  throw InputError("unknown radial equation");
}

Tridiagonal assemble_radial_matrix(RadialEquation eq, const RadialChannel& ch,
                                   const ScaledPotential& pot, const RadialGrid& grid,
                                   double spectral, double m) {
  ch.validate();
  if (grid.n < 2 || !(grid.r_max > 0)) throw InputError("radial grid is too small");
  if (!(m > 0)) throw InputError("mass must be positive");

  std::function<double(double)> phi = [&pot](double r) { return pot.ephi(r); };
  std::function<double(double)> dphi = [&pot](double r) { return pot.dephi(r); };
  if (eq == RadialEquation::pauli && ch.sign == -1)
    phi = [&pot](double r) { return -pot.ephi(r); };

  RadialCoefficients co;
  std::function<double(double)> weight;
  switch (eq) {
    case RadialEquation::model: {
      co = radial4_coefficients(ch.k, m, spectral, phi, dphi, ch.sign);
      const double k2 = static_cast<double>(ch.k) * ch.k, m2 = m * m;
      weight = [k2, m2](double r) { return m2 * r * r * r / (k2 + m2 * r * r); };
      break;
    }
    case RadialEquation::kg:
      co = kg_coefficients(ch.n_kg(), m, spectral, phi);
      weight = [](double r) { return r; };
      break;
    case RadialEquation::pauli:
      co = pauli_coefficients(ch.l_pauli(), m, spectral, phi);
      weight = [](double r) { return r; };
      break;
  }

  const int n = grid.n;
  const double h = grid.h();
  const double beta = frobenius_exponent(eq, ch) == 0 ? 1.0 : 0.0;
  Tridiagonal t;
  t.diag.resize(n);
  t.off.resize(n - 1);
  for (int i = 0; i < n; ++i) {
    const double ri = grid.r(i);
    const double wl = weight(ri - 0.5 * h);
    const double wr = weight(ri + 0.5 * h);
    const double left = i == 0 ? wl * (1.0 - beta) : wl;
    t.diag(i) = (left + wr) / (h * h) - weight(ri) * co.c0(ri);
    if (i + 1 < n) t.off(i) = -wr / (h * h);
  }
  return t;
}

int negative_count(const Tridiagonal& t) {
  const int n = static_cast<int>(t.diag.size());
  int count = 0;
  double prev = 1.0;
  for (int i = 0; i < n; ++i) {
    double d = t.diag(i);
    if (i > 0) d -= t.off(i - 1) * t.off(i - 1) / prev;
    if (d == 0.0) d = -std::numeric_limits<double>::min();
    if (d < 0.0) ++count;
    prev = d;
  }
  return count;
}

namespace {

// branch-folded spectral coordinate: bound states of every equation live
// at q in (m - W, m), with the native value sign*q (model/kg) or q - m
// (pauli energy)
double fold(RadialEquation eq, const RadialChannel& ch, double q, double m) {
  if (eq == RadialEquation::pauli) return q - m;
  return ch.sign * q;
}

Eigen::VectorXd inverse_iteration(const Tridiagonal& t) {
  const int n = static_cast<int>(t.diag.size());
  Eigen::VectorXd x = seeded_vector(n);
  x /= x.norm();
  for (int iter = 0; iter < 3; ++iter) {
    Eigen::VectorXd dl = t.off, d = t.diag, du = t.off, rhs = x;
    int info = LAPACKE_dgtsv(LAPACK_COL_MAJOR, n, 1, dl.data(), d.data(), du.data(), rhs.data(),
                             n);
    if (info != 0 || !rhs.allFinite()) {
      // exactly singular pivot: nudge the diagonal and retry once
      Tridiagonal shifted = t;
      shifted.diag.array() += 1e-12 * t.diag.cwiseAbs().maxCoeff();
      dl = shifted.off;
      d = shifted.diag;
      du = shifted.off;
      rhs = x;
      info = LAPACKE_dgtsv(LAPACK_COL_MAJOR, n, 1, dl.data(), d.data(), du.data(), rhs.data(), n);
      if (info != 0) throw NumericalError("tridiagonal solve failed in inverse iteration");
    }
    x = rhs / rhs.norm();
  }
  int peak = 0;
  x.cwiseAbs().maxCoeff(&peak);
  return x / x(peak);
}

int count_nodes(const Eigen::VectorXd& g) {
  const double floor = 1e-10 * g.cwiseAbs().maxCoeff();
  int nodes = 0;
  double last = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    if (std::abs(g(i)) <= floor) continue;
    if (last != 0.0 && g(i) * last < 0.0) ++nodes;
    last = g(i);
  }
  return nodes;
}

std::vector<BoundState> solve_core(RadialEquation eq, const RadialChannel& ch,
                                   const ScaledPotential& pot, const RadialGrid& grid, int count,
                                   double m, std::vector<std::string>* diagnostics) {
  std::vector<BoundState> out;
  const double window = pot.sup_abs();
  if (!(window > 0) || count <= 0) return out;

  const auto nu = [&](double q) {
    return negative_count(assemble_radial_matrix(eq, ch, pot, grid, fold(eq, ch, q, m), m));
  };
  const double qlo = m - window;
  const double qhi = m - 1e-12;
  const int base = nu(qlo);

  std::vector<double> roots;
  double prev_q = qlo;
  int prev_nu = base;
  for (int j = 1; j <= kScanSteps && static_cast<int>(roots.size()) < count; ++j) {
    const double q = qlo + (qhi - qlo) * j / kScanSteps;
    const int level = nu(q);
    for (int target = prev_nu + 1;
         target <= level && static_cast<int>(roots.size()) < count; ++target) {
      double lo = prev_q, hi = q;
      while (hi - lo > kBisectTol) {
        const double mid = 0.5 * (lo + hi);
        if (nu(mid) >= target)
          hi = mid;
        else
          lo = mid;
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev_q = q;
    prev_nu = std::max(prev_nu, level);
  }

  for (size_t level = 0; level < roots.size(); ++level) {
    const double q = roots[level];
    BoundState s;
    s.eps = ch.sign * q;
    s.energy = s.eps - m;
    s.g = inverse_iteration(assemble_radial_matrix(eq, ch, pot, grid, fold(eq, ch, q, m), m));
    s.nodes = count_nodes(s.g);
    s.tail = std::abs(s.g(s.g.size() - 1));
    if (s.tail >= kDecayThreshold) {
      if (diagnostics) {
        std::ostringstream msg;
        msg << "candidate at eps = " << s.eps << " rejected: tail fraction " << s.tail
            << " exceeds " << kDecayThreshold << " (enlarge r_max)";
        diagnostics->push_back(msg.str());
      }
      continue;
    }
    if (s.nodes != static_cast<int>(level) && diagnostics) {
      std::ostringstream msg;
      msg << "state at eps = " << s.eps << " has " << s.nodes << " nodes at level " << level;
      diagnostics->push_back(msg.str());
    }
    if (eq == RadialEquation::model) {
      const Eigen::VectorXd dg = radial_derivative(s.g, grid);
      const std::function<double(double)> phi = [&pot](double r) { return pot.ephi(r); };
      s.f = reconstruct_f(s.g, dg, ch.k, m, s.eps, phi, ch.sign, grid);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

std::vector<BoundState> solve_bound_states(RadialEquation eq, const RadialChannel& ch,
                                           const ScaledPotential& pot, const RadialGrid& grid,
                                           int count, double m,
                                           std::vector<std::string>* diagnostics) {
  grid.validate();
  ch.validate();
  if (pot.sup_abs() > 0) {
    pot.validate(m);
    if (grid.r_max < 8.0 / pot.alpha)
      throw InputError("scaled problems need r_max >= 8/alpha");
  }

  std::vector<BoundState> states = solve_core(eq, ch, pot, grid, count, m, diagnostics);
  if (states.empty()) return states;

  RadialGrid coarse = grid;
  coarse.n = grid.n / 2;
  std::vector<BoundState> rough = solve_core(eq, ch, pot, coarse, count, m, nullptr);
  for (auto& s : states) {
    s.richardson = std::numeric_limits<double>::infinity();
    for (const auto& c : rough) {
      if (c.nodes == s.nodes) {
        s.richardson = std::abs(s.eps - c.eps) / 3.0;
        break;
      }
    }
    if (!std::isfinite(s.richardson) && diagnostics)
      diagnostics->push_back("no coarse-grid match for the state at eps = " +
                             std::to_string(s.eps) + "; error estimate unavailable");
  }
  return states;
}

Eigen::VectorXd radial_derivative(const Eigen::VectorXd& g, const RadialGrid& grid) {
  const int n = static_cast<int>(g.size());
  if (n < 3) throw InputError("derivative needs at least 3 samples");
  const double h = grid.h();
  Eigen::VectorXd dg(n);
  dg(0) = (-3.0 * g(0) + 4.0 * g(1) - g(2)) / (2.0 * h);
  for (int i = 1; i + 1 < n; ++i) dg(i) = (g(i + 1) - g(i - 1)) / (2.0 * h);
  dg(n - 1) = (3.0 * g(n - 1) - 4.0 * g(n - 2) + g(n - 3)) / (2.0 * h);
  return dg;
}

Eigen::VectorXd reconstruct_f(const Eigen::VectorXd& g, const Eigen::VectorXd& dg, int k,
                              double m, double eps, const std::function<double(double)>& phi,
                              int sign, const RadialGrid& grid) {
  if (sign != 1 && sign != -1) throw InputError("branch sign must be +1 or -1");
  if (g.size() != dg.size()) throw InputError("g and dg sizes differ");
  const int n = static_cast<int>(g.size());
  const double kk = static_cast<double>(k);
  Eigen::VectorXd f(n);
  for (int i = 0; i < n; ++i) {
    const double r = grid.r(i);
    f(i) = ((kk / r) * dg(i) + (kk / (r * r)) * g(i) + sign * m * (eps - phi(r)) * g(i)) /
           (kk * kk / (r * r) + m * m);
  }
  return f;
}

double radial3_residual(const Eigen::VectorXd& g, const Eigen::VectorXd& f, int k, double m,
                        double eps, const ScaledPotential& pot, int sign,
                        const RadialGrid& grid) {
  if (sign != 1 && sign != -1) throw InputError("branch sign must be +1 or -1");
  if (g.size() != f.size()) throw InputError("g and f sizes differ");
  const int n = static_cast<int>(g.size());
  if (n < 5) throw InputError("residual needs at least 5 samples");
  const double h = grid.h();
  const double kk = static_cast<double>(k);
  double worst = 0.0;
  for (int i = 2; i + 2 < n; ++i) {
    const double r = grid.r(i);
    const double gpp = (g(i + 1) - 2.0 * g(i) + g(i - 1)) / (h * h);
    const double gp = (g(i + 1) - g(i - 1)) / (2.0 * h);
    const double fp = (f(i + 1) - f(i - 1)) / (2.0 * h);
    const double res = gpp + gp / r - g(i) / (r * r) - (kk / r) * fp + (kk / (r * r)) * f(i) -
                       m * m * g(i) + sign * m * (eps - pot.ephi(r)) * f(i);
    // rows grow like 1/r^2 toward the origin; measure the defect against
    // the local row scale so the result converges at stencil order
    worst = std::max(worst, std::abs(res) / (1.0 + 1.0 / (r * r)));
  }
  return worst;
}

SweepResult scaling_sweep(const RadialChannel& ch, const ScaledPotential& shape,
                          const std::vector<double>& alphas, double m) {
  ch.validate();
  if (alphas.size() < 3) throw InputError("a sweep needs at least 3 alphas");

  SweepResult result;
  const int count = 2;
  for (const double alpha : alphas) {
    SweepRow row;
    row.alpha = alpha;
    ScaledPotential pot = shape;
    pot.alpha = alpha;
    pot.validate(m);
    RadialGrid grid;
    grid.r_max = 12.0 / alpha;
    grid.n = 36000;

    const auto ground = [](const std::vector<BoundState>& states) -> const BoundState* {
      for (const auto& s : states)
        if (s.nodes == 0) return &s;
      return nullptr;
    };
    const auto model_states = solve_bound_states(RadialEquation::model, ch, pot, grid, count, m);
    const auto kg_states = solve_bound_states(RadialEquation::kg, ch, pot, grid, count, m);
    const auto pauli_states = solve_bound_states(RadialEquation::pauli, ch, pot, grid, count, m);
    const BoundState* gm = ground(model_states);
    const BoundState* gk = ground(kg_states);
    const BoundState* gp = ground(pauli_states);

    if (!gm || !gk) {
      row.warning = std::string("no ground state for ") + (!gm ? "the model equation" : "KG") +
                    " at this alpha; dropped from the fit";
      result.rows.push_back(std::move(row));
      continue;
    }
    row.eps_model = gm->eps;
    row.eps_kg = gk->eps;
    row.eps_pauli_plus_m = gp ? gp->eps : 0.0;
    row.delta = std::abs(gm->eps - gk->eps);
    row.richardson_err = std::max(gm->richardson, gk->richardson);
    row.usable = true;
    if (!gp) row.warning = "no pauli ground state at this alpha";
    result.rows.push_back(std::move(row));
  }

  std::vector<const SweepRow*> usable;
  for (const auto& row : result.rows)
    if (row.usable) usable.push_back(&row);
  result.usable_alphas = static_cast<int>(usable.size());
  if (result.usable_alphas < 3)
    throw NumericalError("fewer than 3 usable alphas in the sweep");

  // coincidence floor: deltas indistinguishable from rounding noise
  bool coincidence = true;
  for (const auto* row : usable)
    if (row->delta > 1e-12 * std::max(1.0, std::abs(row->eps_model))) coincidence = false;
  result.exact_coincidence = coincidence;

  // E/alpha^2 spread over the model ground states
  double vmin = std::numeric_limits<double>::infinity(), vmax = 0.0;
  for (const auto* row : usable) {
    const double v = std::abs(row->eps_model * ch.sign - m) / (row->alpha * row->alpha);
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  result.e_ratio_spread = vmin > 0 ? (vmax - vmin) / vmin : 0.0;

  if (coincidence) {
    result.exponent = std::numeric_limits<double>::quiet_NaN();
    result.exponent_stderr = std::numeric_limits<double>::quiet_NaN();
    result.pauli_exponent = std::numeric_limits<double>::quiet_NaN();
    result.reliable = true;
    return result;
  }

  const auto fit = [](const std::vector<double>& x, const std::vector<double>& y, double* se) {
    const int n = static_cast<int>(x.size());
    double sx = 0, sy = 0;
    for (int i = 0; i < n; ++i) {
      sx += x[i];
      sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
      sxx += (x[i] - mx) * (x[i] - mx);
      sxy += (x[i] - mx) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    if (se) {
      double rss = 0;
      for (int i = 0; i < n; ++i) {
        const double r = y[i] - my - slope * (x[i] - mx);
        rss += r * r;
      }
      *se = n > 2 ? std::sqrt(rss / (n - 2) / sxx) : 0.0;
    }
    return slope;
  };

  std::vector<double> lx, ly;
  for (const auto* row : usable) {
    lx.push_back(std::log(row->alpha));
    ly.push_back(std::log(row->delta));
  }
  result.exponent = fit(lx, ly, &result.exponent_stderr);

  // reliability: the per-eps error estimate must sit well below the
  // smallest measured gap
  const SweepRow* smallest = usable.front();
  for (const auto* row : usable)
    if (row->alpha < smallest->alpha) smallest = row;
  result.reliable = smallest->richardson_err < 0.1 * smallest->delta;

  std::vector<double> px, py;
  for (const auto* row : usable) {
    if (row->warning.empty()) {
      const double em = row->eps_model * ch.sign - m;
      const double ep = row->eps_pauli_plus_m * ch.sign - m;
      const double d = std::abs(em - ep);
      if (d > 0) {
        px.push_back(std::log(row->alpha));
        py.push_back(std::log(d));
      }
    }
  }
  result.pauli_exponent =
      px.size() >= 3 ? fit(px, py, nullptr) : std::numeric_limits<double>::quiet_NaN();
  return result;
}

}  // namespace curldirac
