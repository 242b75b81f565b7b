#include "curldirac/field_identity.hpp"

#include <cmath>

namespace curldirac {

namespace {

double wrap_angle(double t) {
  t = std::remainder(t, 2.0 * M_PI);
  if (t <= -M_PI) t += 2.0 * M_PI;
  return t;
}

double frame_metric(int j) { return j == 0 ? 1.0 : -1.0; }

void require_frame(const Frame4& f, double tol, const char* who) {
  if (orthonormality_defect(f[0], f[1], f[2], f[3]) > tol) {
    throw InputError(std::string(who) + ": frame is not orthonormal");
  }
}

}  // namespace

double dirac_density(const Bispinor& psi, const std::array<Bispinor, 4>& dpsi, const Vec4& eA,
                     int tau, double m) {
  const cd i(0.0, 1.0);
  const Vec4 eA_cov = lower4(eA);
  const Vec4c v = psi.vec();
  Vec4c op = -m * v;
  for (int kappa = 0; kappa < 4; ++kappa) {
    op += gamma(kappa) * Vec4c(i * dpsi[kappa].vec() - static_cast<double>(tau) * eA_cov(kappa) * v);
  }
  return (v.dot(gamma(0) * op)).real();
}

Mat4 rotation_tensor(const Frame4& f, const Frame4& df_nu, double ortho_tol) {
  require_frame(f, ortho_tol, "rotation_tensor");
  Mat4 R = Mat4::Zero();
  for (int j = 0; j < 4; ++j) {
    const Vec4 dfj = lower4(df_nu[j]);
    const Vec4 fj = lower4(f[j]);
    R += frame_metric(j) * dfj * fj.transpose();
  }
  return R;
}

Mat4 star_dual(const Mat4& R) {
  Mat4 S = Mat4::Zero();
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      double s = 0.0;
      for (int mu = 0; mu < 4; ++mu) {
        for (int la = 0; la < 4; ++la) {
          const int sign = levi4(a, b, mu, la);
          if (sign != 0) s += 0.5 * sign * R(mu, la);
        }
      }
      S(a, b) = s;
    }
  }
  return S;
}

Vec4 div_R_star(const Frame4& f, const Frame4Deriv& df) {
  // lowered legs and lowered derivative legs
  Frame4 fl;
  Frame4Deriv dfl;
  for (int j = 0; j < 4; ++j) fl[j] = lower4(f[j]);
  for (int nu = 0; nu < 4; ++nu)
    for (int j = 0; j < 4; ++j) dfl[nu][j] = lower4(df[nu][j]);

  Vec4 out = Vec4::Zero();
  for (int kappa = 0; kappa < 4; ++kappa) {
    double s = 0.0;
    for (int eps = 0; eps < 4; ++eps) {
      for (int mu = 0; mu < 4; ++mu) {
        for (int la = 0; la < 4; ++la) {
          const int sign = levi4(eps, kappa, mu, la);
          if (sign == 0) continue;
          double inner = 0.0;
          for (int j = 0; j < 4; ++j) inner += frame_metric(j) * dfl[eps][j](mu) * fl[j](la);
          s += 0.5 * sign * inner;
        }
      }
    }
    out(kappa) = s;
  }
  return out;
}

double tensor_density(double rho, double theta, const Frame4& f, const Vec4& div_Rstar,
                      const Vec4& grad_theta, const Vec4& eA, double m) {
  const double pair3 = lower4(f[3]).dot(div_Rstar) + f[3].dot(grad_theta);
  const double pair0 = minkowski4(f[0], eA);
  return -(0.5 * pair3 + pair0 + m * std::cos(theta)) * rho;
}

namespace {

// Shared stencil evaluation: psi at the center and at x +- h e_nu.
std::pair<double, double> eval_identity(const Bispinor& center,
                                        const std::array<std::array<Bispinor, 2>, 4>& nbr,
                                        const Vec4& eA, double m, int tau, double h) {
  std::array<Bispinor, 4> dpsi;
  for (int nu = 0; nu < 4; ++nu) {
    dpsi[nu] = (nbr[nu][1] - nbr[nu][0]) * cd(1.0 / (2.0 * h), 0.0);
  }
  const double lhs = dirac_density(center, dpsi, eA, tau, m);

  const FrameTensors T = bispinor_to_tensors(center, tau);
  Frame4 f = {T.f0, T.f1, T.f2, T.f3};
  Frame4Deriv df;
  Vec4 grad_theta;
  for (int nu = 0; nu < 4; ++nu) {
    const FrameTensors Tm = bispinor_to_tensors(nbr[nu][0], tau);
    const FrameTensors Tp = bispinor_to_tensors(nbr[nu][1], tau);
    df[nu][0] = (Tp.f0 - Tm.f0) / (2.0 * h);
    df[nu][1] = (Tp.f1 - Tm.f1) / (2.0 * h);
    df[nu][2] = (Tp.f2 - Tm.f2) / (2.0 * h);
    df[nu][3] = (Tp.f3 - Tm.f3) / (2.0 * h);
    grad_theta(nu) = wrap_angle(Tp.theta - Tm.theta) / (2.0 * h);
  }
  const Vec4 dRs = div_R_star(f, df);
  const double rhs = tensor_density(T.rho, T.theta, f, dRs, grad_theta, eA, m);
  return {lhs, rhs};
}

}  // namespace

std::pair<double, double> identity_point(const BispinorField& psi, const EMPotential& pot,
                                         double m, int tau, const Vec4& x, double h) {
  std::array<std::array<Bispinor, 2>, 4> nbr;
  for (int nu = 0; nu < 4; ++nu) {
    Vec4 step = Vec4::Zero();
    step(nu) = h;
    nbr[nu][0] = psi(x - step);
    nbr[nu][1] = psi(x + step);
  }
  return eval_identity(psi(x), nbr, pot.eA(x), m, tau, h);
}

ResidualStats identity_residual(const BispinorField& psi, const EMPotential& pot, double m,
                                int tau, const SpacetimeBox& box,
                                std::vector<IdentityRow>* rows) {
  const int n = box.n;
  if (n < 3) throw InputError("identity_residual: grid needs at least 3 points per axis");
  const double h = box.h();

  // cache psi over the full grid
  std::vector<Bispinor> cache(static_cast<size_t>(n) * n * n * n);
  auto at = [n](int i0, int i1, int i2, int i3) -> size_t {
    return ((static_cast<size_t>(i0) * n + i1) * n + i2) * n + i3;
  };
  for (int i0 = 0; i0 < n; ++i0)
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2)
        for (int i3 = 0; i3 < n; ++i3) cache[at(i0, i1, i2, i3)] = psi(box.point(i0, i1, i2, i3));

  ResidualStats st;
  double sum = 0.0;
  for (int i0 = 1; i0 + 1 < n; ++i0) {
    for (int i1 = 1; i1 + 1 < n; ++i1) {
      for (int i2 = 1; i2 + 1 < n; ++i2) {
        for (int i3 = 1; i3 + 1 < n; ++i3) {
          const Vec4 x = box.point(i0, i1, i2, i3);
          std::array<std::array<Bispinor, 2>, 4> nbr;
          nbr[0] = {cache[at(i0 - 1, i1, i2, i3)], cache[at(i0 + 1, i1, i2, i3)]};
          nbr[1] = {cache[at(i0, i1 - 1, i2, i3)], cache[at(i0, i1 + 1, i2, i3)]};
          nbr[2] = {cache[at(i0, i1, i2 - 1, i3)], cache[at(i0, i1, i2 + 1, i3)]};
          nbr[3] = {cache[at(i0, i1, i2, i3 - 1)], cache[at(i0, i1, i2, i3 + 1)]};
          try {
            const auto [lhs, rhs] = eval_identity(cache[at(i0, i1, i2, i3)], nbr, pot.eA(x), m, tau, h);
            const double r = std::abs(lhs - rhs);
            st.max_residual = std::max(st.max_residual, r);
            sum += r;
            ++st.points;
            if (rows) rows->push_back({x, lhs, rhs});
          } catch (const DegenerateBispinor&) {
            ++st.skipped;
          }
        }
      }
    }
  }
  if (st.points > 0) st.mean_residual = sum / static_cast<double>(st.points);
  return st;
}

Vec3 curl3(const std::array<Vec3, 3>& df) {
  // lowered partials: d_mu f_nu with f_nu covariant
  Mat3 d;  // d(mu, nu) = d_mu f_nu
  for (int mu = 0; mu < 3; ++mu) d.row(mu) = lower3(df[mu]).transpose();
  Vec3 out = Vec3::Zero();
  for (int la = 0; la < 3; ++la) {
    double s = 0.0;
    for (int mu = 0; mu < 3; ++mu)
      for (int nu = 0; nu < 3; ++nu) {
        const int sign = levi3(la, mu, nu);
        if (sign != 0) s += sign * d(mu, nu);
      }
    out(la) = s;
  }
  return out;
}

double m3_div_r(const Dyad3& f, const Dyad3Deriv& df) {
  double s = 0.0;
  for (int j = 0; j < 3; ++j) {
    const std::array<Vec3, 3> dfj = {df[0][j], df[1][j], df[2][j]};
    s += frame_metric(j) * minkowski3(f[j], curl3(dfj));
  }
  return -0.5 * s;
}

Mat3 rotation_tensor_m3(const Dyad3& f, const Dyad3& df_nu) {
  Mat3 R = Mat3::Zero();
  for (int j = 0; j < 3; ++j) {
    R += frame_metric(j) * lower3(df_nu[j]) * lower3(f[j]).transpose();
  }
  return R;
}

Vec3 axial_dual_m3(const Mat3& R) {
  // R*_lambda = 1/2 e_{lambda mu nu} R^{mu nu}; e_{012} = +1 since det g = +1
  Vec3 low = Vec3::Zero();
  for (int la = 0; la < 3; ++la) {
    double s = 0.0;
    for (int mu = 0; mu < 3; ++mu)
      for (int nu = 0; nu < 3; ++nu) {
        const int sign = levi3(la, mu, nu);
        if (sign != 0) s += 0.5 * sign * metric3(mu) * metric3(nu) * R(mu, nu);
      }
    low(la) = s;
  }
  return lower3(low);  // raise: same operation componentwise
}

Vec3 r_from_deltas_m3(const Dyad3& f, const Dyad3& df_nu) {
  // delta f^k = [r, f^k] is linear in r; assemble the 9x3 system in the
  // contravariant components of r.
  Eigen::Matrix<double, 9, 3> M;
  Eigen::Matrix<double, 9, 1> b;
  for (int k = 0; k < 3; ++k) {
    for (int c = 0; c < 3; ++c) {
      Vec3 unit = Vec3::Zero();
      unit(c) = 1.0;
      M.block<3, 1>(3 * k, c) = bracket3(unit, f[k]);
    }
    b.segment<3>(3 * k) = df_nu[k];
  }
  return M.colPivHouseholderQr().solve(b);
}

double m3_density(double rho, const Vec3& f1, const Vec3& f2, const std::array<Vec3, 3>& df1,
                  const std::array<Vec3, 3>& df2, const Vec3& eA3, double m, int sign,
                  double ortho_tol) {
  if (sign != 1 && sign != -1) throw InputError("m3_density: sign must be +1 or -1");
  double defect = std::abs(minkowski3(f1, f1) + 1.0);
  defect = std::max(defect, std::abs(minkowski3(f2, f2) + 1.0));
  defect = std::max(defect, std::abs(minkowski3(f1, f2)));
  if (defect > ortho_tol) throw InputError("m3_density: dyad is not orthonormal");

  const Vec3 f0 = bracket3(f1, f2);
  Dyad3 f = {f0, f1, f2};
  Dyad3Deriv df;
  for (int nu = 0; nu < 3; ++nu) {
    df[nu][0] = bracket3(df1[nu], f2) + bracket3(f1, df2[nu]);
    df[nu][1] = df1[nu];
    df[nu][2] = df2[nu];
  }
  const double divr = m3_div_r(f, df);
  return (0.5 * divr + minkowski3(f0, eA3) + sign * m) * rho;
}

namespace {

struct TrigMode {
  Vec4 freq;
  double phase;
  cd amp;
};

}  // namespace

BispinorField random_trig_field(Rng& rng, int waves, double amplitude) {
  const Bispinor base(cd(1.0, 0.0), cd(0.2, 0.0), cd(0.9, 0.1), cd(-0.15, 0.0));
  std::array<std::vector<TrigMode>, 4> modes;
  for (int c = 0; c < 4; ++c) {
    for (int w = 0; w < waves; ++w) {
      TrigMode mo;
      for (int nu = 0; nu < 4; ++nu) mo.freq(nu) = std::floor(rng.uniform(-2.0, 3.0));
      if (mo.freq.cwiseAbs().maxCoeff() == 0.0) mo.freq(1) = 1.0;
      mo.phase = rng.uniform(0.0, 2.0 * M_PI);
      mo.amp = rng.cnormal() * (amplitude / (2.0 * waves));
      modes[c].push_back(mo);
    }
  }
  return [base, modes](const Vec4& x) {
    Vec4c v = base.vec();
    for (int c = 0; c < 4; ++c) {
      for (const TrigMode& mo : modes[c]) {
        v(c) += mo.amp * std::cos(mo.freq.dot(x) + mo.phase);
      }
    }
    return Bispinor::from_vec(v);
  };
}

PotentialField random_trig_potential(Rng& rng, int waves, double amplitude) {
  std::array<std::vector<TrigMode>, 4> modes;
  for (int c = 0; c < 4; ++c) {
    for (int w = 0; w < waves; ++w) {
      TrigMode mo;
      for (int nu = 0; nu < 4; ++nu) mo.freq(nu) = std::floor(rng.uniform(-2.0, 3.0));
      mo.phase = rng.uniform(0.0, 2.0 * M_PI);
      mo.amp = cd(rng.normal() * (amplitude / waves), 0.0);
      modes[c].push_back(mo);
    }
  }
  return [modes](const Vec4& x) {
    Vec4 a = Vec4::Zero();
    for (int c = 0; c < 4; ++c) {
      for (const TrigMode& mo : modes[c]) {
        a(c) += mo.amp.real() * std::cos(mo.freq.dot(x) + mo.phase);
      }
    }
    return a;
  };
}

BispinorField plane_wave_field(double m) {
  return [m](const Vec4& x) {
    const cd phase = std::polar(1.0, -m * x(0));
    return Bispinor(phase, cd(0.0, 0.0), phase, cd(0.0, 0.0));
  };
}

}  // namespace curldirac
