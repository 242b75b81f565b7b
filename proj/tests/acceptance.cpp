// Acceptance run: one line per criterion, [PASS] or [FAIL], nonzero exit if
// anything failed.  Each block re-derives its oracle at the stated scale
// instead of trusting the unit suites.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "curldirac/field_identity.hpp"
#include "curldirac/frame.hpp"
#include "curldirac/planar.hpp"
#include "curldirac/radial.hpp"
#include "curldirac/sampling.hpp"

using namespace curldirac;

namespace {

int failures = 0;

void report(const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double frame_gap(const FrameTensors& a, const FrameTensors& b) {
  double g = std::abs(a.rho - b.rho);
  g = std::max(g, std::abs(a.theta - b.theta));
  g = std::max(g, static_cast<double>(std::abs(a.tau - b.tau)));
  g = std::max(g, (a.f0 - b.f0).cwiseAbs().maxCoeff());
  g = std::max(g, (a.f1 - b.f1).cwiseAbs().maxCoeff());
  g = std::max(g, (a.f2 - b.f2).cwiseAbs().maxCoeff());
  g = std::max(g, (a.f3 - b.f3).cwiseAbs().maxCoeff());
  return g;
}

double psi_gap_up_to_sign(const Bispinor& a, const Bispinor& b) {
  const double plus = (a.vec() - b.vec()).norm();
  const double minus = (a.vec() + b.vec()).norm();
  return std::min(plus, minus);
}

char buf_out[256];
std::string sfmt(const char* f, ...) {
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf_out, sizeof(buf_out), f, ap);
  va_end(ap);
  return buf_out;
}

// 1: bijection at scale, forward orthonormality and inverse round trip
void criterion_bijection() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(424243);
  double worst_defect = 0.0, worst_round = 0.0;
  for (int rep = 0; rep < 10000; ++rep) {
    const Bispinor psi = random_bispinor(rng);
    const int tau = (rep % 2 == 0) ? 1 : -1;
    const FrameTensors t = bispinor_to_tensors(psi, tau);
    worst_defect = std::max(worst_defect, orthonormality_defect(t.f0, t.f1, t.f2, t.f3));
    const Bispinor back = tensors_to_bispinor(t);
    worst_round =
        std::max(worst_round, psi_gap_up_to_sign(back, psi) / std::sqrt(psi.norm2()));
  }
  const double dt = seconds_since(t0);
  const bool ok = worst_defect < 1e-10 && worst_round < 1e-9 && dt < 10.0;
  report("1 bijection on 10^4 bispinors", ok,
         sfmt("orthonormality defect %.2e (< 1e-10), round trip %.2e (< 1e-9), %.1fs (< 10s)",
              worst_defect, worst_round, dt));
}

// 2: frame transport against the transformed bispinor, improper included
void criterion_equivariance() {
  Rng rng(515151);
  double worst = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const Bispinor psi = random_bispinor(rng);
    const int tau = rng.uniform(0.0, 1.0) < 0.5 ? 1 : -1;
    const LorentzTransform l = random_transform(rng, true);
    const FrameTensors t = bispinor_to_tensors(psi, tau);
    const FrameTensors moved = transform(l, t);
    const FrameTensors direct = bispinor_to_tensors(l.apply(psi), moved.tau);
    worst = std::max(worst, frame_gap(moved, direct));
  }

  // a full turn flips the bispinor and leaves the frame alone
  const LorentzTransform turn = LorentzTransform::rotation(2.0 * M_PI, Vec3(0, 0, 1));
  const Bispinor psi = random_bispinor(rng);
  const Bispinor turned = turn.apply(psi);
  const double flip = (turned.vec() + psi.vec()).norm();
  const double fixed = frame_gap(bispinor_to_tensors(psi, 1), bispinor_to_tensors(turned, 1));
  const bool ok = worst < 1e-9 && flip < 1e-12 && fixed < 1e-9;
  report("2 equivariance on 200 transforms", ok,
         sfmt("worst frame gap %.2e (< 1e-9), 2pi turn: psi flip %.2e, frame gap %.2e", worst,
              flip, fixed));
}

// 3: density identity at second order on smooth fields
void criterion_identity() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(626262);
  const SpacetimeBox coarse{Vec4(0.1, -0.2, 0.05, 0.3), 1.0, 9};
  SpacetimeBox fine = coarse;
  fine.n = 17;
  double rmin = 1e300, rmax = 0.0;
  long skipped = 0;
  for (int rep = 0; rep < 20; ++rep) {
    const BispinorField f = random_trig_field(rng);
    const EMPotential pot{random_trig_potential(rng), -1.0, false};
    const ResidualStats sc = identity_residual(f, pot, 1.0, 1, coarse);
    const ResidualStats sf = identity_residual(f, pot, 1.0, 1, fine);
    const double ratio = sc.max_residual / sf.max_residual;
    rmin = std::min(rmin, ratio);
    rmax = std::max(rmax, ratio);
    skipped += sc.skipped + sf.skipped;
  }
  const Bispinor fixed_psi(cd(1, 0), cd(0.3, -0.2), cd(0.8, 0.1), cd(-0.1, 0.4));
  const BispinorField constant = [fixed_psi](const Vec4&) { return fixed_psi; };
  const ResidualStats sk = identity_residual(constant, EMPotential::zero(), 1.0, 1, coarse);
  const double dt = seconds_since(t0);
  const bool ok =
      rmin >= 3.0 && rmax <= 5.0 && skipped == 0 && sk.max_residual < 1e-12 && dt < 60.0;
  report("3 density identity on 20 fields", ok,
         sfmt("refinement ratios %.2f..%.2f (in [3,5]), constant residual %.2e (< 1e-12), "
              "%.1fs (< 60s)",
              rmin, rmax, sk.max_residual, dt));
}

// 4: radial model at k=0 against Klein-Gordon at n=1, matrices and spectrum
void criterion_k0_coincidence() {
  const ScaledPotential pot = ScaledPotential::gaussian_well(0.6, 0.3);
  const RadialGrid grid{20.0, 2000};
  const RadialChannel model_ch{0, 1};  // n_kg() = |k - sign| = 1, the first scalar channel
  const Tridiagonal a = assemble_radial_matrix(RadialEquation::model, model_ch, pot, grid, 0.9);
  const Tridiagonal b = assemble_radial_matrix(RadialEquation::kg, model_ch, pot, grid, 0.9);
  double entry = 0.0;
  for (int i = 0; i < a.diag.size(); ++i)
    entry = std::max(entry, std::abs(a.diag(i) - b.diag(i)) /
                                std::max({1.0, std::abs(a.diag(i)), std::abs(b.diag(i))}));
  for (int i = 0; i < a.off.size(); ++i)
    entry = std::max(entry, std::abs(a.off(i) - b.off(i)) /
                                std::max({1.0, std::abs(a.off(i)), std::abs(b.off(i))}));

  const auto gm = solve_bound_states(RadialEquation::model, model_ch, pot, grid, 1);
  const auto gk = solve_bound_states(RadialEquation::kg, model_ch, pot, grid, 1);
  const bool both = gm.size() == 1 && gk.size() == 1;
  const double de = both ? std::abs(gm[0].eps - gk[0].eps) : 1.0;
  const bool ok = entry < 1e-14 && both && de < 1e-12;
  report("4 k=0 route coincidence", ok,
         sfmt("entrywise gap %.2e (< 1e-14), ground state gap %.2e (< 1e-12)", entry, de));
}

// 5 and 6 share one sweep
void criterion_scaling_and_e(SweepResult* out) {
  const auto t0 = std::chrono::steady_clock::now();
  const RadialChannel ch{1, 1};
  const SweepResult res =
      scaling_sweep(ch, ScaledPotential::gaussian(0.5), {0.2, 0.15, 0.1, 0.07, 0.05}, 1.0);
  const double dt = seconds_since(t0);
  const bool window = std::abs(res.exponent - 4.0) <= 0.5;
  const bool ok = window && res.reliable && dt < 300.0;
  report("5 scaling exponent in 4 +- 0.5", ok,
         sfmt("fitted exponent %.4f +- %.4f over %d alphas, reliability %s, %.0fs (< 300s)",
              res.exponent, res.exponent_stderr, res.usable_alphas,
              res.reliable ? "passing" : "failing", dt));
  *out = res;
}

void criterion_e_alpha2(const SweepResult& res) {
  const bool ok = res.e_ratio_spread < 0.2 && res.usable_alphas >= 3;
  report("6 E scales like alpha^2", ok,
         sfmt("relative spread of E/alpha^2 is %.4f (< 0.2)", res.e_ratio_spread));
}

// 7a: packet residual halves when the width doubles
void criterion_weyl() {
  const PlanarGrid g{96.0, 257};
  const PencilMatrices pencil = assemble_pencil(g, PlanarPotential::zero(g), 1.0, 1);
  double r[3];
  int i = 0;
  for (const double w : {8.0, 16.0, 32.0}) {
    const WeylPacket p = make_weyl_packet(g, 1.25, 1.0, 1, w);
    r[i++] = weyl_residual(p, pencil, g, 1.25);
  }
  const bool ok = r[0] > r[1] && r[1] > r[2];
  report("7a Weyl residual drops with width", ok,
         sfmt("residuals %.4f > %.4f > %.4f at widths 8, 16, 32", r[0], r[1], r[2]));
}

// 7b: reciprocal eigenvalues confined to the essential band plus gap states,
// with the box spill shrinking as the box grows at fixed spacing
void criterion_band(/* h = 0.75 on both boxes */) {
  double delta[2];
  bool contained = true;
  int bi = 0;
  for (const int n : {17, 25}) {
    const PlanarGrid g{0.75 * (n - 1) / 2.0, n};
    const PlanarPotential pot = PlanarPotential::analytic(g, "gauss", 0.5);
    const PencilMatrices pencil = assemble_pencil(g, pot, 1.0, 1);
    const PencilSpectrum sp = pencil_spectrum(pencil, g);
    delta[bi++] = sp.delta_box;
    for (const double mu : sp.reciprocal) {
      if (std::abs(mu) <= 1.0 + sp.delta_box + 1e-12) continue;
      bool is_gap = false;
      for (const auto& gp : sp.gap)
        if (std::abs(mu - 1.0 / gp.eps) < 1e-9) is_gap = true;
      if (!is_gap) contained = false;
    }
  }
  const bool ok = contained && delta[1] < delta[0];
  report("7b pencil band structure", ok,
         sfmt("eigenvalues confined%s, delta_box %.3e -> %.3e as the box grows",
              contained ? "" : " VIOLATED", delta[0], delta[1]));
}

// 7c: discrete symbol determinant against the closed form
void criterion_symbol() {
  Rng rng(737373);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const Eigen::Vector2d xi(rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0));
    const double eps = rng.uniform(-2.0, 2.0);
    const double expected = 1.0 * (xi.squaredNorm() + 1.0 - eps * eps);
    const double got = symbol_det(xi, eps, 1.0);
    worst = std::max(worst, std::abs(got - expected) / std::max(1.0, std::abs(expected)));
  }
  report("7c symbol determinant closed form", worst < 1e-12,
         sfmt("worst relative gap %.2e (< 1e-12) on 100 draws", worst));
}

// 8: delta_A d_A equals curl_A^2 on the assembled grid
void criterion_squared_identity() {
  const PlanarGrid g{5.0, 15};
  const auto r0 = squared_identity_residual(g, PlanarPotential::zero(g), 1.0, 1, 0.37, 11);
  const PlanarPotential pot = PlanarPotential::sample(
      g, [](double x, double y) { return 0.1 * std::exp(-0.2 * (x * x + y * y)) * std::cos(x); },
      [](double x, double y) { return 0.2 * std::sin(0.4 * x) * std::exp(-0.1 * y * y); },
      [](double x, double y) { return -0.15 * std::cos(0.3 * y) * std::exp(-0.1 * x * x); });
  const auto r1 = squared_identity_residual(g, pot, 1.0, -1, -0.22, 12);
  const bool ok = r0.residual < 1e-12 && r1.residual < 1e-12;
  report("8 squared operator identity", ok,
         sfmt("free residual %.2e, smooth A residual %.2e (both < 1e-12)", r0.residual,
              r1.residual));
}

// 9: planar ground gap state against the radial model route at alpha = 0.2
void criterion_cross_module() {
  const ScaledPotential pot = ScaledPotential::gaussian(0.2);
  const RadialChannel ch{1, 1};
  const RadialGrid grid{60.0, 9600};
  const auto radial = solve_bound_states(RadialEquation::model, ch, pot, grid, 1);
  if (radial.size() != 1) {
    report("9 cross module ground state", false, "radial route found no ground state");
    return;
  }
  const double eps_radial = radial[0].eps;
  const double est_radial = radial[0].richardson;

  double eps2d[2], est2d = 0.0;
  int i = 0;
  for (const int n : {61, 121}) {
    const PlanarGrid g{60.0, n};
    const PlanarPotential pot2d = PlanarPotential::analytic(g, "gauss", 0.2);
    const PencilMatrices pencil = assemble_pencil(g, pot2d, 1.0, 1);
    eps2d[i++] = nearest_gap_state(pencil, g, 0.99).eps;
  }
  est2d = std::abs(eps2d[1] - eps2d[0]) / 3.0;

  const double diff = std::abs(eps2d[1] - eps_radial);
  const double budget = std::max(est2d, est_radial);
  const bool ok = diff <= budget && diff <= 1e-3;
  report("9 cross module ground state", ok,
         sfmt("2d eps %.9f vs radial %.9f: gap %.3e within max(%.3e, %.3e) and 1e-3", eps2d[1],
              eps_radial, diff, est2d, est_radial));
}

}  // namespace

int main() {
  criterion_bijection();
  criterion_equivariance();
  criterion_identity();
  criterion_k0_coincidence();
  SweepResult sweep;
  criterion_scaling_and_e(&sweep);
  criterion_e_alpha2(sweep);
  criterion_weyl();
  criterion_band();
  criterion_symbol();
  criterion_squared_identity();
  criterion_cross_module();
  if (failures) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
