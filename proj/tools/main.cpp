// command line front end: bispinor <-> frame maps, the density identity
// scan, planar pencil spectra and the radial scaling sweep.  data goes to
// stdout, diagnostics to stderr.  exit codes: 0 success, 2 invalid input,
// 3 numerical failure.  every float prints with %.17g so equal inputs give
// byte identical output.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "curldirac/field_identity.hpp"
#include "curldirac/frame.hpp"
#include "curldirac/planar.hpp"
#include "curldirac/radial.hpp"
#include "curldirac/sampling.hpp"

namespace {

using namespace curldirac;

std::string fmt(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_vec(const Vec4& v) {
  return fmt(v(0)) + "," + fmt(v(1)) + "," + fmt(v(2)) + "," + fmt(v(3));
}

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &pos);
    } catch (const std::exception&) {
      throw InputError(what + ": '" + t + "' is not a float");
    }
    if (pos != t.size()) throw InputError(what + ": '" + t + "' is not a float");
    out.push_back(v);
  }
  if (out.empty()) throw InputError(what + ": empty list");
  return out;
}

int parse_sign(const std::string& s) {
  if (s == "+" || s == "+1" || s == "1") return 1;
  if (s == "-" || s == "-1") return -1;
  throw InputError("sign must be + or - (got '" + s + "')");
}

// turn `--config file` of key=value lines into --key=value tokens placed
// before the explicit flags, so the command line wins on repeats
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      path = args[i].substr(9);
  }
  if (path.empty() || args.empty()) return args;
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  std::vector<std::string> out;
  out.push_back(args[0]);  // the subcommand stays first
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const size_t eq = t.find('=');
    if (eq == std::string::npos || eq == 0)
      throw InputError("config line " + std::to_string(lineno) + " is not key=value");
    out.push_back("--" + trim(t.substr(0, eq)) + "=" + trim(t.substr(eq + 1)));
  }
  out.insert(out.end(), args.begin() + 1, args.end());
  return out;
}

// ---- frame ---------------------------------------------------------------

struct FrameArgs {
  std::string psi_csv;
  std::string frame_path;
  int tau = 1;
  bool inverse = false;
  bool roundtrip = false;
};

struct FrameFile {
  double rho = 0.0, theta = 0.0;
  int tau = 1;
  Vec4 f0, f1, f2;
};

Vec4 parse_vec4(const std::string& s, const std::string& what) {
  const auto v = parse_list(s, what);
  if (v.size() != 4) throw InputError(what + ": needs 4 comma separated floats");
  return Vec4(v[0], v[1], v[2], v[3]);
}

FrameFile read_frame_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open frame file '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw InputError("frame file line " + std::to_string(lineno) + " is not key=value");
    kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  for (const char* key : {"rho", "theta", "tau", "f0", "f1", "f2"})
    if (!kv.count(key)) throw InputError(std::string("frame file is missing ") + key + "=");
  FrameFile f;
  f.rho = parse_list(kv["rho"], "rho").at(0);
  f.theta = parse_list(kv["theta"], "theta").at(0);
  f.tau = parse_sign(kv["tau"]);
  f.f0 = parse_vec4(kv["f0"], "f0");
  f.f1 = parse_vec4(kv["f1"], "f1");
  f.f2 = parse_vec4(kv["f2"], "f2");
  return f;
}

int run_frame(const FrameArgs& a) {
  if (a.inverse) {
    if (a.frame_path.empty()) throw InputError("--inverse needs --frame <file>");
    const FrameFile ff = read_frame_file(a.frame_path);
    const Vec4c psi =
        tensors_to_bispinor(ff.rho, ff.theta, ff.tau, ff.f0, ff.f1, ff.f2).vec();
    std::string s = "psi=";
    for (int i = 0; i < 4; ++i) {
      if (i) s += ",";
      s += fmt(psi(i).real()) + "," + fmt(psi(i).imag());
    }
    std::printf("%s\n", s.c_str());
    if (a.roundtrip) {
      const FrameTensors back = bispinor_to_tensors(Bispinor::from_vec(psi), ff.tau);
      double err = std::abs(back.rho - ff.rho);
      err = std::max(err, std::abs(back.theta - ff.theta));
      err = std::max(err, (back.f0 - ff.f0).cwiseAbs().maxCoeff());
      err = std::max(err, (back.f1 - ff.f1).cwiseAbs().maxCoeff());
      err = std::max(err, (back.f2 - ff.f2).cwiseAbs().maxCoeff());
      std::printf("roundtrip_error=%s\n", fmt(err).c_str());
    }
    return 0;
  }

  if (a.psi_csv.empty()) throw InputError("need --psi <8 floats> or --inverse --frame <file>");
  const auto vals = parse_list(a.psi_csv, "--psi");
  if (vals.size() != 8)
    throw InputError("--psi needs 8 comma separated floats (re,im per component)");
  const Bispinor psi(cd(vals[0], vals[1]), cd(vals[2], vals[3]), cd(vals[4], vals[5]),
                     cd(vals[6], vals[7]));
  const FrameTensors t = bispinor_to_tensors(psi, a.tau);
  std::printf("rho=%s\n", fmt(t.rho).c_str());
  std::printf("theta=%s\n", fmt(t.theta).c_str());
  std::printf("tau=%+d\n", t.tau);
  std::printf("f0=%s\n", fmt_vec(t.f0).c_str());
  std::printf("f1=%s\n", fmt_vec(t.f1).c_str());
  std::printf("f2=%s\n", fmt_vec(t.f2).c_str());
  std::printf("f3=%s\n", fmt_vec(t.f3).c_str());
  if (a.roundtrip) {
    const Vec4c back = tensors_to_bispinor(t).vec();
    const Vec4c orig = psi.vec();
    const double plus = (back - orig).cwiseAbs().maxCoeff();
    const double minus = (back + orig).cwiseAbs().maxCoeff();
    std::printf("roundtrip_error=%s\n", fmt(std::min(plus, minus)).c_str());
  }
  return 0;
}

// ---- identity ------------------------------------------------------------

struct IdentityArgs {
  std::uint64_t seed = 1;
  double h = 0.125;
  int samples = 20;
  double m = 1.0;
  int tau = 1;
  bool constant = false;
  std::string csv;
};

int run_identity(const IdentityArgs& a) {
  if (!(a.h > 0.0) || !std::isfinite(a.h)) throw InputError("--h must be a positive step");
  if (a.h > 0.5) throw InputError("--h above 0.5 leaves no resolution for the stencils");
  if (a.samples < 1) throw InputError("--samples must be positive");
  if (!(a.m > 0.0)) throw InputError("--mass must be positive");

  std::ofstream csv;
  std::vector<IdentityRow> rowbuf;
  std::vector<IdentityRow>* rows = nullptr;
  if (!a.csv.empty()) {
    csv.open(a.csv);
    if (!csv) throw InputError("cannot open '" + a.csv + "' for writing");
    rows = &rowbuf;
  }

  // fixed off center box so no sample point sits on a symmetry axis; the
  // coarse spacing is exactly h, the fine grid halves it on the same box
  const SpacetimeBox coarse{Vec4(0.1, -0.2, 0.05, 0.3), 8.0 * a.h, 9};
  SpacetimeBox fine = coarse;
  fine.n = 17;

  Rng rng(a.seed);
  const int n_samples = a.constant ? 1 : a.samples;
  double cmax = 0.0, cmean = 0.0, fmax = 0.0, fmean = 0.0;
  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0, rsum = 0.0;
  long points = 0, skipped = 0;
  bool finite_ok = true, ratio_ok = true;
  for (int s = 0; s < n_samples; ++s) {
    BispinorField field;
    EMPotential pot;
    if (a.constant) {
      // every derivative vanishes, so both densities agree to round-off
      const Bispinor fixed(cd(1, 0), cd(0.3, -0.2), cd(0.8, 0.1), cd(-0.1, 0.4));
      field = [fixed](const Vec4&) { return fixed; };
      pot.A = [](const Vec4&) { return Vec4(0.7, 0.1, -0.3, 0.2); };
      pot.time_independent = true;
    } else {
      field = random_trig_field(rng);
      pot.A = random_trig_potential(rng);
    }
    const ResidualStats sc = identity_residual(field, pot, a.m, a.tau, coarse, rows);
    const ResidualStats sf = identity_residual(field, pot, a.m, a.tau, fine);
    cmax = std::max(cmax, sc.max_residual);
    fmax = std::max(fmax, sf.max_residual);
    cmean += sc.mean_residual;
    fmean += sf.mean_residual;
    points += sc.points + sf.points;
    skipped += sc.skipped + sf.skipped;
    if (!std::isfinite(sc.max_residual) || !std::isfinite(sf.max_residual)) finite_ok = false;
    if (!a.constant) {
      const double ratio = sc.max_residual / sf.max_residual;
      rmin = std::min(rmin, ratio);
      rmax = std::max(rmax, ratio);
      rsum += ratio;
      if (!(ratio >= 3.0 && ratio <= 5.0)) ratio_ok = false;
    }
  }
  cmean /= n_samples;
  fmean /= n_samples;
  const double degenerate =
      points + skipped > 0 ? static_cast<double>(skipped) / static_cast<double>(points + skipped)
                           : 0.0;

  if (rows) {
    csv << "x0,x1,x2,x3,lhs,rhs,residual\n";
    for (const auto& r : rowbuf)
      csv << fmt(r.x(0)) << ',' << fmt(r.x(1)) << ',' << fmt(r.x(2)) << ',' << fmt(r.x(3)) << ','
          << fmt(r.lhs) << ',' << fmt(r.rhs) << ',' << fmt(std::abs(r.lhs - r.rhs)) << '\n';
  }

  std::printf("samples=%d h=%s\n", n_samples, fmt(a.h).c_str());
  std::printf("max_residual_h=%s\n", fmt(cmax).c_str());
  std::printf("mean_residual_h=%s\n", fmt(cmean).c_str());
  std::printf("max_residual_h2=%s\n", fmt(fmax).c_str());
  std::printf("mean_residual_h2=%s\n", fmt(fmean).c_str());
  if (!a.constant) {
    std::printf("ratio_min=%s\n", fmt(rmin).c_str());
    std::printf("ratio_mean=%s\n", fmt(rsum / n_samples).c_str());
    std::printf("ratio_max=%s\n", fmt(rmax).c_str());
  }
  std::printf("degenerate_fraction=%s\n", fmt(degenerate).c_str());

  if (!finite_ok) {
    std::fprintf(stderr, "non finite residuals\n");
    return 3;
  }
  if (degenerate > 0.01) {
    std::fprintf(stderr, "degenerate stencils exceed 1%% of the evaluations\n");
    return 3;
  }
  if (a.constant) {
    if (fmax < 1e-12) return 0;
    std::fprintf(stderr, "constant field residual %s is not at rounding level\n",
                 fmt(fmax).c_str());
    return 3;
  }
  if (!ratio_ok) {
    std::fprintf(stderr, "some h -> h/2 residual ratio left [3, 5]\n");
    return 3;
  }
  return 0;
}

// ---- spectrum2d ------------------------------------------------------------

struct Spectrum2dArgs {
  int grid = 25;
  double box = 45.0;
  double alpha = 0.2;
  std::string well = "gauss";
  std::string sign = "+";
  double m = 1.0;
  double eps = 1.25;
};

PlanarPotential read_potential_csv(const std::string& path, const PlanarGrid& g) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open potential file '" + path + "'");
  PlanarPotential pot = PlanarPotential::zero(g);
  const double tol = 1e-9 * std::max(1.0, g.half_width);
  std::string line;
  long row = 0, lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (std::isalpha(static_cast<unsigned char>(t[0]))) {
      if (row == 0) continue;  // header
      throw InputError("potential file line " + std::to_string(lineno) + " is not numeric");
    }
    const auto vals = parse_list(t, "potential row");
    if (vals.size() != 5)
      throw InputError("potential file line " + std::to_string(lineno) +
                       " needs x1,x2,phi,a1,a2");
    if (row >= g.sites()) throw InputError("potential file has more rows than grid sites");
    const int i = static_cast<int>(row / g.n), j = static_cast<int>(row % g.n);
    if (std::abs(vals[0] - g.x1(i)) > tol || std::abs(vals[1] - g.x2(j)) > tol)
      throw InputError("potential file line " + std::to_string(lineno) +
                       " does not sit on the grid (rows run x1 outer, x2 inner)");
    const int site = g.index(i, j);
    pot.phi(site) = vals[2];
    pot.a1(site) = vals[3];
    pot.a2(site) = vals[4];
    ++row;
  }
  if (row != g.sites())
    throw InputError("potential file has " + std::to_string(row) + " rows, the grid needs " +
                     std::to_string(g.sites()));
  return pot;
}

int run_spectrum2d(const Spectrum2dArgs& a) {
  const int sign = parse_sign(a.sign);
  if (!(a.m > 0.0)) throw InputError("--mass must be positive");
  if (!(std::abs(a.eps) > a.m))
    throw InputError("--eps must satisfy |eps| > m to probe the essential spectrum");
  PlanarGrid g{a.box, a.grid};
  g.validate();

  PlanarPotential pot = PlanarPotential::zero(g);
  if (a.well == "gauss") {
    if (!(a.alpha > 0.0) || !std::isfinite(a.alpha))
      throw InputError("--alpha must be positive");
    pot = PlanarPotential::analytic(g, "gauss", a.alpha);
  } else if (a.well != "zero") {
    pot = read_potential_csv(a.well, g);
  }

  const PencilMatrices pencil = assemble_pencil(g, pot, a.m, sign);
  const PencilSpectrum sp = pencil_spectrum(pencil, g);

  std::printf("epsilon,residual,side\n");
  for (const auto& gp : sp.gap)
    std::printf("%s,%s,%s\n", fmt(gp.eps).c_str(), fmt(gp.residual).c_str(),
                gp.eps >= 0.0 ? "+1" : "-1");

  // the residual table probes the essential spectrum of the free pencil on a
  // fixed wide box; packets of growing width pin |eps| > m down at O(1/w)
  const PlanarGrid probe{96.0, 257};
  const PencilMatrices free_pencil =
      assemble_pencil(probe, PlanarPotential::zero(probe), a.m, sign);
  std::printf("w,weyl_residual\n");
  for (const int w : {8, 16, 32}) {
    const WeylPacket p = make_weyl_packet(probe, a.eps, a.m, sign, static_cast<double>(w));
    std::printf("%d,%s\n", w, fmt(weyl_residual(p, free_pencil, probe, a.eps)).c_str());
  }

  std::printf("delta_box=%s max_gap_inside=%s\n", fmt(sp.delta_box).c_str(),
              fmt(sp.max_gap_inside).c_str());
  return 0;
}

// ---- scaling ---------------------------------------------------------------

struct ScalingArgs {
  int k = 1;
  std::string sign = "+";
  std::string alphas = "0.2,0.15,0.1,0.07,0.05";
  std::string well = "gauss";
  double m = 1.0;
};

int run_scaling(const ScalingArgs& a) {
  if (!(a.m > 0.0)) throw InputError("--mass must be positive");
  const RadialChannel ch{a.k, parse_sign(a.sign)};
  const std::vector<double> alphas = parse_list(a.alphas, "--alphas");
  if (alphas.size() < 3) {
    std::fprintf(stderr, "a fit needs at least 3 alphas, got %zu\n", alphas.size());
    return 3;
  }
  ScaledPotential shape = ScaledPotential::gaussian(0.5);
  if (a.well == "deep")
    shape = ScaledPotential::gaussian_well(0.6, 0.3);
  else if (a.well != "gauss")
    throw InputError("--well must be gauss or deep");

  SweepResult res;
  try {
    res = scaling_sweep(ch, shape, alphas, a.m);
  } catch (const NumericalError&) {
    if (a.k == 0 && a.well == "gauss")
      std::fprintf(stderr,
                   "note: the gauss profile is too shallow to bind the k=0 channel at any "
                   "alpha; try --well deep\n");
    throw;
  }

  std::printf("alpha,eps_model,eps_kg,eps_pauli_plus_m,delta,richardson_err\n");
  for (const auto& row : res.rows) {
    if (!row.usable) {
      std::fprintf(stderr, "alpha=%s dropped: %s\n", fmt(row.alpha).c_str(),
                   row.warning.c_str());
      continue;
    }
    if (!row.warning.empty())
      std::fprintf(stderr, "alpha=%s: %s\n", fmt(row.alpha).c_str(), row.warning.c_str());
    std::printf("%s,%s,%s,%s,%s,%s\n", fmt(row.alpha).c_str(), fmt(row.eps_model).c_str(),
                fmt(row.eps_kg).c_str(), fmt(row.eps_pauli_plus_m).c_str(),
                fmt(row.delta).c_str(), fmt(row.richardson_err).c_str());
  }
  if (res.exact_coincidence)
    std::printf("exponent=exact-coincidence stderr=0 usable_alphas=%d\n", res.usable_alphas);
  else
    std::printf("exponent=%s stderr=%s usable_alphas=%d\n", fmt(res.exponent).c_str(),
                fmt(res.exponent_stderr).c_str(), res.usable_alphas);

  if (!res.reliable) {
    std::fprintf(stderr,
                 "fit not reliable: the grid error at the smallest alpha is not an order under "
                 "its delta\n");
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curl reformulation of the Dirac equation: frame maps, density identity, planar "
               "spectra, radial scaling"};
  app.require_subcommand(1);
  // --h is a real option below, so help is long form only
  app.set_help_flag("--help", "print help");
  // config values arrive as earlier duplicates of the same options
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string config_path;

  FrameArgs fa;
  auto* fr = app.add_subcommand("frame", "bispinor to frame tensors and back");
  fr->set_help_flag("--help", "print help");
  fr->add_option("--psi", fa.psi_csv, "bispinor as 8 floats, re,im per component");
  fr->add_option("--tau", fa.tau, "time orientation sign")->check(CLI::IsMember({1, -1}));
  fr->add_flag("--inverse", fa.inverse, "map a frame file back to a bispinor");
  fr->add_option("--frame", fa.frame_path, "frame file with rho=, theta=, tau=, f0=..f2= lines");
  fr->add_flag("--roundtrip", fa.roundtrip, "also print the round trip error");
  fr->add_option("--config", config_path, "key=value file overriding the defaults");

  IdentityArgs ia;
  auto* id = app.add_subcommand("identity", "density identity residual scan at h and h/2");
  id->set_help_flag("--help", "print help");
  id->add_option("--seed", ia.seed, "rng seed");
  id->add_option("--h", ia.h, "coarse difference step");
  id->add_option("--samples", ia.samples, "number of random smooth fields");
  id->add_option("--mass", ia.m, "fermion mass");
  id->add_option("--tau", ia.tau, "time orientation sign")->check(CLI::IsMember({1, -1}));
  id->add_flag("--constant", ia.constant,
               "constant bispinor and potential; the residual sits at rounding level");
  id->add_option("--csv", ia.csv, "write x0,x1,x2,x3,lhs,rhs,residual rows at step h");
  id->add_option("--config", config_path, "key=value file overriding the defaults");

  Spectrum2dArgs sa;
  auto* sp = app.add_subcommand("spectrum2d", "planar pencil spectrum on a Dirichlet box");
  sp->set_help_flag("--help", "print help");
  sp->add_option("--grid", sa.grid, "points per side");
  sp->add_option("--box", sa.box, "half width of the square box");
  sp->add_option("--alpha", sa.alpha, "scale of the gauss well");
  sp->add_option("--well", sa.well, "zero, gauss, or a CSV file of x1,x2,phi,a1,a2 rows");
  sp->add_option("--sign", sa.sign, "branch sign, + or -");
  sp->add_option("--mass", sa.m, "fermion mass");
  sp->add_option("--eps", sa.eps, "probe energy for the Weyl residual table, |eps| > m");
  sp->add_option("--config", config_path, "key=value file overriding the defaults");

  ScalingArgs ca;
  auto* sc = app.add_subcommand("scaling", "radial ground state sweep over coupling scales");
  sc->set_help_flag("--help", "print help");
  sc->add_option("--k", ca.k, "angular channel");
  sc->add_option("--sign", ca.sign, "branch sign, + or -");
  sc->add_option("--alphas", ca.alphas, "comma separated coupling scales, at least 3");
  sc->add_option("--well", ca.well, "profile: gauss = -exp(-s^2), deep binds the k=0 channel");
  sc->add_option("--mass", ca.m, "fermion mass");
  sc->add_option("--config", config_path, "key=value file overriding the defaults");

  std::vector<std::string> args;
  try {
    args = expand_config(argc, argv);
  } catch (const InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(fr)) return run_frame(fa);
    if (app.got_subcommand(id)) return run_identity(ia);
    if (app.got_subcommand(sp)) return run_spectrum2d(sa);
    if (app.got_subcommand(sc)) return run_scaling(ca);
  } catch (const InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 2;
}
