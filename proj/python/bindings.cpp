// python module: numpy facing layer over the core library. Bispinors cross
// the boundary as complex length 4 arrays (xi then eta), four vectors as
// real length 4 arrays, grids and potentials as the bound structs.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "curldirac/field_identity.hpp"
#include "curldirac/frame.hpp"
#include "curldirac/planar.hpp"
#include "curldirac/radial.hpp"
#include "curldirac/sampling.hpp"

namespace py = pybind11;
using namespace curldirac;

namespace {

RadialEquation parse_equation(const std::string& name) {
  if (name == "model") return RadialEquation::model;
  if (name == "kg") return RadialEquation::kg;
  if (name == "pauli") return RadialEquation::pauli;
  throw InputError("unknown equation '" + name + "' (use model, kg or pauli)");
}

BispinorField wrap_field(const std::function<Vec4c(const Vec4&)>& f) {
  return [f](const Vec4& x) { return Bispinor::from_vec(f(x)); };
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "tensor frame reformulation of the Dirac equation: frame map, "
            "density identity scan, planar pencil, radial channels";

  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

  // frame correspondence
  py::class_<FrameTensors>(m, "FrameTensors")
      .def_readwrite("rho", &FrameTensors::rho)
      .def_readwrite("theta", &FrameTensors::theta)
      .def_readwrite("tau", &FrameTensors::tau)
      .def_readwrite("f0", &FrameTensors::f0)
      .def_readwrite("f1", &FrameTensors::f1)
      .def_readwrite("f2", &FrameTensors::f2)
      .def_readwrite("f3", &FrameTensors::f3)
      .def("__repr__", [](const FrameTensors& t) {
        return "FrameTensors(rho=" + std::to_string(t.rho) +
               ", theta=" + std::to_string(t.theta) + ", tau=" + std::to_string(t.tau) + ")";
      });

  m.def(
      "frame_from_bispinor",
      [](const Vec4c& psi, int tau) { return bispinor_to_tensors(Bispinor::from_vec(psi), tau); },
      py::arg("psi"), py::arg("tau") = 1,
      "forward map psi -> (rho, theta, tau, tetrad); raises InputError on a "
      "degenerate bispinor");
  m.def(
      "bispinor_from_frame",
      [](const FrameTensors& t, double ortho_tol) {
        return Vec4c(tensors_to_bispinor(t, ortho_tol).vec());
      },
      py::arg("frame"), py::arg("ortho_tol") = 1e-8,
      "inverse map, unique up to overall sign");
  m.def(
      "bispinor_from_frame",
      [](double rho, double theta, int tau, const Vec4& f0, const Vec4& f1, const Vec4& f2,
         double ortho_tol) {
        return Vec4c(tensors_to_bispinor(rho, theta, tau, f0, f1, f2, ortho_tol).vec());
      },
      py::arg("rho"), py::arg("theta"), py::arg("tau"), py::arg("f0"), py::arg("f1"),
      py::arg("f2"), py::arg("ortho_tol") = 1e-8);
  m.def("orthonormality_defect", &orthonormality_defect, py::arg("f0"), py::arg("f1"),
        py::arg("f2"), py::arg("f3"),
        "largest deviation of the pairwise Minkowski products from g_jl");

  py::class_<LorentzTransform>(m, "LorentzTransform")
      .def_static("boost", &LorentzTransform::boost, py::arg("rapidity"), py::arg("axis"))
      .def_static("rotation", &LorentzTransform::rotation, py::arg("angle"), py::arg("axis"))
      .def_static("space_inversion", &LorentzTransform::space_inversion)
      .def_static("time_inversion", &LorentzTransform::time_inversion)
      .def_static("identity", &LorentzTransform::identity)
      .def("compose", &LorentzTransform::compose, py::arg("first"))
      .def("inverse", &LorentzTransform::inverse)
      .def("lambda_matrix", &LorentzTransform::lambda)
      .def("orientation_preserving", &LorentzTransform::orientation_preserving)
      .def("time_preserving", &LorentzTransform::time_preserving)
      .def(
          "apply_vector", [](const LorentzTransform& l, const Vec4& x) { return l.apply(x); },
          py::arg("x"))
      .def(
          "apply_bispinor",
          [](const LorentzTransform& l, const Vec4c& psi) {
            return Vec4c(l.apply(Bispinor::from_vec(psi)).vec());
          },
          py::arg("psi"));
  m.def("transform_frame", &transform, py::arg("transform"), py::arg("frame"),
        "transport frame data by a coordinate change");

  // density identity on a spacetime box
  py::class_<ResidualStats>(m, "ResidualStats")
      .def_readonly("max_residual", &ResidualStats::max_residual)
      .def_readonly("mean_residual", &ResidualStats::mean_residual)
      .def_readonly("points", &ResidualStats::points)
      .def_readonly("skipped", &ResidualStats::skipped);

  m.def(
      "identity_residual",
      [](const std::function<Vec4c(const Vec4&)>& psi,
         const std::function<Vec4(const Vec4&)>& potential, double m_, int tau,
         const Vec4& origin, double extent, int n, double e, bool time_independent) {
        EMPotential pot;
        pot.e = e;
        pot.time_independent = time_independent;
        if (potential) pot.A = potential;
        const SpacetimeBox box{origin, extent, n};
        return identity_residual(wrap_field(psi), pot, m_, tau, box);
      },
      py::arg("psi"), py::arg("potential") = nullptr, py::arg("m") = 1.0, py::arg("tau") = 1,
      py::arg("origin") = Vec4(Vec4::Zero()), py::arg("extent") = 1.0, py::arg("n") = 9,
      py::arg("e") = -1.0, py::arg("time_independent") = false,
      "sup and mean gap between the two sides of the density identity over "
      "the interior of an n^4 box; psi maps a length 4 point to a complex "
      "length 4 bispinor, potential to a real length 4 vector");

  // planar pencil
  py::class_<PlanarGrid>(m, "PlanarGrid")
      .def(py::init([](double half_width, int n) {
             PlanarGrid g{half_width, n};
             g.validate();
             return g;
           }),
           py::arg("half_width"), py::arg("n"))
      .def_readonly("half_width", &PlanarGrid::half_width)
      .def_readonly("n", &PlanarGrid::n)
      .def("h", &PlanarGrid::h);

  py::class_<PlanarPotential>(m, "PlanarPotential")
      .def_readwrite("phi", &PlanarPotential::phi)
      .def_readwrite("a1", &PlanarPotential::a1)
      .def_readwrite("a2", &PlanarPotential::a2)
      .def_readwrite("e", &PlanarPotential::e)
      .def_static("zero", &PlanarPotential::zero, py::arg("grid"), py::arg("e") = -1.0)
      .def_static("analytic", &PlanarPotential::analytic, py::arg("grid"), py::arg("name"),
                  py::arg("alpha"), py::arg("e") = -1.0,
                  "named wells: 'zero', or 'gauss' with e*Phi = -alpha^2 exp(-(alpha r)^2)")
      .def_static("sample", &PlanarPotential::sample, py::arg("grid"), py::arg("phi"),
                  py::arg("a1"), py::arg("a2"), py::arg("e") = -1.0,
                  "sample callables phi(x, y), a1(x, y), a2(x, y) on the grid");

  py::class_<PencilMatrices>(m, "PencilMatrices")
      .def_readonly("m", &PencilMatrices::m)
      .def_readonly("sign", &PencilMatrices::sign);

  m.def("assemble_pencil", &assemble_pencil, py::arg("grid"), py::arg("potential"),
        py::arg("m") = 1.0, py::arg("sign") = 1,
        "raises InputError unless sup|e*Phi| < m");
  m.def("symbol_det", &symbol_det, py::arg("xi"), py::arg("eps"), py::arg("m") = 1.0);

  py::class_<GapPair>(m, "GapPair")
      .def_readonly("eps", &GapPair::eps)
      .def_readonly("u", &GapPair::u)
      .def_readonly("residual", &GapPair::residual)
      .def_readonly("boundary_mass", &GapPair::boundary_mass);

  py::class_<PencilSpectrum>(m, "PencilSpectrum")
      .def_readonly("reciprocal", &PencilSpectrum::reciprocal)
      .def_readonly("gap", &PencilSpectrum::gap)
      .def_readonly("delta_box", &PencilSpectrum::delta_box)
      .def_readonly("max_gap_inside", &PencilSpectrum::max_gap_inside);

  m.def("pencil_spectrum", &pencil_spectrum, py::arg("pencil"), py::arg("grid"),
        py::arg("boundary_threshold") = 0.05,
        "dense eigenvalues of the bounded reformulation, with bound states "
        "split from box artifacts");
  m.def("nearest_gap_state", &nearest_gap_state, py::arg("pencil"), py::arg("grid"),
        py::arg("sigma"), py::arg("max_iter") = 200, py::arg("tol") = 1e-10,
        "shift and invert iteration toward the gap eigenvalue nearest sigma");

  py::class_<WeylPacket>(m, "WeylPacket")
      .def_readonly("carrier", &WeylPacket::carrier)
      .def_readonly("width", &WeylPacket::width)
      .def_readonly("center", &WeylPacket::center)
      .def_readonly("polarization", &WeylPacket::polarization);

  m.def("make_weyl_packet", &make_weyl_packet, py::arg("grid"), py::arg("eps"), py::arg("m"),
        py::arg("sign"), py::arg("width"), py::arg("angle") = 0.0,
        py::arg("center") = Eigen::Vector2d(Eigen::Vector2d::Zero()),
        "windowed plane wave probing the essential spectrum at |eps| > m");
  m.def("weyl_residual", &weyl_residual, py::arg("packet"), py::arg("pencil"), py::arg("grid"),
        py::arg("eps"));

  py::class_<SquaredIdentityReport>(m, "SquaredIdentityReport")
      .def_readonly("residual", &SquaredIdentityReport::residual)
      .def_readonly("commutator_gap", &SquaredIdentityReport::commutator_gap);

  m.def("squared_identity_residual", &squared_identity_residual, py::arg("grid"),
        py::arg("potential"), py::arg("m") = 1.0, py::arg("sign") = 1, py::arg("eps") = 0.0,
        py::arg("seed") = 1,
        "checks delta_A d_A psi = curl_A^2 psi on a random grid vector");

  // radial channels
  py::class_<RadialGrid>(m, "RadialGrid")
      .def(py::init([](double r_max, int n) { return RadialGrid{r_max, n}; }), py::arg("r_max"),
           py::arg("n"))
      .def_readonly("r_max", &RadialGrid::r_max)
      .def_readonly("n", &RadialGrid::n)
      .def("h", &RadialGrid::h);

  py::class_<RadialChannel>(m, "RadialChannel")
      .def(py::init([](int k, int sign) { return RadialChannel{k, sign}; }), py::arg("k"),
           py::arg("sign") = 1)
      .def_readonly("k", &RadialChannel::k)
      .def_readonly("sign", &RadialChannel::sign)
      .def("n_kg", &RadialChannel::n_kg)
      .def("l_pauli", &RadialChannel::l_pauli);

  py::class_<ScaledPotential>(m, "ScaledPotential")
      .def_readwrite("alpha", &ScaledPotential::alpha)
      .def_static("gaussian", &ScaledPotential::gaussian, py::arg("alpha"))
      .def_static("gaussian_well", &ScaledPotential::gaussian_well, py::arg("depth"),
                  py::arg("radius"))
      .def_static("zero", &ScaledPotential::zero);

  py::class_<Tridiagonal>(m, "Tridiagonal")
      .def_readonly("diag", &Tridiagonal::diag)
      .def_readonly("off", &Tridiagonal::off);

  m.def(
      "assemble_radial_matrix",
      [](const std::string& eq, const RadialChannel& ch, const ScaledPotential& pot,
         const RadialGrid& grid, double spectral, double m_) {
        return assemble_radial_matrix(parse_equation(eq), ch, pot, grid, spectral, m_);
      },
      py::arg("equation"), py::arg("channel"), py::arg("potential"), py::arg("grid"),
      py::arg("spectral"), py::arg("m") = 1.0);

  py::class_<BoundState>(m, "BoundState")
      .def_readonly("eps", &BoundState::eps)
      .def_readonly("energy", &BoundState::energy)
      .def_readonly("g", &BoundState::g)
      .def_readonly("f", &BoundState::f)
      .def_readonly("nodes", &BoundState::nodes)
      .def_readonly("richardson", &BoundState::richardson)
      .def_readonly("tail", &BoundState::tail);

  m.def(
      "solve_bound_states",
      [](const std::string& eq, const RadialChannel& ch, const ScaledPotential& pot,
         const RadialGrid& grid, int count, double m_) {
        return solve_bound_states(parse_equation(eq), ch, pot, grid, count, m_);
      },
      py::arg("equation"), py::arg("channel"), py::arg("potential"), py::arg("grid"),
      py::arg("count") = 1, py::arg("m") = 1.0,
      "bound states between the branch edges, ground state first");

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("alpha", &SweepRow::alpha)
      .def_readonly("eps_model", &SweepRow::eps_model)
      .def_readonly("eps_kg", &SweepRow::eps_kg)
      .def_readonly("eps_pauli_plus_m", &SweepRow::eps_pauli_plus_m)
      .def_readonly("delta", &SweepRow::delta)
      .def_readonly("richardson_err", &SweepRow::richardson_err)
      .def_readonly("usable", &SweepRow::usable)
      .def_readonly("warning", &SweepRow::warning);

  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("rows", &SweepResult::rows)
      .def_readonly("exponent", &SweepResult::exponent)
      .def_readonly("exponent_stderr", &SweepResult::exponent_stderr)
      .def_readonly("usable_alphas", &SweepResult::usable_alphas)
      .def_readonly("reliable", &SweepResult::reliable)
      .def_readonly("exact_coincidence", &SweepResult::exact_coincidence)
      .def_readonly("e_ratio_spread", &SweepResult::e_ratio_spread)
      .def_readonly("pauli_exponent", &SweepResult::pauli_exponent);

  m.def("scaling_sweep", &scaling_sweep, py::arg("channel"), py::arg("shape"), py::arg("alphas"),
        py::arg("m") = 1.0,
        "ground state comparison across alphas on per alpha grids with "
        "r_max = 12/alpha");
}
