#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bishopdisc/bishop.hpp"
#include "bishopdisc/dbar_solver.hpp"
#include "bishopdisc/families.hpp"
#include "bishopdisc/grid.hpp"
#include "bishopdisc/integral_ops.hpp"
#include "bishopdisc/io.hpp"
#include "bishopdisc/scenarios.hpp"

namespace py = pybind11;
using namespace bishopdisc;

namespace {

// Descriptors cross the boundary as JSON text; the Python side wraps them in dicts.
AlmostComplexStructure structure(const std::string& text) { return structure_from_json(json::parse(text)); }
GenericSubmanifold manifold(const std::string& text) { return manifold_from_json(json::parse(text)); }

Disc make_disc(const std::vector<DiscFunction>& comps) {
  if (comps.empty()) throw Error("a disc needs at least one component");
  return Disc(comps);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Pseudoholomorphic Bishop discs: Cauchy-Green calculus, Beltrami-type solver, disc families.";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  py::class_<DiscGrid, std::shared_ptr<DiscGrid>>(m, "DiscGrid")
      .def(py::init<int, int>(), py::arg("n_theta") = 128, py::arg("n_r") = 48)
      .def_property_readonly("n_theta", &DiscGrid::n_theta)
      .def_property_readonly("n_r", &DiscGrid::n_r)
      .def_property_readonly("radii", &DiscGrid::radii)
      .def("nodes", [](const DiscGrid& g) {
        Eigen::MatrixXcd z(g.n_rings(), g.n_theta());
        for (int r = 0; r < g.n_rings(); ++r)
          for (int k = 0; k < g.n_theta(); ++k) z(r, k) = g.node(r, k);
        return z;
      });

  py::class_<DiscFunction>(m, "DiscFunction")
      .def(py::init([](std::shared_ptr<DiscGrid> g, const Eigen::MatrixXcd& v) { return DiscFunction(g, v); }),
           py::arg("grid"), py::arg("values"))
      .def_static("from_function",
                  [](std::shared_ptr<DiscGrid> g, const std::function<cplx(cplx)>& f) {
                    return DiscFunction::from_function(g, f);
                  })
      .def_property_readonly("values", [](const DiscFunction& f) { return Eigen::MatrixXcd(f.values()); })
      .def("eval", &DiscFunction::eval)
      .def("sup", &DiscFunction::sup)
      .def("__sub__", &DiscFunction::operator-)
      .def("__add__", &DiscFunction::operator+);

  m.def("cauchy_green", &cauchy_green, "T_CG g on the grid of g.");
  m.def("dbar", &dbar_numeric);
  m.def("dzeta", &dzeta_numeric);
  m.def(
      "schwarz",
      [](const Eigen::VectorXd& h) { return Eigen::VectorXcd(schwarz(BoundarySignal::from_real(h)).taylor()); },
      py::arg("boundary_samples"), "Taylor coefficients of F with Re F = h on the circle and Im F(0) = 0.");
  m.def("q_matrix", py::overload_cast<const RMat&, double>(&q_matrix), py::arg("j"), py::arg("tol") = 1e-9);

  m.def(
      "phi_forward",
      [](const std::vector<DiscFunction>& f, const std::string& j) {
        return phi_forward(make_disc(f), structure(j)).components;
      },
      py::arg("disc"), py::arg("structure"));
  m.def(
      "phi_inverse",
      [](const std::vector<DiscFunction>& g, const std::string& j, double tol) {
        PhiInverseConfig cfg;
        cfg.tol = tol;
        auto res = phi_inverse(make_disc(g), structure(j), cfg);
        py::dict out;
        out["disc"] = res.f.components;
        out["iterations"] = res.iterations;
        out["contraction"] = res.contraction;
        out["residual"] = res.residual;
        return out;
      },
      py::arg("disc"), py::arg("structure"), py::arg("tol") = 1e-10);
  m.def(
      "jholo_residual_sup",
      [](const std::vector<DiscFunction>& f, const std::string& j) { return jholo_residual_sup(make_disc(f), structure(j)); },
      py::arg("disc"), py::arg("structure"));

  m.def(
      "solve_bishop",
      [](const std::string& j, const std::string& e, const std::vector<Eigen::VectorXcd>& w, const RVec& c,
         std::shared_ptr<DiscGrid> grid) {
        BishopParams p;
        for (const auto& t : w) p.w.emplace_back(t);
        p.c = c;
        auto sol = solve_bishop(structure(j), manifold(e), p, grid);
        py::dict out;
        out["disc"] = sol.f.components;
        out["boundary_residual"] = sol.boundary_residual;
        out["interior_residual"] = sol.interior_residual;
        out["outer_iterations"] = sol.outer_iterations;
        return out;
      },
      py::arg("structure"), py::arg("manifold"), py::arg("w"), py::arg("c"), py::arg("grid"),
      "w: Taylor coefficients of each holomorphic w-component; c: Im z(0).");

  m.def(
      "boggess_pitts_point",
      [](double t, double lambda, const RVec& y, cplx c, int n, cplx zeta) {
        FamilyParams p;
        p.t = t;
        p.lambda = lambda;
        p.y = y;
        p.c = CVec::Constant(1, c);
        return CVec(boggess_pitts_point(p, n, zeta));
      },
      py::arg("t"), py::arg("lam"), py::arg("y"), py::arg("c"), py::arg("n"), py::arg("zeta"));
  m.def(
      "attachment_ranks",
      [](double t, int n) {
        return std::make_pair(bp_attach_jacobian(t, n).rank.rank, bp_attachment_map_rank(t, n).rank);
      },
      py::arg("t"), py::arg("n"));

  m.def(
      "run_scenario",
      [](const std::string& text, int jobs) {
        auto cfg = ScenarioConfig::from_json(json::parse(text));
        cfg.jobs = jobs;
        py::gil_scoped_release release;
        return dump_report(run_scenario(cfg).to_json());
      },
      py::arg("config"), py::arg("jobs") = 1, "Runs a scenario and returns the report as JSON text.");
}
