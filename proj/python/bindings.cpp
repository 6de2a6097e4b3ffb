// Python module: configuration, runs, oracle, laminate and CSV helpers.
// JSON values cross the boundary as Python dicts via the json module.

#include "letpf/config.hpp"
#include "letpf/laminate.hpp"
#include "letpf/oracle.hpp"
#include "letpf/postproc.hpp"
#include "letpf/scenarios.hpp"
#include "letpf/errors.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using nlohmann::json;

namespace {

json to_cpp(const py::object& o) {
  const auto dumps = py::module_::import("json").attr("dumps");
  return json::parse(dumps(o).cast<std::string>());
}

py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

py::dict trajectory_dict(const letpf::Trajectory& tr) {
  std::vector<double> t, dt, rho, cv, el, in, tot;
  std::vector<int> it;
  for (const auto& r : tr) {
    t.push_back(r.t);
    dt.push_back(r.dt);
    it.push_back(r.newton_iters);
    rho.push_back(r.rho_bar);
    cv.push_back(r.cv_rho);
    el.push_back(r.psi_el);
    in.push_back(r.psi_int);
    tot.push_back(r.psi_total);
  }
  py::dict d;
  d["t"] = t;
  d["dt"] = dt;
  d["newton_iters"] = it;
  d["rho_bar"] = rho;
  d["cv_rho"] = cv;
  d["psi_el"] = el;
  d["psi_int"] = in;
  d["psi_total"] = tot;
  return d;
}

letpf::PhasePair phases_from(const py::list& ph) {
  if (py::len(ph) != 2) throw py::value_error("expected two phases");
  letpf::PhasePair p;
  for (int i = 0; i < 2; ++i) {
    const auto d = ph[i].cast<py::dict>();
    const double E = d["E"].cast<double>(), nu = d["nu"].cast<double>();
    const auto e = d["eigenstrain"].cast<std::array<double, 3>>();
    p[i].stiffness = letpf::isotropic_stiffness(E, nu);
    p[i].eigenstrain = {e[0], e[1], e[2]};
    p[i].psi0 = d.contains("psi0") ? d["psi0"].cast<double>() : 0.0;
  }
  return p;
}

std::array<double, 3> arr(const letpf::SymTensor2& s) { return {s.xx, s.yy, s.xy}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Phase-field and laminated-element phase-field solver";
  py::register_exception<letpf::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<letpf::SolverError>(m, "SolverError", PyExc_RuntimeError);

  m.def("resolve_config", [](const py::object& cfg) { return to_py(letpf::to_json(letpf::parse_config(to_cpp(cfg)))); },
        py::arg("config"), "Validate a configuration dict and return it with all defaults filled in.");

  m.def("scenario_defaults", [](const std::string& s) { return to_py(letpf::scenario_defaults(letpf::parse_scenario(s))); });

  m.def(
      "run",
      [](const py::object& cfg, bool write_outputs) {
        const auto c = letpf::parse_config(to_cpp(cfg));
        letpf::RunOptions opts;
        opts.write_outputs = write_outputs;
        letpf::RunResult res;
        {
          py::gil_scoped_release release;
          res = letpf::run_simulation(c, opts);
        }
        py::dict d;
        d["ok"] = res.ok;
        d["failure"] = res.failure;
        d["report"] = to_py(res.report);
        d["trajectory"] = trajectory_dict(res.trajectory);
        return d;
      },
      py::arg("config"), py::arg("write_outputs") = false, "Run one simulation; returns report and trajectory.");

  m.def(
      "oracle_trajectory",
      [](double E, double nu, double R, double rho0, double eps, double gamma, double m_hat, double rho_stop) {
        const auto p = letpf::oracle::OracleParams::homogeneous(E, nu, R, rho0, eps, gamma, m_hat);
        p.validate();
        const auto tr = letpf::oracle::integrate_trajectory(p, rho_stop);
        py::dict d;
        d["t"] = tr.t;
        d["rho"] = tr.rho;
        d["rho_dot"] = tr.rho_dot;
        d["T_exact"] = tr.T_exact;
        return d;
      },
      py::arg("E") = 1.0, py::arg("nu") = 0.25, py::arg("R") = 2.0, py::arg("rho0") = 1.0, py::arg("eps") = 0.1,
      py::arg("gamma") = 0.0008, py::arg("m_hat") = 1.0, py::arg("rho_stop") = 0.15);

  m.def(
      "dimensionless_A",
      [](double E, double nu, double rho0, double eps, double gamma) {
        return letpf::oracle::dimensionless_A(letpf::oracle::OracleParams::homogeneous(E, nu, 2.0 * rho0, rho0, eps, gamma, 1.0));
      },
      py::arg("E") = 1.0, py::arg("nu") = 0.25, py::arg("rho0") = 1.0, py::arg("eps") = 0.1, py::arg("gamma"));

  m.def(
      "solve_laminate",
      [](std::array<double, 3> eps, double eta, std::array<double, 2> n, const py::list& phases) {
        const auto s = letpf::solve_laminate({eps[0], eps[1], eps[2]}, eta, {n[0], n[1]}, phases_from(phases));
        py::dict d;
        d["c"] = std::array<double, 2>{s.c.x, s.c.y};
        d["eps1"] = arr(s.eps1);
        d["eps2"] = arr(s.eps2);
        d["sigma1"] = arr(s.sigma1);
        d["sigma2"] = arr(s.sigma2);
        d["sigma_bar"] = arr(s.sigma_bar);
        d["psi_bar"] = s.psi_bar;
        d["dpsi_deta"] = s.dpsi_deta;
        d["dpsi_dn"] = std::array<double, 2>{s.dpsi_dn.x, s.dpsi_dn.y};
        return d;
      },
      py::arg("eps_bar"), py::arg("eta"), py::arg("normal"), py::arg("phases"),
      "Rank-one laminate; strains in tensor components (xx, yy, xy); phases are dicts with E, nu, eigenstrain.");

  m.def("volume_fraction", &letpf::volume_fraction, py::arg("phi"), py::arg("phi_reg"));

  m.def("read_trajectory", [](const std::string& path) { return trajectory_dict(letpf::post::read_csv(path)); });
}
