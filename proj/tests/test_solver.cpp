#include "doctest.h"
#include "support.hpp"

#include "letpf/postproc.hpp"
#include "letpf/solver.hpp"

using namespace letpf;

namespace {

Material inclusion_material(bool identical = false) {
  Material mat;
  mat.phases[0].stiffness = isotropic_stiffness(1.0, 0.25);
  mat.phases[1].stiffness = identical ? mat.phases[0].stiffness : isotropic_stiffness(1.5, 0.3);
  mat.phases[0].eigenstrain = {-0.05, -0.05, 0.0};
  mat.phases[1].eigenstrain = {0.05, 0.05, 0.0};
  mat.interface = InterfaceParams::make(0.002, 0.08, 1.0);
  return mat;
}

std::vector<DirichletBC> clamp(const Mesh& m) {
  std::vector<DirichletBC> bcs;
  for (int k : m.node_set("all")) {
    bcs.push_back({3 * k, 0.0});
    bcs.push_back({3 * k + 1, 0.0});
  }
  return bcs;
}

std::vector<double> disc(const Mesh& m, double r, double ell) {
  std::vector<double> phi(m.num_nodes());
  for (int k = 0; k < m.num_nodes(); ++k) phi[k] = 1.0 - equilibrium_profile((m.nodes[k] - Vec2{0.5, 0.5}).norm(), r, ell);
  return phi;
}

}  // namespace

TEST_CASE("linear elasticity converges in one iteration") {
  const Mesh m = build_square_grid(1.0, 12);
  for (Method method : {Method::PFM, Method::LETPF}) {
    const System sys(m, inclusion_material(), method, clamp(m));
    // Uniform eigenstrain in a clamped box: u = 0 solves the problem.
    State s = make_state(m, std::vector<double>(m.num_nodes(), 1.0));
    LinearSolver lin;
    auto r = equilibrate(sys, s, lin);
    CHECK(r.converged);
    CHECK(r.iterations == 0);
    // Frozen phi: the mechanical problem is linear.
    s = make_state(m, disc(m, 0.25, 0.1));
    r = equilibrate(sys, s, lin);
    CHECK(r.converged);
    CHECK(r.iterations == 1);
    CHECK(s.u_field().cwiseAbs().maxCoeff() > 1e-4);
  }
}

TEST_CASE("Newton converges quadratically") {
  const Mesh m = build_square_grid(1.0, 16);
  for (Method method : {Method::PFM, Method::LETPF}) {
    const System sys(m, inclusion_material(), method, clamp(m));
    State s = make_state(m, disc(m, 0.25, 0.08));
    LinearSolver lin;
    REQUIRE(equilibrate(sys, s, lin).converged);
    s.phi_prev = s.phi_field();
    NewtonOptions o;
    o.tolerance = 1e-13;
    const auto r = newton_solve(sys, s, 2.0, o, lin);
    CAPTURE(static_cast<int>(method));
    REQUIRE(r.converged);
    const auto& h = r.history;
    // Some step in the asymptotic range must square the relative residual.
    bool quadratic = false;
    for (size_t k = 1; k + 1 < h.size(); ++k) {
      const double a = h[k] / h[0], b = h[k + 1] / h[0];
      if (a < 1e-2 && b > 1e-14 && std::log(b) / std::log(a) > 1.8) quadratic = true;
    }
    CHECK(quadratic);
  }
}

TEST_CASE("failed solve leaves the state unchanged") {
  const Mesh m = build_square_grid(1.0, 10);
  const System sys(m, inclusion_material(), Method::LETPF, clamp(m));
  State s = make_state(m, disc(m, 0.25, 0.1));
  const State before = s;
  NewtonOptions o;
  o.max_iterations = 1;
  o.tolerance = 1e-30;
  LinearSolver lin;
  const auto r = newton_solve(sys, s, 5.0, o, lin);
  CHECK_FALSE(r.converged);
  CHECK(s.p == before.p);
  CHECK(s.phi_prev == before.phi_prev);
  CHECK(s.t == before.t);
}

TEST_CASE("no driving force keeps phi stationary") {
  const Mesh m = build_square_grid(1.0, 8);
  Material mat = inclusion_material(true);
  mat.phases[0].eigenstrain = mat.phases[1].eigenstrain = {};
  for (Method method : {Method::PFM, Method::LETPF}) {
    const System sys(m, mat, method, clamp(m));
    for (double v : {0.0, 1.0}) {
      State s = make_state(m, std::vector<double>(m.num_nodes(), v));
      StepControl c;
      c.dt_max = 0.5;
      c.t_end = 3.0;
      const auto out = run_evolution(sys, s, c, {});
      CHECK(out.completed);
      CHECK((out.final_state.phi_field().array() - v).abs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("total energy does not increase") {
  const Mesh m = build_square_grid(1.0, 20);
  for (Method method : {Method::PFM, Method::LETPF}) {
    const System sys(m, inclusion_material(), method, clamp(m));
    StepControl c;
    c.dt_max = 1.0;
    c.t_end = 15.0;
    EvolutionCallbacks cb;
    cb.measure = [&](const State& st, TrajectoryRow& row) {
      const auto e = post::total_energies(sys, st);
      row.psi_el = e.elastic;
      row.psi_int = e.interfacial;
      row.psi_total = e.total();
    };
    const auto out = run_evolution(sys, make_state(m, disc(m, 0.2, 0.08)), c, cb);
    REQUIRE(out.completed);
    CAPTURE(static_cast<int>(method));
    CHECK(out.trajectory.size() > 5);
    for (size_t i = 1; i < out.trajectory.size(); ++i) {
      CHECK(out.trajectory[i].psi_total <= out.trajectory[i - 1].psi_total * (1 + 1e-10));
    }
    CHECK(out.trajectory.back().psi_total < out.trajectory.front().psi_total);
  }
}

TEST_CASE("identical stress-free phases: PFM and LET-PF trajectories coincide") {
  const Mesh m = build_square_grid(1.0, 12);
  Material mat = inclusion_material(true);
  mat.phases[0].eigenstrain = mat.phases[1].eigenstrain = {};
  StepControl c;
  c.dt_max = 0.5;
  c.t_end = 5.0;
  const auto phi0 = disc(m, 0.25, 0.08);
  const auto a = run_evolution(System(m, mat, Method::PFM, clamp(m)), make_state(m, phi0), c, {});
  const auto b = run_evolution(System(m, mat, Method::LETPF, clamp(m)), make_state(m, phi0), c, {});
  REQUIRE(a.trajectory.size() == b.trajectory.size());
  CHECK((a.final_state.p - b.final_state.p).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("Dirichlet values are held") {
  const Mesh m = build_square_grid(1.0, 8);
  std::vector<DirichletBC> bcs;
  for (int k : m.node_set("left")) {
    bcs.push_back({3 * k, 0.0});
    bcs.push_back({3 * k + 1, 0.0});
  }
  for (int k : m.node_set("right")) bcs.push_back({3 * k, 0.01});
  for (Method method : {Method::PFM, Method::LETPF}) {
    const System sys(m, inclusion_material(), method, bcs);
    StepControl c;
    c.dt_max = 0.5;
    c.t_end = 1.0;
    const auto out = run_evolution(sys, make_state(m, disc(m, 0.3, 0.1)), c, {});
    REQUIRE(out.completed);
    for (const auto& bc : bcs) CHECK(out.final_state.p[bc.dof] == bc.value);
  }
}

TEST_CASE("step control grows the increment up to dt_max") {
  const Mesh m = build_square_grid(1.0, 8);
  const System sys(m, inclusion_material(), Method::PFM, clamp(m));
  StepControl c;
  c.dt_initial = 0.01;
  c.dt_max = 0.1;
  c.t_end = 2.0;
  const auto out = run_evolution(sys, make_state(m, disc(m, 0.3, 0.1)), c, {});
  REQUIRE(out.completed);
  CHECK(out.trajectory[0].t == 0.0);
  CHECK(out.trajectory[1].dt == doctest::Approx(0.01));
  CHECK(out.trajectory[2].dt == doctest::Approx(0.012));
  double tmax = 0;
  for (const auto& r : out.trajectory) tmax = std::max(tmax, r.dt);
  CHECK(tmax <= 0.1 + 1e-15);
  CHECK(out.trajectory.back().t == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("linear solver backend is reported") {
  const std::string b = LinearSolver::backend();
  CHECK((b == "umfpack" || b == "eigen-sparselu"));
}
