#include "letpf/solver.hpp"

#include "letpf/errors.hpp"

#include <Eigen/SparseLU>
#ifdef LETPF_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif

#include <algorithm>
#include <cmath>

namespace letpf {

struct LinearSolver::Impl {
#ifdef LETPF_HAVE_UMFPACK
  Eigen::UmfPackLU<SparseMatrix> lu;
#else
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
#endif
  Eigen::Index nnz = -1;
  Eigen::Index rows = -1;
};

LinearSolver::LinearSolver() : impl_(std::make_unique<Impl>()) {}
LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

const char* LinearSolver::backend() {
#ifdef LETPF_HAVE_UMFPACK
  return "umfpack";
#else
  return "eigen-sparselu";
#endif
}

bool LinearSolver::solve(const SparseMatrix& K, const Eigen::VectorXd& rhs, Eigen::VectorXd& x) {
  if (K.nonZeros() != impl_->nnz || K.rows() != impl_->rows) {
    impl_->lu.analyzePattern(K);
    impl_->nnz = K.nonZeros();
    impl_->rows = K.rows();
  }
  impl_->lu.factorize(K);
  if (impl_->lu.info() != Eigen::Success) return false;
  x = impl_->lu.solve(rhs);
  return impl_->lu.info() == Eigen::Success && x.allFinite();
}

namespace {

void split_norms(const System& sys, const Eigen::VectorXd& r, const std::vector<char>* extra, double& nu,
                 double& nphi) {
  double su = 0.0;
  double sp = 0.0;
  for (int i = 0; i < r.size(); ++i) {
    if (sys.is_dirichlet(i) || (extra && (*extra)[i])) continue;
    if (i % 3 == 2) {
      sp += r[i] * r[i];
    } else {
      su += r[i] * r[i];
    }
  }
  nu = std::sqrt(su);
  nphi = std::sqrt(sp);
}

}  // namespace

NewtonResult newton_solve(const System& sys, State& state, double dt, const NewtonOptions& opts,
                          LinearSolver& linear) {
  NewtonResult res;
  Eigen::VectorXd p = state.p;
  Eigen::VectorXd R;
  SparseMatrix K = sys.pattern();
  Eigen::VectorXd dp;

  std::vector<char> frozen;
  if (opts.freeze_phi) {
    frozen.assign(sys.num_dofs(), 0);
    for (int i = 2; i < sys.num_dofs(); i += 3) frozen[i] = 1;
  }
  const std::vector<char>* extra = opts.freeze_phi ? &frozen : nullptr;
  // A frozen-phi solve is a pure equilibrium problem; the viscous term is
  // irrelevant, so any positive dt works.
  const double dt_eff = dt > 0.0 ? dt : 1.0;

  double ref_u = 0.0;
  double ref_phi = 0.0;
  for (int it = 0; it <= opts.max_iterations; ++it) {
    sys.assemble(p, state.phi_prev, dt_eff, R, K);
    // Prescribed values are enforced through the increment on the first
    // pass; residual entries of constrained DOFs are reactions.
    double nu = 0.0;
    double nphi = 0.0;
    split_norms(sys, R, extra, nu, nphi);
    bool bc_satisfied = true;
    for (const auto& bc : sys.dirichlet()) bc_satisfied = bc_satisfied && p[bc.dof] == bc.value;
    ref_u = std::max(ref_u, nu);
    ref_phi = std::max(ref_phi, nphi);
    res.history.push_back(std::hypot(nu, nphi));
    res.residual_u = nu;
    res.residual_phi = nphi;
    if (!std::isfinite(nu) || !std::isfinite(nphi)) break;
    if (bc_satisfied && nu <= opts.tolerance * (1.0 + ref_u) && nphi <= opts.tolerance * (1.0 + ref_phi)) {
      res.converged = true;
      res.iterations = it;
      state.p = p;
      return res;
    }
    if (it == opts.max_iterations) break;
    const Eigen::VectorXd rhs = sys.apply_dirichlet(K, R, p, extra);
    if (!linear.solve(K, rhs, dp)) break;
    p += dp;
  }
  res.converged = false;
  res.iterations = static_cast<int>(res.history.size()) - 1;
  return res;
}

NewtonResult equilibrate(const System& sys, State& state, LinearSolver& linear, const NewtonOptions& opts) {
  NewtonOptions o = opts;
  o.freeze_phi = true;
  return newton_solve(sys, state, 0.0, o, linear);
}

EvolutionResult run_evolution(const System& sys, State state, const StepControl& control,
                              const EvolutionCallbacks& callbacks) {
  if (!(control.dt_max > 0.0)) throw ConfigError("dt_max must be positive");
  if (!(control.t_end > 0.0)) throw ConfigError("t_end must be positive");
  EvolutionResult out;
  LinearSolver linear;

  const double dt_min = control.dt_min > 0.0 ? control.dt_min : 1e-12 * control.t_end;
  double dt = control.dt_initial > 0.0 ? std::min(control.dt_initial, control.dt_max) : control.dt_max;

  auto eq = equilibrate(sys, state, linear, control.newton);
  if (!eq.converged) {
    out.failure = "initial mechanical equilibrium did not converge";
    out.final_state = state;
    return out;
  }
  TrajectoryRow row0;
  row0.t = state.t;
  row0.newton_iters = eq.iterations;
  if (callbacks.measure) callbacks.measure(state, row0);
  out.trajectory.push_back(row0);
  if (callbacks.on_accept) callbacks.on_accept(state, row0);

  while (state.t < control.t_end * (1.0 - 1e-12)) {
    const double step = std::min(dt, control.t_end - state.t);
    State trial = state;
    trial.phi_prev = state.phi_field();
    const auto nr = newton_solve(sys, trial, step, control.newton, linear);
    if (!nr.converged) {
      ++out.rejected_steps;
      dt = step * control.cut;
      if (dt < dt_min) {
        out.failure = "time increment fell below dt_min at t = " + std::to_string(state.t);
        break;
      }
      continue;
    }
    const State previous = std::move(state);
    state = std::move(trial);
    state.t = previous.t + step;
    ++out.accepted_steps;

    TrajectoryRow row;
    row.t = state.t;
    row.dt = step;
    row.newton_iters = nr.iterations;
    if (callbacks.measure) callbacks.measure(state, row);
    out.trajectory.push_back(row);
    if (callbacks.on_accept) callbacks.on_accept(state, row);

    if (nr.iterations <= control.grow_iterations) {
      dt = std::min(step * control.growth, control.dt_max);
    } else if (nr.iterations > control.cut_iterations) {
      dt = std::max(step * control.cut, dt_min);
    } else {
      dt = step;
    }
    if (callbacks.stop && callbacks.stop(state, row, previous)) {
      out.stopped_by_predicate = true;
      break;
    }
  }
  out.completed = out.failure.empty();
  out.final_state = std::move(state);
  return out;
}

}  // namespace letpf
