#pragma once

// Monolithic Newton solver and backward-Euler time stepping with adaptive
// increment control.

#include "letpf/system.hpp"
#include "letpf/trajectory.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>

namespace letpf {

struct NewtonOptions {
  int max_iterations = 25;
  /// Converged when |R_u| <= tol (1 + ref_u) and |R_phi| <= tol (1 + ref_phi),
  /// ref_* being the largest norms seen in the current solve.
  double tolerance = 1e-9;
  /// Hold all phi DOFs fixed (mechanical equilibrium only).
  bool freeze_phi = false;
};

struct NewtonResult {
  bool converged = false;
  int iterations = 0;
  double residual_u = 0.0;
  double residual_phi = 0.0;
  std::vector<double> history;  // |R| per iteration
};

/// Sparse direct solver that reuses the symbolic factorization while the
/// sparsity pattern stays fixed.
class LinearSolver {
 public:
  LinearSolver();
  ~LinearSolver();
  LinearSolver(LinearSolver&&) noexcept;
  LinearSolver& operator=(LinearSolver&&) noexcept;

  /// Returns false if the factorization fails.
  bool solve(const SparseMatrix& K, const Eigen::VectorXd& rhs, Eigen::VectorXd& x);
  static const char* backend();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One backward-Euler step of size dt from `state` (phi_prev taken from
/// state.phi_prev). On failure `state` is left untouched.
NewtonResult newton_solve(const System& sys, State& state, double dt, const NewtonOptions& opts,
                          LinearSolver& linear);

struct StepControl {
  double dt_initial = 0.0;  // 0 selects dt_max
  double dt_max = 1.0;
  double dt_min = 0.0;      // 0 selects 1e-12 * t_end
  double t_end = 1.0;
  double growth = 1.2;
  double cut = 0.5;
  int grow_iterations = 6;  // grow when iterations <= this
  int cut_iterations = 12;  // cut when iterations > this
  NewtonOptions newton;
};

struct StepInfo {
  double t = 0.0;
  double dt = 0.0;
  int iterations = 0;
  std::vector<ElementClass> classes;
};

struct EvolutionCallbacks {
  /// Fills metric columns of the row for an accepted state.
  std::function<void(const State&, TrajectoryRow&)> measure;
  /// Returns true to stop after the current accepted step.
  std::function<bool(const State&, const TrajectoryRow&, const State& previous)> stop;
  /// Invoked after every accepted step (snapshots, logging).
  std::function<void(const State&, const TrajectoryRow&)> on_accept;
};

struct EvolutionResult {
  Trajectory trajectory;
  bool completed = false;       // reached t_end or the stop predicate
  bool stopped_by_predicate = false;
  std::string failure;          // non-empty if the run aborted
  int accepted_steps = 0;
  int rejected_steps = 0;
  State final_state;
};

/// Solves mechanical equilibrium for the current phi (phi held fixed).
NewtonResult equilibrate(const System& sys, State& state, LinearSolver& linear, const NewtonOptions& opts = {});

/// Time integration loop. The initial state is first equilibrated
/// mechanically and recorded as row 0.
EvolutionResult run_evolution(const System& sys, State state, const StepControl& control,
                              const EvolutionCallbacks& callbacks);

}  // namespace letpf
