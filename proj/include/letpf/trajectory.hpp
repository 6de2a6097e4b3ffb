#pragma once

#include <string>
#include <vector>

namespace letpf {

struct TrajectoryRow {
  double t = 0.0;
  double dt = 0.0;
  int newton_iters = 0;
  double rho_bar = 0.0;
  double cv_rho = 0.0;
  double psi_el = 0.0;
  double psi_int = 0.0;
  double psi_total = 0.0;
};

using Trajectory = std::vector<TrajectoryRow>;

/// Column order of the trajectory CSV.
inline const std::vector<std::string>& trajectory_columns() {
  static const std::vector<std::string> cols = {"t",     "dt",      "newton_iters", "rho_bar",
                                                "cv_rho", "psi_el", "psi_int",      "psi_total"};
  return cols;
}

}  // namespace letpf
