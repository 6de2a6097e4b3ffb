#pragma once

// Metrics and field output: ray-based radii, error norms, shape statistics,
// energies, connected components, CSV and legacy VTK writers.

#include "letpf/mesh.hpp"
#include "letpf/oracle.hpp"
#include "letpf/system.hpp"
#include "letpf/trajectory.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace letpf::post {

/// Point location on an arbitrary quadrilateral mesh (bucket grid plus
/// inverse bilinear map) and interpolation of nodal fields.
class FieldSampler {
 public:
  explicit FieldSampler(const Mesh& mesh);

  /// Element containing p with its reference coordinates.
  bool locate(const Vec2& p, int& element, double& xi, double& eta) const;
  /// Interpolated value of a nodal scalar field; empty outside the mesh.
  std::optional<double> sample(const Eigen::VectorXd& nodal, const Vec2& p) const;
  const Mesh& mesh() const { return *mesh_; }

 private:
  const Mesh* mesh_;
  Vec2 lo_;
  double cell_ = 1.0;
  int nx_ = 1;
  int ny_ = 1;
  std::vector<std::vector<int>> buckets_;
  std::vector<std::array<double, 4>> bbox_;  // xmin, xmax, ymin, ymax
};

enum class Crossing { Outermost, Innermost };

struct RayOptions {
  double step = 0.0;       // 0 selects h / 4
  double tolerance = 0.0;  // 0 selects 1e-3 h
  double r_max = 0.0;      // 0 selects the mesh diameter
  Crossing rule = Crossing::Outermost;
};

/// Distance from `origin` along direction `angle` to the phi = level
/// crossing; empty if the sampled ray has none.
std::optional<double> ray_crossing(const FieldSampler& sampler, const Eigen::VectorXd& phi, const Vec2& origin,
                                   double angle, const RayOptions& opts = {}, double level = 0.5);

/// n equally spaced angles covering [0, pi/2] inclusive (1 degree for n = 91).
std::vector<double> quarter_angles(int n = 91);

struct RadiusMeasurement {
  double rho_bar = 0.0;
  double cv = 0.0;
  std::vector<double> radii;  // rays with a crossing only
  int missing = 0;            // rays without a crossing
  bool vanished = false;      // no ray found a crossing
};

RadiusMeasurement mean_radius(const FieldSampler& sampler, const Eigen::VectorXd& phi, const Vec2& origin,
                              const std::vector<double>& angles, const RayOptions& opts = {});

/// Population standard deviation over mean.
double coefficient_of_variation(const std::vector<double>& values);

/// Mean CV over rho in [lo_fraction rho0, rho0], trapezoid rule on the
/// (rho, cv) samples (unordered; linear interpolation at the ends).
double mean_cv(const std::vector<double>& rho, const std::vector<double>& cv, double rho0,
               double lo_fraction = 0.15);

struct RelativeError {
  double value = 0.0;
  bool truncated = false;  // numerical radius never reached the lower bound
  double r_lo = 0.0;       // lower limit actually integrated from
  double r_hi = 0.0;
};

/// Integral of |tau_exact - tau_num| over integral of tau_exact on [r_lo, r_hi],
/// trapezoid rule on a uniform grid with n intervals.
double relative_error(const std::function<double(double)>& tau_num, const std::function<double(double)>& tau_exact,
                      double r_lo, double r_hi, int n = 4000);

/// Relative error of a numerical (t, rho) series against the oracle, over
/// [lo_fraction rho0, rho0]. The series is monotonized by a cumulative minimum;
/// increases larger than mono_tol (default 1e-6 rho0) raise std::runtime_error.
RelativeError relative_error(const std::vector<double>& t, const std::vector<double>& rho,
                             const oracle::Trajectory& exact, double rho0, double lo_fraction = 0.15,
                             double mono_tol = -1.0);

struct Energies {
  double elastic = 0.0;
  double interfacial = 0.0;
  double total() const { return elastic + interfacial; }
};

Energies total_energies(const System& sys, const State& state);

/// Integral of h(phi) over the domain divided by its area.
double phase2_fraction(const System& sys, const State& state);
double max_deviation_from_half(const State& state);

/// Connected components (edge adjacency) of elements whose mean nodal phi
/// exceeds `level`. Returns -1 for elements outside the set; labels are
/// 0..count-1 in order of the smallest element index.
std::vector<int> phase_components(const Mesh& mesh, const Eigen::VectorXd& phi, int& count, double level = 0.5);

/// Follows features through successive component labelings. A feature
/// starts as the component containing its seed element and afterwards keeps
/// the current component that overlaps most with its previous one. Label -1
/// once it has vanished.
class ComponentTracker {
 public:
  explicit ComponentTracker(std::vector<int> seed_elements);
  const std::vector<int>& update(const std::vector<int>& labels, int count);
  const std::vector<int>& current() const { return current_; }

 private:
  std::vector<int> seeds_;
  std::vector<std::vector<int>> members_;
  std::vector<int> current_;
  bool started_ = false;
};

void write_csv(const Trajectory& traj, const std::string& path);
Trajectory read_csv(const std::string& path);

void write_vtk(const System& sys, const State& state, const std::string& path);

}  // namespace letpf::post
