#pragma once

// Sharp-interface solution of a shrinking circular inclusion (phase 1,
// eigenstrain eps*I) in a free circular domain of radius R (phase 2).

#include "letpf/tensor.hpp"

#include <string>
#include <vector>

namespace letpf::oracle {

struct OracleParams {
  double R = 2.0;
  double rho0 = 1.0;
  double eps = 0.1;
  double gamma = 0.0008;
  double m_hat = 1.0;
  Lame inclusion;  // phase 1
  Lame matrix;     // phase 2

  /// Identical isotropic phases from Young's modulus and Poisson's ratio.
  static OracleParams homogeneous(double E, double nu, double R, double rho0, double eps, double gamma,
                                  double m_hat);
  bool equal_moduli() const;
  void validate() const;
};

/// Fraction of the eigenstrain recovered elastically in the inclusion.
double recovered_fraction(double rho, const OracleParams& p);
double radial_displacement(double r, double rho, const OracleParams& p);
/// Radial stress from the Lamé solution; `inside` selects the side of r = rho.
double radial_stress(double r, double rho, const OracleParams& p, bool inside);

double elastic_energy(double rho, const OracleParams& p);
/// Closed form for identical phases.
double elastic_energy_homogeneous(double rho, const OracleParams& p);
double total_energy(double rho, const OracleParams& p);
/// d(total energy)/d(rho), Richardson-extrapolated central differences.
double total_energy_derivative(double rho, const OracleParams& p);

/// E eps^2 / (1 - nu^2) for identical phases, computed from Lamé constants.
double plane_strain_modulus(const OracleParams& p);

struct DrivingForces {
  double bulk = 0.0;
  double interfacial = 0.0;
};
/// Local driving forces (identical phases); rho_dot = -m_hat (bulk + interfacial).
DrivingForces driving_forces(double rho, const OracleParams& p);

struct RatePotential {
  double pi_hat = 0.0;     // rate potential at the trial rate
  double rho_dot = 0.0;    // minimizer
  double pi_min = 0.0;     // potential at the minimizer
  double dissipation = 0.0;  // global dissipation potential at the minimizer
};
RatePotential rate_from_potential(double rho, double rho_dot_trial, const OracleParams& p);

/// Closed-form evolution law for identical phases.
double rho_dot_closed_form(double rho, const OracleParams& p);

double dimensionless_A(const OracleParams& p);

struct Trajectory {
  std::vector<double> t;
  std::vector<double> rho;
  std::vector<double> rho_dot;
  double T_exact = 0.0;
  double rho_stop = 0.0;

  /// Time at which the radius equals r (cubic Hermite in rho).
  double time_at_radius(double r) const;
  /// Radius at time s (cubic Hermite in t), clamped to the table range.
  double radius_at_time(double s) const;
};

struct IntegrationOptions {
  double rtol = 1e-10;
  double atol = 1e-13;
  /// Use the variational (rate-potential) route instead of the closed form.
  bool general_moduli = false;
};

/// Adaptive Dormand-Prince 5(4) integration from rho0 down to rho_stop.
Trajectory integrate_trajectory(const OracleParams& p, double rho_stop, const IntegrationOptions& opts = {});

/// CSV with columns t, rho, f_bulk, f_int.
void write_trajectory_csv(const Trajectory& tr, const OracleParams& p, const std::string& path);

}  // namespace letpf::oracle
