#include "letpf/oracle.hpp"

#include "letpf/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <stdexcept>

namespace letpf::oracle {

namespace {
constexpr double kPi = std::numbers::pi;
}

OracleParams OracleParams::homogeneous(double E, double nu, double R, double rho0, double eps, double gamma,
                                       double m_hat) {
  OracleParams p;
  p.R = R;
  p.rho0 = rho0;
  p.eps = eps;
  p.gamma = gamma;
  p.m_hat = m_hat;
  p.inclusion = lame_from_young(E, nu);
  p.matrix = p.inclusion;
  return p;
}

bool OracleParams::equal_moduli() const {
  return inclusion.lambda == matrix.lambda && inclusion.mu == matrix.mu;
}

void OracleParams::validate() const {
  if (!(rho0 > 0.0 && rho0 < R)) throw ConfigError("oracle requires 0 < rho0 < R");
  if (!(inclusion.mu > 0.0 && matrix.mu > 0.0)) throw ConfigError("oracle requires positive shear moduli");
  if (!(inclusion.lambda + inclusion.mu > 0.0 && matrix.lambda + matrix.mu > 0.0)) {
    throw ConfigError("oracle requires positive plane-strain bulk moduli");
  }
  if (!(gamma >= 0.0) || !(m_hat > 0.0)) throw ConfigError("oracle requires gamma >= 0 and m_hat > 0");
}

double recovered_fraction(double rho, const OracleParams& p) {
  const double l1 = p.inclusion.lambda, m1 = p.inclusion.mu;
  const double l2 = p.matrix.lambda, m2 = p.matrix.mu;
  const double R2 = p.R * p.R;
  const double r2 = rho * rho;
  return m2 * (l2 + m2) * (R2 - r2) / (m2 * (l1 - l2 + m1 - m2) * r2 + (l2 + m2) * (l1 + m1 + m2) * R2);
}

double radial_displacement(double r, double rho, const OracleParams& p) {
  const double es = recovered_fraction(rho, p);
  if (r <= rho) return (1.0 - es) * p.eps * r;
  const double l1 = p.inclusion.lambda, m1 = p.inclusion.mu;
  const double l2 = p.matrix.lambda, m2 = p.matrix.mu;
  const double R2 = p.R * p.R;
  return (l1 + m1) * (m2 * r * r + (l2 + m2) * R2) * rho * rho * es * p.eps /
         (m2 * (l2 + m2) * (R2 - rho * rho) * r);
}

double radial_stress(double r, double rho, const OracleParams& p, bool inside) {
  const double es = recovered_fraction(rho, p);
  if (inside) {
    const double a = (1.0 - es) * p.eps;  // uniform strain in the inclusion
    return 2.0 * (p.inclusion.lambda + p.inclusion.mu) * (a - p.eps);
  }
  const double l1 = p.inclusion.lambda, m1 = p.inclusion.mu;
  const double l2 = p.matrix.lambda, m2 = p.matrix.mu;
  const double R2 = p.R * p.R;
  const double C = (l1 + m1) * rho * rho * es * p.eps / (m2 * (l2 + m2) * (R2 - rho * rho));
  const double A = C * m2;              // u = A r + B / r
  const double B = C * (l2 + m2) * R2;
  return 2.0 * (l2 + m2) * A - 2.0 * m2 * B / (r * r);
}

double elastic_energy(double rho, const OracleParams& p) {
  return 2.0 * kPi * (p.inclusion.lambda + p.inclusion.mu) * rho * rho * recovered_fraction(rho, p) * p.eps *
         p.eps;
}

double elastic_energy_homogeneous(double rho, const OracleParams& p) {
  const double l = p.inclusion.lambda, m = p.inclusion.mu;
  const double R2 = p.R * p.R;
  return 2.0 * kPi * m * (l + m) * (R2 - rho * rho) * rho * rho * p.eps * p.eps / ((l + 2.0 * m) * R2);
}

double total_energy(double rho, const OracleParams& p) {
  return elastic_energy(rho, p) + 2.0 * kPi * rho * p.gamma;
}

double total_energy_derivative(double rho, const OracleParams& p) {
  // Step 1e-3 rho0 with one Richardson level: exact for the quartic energy
  // of identical phases, and O(h^4) otherwise.
  const double h = 1e-3 * p.rho0;
  auto central = [&](double s) { return (total_energy(rho + s, p) - total_energy(rho - s, p)) / (2.0 * s); };
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

double plane_strain_modulus(const OracleParams& p) {
  const double l = p.inclusion.lambda, m = p.inclusion.mu;
  return 4.0 * m * (l + m) / (l + 2.0 * m);
}

DrivingForces driving_forces(double rho, const OracleParams& p) {
  const double q = rho / p.R;
  return {plane_strain_modulus(p) * p.eps * p.eps * (0.5 - q * q), p.gamma / rho};
}

RatePotential rate_from_potential(double rho, double rho_dot_trial, const OracleParams& p) {
  // Pi(rho_dot) = dPsi/drho * rho_dot + pi rho rho_dot^2 / m_hat.
  const double dpsi = total_energy_derivative(rho, p);
  const double curv = kPi * rho / p.m_hat;
  RatePotential r;
  r.pi_hat = dpsi * rho_dot_trial + curv * rho_dot_trial * rho_dot_trial;
  r.rho_dot = -dpsi / (2.0 * curv);
  r.pi_min = dpsi * r.rho_dot + curv * r.rho_dot * r.rho_dot;
  r.dissipation = curv * r.rho_dot * r.rho_dot;
  return r;
}

double rho_dot_closed_form(double rho, const OracleParams& p) {
  const double A = dimensionless_A(p);
  const double q = rho / p.R;
  return -(p.m_hat * p.gamma / rho) * (1.0 + A * (rho / p.rho0) * (0.5 - q * q));
}

double dimensionless_A(const OracleParams& p) {
  if (!(p.gamma > 0.0)) throw std::domain_error("dimensionless A requires gamma > 0");
  return p.rho0 * plane_strain_modulus(p) * p.eps * p.eps / p.gamma;
}

namespace {

double hermite(double x0, double x1, double y0, double y1, double d0, double d1, double x) {
  const double h = x1 - x0;
  const double s = (x - x0) / h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * d1;
}

}  // namespace

double Trajectory::time_at_radius(double r) const {
  if (rho.empty()) throw std::logic_error("empty oracle trajectory");
  if (r >= rho.front()) return t.front();
  if (r <= rho.back()) return t.back();
  // rho is strictly decreasing.
  auto it = std::lower_bound(rho.begin(), rho.end(), r, [](double a, double b) { return a > b; });
  const std::size_t i = static_cast<std::size_t>(it - rho.begin());
  const std::size_t i0 = i - 1;
  // t as a function of rho: dt/drho = 1 / rho_dot.
  return hermite(rho[i0], rho[i], t[i0], t[i], 1.0 / rho_dot[i0], 1.0 / rho_dot[i], r);
}

double Trajectory::radius_at_time(double s) const {
  if (t.empty()) throw std::logic_error("empty oracle trajectory");
  if (s <= t.front()) return rho.front();
  if (s >= t.back()) return rho.back();
  auto it = std::upper_bound(t.begin(), t.end(), s);
  const std::size_t i = static_cast<std::size_t>(it - t.begin());
  return hermite(t[i - 1], t[i], rho[i - 1], rho[i], rho_dot[i - 1], rho_dot[i], s);
}

Trajectory integrate_trajectory(const OracleParams& p, double rho_stop, const IntegrationOptions& opts) {
  p.validate();
  if (!(rho_stop > 0.0 && rho_stop < p.rho0)) throw std::domain_error("rho_stop must lie in (0, rho0)");
  auto f = [&](double rho) {
    const double v = opts.general_moduli ? rate_from_potential(rho, 0.0, p).rho_dot : rho_dot_closed_form(rho, p);
    if (!(v < 0.0)) throw SolverError("non-shrinking configuration: rho_dot >= 0 at rho = " + std::to_string(rho));
    return v;
  };

  // Dormand-Prince 5(4) coefficients.
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                          b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  (void)c2; (void)c3; (void)c4; (void)c5;  // autonomous right-hand side

  Trajectory tr;
  tr.rho_stop = rho_stop;
  double t = 0.0;
  double y = p.rho0;
  double k1 = f(y);
  tr.t.push_back(t);
  tr.rho.push_back(y);
  tr.rho_dot.push_back(k1);
  double h = 1e-3 * p.rho0 / std::abs(k1);

  for (int guard = 0; guard < 10000000; ++guard) {
    // Keep the stages away from rho <= 0.
    const double k2 = f(y + h * a21 * k1);
    const double k3 = f(y + h * (a31 * k1 + a32 * k2));
    const double k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const double k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const double k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const double y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const double k7 = f(y_new);
    const double err = std::abs(h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7));
    const double scale = opts.atol + opts.rtol * std::max(std::abs(y), std::abs(y_new));
    const double ratio = err / scale;
    if (ratio <= 1.0) {
      if (y_new <= rho_stop) {
        // Locate the crossing inside the step by bisection on the Hermite interpolant.
        double lo = 0.0, hi = h;
        for (int i = 0; i < 200; ++i) {
          const double mid = 0.5 * (lo + hi);
          const double ym = hermite(0.0, h, y, y_new, k1, k7, mid);
          (ym > rho_stop ? lo : hi) = mid;
          if (hi - lo < 1e-15 * (t + h)) break;
        }
        const double ts = t + 0.5 * (lo + hi);
        tr.t.push_back(ts);
        tr.rho.push_back(rho_stop);
        tr.rho_dot.push_back(f(rho_stop));
        tr.T_exact = ts;
        return tr;
      }
      t += h;
      y = y_new;
      k1 = k7;
      tr.t.push_back(t);
      tr.rho.push_back(y);
      tr.rho_dot.push_back(k1);
    }
    const double fac = ratio > 0.0 ? 0.9 * std::pow(ratio, -0.2) : 5.0;
    h *= std::clamp(fac, 0.2, 5.0);
    // Do not overshoot far beyond rho_stop.
    const double max_h = 0.5 * (y - 0.5 * rho_stop) / std::abs(k1);
    h = std::min(h, std::max(max_h, 1e-12));
  }
  throw SolverError("oracle integration did not reach rho_stop");
}

void write_trajectory_csv(const Trajectory& tr, const OracleParams& p, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  os << "t,rho,f_bulk,f_int\n" << std::setprecision(17);
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    const auto f = driving_forces(tr.rho[i], p);
    os << tr.t[i] << ',' << tr.rho[i] << ',' << f.bulk << ',' << f.interfacial << '\n';
  }
  if (!os) throw std::runtime_error("error writing '" + path + "'");
}

}  // namespace letpf::oracle
