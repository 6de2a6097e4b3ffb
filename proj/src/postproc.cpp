#include "letpf/postproc.hpp"

#include "letpf/material.hpp"
#include "letpf/quad4.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace letpf::post {

FieldSampler::FieldSampler(const Mesh& mesh) : mesh_(&mesh) {
  if (mesh.nodes.empty()) throw std::invalid_argument("empty mesh");
  double xmin = std::numeric_limits<double>::max(), ymin = xmin;
  double xmax = std::numeric_limits<double>::lowest(), ymax = xmax;
  for (const auto& p : mesh.nodes) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double span = std::max(xmax - xmin, ymax - ymin);
  cell_ = mesh.h > 0.0 ? 2.0 * mesh.h : span / 32.0;
  lo_ = {xmin - 1e-9 * span, ymin - 1e-9 * span};
  nx_ = std::max(1, static_cast<int>(std::ceil((xmax - lo_.x) / cell_)) + 1);
  ny_ = std::max(1, static_cast<int>(std::ceil((ymax - lo_.y) / cell_)) + 1);
  buckets_.assign(static_cast<std::size_t>(nx_) * ny_, {});
  bbox_.resize(mesh.elements.size());
  const double pad = 1e-9 * span;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    std::array<double, 4> b = {std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest(),
                               std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest()};
    for (int n : mesh.elements[e]) {
      const auto& p = mesh.nodes[n];
      b[0] = std::min(b[0], p.x);
      b[1] = std::max(b[1], p.x);
      b[2] = std::min(b[2], p.y);
      b[3] = std::max(b[3], p.y);
    }
    b[0] -= pad;
    b[1] += pad;
    b[2] -= pad;
    b[3] += pad;
    bbox_[e] = b;
    const int i0 = std::clamp(static_cast<int>((b[0] - lo_.x) / cell_), 0, nx_ - 1);
    const int i1 = std::clamp(static_cast<int>((b[1] - lo_.x) / cell_), 0, nx_ - 1);
    const int j0 = std::clamp(static_cast<int>((b[2] - lo_.y) / cell_), 0, ny_ - 1);
    const int j1 = std::clamp(static_cast<int>((b[3] - lo_.y) / cell_), 0, ny_ - 1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) buckets_[static_cast<std::size_t>(j) * nx_ + i].push_back(e);
  }
}

bool FieldSampler::locate(const Vec2& p, int& element, double& xi, double& eta) const {
  const int i = static_cast<int>(std::floor((p.x - lo_.x) / cell_));
  const int j = static_cast<int>(std::floor((p.y - lo_.y) / cell_));
  if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return false;
  constexpr double kTol = 1e-9;
  for (int e : buckets_[static_cast<std::size_t>(j) * nx_ + i]) {
    const auto& b = bbox_[e];
    if (p.x < b[0] || p.x > b[1] || p.y < b[2] || p.y > b[3]) continue;
    double a = 0.0, c = 0.0;
    if (!quad4::inverse_map(quad4::element_coords(*mesh_, e), p, a, c)) continue;
    if (std::abs(a) <= 1.0 + kTol && std::abs(c) <= 1.0 + kTol) {
      element = e;
      xi = std::clamp(a, -1.0, 1.0);
      eta = std::clamp(c, -1.0, 1.0);
      return true;
    }
  }
  return false;
}

std::optional<double> FieldSampler::sample(const Eigen::VectorXd& nodal, const Vec2& p) const {
  int e = 0;
  double xi = 0.0, eta = 0.0;
  if (!locate(p, e, xi, eta)) return std::nullopt;
  const Eigen::Vector4d N = quad4::shape(xi, eta);
  double v = 0.0;
  for (int a = 0; a < 4; ++a) v += N[a] * nodal[mesh_->elements[e][a]];
  return v;
}

std::optional<double> ray_crossing(const FieldSampler& sampler, const Eigen::VectorXd& phi, const Vec2& origin,
                                   double angle, const RayOptions& opts, double level) {
  const Mesh& mesh = sampler.mesh();
  const double h = mesh.h > 0.0 ? mesh.h : 1.0;
  const double step = opts.step > 0.0 ? opts.step : 0.25 * h;
  const double tol = opts.tolerance > 0.0 ? opts.tolerance : 1e-3 * h;
  double r_max = opts.r_max;
  if (!(r_max > 0.0)) {
    double d = 0.0;
    for (const auto& p : mesh.nodes) d = std::max(d, (p - origin).norm());
    r_max = d;
  }
  const Vec2 dir{std::cos(angle), std::sin(angle)};
  auto at = [&](double r) { return sampler.sample(phi, origin + dir * r); };

  std::optional<std::pair<double, double>> bracket;
  auto prev = at(0.0);
  double r_prev = 0.0;
  const int n = static_cast<int>(std::ceil(r_max / step));
  for (int k = 1; k <= n; ++k) {
    const double r = std::min(k * step, r_max);
    const auto cur = at(r);
    if (!cur) break;  // left the mesh
    if (prev && ((*prev - level) * (*cur - level) <= 0.0) && (*prev != level || *cur != level)) {
      bracket = {r_prev, r};
      if (opts.rule == Crossing::Innermost) break;
    }
    prev = cur;
    r_prev = r;
  }
  if (!bracket) return std::nullopt;
  double a = bracket->first, b = bracket->second;
  const double fa = *at(a) - level;
  while (b - a > tol) {
    const double m = 0.5 * (a + b);
    const auto fm = at(m);
    if (!fm) break;
    if ((*fm - level) * fa > 0.0) {
      a = m;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

std::vector<double> quarter_angles(int n) {
  if (n < 2) throw std::invalid_argument("need at least two rays");
  std::vector<double> a(n);
  for (int i = 0; i < n; ++i) a[i] = 0.5 * std::numbers::pi * i / (n - 1);
  return a;
}

double coefficient_of_variation(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= values.size();
  return std::sqrt(var) / mean;
}

RadiusMeasurement mean_radius(const FieldSampler& sampler, const Eigen::VectorXd& phi, const Vec2& origin,
                              const std::vector<double>& angles, const RayOptions& opts) {
  RadiusMeasurement m;
  for (double a : angles) {
    if (auto r = ray_crossing(sampler, phi, origin, a, opts)) {
      m.radii.push_back(*r);
    } else {
      ++m.missing;
    }
  }
  if (m.radii.empty()) {
    m.vanished = true;
    return m;
  }
  m.rho_bar = std::accumulate(m.radii.begin(), m.radii.end(), 0.0) / m.radii.size();
  m.cv = coefficient_of_variation(m.radii);
  return m;
}

namespace {

// Linear interpolation in a table with strictly increasing x.
double interp(const std::vector<double>& x, const std::vector<double>& y, double v) {
  if (v <= x.front()) return y.front();
  if (v >= x.back()) return y.back();
  const auto it = std::upper_bound(x.begin(), x.end(), v);
  const std::size_t i = static_cast<std::size_t>(it - x.begin());
  const double s = (v - x[i - 1]) / (x[i] - x[i - 1]);
  return y[i - 1] + s * (y[i] - y[i - 1]);
}

}  // namespace

double mean_cv(const std::vector<double>& rho, const std::vector<double>& cv, double rho0, double lo_fraction) {
  if (rho.size() != cv.size()) throw std::invalid_argument("rho and cv sizes differ");
  if (rho.empty()) return 0.0;
  std::vector<std::size_t> idx(rho.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return rho[a] < rho[b]; });
  std::vector<double> x, y;
  for (auto i : idx) {
    if (!x.empty() && rho[i] <= x.back()) continue;
    x.push_back(rho[i]);
    y.push_back(cv[i]);
  }
  const double lo = lo_fraction * rho0;
  const double hi = rho0;
  if (x.size() == 1) return y[0];
  // Integration nodes: interior samples plus the interval ends.
  std::vector<double> nodes{lo};
  for (double v : x)
    if (v > lo && v < hi) nodes.push_back(v);
  nodes.push_back(hi);
  double integral = 0.0;
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    integral += 0.5 * (nodes[k] - nodes[k - 1]) * (interp(x, y, nodes[k]) + interp(x, y, nodes[k - 1]));
  }
  return integral / (hi - lo);
}

double relative_error(const std::function<double(double)>& tau_num, const std::function<double(double)>& tau_exact,
                      double r_lo, double r_hi, int n) {
  if (!(r_hi > r_lo) || n < 1) throw std::invalid_argument("empty integration range");
  const double dr = (r_hi - r_lo) / n;
  double num = 0.0, den = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double r = r_lo + k * dr;
    const double w = (k == 0 || k == n) ? 0.5 : 1.0;
    const double te = tau_exact(r);
    num += w * std::abs(te - tau_num(r));
    den += w * te;
  }
  return num / den;
}

RelativeError relative_error(const std::vector<double>& t, const std::vector<double>& rho,
                             const oracle::Trajectory& exact, double rho0, double lo_fraction, double mono_tol) {
  if (t.size() != rho.size() || t.empty()) throw std::invalid_argument("numerical series is empty or ragged");
  const double tol = mono_tol >= 0.0 ? mono_tol : 1e-6 * rho0;
  // Cumulative minimum; x increasing (= -rho) for interpolation of t.
  std::vector<double> x, y;
  double running = rho[0];
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (rho[i] > running + tol) {
      std::ostringstream msg;
      msg << "radius series increases by " << rho[i] - running << " at t = " << t[i];
      throw std::runtime_error(msg.str());
    }
    if (i > 0 && rho[i] >= running) continue;
    running = std::min(running, rho[i]);
    x.push_back(-running);
    y.push_back(t[i]);
  }
  RelativeError out;
  out.r_hi = rho0;
  out.r_lo = lo_fraction * rho0;
  const double reached = -x.back();
  if (reached > out.r_lo) {
    out.truncated = true;
    out.r_lo = reached;
  }
  if (!(out.r_hi > out.r_lo)) {
    out.value = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  auto tau_num = [&](double r) { return interp(x, y, -r); };
  auto tau_exact = [&](double r) { return exact.time_at_radius(r); };
  out.value = relative_error(tau_num, tau_exact, out.r_lo, out.r_hi);
  return out;
}

Energies total_energies(const System& sys, const State& state) {
  Energies en;
  const auto classes = sys.classify(state.p);
  const auto& geo = sys.geometry();
  for (int e = 0; e < sys.mesh().num_elements(); ++e) {
    const auto ee = element_energies(geo[e], sys.gather(state.p, e), sys.method(), classes[e], sys.material());
    en.elastic += ee.elastic;
    en.interfacial += ee.interfacial;
  }
  return en;
}

double phase2_fraction(const System& sys, const State& state) {
  const auto& mesh = sys.mesh();
  const auto& geo = sys.geometry();
  double num = 0.0, vol = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    Eigen::Vector4d ph;
    for (int a = 0; a < 4; ++a) ph[a] = state.phi(mesh.elements[e][a]);
    for (int q = 0; q < 4; ++q) {
      num += geo[e].dV[q] * interp_h(geo[e].gauss[q].N.dot(ph)).h;
      vol += geo[e].dV[q];
    }
  }
  return num / vol;
}

double max_deviation_from_half(const State& state) {
  double d = 0.0;
  for (int k = 0; k < state.num_nodes(); ++k) d = std::max(d, std::abs(state.phi(k) - 0.5));
  return d;
}

std::vector<int> phase_components(const Mesh& mesh, const Eigen::VectorXd& phi, int& count, double level) {
  const int ne = mesh.num_elements();
  std::vector<char> inside(ne, 0);
  for (int e = 0; e < ne; ++e) {
    double m = 0.0;
    for (int n : mesh.elements[e]) m += phi[n];
    inside[e] = 0.25 * m > level;
  }
  // Element adjacency through shared edges.
  std::map<std::pair<int, int>, std::vector<int>> edges;
  for (int e = 0; e < ne; ++e) {
    const auto& c = mesh.elements[e];
    for (int k = 0; k < 4; ++k) {
      const int a = c[k], b = c[(k + 1) % 4];
      edges[{std::min(a, b), std::max(a, b)}].push_back(e);
    }
  }
  std::vector<std::vector<int>> nbr(ne);
  for (const auto& [key, els] : edges) {
    if (els.size() == 2) {
      nbr[els[0]].push_back(els[1]);
      nbr[els[1]].push_back(els[0]);
    }
  }
  std::vector<int> label(ne, -1);
  count = 0;
  std::vector<int> stack;
  for (int e = 0; e < ne; ++e) {
    if (!inside[e] || label[e] >= 0) continue;
    label[e] = count;
    stack.push_back(e);
    while (!stack.empty()) {
      const int f = stack.back();
      stack.pop_back();
      for (int g : nbr[f]) {
        if (inside[g] && label[g] < 0) {
          label[g] = count;
          stack.push_back(g);
        }
      }
    }
    ++count;
  }
  return label;
}

ComponentTracker::ComponentTracker(std::vector<int> seed_elements)
    : seeds_(std::move(seed_elements)), members_(seeds_.size()), current_(seeds_.size(), -1) {}

const std::vector<int>& ComponentTracker::update(const std::vector<int>& labels, int count) {
  for (std::size_t i = 0; i < seeds_.size(); ++i) {
    int lab = -1;
    if (!started_) {
      if (seeds_[i] >= 0 && seeds_[i] < static_cast<int>(labels.size())) lab = labels[seeds_[i]];
    } else if (current_[i] >= 0) {
      std::vector<int> overlap(count, 0);
      for (int e : members_[i])
        if (labels[e] >= 0) ++overlap[labels[e]];
      const auto best = std::max_element(overlap.begin(), overlap.end());
      if (best != overlap.end() && *best > 0) lab = static_cast<int>(best - overlap.begin());
    }
    current_[i] = lab;
    members_[i].clear();
    if (lab < 0) continue;
    for (int e = 0; e < static_cast<int>(labels.size()); ++e)
      if (labels[e] == lab) members_[i].push_back(e);
  }
  started_ = true;
  return current_;
}

void write_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  const auto& cols = trajectory_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n' << std::setprecision(17);
  for (const auto& r : traj) {
    os << r.t << ',' << r.dt << ',' << r.newton_iters << ',' << r.rho_bar << ',' << r.cv_rho << ',' << r.psi_el
       << ',' << r.psi_int << ',' << r.psi_total << '\n';
  }
  if (!os) throw std::runtime_error("error writing '" + path + "'");
}

Trajectory read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("'" + path + "': missing header");
  {
    std::string expected;
    for (const auto& c : trajectory_columns()) expected += (expected.empty() ? "" : ",") + c;
    if (line != expected) throw std::runtime_error("'" + path + "': unexpected header '" + line + "'");
  }
  Trajectory traj;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string f[8];
    for (auto& s : f)
      if (!std::getline(ss, s, ',')) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": short row");
    TrajectoryRow r;
    try {
      r.t = std::stod(f[0]);
      r.dt = std::stod(f[1]);
      r.newton_iters = std::stoi(f[2]);
      r.rho_bar = std::stod(f[3]);
      r.cv_rho = std::stod(f[4]);
      r.psi_el = std::stod(f[5]);
      r.psi_int = std::stod(f[6]);
      r.psi_total = std::stod(f[7]);
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed number");
    }
    traj.push_back(r);
  }
  return traj;
}

void write_vtk(const System& sys, const State& state, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  const Mesh& mesh = sys.mesh();
  const auto classes = sys.classify(state.p);
  os << "# vtk DataFile Version 2.0\n"
     << "phase-field state t=" << std::setprecision(17) << state.t << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << mesh.num_nodes() << " double\n";
  for (const auto& p : mesh.nodes) os << p.x << ' ' << p.y << " 0\n";
  os << "CELLS " << mesh.num_elements() << ' ' << 5 * mesh.num_elements() << '\n';
  for (const auto& c : mesh.elements) os << "4 " << c[0] << ' ' << c[1] << ' ' << c[2] << ' ' << c[3] << '\n';
  os << "CELL_TYPES " << mesh.num_elements() << '\n';
  for (int e = 0; e < mesh.num_elements(); ++e) os << "9\n";

  os << "POINT_DATA " << mesh.num_nodes() << "\nSCALARS phi double 1\nLOOKUP_TABLE default\n";
  for (int k = 0; k < mesh.num_nodes(); ++k) os << state.phi(k) << '\n';
  os << "VECTORS displacement double\n";
  for (int k = 0; k < mesh.num_nodes(); ++k) os << state.u(k, 0) << ' ' << state.u(k, 1) << " 0\n";

  os << "CELL_DATA " << mesh.num_elements() << "\nSCALARS eta double 1\nLOOKUP_TABLE default\n";
  for (const auto& c : classes) os << c.eta << '\n';
  os << "SCALARS class int 1\nLOOKUP_TABLE default\n";
  for (const auto& c : classes) os << static_cast<int>(c.kind) << '\n';
  std::vector<SymTensor2> sig(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    sig[e] = element_stress(sys.geometry()[e], sys.gather(state.p, e), sys.method(), classes[e], sys.material());
  }
  const char* names[3] = {"sigma_xx", "sigma_yy", "sigma_xy"};
  for (int i = 0; i < 3; ++i) {
    os << "SCALARS " << names[i] << " double 1\nLOOKUP_TABLE default\n";
    for (const auto& s : sig) os << (i == 0 ? s.xx : i == 1 ? s.yy : s.xy) << '\n';
  }
  if (!os) throw std::runtime_error("error writing '" + path + "'");
}

}  // namespace letpf::post
