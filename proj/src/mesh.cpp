#include "letpf/mesh.hpp"

#include "letpf/errors.hpp"
#include "letpf/quad4.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace letpf {

const std::vector<int>& Mesh::node_set(const std::string& tag) const {
  auto it = node_sets.find(tag);
  if (it == node_sets.end()) throw std::out_of_range("unknown node set '" + tag + "'");
  return it->second;
}

Vec2 Mesh::element_centroid(int e) const {
  Vec2 c;
  for (int k : elements[e]) c = c + nodes[k];
  return c * 0.25;
}

double Mesh::area() const {
  double a = 0.0;
  for (int e = 0; e < num_elements(); ++e) {
    const auto g = quad4::element_geometry(*this, e);
    for (double dv : g.dV) a += dv;
  }
  return a;
}

double Mesh::min_gauss_jacobian() const {
  double m = std::numeric_limits<double>::infinity();
  for (int e = 0; e < num_elements(); ++e) {
    const auto g = quad4::element_geometry(*this, e);
    for (const auto& p : g.gauss) m = std::min(m, p.detJ);
  }
  return m;
}

Mesh build_rect_grid(double lx, double ly, int nx, int ny) {
  if (nx < 2 || ny < 2) throw ConfigError("grid needs at least 2 elements per side");
  if (!(lx > 0.0 && ly > 0.0)) throw ConfigError("grid side lengths must be positive");
  Mesh mesh;
  mesh.h = std::max(lx / nx, ly / ny);
  const int mx = nx + 1, my = ny + 1;
  mesh.nodes.reserve(static_cast<std::size_t>(mx) * my);
  for (int j = 0; j < my; ++j) {
    for (int i = 0; i < mx; ++i) {
      mesh.nodes.push_back({lx * i / nx, ly * j / ny});
    }
  }
  auto id = [mx](int i, int j) { return j * mx + i; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      mesh.elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  auto& all = mesh.node_sets["all"];
  auto& left = mesh.node_sets["left"];
  auto& right = mesh.node_sets["right"];
  auto& bottom = mesh.node_sets["bottom"];
  auto& top = mesh.node_sets["top"];
  for (int j = 0; j < my; ++j) {
    for (int i = 0; i < mx; ++i) {
      const bool b = (i == 0 || j == 0 || i == nx || j == ny);
      if (b) all.push_back(id(i, j));
      if (i == 0) left.push_back(id(i, j));
      if (i == nx) right.push_back(id(i, j));
      if (j == 0) bottom.push_back(id(i, j));
      if (j == ny) top.push_back(id(i, j));
    }
  }
  return mesh;
}

Mesh build_square_grid(double side_length, int n) { return build_rect_grid(side_length, side_length, n, n); }

Mesh build_quarter_disc(double radius, int n_core) {
  QuarterDiscOptions o;
  o.radius = radius;
  o.n_core = n_core;
  return build_quarter_disc(o);
}

Mesh build_quarter_disc(const QuarterDiscOptions& opts) {
  const double R = opts.radius;
  const int n = opts.n_core;
  const double a = opts.core_side > 0.0 ? opts.core_side : 0.55 * R;
  if (n < 5) throw ConfigError("quarter disc needs n_core >= 5");
  if (!(R > 0.0)) throw ConfigError("quarter disc radius must be positive");
  if (!(a * std::numbers::sqrt2 < R)) {
    throw ConfigError("quarter disc core square does not fit inside the arc");
  }
  Mesh mesh;
  mesh.h = a / n;
  const int m = std::max(1, static_cast<int>(std::ceil((R - a) / (opts.max_radial_ratio * mesh.h) - 1e-9)));

  const int nn = n + 1;
  for (int j = 0; j < nn; ++j) {
    for (int i = 0; i < nn; ++i) mesh.nodes.push_back({a * i / n, a * j / n});
  }
  auto core = [nn](int i, int j) { return j * nn + i; };

  // Right block: layer k (1..m), tangential index j (0..n).
  const double quarter = 0.25 * std::numbers::pi;
  const int right_base = mesh.num_nodes();
  for (int k = 1; k <= m; ++k) {
    const double s = static_cast<double>(k) / m;
    for (int j = 0; j < nn; ++j) {
      const double th = quarter * j / n;
      const Vec2 inner{a, a * j / n};
      const Vec2 outer{R * std::cos(th), R * std::sin(th)};
      mesh.nodes.push_back(inner * (1.0 - s) + outer * s);
    }
  }
  auto right = [&](int k, int j) { return k == 0 ? core(n, j) : right_base + (k - 1) * nn + j; };

  // Top block: layer k, tangential index i (0..n); i == n is shared with
  // the right block along the diagonal.
  const int top_base = mesh.num_nodes();
  for (int k = 1; k <= m; ++k) {
    const double s = static_cast<double>(k) / m;
    for (int i = 0; i < n; ++i) {
      const double th = 2.0 * quarter - quarter * i / n;
      const Vec2 inner{a * i / n, a};
      const Vec2 outer{R * std::cos(th), R * std::sin(th)};
      mesh.nodes.push_back(inner * (1.0 - s) + outer * s);
    }
  }
  auto top = [&](int k, int i) {
    if (k == 0) return core(i, n);
    if (i == n) return right(k, n);
    return top_base + (k - 1) * n + i;
  };

  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      mesh.elements.push_back({core(i, j), core(i + 1, j), core(i + 1, j + 1), core(i, j + 1)});
    }
  }
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < m; ++k) {
      mesh.elements.push_back({right(k, j), right(k + 1, j), right(k + 1, j + 1), right(k, j + 1)});
    }
  }
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < n; ++i) {
      mesh.elements.push_back({top(k, i), top(k, i + 1), top(k + 1, i + 1), top(k + 1, i)});
    }
  }

  // Snap exact zeros produced by cos/sin round-off on the axes.
  const double tol = 1e-12 * R;
  for (auto& p : mesh.nodes) {
    if (std::abs(p.x) < tol) p.x = 0.0;
    if (std::abs(p.y) < tol) p.y = 0.0;
  }
  auto& xaxis = mesh.node_sets["x-axis"];
  auto& yaxis = mesh.node_sets["y-axis"];
  auto& outer = mesh.node_sets["outer"];
  for (int k = 0; k < mesh.num_nodes(); ++k) {
    const auto& p = mesh.nodes[k];
    if (p.y < tol) xaxis.push_back(k);
    if (p.x < tol) yaxis.push_back(k);
  }
  for (int j = 0; j <= n; ++j) outer.push_back(right(m, j));
  for (int i = 0; i < n; ++i) outer.push_back(top(m, i));

  if (!(mesh.min_gauss_jacobian() > 0.0)) {
    throw ConfigError("quarter disc transition layer produced inverted elements");
  }
  return mesh;
}

}  // namespace letpf
