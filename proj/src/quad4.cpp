#include "letpf/quad4.hpp"

#include <cmath>

namespace letpf::quad4 {

Eigen::Vector4d shape(double xi, double eta) {
  Eigen::Vector4d N;
  for (int a = 0; a < 4; ++a) {
    N[a] = 0.25 * (1.0 + kXi[a] * xi) * (1.0 + kEta[a] * eta);
  }
  return N;
}

Eigen::Matrix<double, 4, 2> shape_grad_ref(double xi, double eta) {
  Eigen::Matrix<double, 4, 2> d;
  for (int a = 0; a < 4; ++a) {
    d(a, 0) = 0.25 * kXi[a] * (1.0 + kEta[a] * eta);
    d(a, 1) = 0.25 * kEta[a] * (1.0 + kXi[a] * xi);
  }
  return d;
}

const std::array<std::array<double, 2>, 4>& gauss_points() {
  static const double g = 1.0 / std::sqrt(3.0);
  static const std::array<std::array<double, 2>, 4> pts = {{{-g, -g}, {g, -g}, {g, g}, {-g, g}}};
  return pts;
}

PointData evaluate(const std::array<Vec2, 4>& x, double xi, double eta) {
  PointData p;
  p.N = shape(xi, eta);
  const auto dref = shape_grad_ref(xi, eta);
  Eigen::Matrix2d J = Eigen::Matrix2d::Zero();  // J(i, j) = d x_i / d ref_j
  for (int a = 0; a < 4; ++a) {
    J(0, 0) += x[a].x * dref(a, 0);
    J(0, 1) += x[a].x * dref(a, 1);
    J(1, 0) += x[a].y * dref(a, 0);
    J(1, 1) += x[a].y * dref(a, 1);
  }
  p.detJ = J.determinant();
  p.dN = dref * J.inverse();
  return p;
}

std::array<Vec2, 4> element_coords(const Mesh& mesh, int e) {
  const auto& conn = mesh.elements[e];
  return {mesh.nodes[conn[0]], mesh.nodes[conn[1]], mesh.nodes[conn[2]], mesh.nodes[conn[3]]};
}

ElementGeometry element_geometry(const Mesh& mesh, int e) {
  const auto x = element_coords(mesh, e);
  ElementGeometry g;
  const auto& pts = gauss_points();
  for (int q = 0; q < 4; ++q) {
    g.gauss[q] = evaluate(x, pts[q][0], pts[q][1]);
    g.dV[q] = g.gauss[q].detJ;
  }
  g.centre = evaluate(x, 0.0, 0.0);
  return g;
}

std::vector<ElementGeometry> mesh_geometry(const Mesh& mesh) {
  std::vector<ElementGeometry> out;
  out.reserve(mesh.elements.size());
  for (int e = 0; e < mesh.num_elements(); ++e) out.push_back(element_geometry(mesh, e));
  return out;
}

bool inverse_map(const std::array<Vec2, 4>& x, const Vec2& p, double& xi, double& eta) {
  xi = 0.0;
  eta = 0.0;
  for (int it = 0; it < 30; ++it) {
    const auto N = shape(xi, eta);
    const auto d = shape_grad_ref(xi, eta);
    Eigen::Vector2d r(-p.x, -p.y);
    Eigen::Matrix2d J = Eigen::Matrix2d::Zero();
    for (int a = 0; a < 4; ++a) {
      r[0] += N[a] * x[a].x;
      r[1] += N[a] * x[a].y;
      J(0, 0) += x[a].x * d(a, 0);
      J(0, 1) += x[a].x * d(a, 1);
      J(1, 0) += x[a].y * d(a, 0);
      J(1, 1) += x[a].y * d(a, 1);
    }
    const Eigen::Vector2d delta = J.partialPivLu().solve(r);
    xi -= delta[0];
    eta -= delta[1];
    if (delta.norm() < 1e-13) return std::abs(xi) < 10.0 && std::abs(eta) < 10.0;
  }
  return false;
}

}  // namespace letpf::quad4
