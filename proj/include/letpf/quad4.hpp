#pragma once

// Bilinear 4-node quadrilateral: shape functions, 2x2 Gauss rule and
// per-element geometric data.

#include "letpf/mesh.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace letpf::quad4 {

inline constexpr std::array<double, 4> kXi = {-1.0, 1.0, 1.0, -1.0};
inline constexpr std::array<double, 4> kEta = {-1.0, -1.0, 1.0, 1.0};

Eigen::Vector4d shape(double xi, double eta);
/// Columns: d/dxi, d/deta.
Eigen::Matrix<double, 4, 2> shape_grad_ref(double xi, double eta);

/// Gauss points of the 2x2 rule (weights are all 1).
const std::array<std::array<double, 2>, 4>& gauss_points();

struct PointData {
  Eigen::Vector4d N;
  Eigen::Matrix<double, 4, 2> dN;  // physical gradients
  double detJ = 0.0;
};

PointData evaluate(const std::array<Vec2, 4>& x, double xi, double eta);

struct ElementGeometry {
  std::array<PointData, 4> gauss;   // weight * detJ folded into `dV`
  std::array<double, 4> dV{};
  PointData centre;
};

std::array<Vec2, 4> element_coords(const Mesh& mesh, int e);
ElementGeometry element_geometry(const Mesh& mesh, int e);
std::vector<ElementGeometry> mesh_geometry(const Mesh& mesh);

/// Inverse bilinear map via Newton; returns false if it does not converge.
bool inverse_map(const std::array<Vec2, 4>& x, const Vec2& p, double& xi, double& eta);

}  // namespace letpf::quad4
