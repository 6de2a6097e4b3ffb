#pragma once

#include "letpf/tensor.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace letpf {

/// 4-node quadrilateral mesh. Element connectivity is counter-clockwise.
struct Mesh {
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 4>> elements;
  std::map<std::string, std::vector<int>> node_sets;
  /// Characteristic element size of the regular part of the mesh.
  double h = 0.0;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_elements() const { return static_cast<int>(elements.size()); }
  const std::vector<int>& node_set(const std::string& tag) const;

  Vec2 element_centroid(int e) const;
  double area() const;
  /// Smallest Jacobian determinant over all elements and 2x2 Gauss points.
  double min_gauss_jacobian() const;
};

/// Uniform nx x ny grid of rectangles on [0, lx] x [0, ly]; h is the larger
/// element edge. Node sets: "all" (whole boundary), "left", "right",
/// "bottom", "top".
Mesh build_rect_grid(double lx, double ly, int nx, int ny);

/// Uniform n x n grid of squares on [0, side]^2. Node sets: "all",
/// "left", "right", "bottom", "top".
Mesh build_square_grid(double side_length, int n_per_side);

struct QuarterDiscOptions {
  double radius = 2.0;
  int n_core = 55;
  /// Side of the regular square core; 0 selects 0.55 * radius.
  double core_side = 0.0;
  /// Upper bound on the radial element size in the transition region,
  /// in multiples of h.
  double max_radial_ratio = 2.0;
};

/// Quarter disc {x, y >= 0, x^2 + y^2 <= R^2} with a regular square core
/// and two blended transition blocks. Node sets: "x-axis", "y-axis",
/// "outer".
Mesh build_quarter_disc(const QuarterDiscOptions& opts);
Mesh build_quarter_disc(double radius, int n_core);

}  // namespace letpf
