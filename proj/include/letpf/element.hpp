#pragma once

// Element residuals and consistent tangents for the coupled
// displacement / order-parameter problem on bilinear quadrilaterals.
//
// Local DOF layout is node-interleaved: (ux, uy, phi) for nodes 0..3.

#include "letpf/laminate.hpp"
#include "letpf/material.hpp"
#include "letpf/quad4.hpp"

#include <Eigen/Dense>

#include <array>

namespace letpf {

enum class Method { PFM, LETPF };

struct Material {
  PhasePair phases;
  InterfaceParams interface;
  double phi_reg = 0.1;
};

using Vec12 = Eigen::Matrix<double, 12, 1>;
using Mat12 = Eigen::Matrix<double, 12, 12>;

struct ElementOutput {
  Vec12 residual = Vec12::Zero();
  Mat12 tangent = Mat12::Zero();
};

inline constexpr int ux_dof(int a) { return 3 * a; }
inline constexpr int uy_dof(int a) { return 3 * a + 1; }
inline constexpr int phi_dof(int a) { return 3 * a + 2; }

/// Nodal order parameters extracted from an element DOF vector.
std::array<double, 4> element_phi(const Vec12& dofs);

/// Conventional phase-field element.
ElementOutput element_pfm(const quad4::ElementGeometry& geo, const Vec12& dofs,
                          const std::array<double, 4>& phi_prev, const Material& mat, double dt);

/// LET-PF element with the classification `cls` frozen; for interface
/// elements eta and n are differentiated with respect to the nodal phi.
ElementOutput element_letpf(const quad4::ElementGeometry& geo, const Vec12& dofs,
                            const std::array<double, 4>& phi_prev, const ElementClass& cls,
                            const Material& mat, double dt);

struct ElementEnergies {
  double elastic = 0.0;
  double interfacial = 0.0;
};

ElementEnergies element_energies(const quad4::ElementGeometry& geo, const Vec12& dofs, Method method,
                                 const ElementClass& cls, const Material& mat);

/// Volume average of the (macroscopic) stress over the element.
SymTensor2 element_stress(const quad4::ElementGeometry& geo, const Vec12& dofs, Method method,
                          const ElementClass& cls, const Material& mat);

/// Strain at a point from element displacements.
SymTensor2 element_strain(const quad4::PointData& p, const Vec12& dofs);

}  // namespace letpf
