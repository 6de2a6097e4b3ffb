#pragma once

// Constitutive layer of the diffuse-interface model: phase energies,
// 2-3-4 interpolation, double-well interfacial energy and mobility.

#include "letpf/tensor.hpp"

#include <array>

namespace letpf {

struct PhaseParams {
  double psi0 = 0.0;          // chemical energy
  SymTensor2 eigenstrain;     // transformation strain
  Stiffness4 stiffness;       // plane-strain moduli

  double energy(const SymTensor2& eps) const;
  SymTensor2 stress(const SymTensor2& eps) const;
};

using PhasePair = std::array<PhaseParams, 2>;

struct InterfaceParams {
  double gamma = 0.0;   // interfacial energy per unit length
  double ell = 0.0;     // interface thickness parameter
  double m_hat = 0.0;   // effective (sharp-interface) mobility
  double m = 0.0;       // bulk mobility, always m_hat / (3 ell)

  /// Validates positivity and derives m.
  static InterfaceParams make(double gamma, double ell, double m_hat);
};

struct Interp {
  double h = 0.0;
  double dh = 0.0;
  double d2h = 0.0;
};

/// h(phi) = 3 phi^2 - 2 phi^3 with derivatives; not clamped.
Interp interp_h(double phi);

struct BulkResponse {
  double psi = 0.0;
  SymTensor2 sigma;
  double dpsi_dphi = 0.0;
  double d2psi_dphi2 = 0.0;
  SymTensor2 dsigma_dphi;   // = d^2 psi / d eps d phi
  Stiffness4 stiffness;     // L(phi)
};

/// Interpolated bulk energy of the conventional phase-field model.
BulkResponse bulk_energy_pfm(const SymTensor2& eps, double phi, const PhasePair& phases);

struct InterfacialResponse {
  double psi = 0.0;
  double dpsi_dphi = 0.0;
  double d2psi_dphi2 = 0.0;
  Vec2 dpsi_dgrad;          // 3 gamma ell grad(phi)
  double d2psi_dgrad2 = 0.0;  // scalar multiple of the identity
};

InterfacialResponse interfacial_energy(double phi, const Vec2& grad_phi, const InterfaceParams& ip);

/// 1/2 tanh((xi - xi0)/ell) + 1/2.
double equilibrium_profile(double xi, double xi0, double ell);

double mobility_from_effective(double m_hat, double ell);

}  // namespace letpf
