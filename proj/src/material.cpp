#include "letpf/material.hpp"

#include "letpf/errors.hpp"

#include <cmath>

namespace letpf {

double PhaseParams::energy(const SymTensor2& eps) const {
  const SymTensor2 e = eps - eigenstrain;
  return psi0 + 0.5 * stiffness.contract(e, e);
}

SymTensor2 PhaseParams::stress(const SymTensor2& eps) const {
  return stiffness.apply(eps - eigenstrain);
}

InterfaceParams InterfaceParams::make(double gamma, double ell, double m_hat) {
  if (!(gamma > 0.0)) throw ConfigError("interfacial energy gamma must be positive");
  if (!(ell > 0.0)) throw ConfigError("interface thickness ell must be positive");
  if (!(m_hat > 0.0)) throw ConfigError("mobility m_hat must be positive");
  return {gamma, ell, m_hat, mobility_from_effective(m_hat, ell)};
}

Interp interp_h(double phi) {
  return {phi * phi * (3.0 - 2.0 * phi), 6.0 * phi * (1.0 - phi), 6.0 - 12.0 * phi};
}

BulkResponse bulk_energy_pfm(const SymTensor2& eps, double phi, const PhasePair& phases) {
  const auto& p1 = phases[0];
  const auto& p2 = phases[1];
  const Interp w = interp_h(phi);

  const SymTensor2 d_et = p2.eigenstrain - p1.eigenstrain;
  const Stiffness4 dL = p2.stiffness - p1.stiffness;
  const double d_psi0 = p2.psi0 - p1.psi0;

  BulkResponse r;
  r.stiffness = p1.stiffness * (1.0 - w.h) + p2.stiffness * w.h;
  const SymTensor2 et = p1.eigenstrain * (1.0 - w.h) + p2.eigenstrain * w.h;
  const SymTensor2 e = eps - et;
  r.sigma = r.stiffness.apply(e);
  r.psi = (1.0 - w.h) * p1.psi0 + w.h * p2.psi0 + 0.5 * r.stiffness.contract(e, e);

  // d psi / d h and its derivatives with respect to h.
  const double g = d_psi0 - r.sigma.ddot(d_et) + 0.5 * dL.contract(e, e);
  const double dg_dh = -2.0 * dL.contract(d_et, e) + r.stiffness.contract(d_et, d_et);
  r.dpsi_dphi = g * w.dh;
  r.d2psi_dphi2 = g * w.d2h + dg_dh * w.dh * w.dh;
  r.dsigma_dphi = (dL.apply(e) - r.stiffness.apply(d_et)) * w.dh;
  return r;
}

InterfacialResponse interfacial_energy(double phi, const Vec2& grad_phi, const InterfaceParams& ip) {
  const double c = 6.0 * ip.gamma / ip.ell;
  const double q = phi * (1.0 - phi);
  InterfacialResponse r;
  r.psi = c * (q * q + 0.25 * ip.ell * ip.ell * grad_phi.dot(grad_phi));
  r.dpsi_dphi = 2.0 * c * q * (1.0 - 2.0 * phi);
  r.d2psi_dphi2 = 2.0 * c * (1.0 - 6.0 * phi + 6.0 * phi * phi);
  r.d2psi_dgrad2 = 3.0 * ip.gamma * ip.ell;
  r.dpsi_dgrad = grad_phi * r.d2psi_dgrad2;
  return r;
}

double equilibrium_profile(double xi, double xi0, double ell) {
  return 0.5 * std::tanh((xi - xi0) / ell) + 0.5;
}

double mobility_from_effective(double m_hat, double ell) { return m_hat / (3.0 * ell); }

}  // namespace letpf
