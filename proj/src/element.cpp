#include "letpf/element.hpp"

namespace letpf {

namespace {

using B3 = Eigen::Matrix<double, 3, 8>;  // engineering strain from (ux, uy) of 4 nodes

B3 strain_matrix(const quad4::PointData& p) {
  B3 B = B3::Zero();
  for (int a = 0; a < 4; ++a) {
    B(0, 2 * a) = p.dN(a, 0);
    B(1, 2 * a + 1) = p.dN(a, 1);
    B(2, 2 * a) = p.dN(a, 1);
    B(2, 2 * a + 1) = p.dN(a, 0);
  }
  return B;
}

Eigen::Matrix<double, 8, 1> displacements(const Vec12& dofs) {
  Eigen::Matrix<double, 8, 1> u;
  for (int a = 0; a < 4; ++a) {
    u[2 * a] = dofs[ux_dof(a)];
    u[2 * a + 1] = dofs[uy_dof(a)];
  }
  return u;
}

Eigen::Vector4d phis(const Vec12& dofs) {
  return {dofs[phi_dof(0)], dofs[phi_dof(1)], dofs[phi_dof(2)], dofs[phi_dof(3)]};
}

// Scatter helpers from the split (u: 8, phi: 4) blocks to node-interleaved layout.
constexpr int u_index(int i) { return 3 * (i / 2) + (i % 2); }
constexpr int p_index(int a) { return 3 * a + 2; }

void add_u(ElementOutput& out, const Eigen::Matrix<double, 8, 1>& r) {
  for (int i = 0; i < 8; ++i) out.residual[u_index(i)] += r[i];
}
void add_p(ElementOutput& out, const Eigen::Vector4d& r) {
  for (int a = 0; a < 4; ++a) out.residual[p_index(a)] += r[a];
}
void add_uu(ElementOutput& out, const Eigen::Matrix<double, 8, 8>& k) {
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) out.tangent(u_index(i), u_index(j)) += k(i, j);
}
void add_up(ElementOutput& out, const Eigen::Matrix<double, 8, 4>& k) {
  for (int i = 0; i < 8; ++i)
    for (int b = 0; b < 4; ++b) {
      out.tangent(u_index(i), p_index(b)) += k(i, b);
      out.tangent(p_index(b), u_index(i)) += k(i, b);
    }
}
void add_pp(ElementOutput& out, const Eigen::Matrix4d& k) {
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) out.tangent(p_index(a), p_index(b)) += k(a, b);
}

// Viscous and interfacial terms, identical for both methods.
void add_evolution_terms(ElementOutput& out, const quad4::ElementGeometry& geo, const Eigen::Vector4d& ph,
                         const std::array<double, 4>& phi_prev, const Material& mat, double dt) {
  const Eigen::Vector4d php(phi_prev[0], phi_prev[1], phi_prev[2], phi_prev[3]);
  const double visc = 1.0 / (mat.interface.m * dt);
  Eigen::Vector4d r = Eigen::Vector4d::Zero();
  Eigen::Matrix4d k = Eigen::Matrix4d::Zero();
  for (int q = 0; q < 4; ++q) {
    const auto& p = geo.gauss[q];
    const double dV = geo.dV[q];
    const double phi = p.N.dot(ph);
    const double phi_n = p.N.dot(php);
    const Eigen::Vector2d grad = p.dN.transpose() * ph;
    const auto in = interfacial_energy(phi, {grad[0], grad[1]}, mat.interface);
    const Eigen::Vector2d flux(in.dpsi_dgrad.x, in.dpsi_dgrad.y);
    r += dV * (p.N * (visc * (phi - phi_n) + in.dpsi_dphi) + p.dN * flux);
    k += dV * ((visc + in.d2psi_dphi2) * p.N * p.N.transpose() +
               in.d2psi_dgrad2 * p.dN * p.dN.transpose());
  }
  add_p(out, r);
  add_pp(out, k);
}

void add_pure_phase_mechanics(ElementOutput& out, const quad4::ElementGeometry& geo,
                              const Eigen::Matrix<double, 8, 1>& u, const PhaseParams& phase) {
  Eigen::Matrix<double, 8, 1> r = Eigen::Matrix<double, 8, 1>::Zero();
  Eigen::Matrix<double, 8, 8> k = Eigen::Matrix<double, 8, 8>::Zero();
  const Eigen::Vector3d et = phase.eigenstrain.strain_voigt();
  const Eigen::Matrix3d& C = phase.stiffness.voigt;
  for (int q = 0; q < 4; ++q) {
    const B3 B = strain_matrix(geo.gauss[q]);
    const Eigen::Vector3d sig = C * (B * u - et);
    r += geo.dV[q] * B.transpose() * sig;
    k += geo.dV[q] * B.transpose() * C * B;
  }
  add_u(out, r);
  add_uu(out, k);
}

}  // namespace

std::array<double, 4> element_phi(const Vec12& dofs) {
  return {dofs[phi_dof(0)], dofs[phi_dof(1)], dofs[phi_dof(2)], dofs[phi_dof(3)]};
}

SymTensor2 element_strain(const quad4::PointData& p, const Vec12& dofs) {
  return SymTensor2::from_strain_voigt(strain_matrix(p) * displacements(dofs));
}

ElementOutput element_pfm(const quad4::ElementGeometry& geo, const Vec12& dofs,
                          const std::array<double, 4>& phi_prev, const Material& mat, double dt) {
  ElementOutput out;
  const auto u = displacements(dofs);
  const Eigen::Vector4d ph = phis(dofs);

  Eigen::Matrix<double, 8, 1> ru = Eigen::Matrix<double, 8, 1>::Zero();
  Eigen::Vector4d rp = Eigen::Vector4d::Zero();
  Eigen::Matrix<double, 8, 8> kuu = Eigen::Matrix<double, 8, 8>::Zero();
  Eigen::Matrix<double, 8, 4> kup = Eigen::Matrix<double, 8, 4>::Zero();
  Eigen::Matrix4d kpp = Eigen::Matrix4d::Zero();
  for (int q = 0; q < 4; ++q) {
    const auto& p = geo.gauss[q];
    const double dV = geo.dV[q];
    const B3 B = strain_matrix(p);
    const SymTensor2 eps = SymTensor2::from_strain_voigt(B * u);
    const double phi = p.N.dot(ph);
    const auto bulk = bulk_energy_pfm(eps, phi, mat.phases);
    ru += dV * B.transpose() * bulk.sigma.stress_voigt();
    rp += dV * bulk.dpsi_dphi * p.N;
    kuu += dV * B.transpose() * bulk.stiffness.voigt * B;
    kup += dV * B.transpose() * bulk.dsigma_dphi.stress_voigt() * p.N.transpose();
    kpp += dV * bulk.d2psi_dphi2 * p.N * p.N.transpose();
  }
  add_u(out, ru);
  add_p(out, rp);
  add_uu(out, kuu);
  add_up(out, kup);
  add_pp(out, kpp);
  add_evolution_terms(out, geo, ph, phi_prev, mat, dt);
  return out;
}

ElementOutput element_letpf(const quad4::ElementGeometry& geo, const Vec12& dofs,
                            const std::array<double, 4>& phi_prev, const ElementClass& cls,
                            const Material& mat, double dt) {
  ElementOutput out;
  const auto u = displacements(dofs);
  const Eigen::Vector4d ph = phis(dofs);

  if (cls.kind == Phase::Phase1 || cls.kind == Phase::Phase2) {
    add_pure_phase_mechanics(out, geo, u, mat.phases[cls.kind == Phase::Phase1 ? 0 : 1]);
    add_evolution_terms(out, geo, ph, phi_prev, mat, dt);
    return out;
  }

  // Volume fraction and normal as functions of the nodal order parameters.
  using J4 = Jet<4>;
  std::array<J4, 4> pj;
  for (int a = 0; a < 4; ++a) pj[a] = J4::variable(ph[a], a);
  const J4 eta = volume_fraction_t(pj, mat.phi_reg);
  const bool laminated = cls.n.has_value();
  J4 nx(0.0), ny(0.0);
  if (laminated) {
    J4 gx(0.0), gy(0.0);
    for (int a = 0; a < 4; ++a) {
      gx += geo.centre.dN(a, 0) * pj[a];
      gy += geo.centre.dN(a, 1) * pj[a];
    }
    const J4 len = sqrt(gx * gx + gy * gy);
    nx = gx / len;
    ny = gy / len;
  }
  const Eigen::Vector4d deta = eta.g;
  Eigen::Matrix<double, 2, 4> dn;
  dn.row(0) = nx.g.transpose();
  dn.row(1) = ny.g.transpose();

  using J6 = Jet<6>;
  Eigen::Matrix<double, 8, 1> ru = Eigen::Matrix<double, 8, 1>::Zero();
  Eigen::Vector4d rp = Eigen::Vector4d::Zero();
  Eigen::Matrix<double, 8, 8> kuu = Eigen::Matrix<double, 8, 8>::Zero();
  Eigen::Matrix<double, 8, 4> kup = Eigen::Matrix<double, 8, 4>::Zero();
  Eigen::Matrix4d kpp = Eigen::Matrix4d::Zero();
  for (int q = 0; q < 4; ++q) {
    const double dV = geo.dV[q];
    const B3 B = strain_matrix(geo.gauss[q]);
    const Eigen::Vector3d eps = B * u;
    const V3<J6> ej = {J6::variable(eps[0], 0), J6::variable(eps[1], 1), J6::variable(eps[2], 2)};
    const J6 ej_eta = J6::variable(eta.v, 3);
    const J6 ej_nx = J6::variable(nx.v, 4);
    const J6 ej_ny = J6::variable(ny.v, 5);
    const auto lam = laminate_core<J6>(ej, ej_eta, ej_nx, ej_ny, mat.phases, !laminated);
    const auto& g = lam.psi_bar.g;
    const auto& H = lam.psi_bar.H;

    const Eigen::Vector3d g_eps = g.segment<3>(0);
    const double g_eta = g[3];
    const Eigen::Vector2d g_n = g.segment<2>(4);
    const Eigen::Matrix3d H_ee = H.block<3, 3>(0, 0);
    const Eigen::Vector3d H_e_eta = H.block<3, 1>(0, 3);
    const Eigen::Matrix<double, 3, 2> H_en = H.block<3, 2>(0, 4);
    const double H_eta_eta = H(3, 3);
    const Eigen::Vector2d H_eta_n = H.block<1, 2>(3, 4).transpose();
    const Eigen::Matrix2d H_nn = H.block<2, 2>(4, 4);

    // d(bulk driving force)/d(phi_nodes) in terms of (eta, n) chain.
    const Eigen::Matrix<double, 3, 4> dsig_dphi = H_e_eta * deta.transpose() + H_en * dn;

    ru += dV * B.transpose() * g_eps;
    rp += dV * (g_eta * deta + dn.transpose() * g_n);
    kuu += dV * B.transpose() * H_ee * B;
    kup += dV * B.transpose() * dsig_dphi;
    const Eigen::Matrix4d cross = deta * (H_eta_n.transpose() * dn);
    kpp += dV * (H_eta_eta * deta * deta.transpose() + cross + cross.transpose() +
                 dn.transpose() * H_nn * dn + g_eta * eta.H + g_n[0] * nx.H + g_n[1] * ny.H);
  }
  add_u(out, ru);
  add_p(out, rp);
  add_uu(out, kuu);
  add_up(out, kup);
  add_pp(out, kpp);
  add_evolution_terms(out, geo, ph, phi_prev, mat, dt);
  return out;
}

ElementEnergies element_energies(const quad4::ElementGeometry& geo, const Vec12& dofs, Method method,
                                 const ElementClass& cls, const Material& mat) {
  ElementEnergies en;
  const auto u = displacements(dofs);
  const Eigen::Vector4d ph = phis(dofs);
  const auto& p1 = mat.phases[0];
  const auto& p2 = mat.phases[1];
  for (int q = 0; q < 4; ++q) {
    const auto& p = geo.gauss[q];
    const double dV = geo.dV[q];
    const SymTensor2 eps = SymTensor2::from_strain_voigt(strain_matrix(p) * u);
    const double phi = p.N.dot(ph);
    const Eigen::Vector2d grad = p.dN.transpose() * ph;
    en.interfacial += dV * interfacial_energy(phi, {grad[0], grad[1]}, mat.interface).psi;

    double psi_el = 0.0;
    if (method == Method::PFM) {
      const double w = interp_h(phi).h;
      psi_el = bulk_energy_pfm(eps, phi, mat.phases).psi - ((1.0 - w) * p1.psi0 + w * p2.psi0);
    } else if (cls.kind == Phase::Phase1) {
      psi_el = p1.energy(eps) - p1.psi0;
    } else if (cls.kind == Phase::Phase2) {
      psi_el = p2.energy(eps) - p2.psi0;
    } else {
      const Eigen::Vector3d ev = eps.strain_voigt();
      const Vec2 n = cls.n.value_or(Vec2{1.0, 0.0});
      const auto lam = laminate_core<double>({ev[0], ev[1], ev[2]}, cls.eta, n.x, n.y, mat.phases,
                                             !cls.n.has_value());
      psi_el = lam.psi_bar - ((1.0 - cls.eta) * p1.psi0 + cls.eta * p2.psi0);
    }
    en.elastic += dV * psi_el;
  }
  return en;
}

SymTensor2 element_stress(const quad4::ElementGeometry& geo, const Vec12& dofs, Method method,
                          const ElementClass& cls, const Material& mat) {
  const auto u = displacements(dofs);
  const Eigen::Vector4d ph = phis(dofs);
  SymTensor2 acc;
  double vol = 0.0;
  for (int q = 0; q < 4; ++q) {
    const auto& p = geo.gauss[q];
    const SymTensor2 eps = SymTensor2::from_strain_voigt(strain_matrix(p) * u);
    SymTensor2 sig;
    if (method == Method::PFM) {
      sig = bulk_energy_pfm(eps, p.N.dot(ph), mat.phases).sigma;
    } else if (cls.kind == Phase::Phase1) {
      sig = mat.phases[0].stress(eps);
    } else if (cls.kind == Phase::Phase2) {
      sig = mat.phases[1].stress(eps);
    } else {
      const Eigen::Vector3d ev = eps.strain_voigt();
      const Vec2 n = cls.n.value_or(Vec2{1.0, 0.0});
      const auto lam = laminate_core<double>({ev[0], ev[1], ev[2]}, cls.eta, n.x, n.y, mat.phases,
                                             !cls.n.has_value());
      Eigen::Vector3d sv;
      for (int i = 0; i < 3; ++i) sv[i] = (1.0 - cls.eta) * lam.sig1[i] + cls.eta * lam.sig2[i];
      sig = SymTensor2::from_stress_voigt(sv);
    }
    acc = acc + sig * geo.dV[q];
    vol += geo.dV[q];
  }
  return acc * (1.0 / vol);
}

}  // namespace letpf
