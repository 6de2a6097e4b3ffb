#include "letpf/laminate.hpp"

#include <stdexcept>

namespace letpf {

double volume_fraction(const std::array<double, 4>& phi, double reg) {
  if (reg < 0.0 || reg >= 0.5) throw std::domain_error("phi_reg must lie in [0, 0.5)");
  return volume_fraction_t(phi, reg);
}

std::optional<Vec2> lamination_normal(const Vec2& g, double tol) {
  const double len = g.norm();
  if (!(len > tol)) return std::nullopt;
  return g * (1.0 / len);
}

ElementClass classify_element(const std::array<double, 4>& phi, const quad4::PointData& centre,
                              double reg, double grad_tol) {
  ElementClass cls;
  cls.eta = volume_fraction(phi, reg);
  if (cls.eta <= 0.0) {
    cls.kind = Phase::Phase1;
    cls.eta = 0.0;
  } else if (cls.eta >= 1.0) {
    cls.kind = Phase::Phase2;
    cls.eta = 1.0;
  } else {
    cls.kind = Phase::Interface;
    Vec2 g;
    for (int a = 0; a < 4; ++a) {
      g.x += centre.dN(a, 0) * phi[a];
      g.y += centre.dN(a, 1) * phi[a];
    }
    cls.n = lamination_normal(g, grad_tol);
  }
  return cls;
}

std::vector<ElementClass> classify_elements(const Mesh& mesh, const std::vector<double>& phi, double reg) {
  if (static_cast<int>(phi.size()) != mesh.num_nodes()) {
    throw std::invalid_argument("classify_elements: one order-parameter value per node required");
  }
  const double tol = degenerate_gradient_tol(mesh.h);
  std::vector<ElementClass> out(mesh.elements.size());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& conn = mesh.elements[e];
    const std::array<double, 4> pe = {phi[conn[0]], phi[conn[1]], phi[conn[2]], phi[conn[3]]};
    const auto centre = quad4::evaluate(quad4::element_coords(mesh, e), 0.0, 0.0);
    out[e] = classify_element(pe, centre, reg, tol);
  }
  return out;
}

LaminateSolution solve_laminate(const SymTensor2& eps_bar, double eta, const Vec2& n,
                                const PhasePair& phases) {
  const Eigen::Vector3d ev = eps_bar.strain_voigt();
  const V3<double> eb = {ev[0], ev[1], ev[2]};
  const auto core = laminate_core<double>(eb, eta, n.x, n.y, phases);

  LaminateSolution s;
  s.c = {core.c[0], core.c[1]};
  s.eps1 = SymTensor2::from_strain_voigt({core.eps1[0], core.eps1[1], core.eps1[2]});
  s.eps2 = SymTensor2::from_strain_voigt({core.eps2[0], core.eps2[1], core.eps2[2]});
  s.sigma1 = SymTensor2::from_stress_voigt({core.sig1[0], core.sig1[1], core.sig1[2]});
  s.sigma2 = SymTensor2::from_stress_voigt({core.sig2[0], core.sig2[1], core.sig2[2]});
  s.sigma_bar = s.sigma1 * (1.0 - eta) + s.sigma2 * eta;
  s.psi1 = core.psi1;
  s.psi2 = core.psi2;
  s.psi_bar = core.psi_bar;
  const auto sens = laminate_sensitivities(s, eps_bar, eta, n, phases);
  s.dpsi_deps = sens.dpsi_deps;
  s.dpsi_deta = sens.dpsi_deta;
  s.dpsi_dn = sens.dpsi_dn;
  return s;
}

LaminateSensitivities laminate_sensitivities(const LaminateSolution& sol, const SymTensor2& /*eps_bar*/,
                                             double eta, const Vec2& n, const PhasePair& /*phases*/) {
  // psi_bar(eps, eta, n; c) = (1-eta) psi1(eps - eta dE) + eta psi2(eps + (1-eta) dE),
  // dE = sym(c (x) n); c is stationary so partials at fixed c are total derivatives.
  const SymTensor2 djump = rank_one_sym(sol.c, n);
  const SymTensor2 dsig = sol.sigma2 - sol.sigma1;
  LaminateSensitivities s;
  s.dpsi_deps = sol.sigma1 * (1.0 - eta) + sol.sigma2 * eta;
  s.dpsi_deta = sol.psi2 - sol.psi1 - s.dpsi_deps.ddot(djump);
  s.dpsi_dn = dsig.dot(sol.c) * (eta * (1.0 - eta));
  return s;
}

HomogeneousLaminate homogeneous_laminate(const SymTensor2& eps_bar, double eta, const Vec2& n,
                                         const PhasePair& phases) {
  const auto& L = phases[0].stiffness;
  if (!L.voigt.isApprox(phases[1].stiffness.voigt, 1e-14)) {
    throw std::invalid_argument("homogeneous_laminate requires identical phase stiffness");
  }
  const auto N = jump_operator(n);
  const Eigen::Matrix2d K = N.transpose() * L.voigt * N;
  HomogeneousLaminate r;
  r.relaxation.voigt = L.voigt - L.voigt * N * K.inverse() * N.transpose() * L.voigt;
  const SymTensor2 d_et = phases[1].eigenstrain - phases[0].eigenstrain;
  r.psi0_bar = (1.0 - eta) * phases[0].psi0 + eta * phases[1].psi0 +
               0.5 * eta * (1.0 - eta) * r.relaxation.contract(d_et, d_et);
  r.eigenstrain_bar = phases[0].eigenstrain * (1.0 - eta) + phases[1].eigenstrain * eta;
  const SymTensor2 e = eps_bar - r.eigenstrain_bar;
  r.sigma_bar = L.apply(e);
  r.psi_bar = r.psi0_bar + 0.5 * L.contract(e, e);
  return r;
}

}  // namespace letpf
