#include "doctest.h"
#include "support.hpp"

#include "letpf/material.hpp"

using namespace letpf;
using testing::central;
using testing::rel_diff;
using testing::uniform;

TEST_CASE("interpolation function") {
  auto a = interp_h(0.0);
  CHECK(a.h == 0.0);
  CHECK(a.dh == 0.0);
  CHECK(a.d2h == 6.0);
  auto b = interp_h(1.0);
  CHECK(b.h == 1.0);
  CHECK(b.dh == 0.0);
  CHECK(b.d2h == -6.0);
  auto c = interp_h(0.5);
  CHECK(c.h == 0.5);
  CHECK(c.dh == 1.5);
  CHECK(c.d2h == 0.0);
  for (int i = 0; i < 1000; ++i) {
    const double p = uniform(-0.5, 1.5);
    CHECK(interp_h(p).h + interp_h(1.0 - p).h == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(rel_diff(interp_h(p).dh, central([](double x) { return interp_h(x).h; }, p, 1e-3), 1e-8) < 1e-9);
    CHECK(rel_diff(interp_h(p).d2h, central([](double x) { return interp_h(x).dh; }, p, 1e-3), 1e-8) < 1e-9);
  }
}

TEST_CASE("bulk energy examples") {
  PhasePair ph;
  ph[0].stiffness = isotropic_stiffness(1.0, 0.25);
  ph[1].stiffness = isotropic_stiffness(2.0, 0.3);
  ph[0].eigenstrain = {0.1, 0.1, 0.0};
  ph[1].eigenstrain = {-0.05, 0.02, 0.01};
  ph[0].psi0 = 0.3;
  ph[1].psi0 = -0.2;
  const auto r = bulk_energy_pfm(ph[0].eigenstrain, 0.0, ph);
  CHECK(r.psi == doctest::Approx(0.3));
  CHECK(r.sigma.norm() == doctest::Approx(0.0));
  CHECK(r.dpsi_dphi == 0.0);

  PhasePair same = ph;
  same[1] = same[0];
  for (int i = 0; i < 100; ++i) {
    const auto rr = bulk_energy_pfm(testing::random_sym(), uniform(-0.2, 1.2), same);
    CHECK(std::abs(rr.dpsi_dphi) < 1e-15);
  }
}

TEST_CASE("bulk energy derivatives match finite differences") {
  for (int trial = 0; trial < 1000; ++trial) {
    const auto ph = testing::random_phases();
    const auto eps = testing::random_sym(0.2);
    const double phi = uniform(-0.1, 1.1);
    const auto r = bulk_energy_pfm(eps, phi, ph);
    const double h = 1e-4;
    auto psi_of_phi = [&](double p) { return bulk_energy_pfm(eps, p, ph).psi; };
    auto dpsi_of_phi = [&](double p) { return bulk_energy_pfm(eps, p, ph).dpsi_dphi; };
    CHECK(rel_diff(r.dpsi_dphi, central(psi_of_phi, phi, h), 1e-8) < 1e-6);
    CHECK(rel_diff(r.d2psi_dphi2, central(dpsi_of_phi, phi, h), 1e-8) < 1e-6);
    // sigma = d psi / d eps (tensor components; shear counted twice in psi).
    auto comp = [&](int k) {
      return [&, k](double d) {
        SymTensor2 e = eps;
        (k == 0 ? e.xx : k == 1 ? e.yy : e.xy) += d;
        return bulk_energy_pfm(e, phi, ph).psi;
      };
    };
    CHECK(rel_diff(r.sigma.xx, central(comp(0), 0.0, h), 1e-8) < 1e-6);
    CHECK(rel_diff(r.sigma.yy, central(comp(1), 0.0, h), 1e-8) < 1e-6);
    CHECK(rel_diff(2.0 * r.sigma.xy, central(comp(2), 0.0, h), 1e-8) < 1e-6);
    auto sxx = [&](double p) { return bulk_energy_pfm(eps, p, ph).sigma.xx; };
    auto sxy = [&](double p) { return bulk_energy_pfm(eps, p, ph).sigma.xy; };
    CHECK(rel_diff(r.dsigma_dphi.xx, central(sxx, phi, h), 1e-8) < 1e-6);
    CHECK(rel_diff(r.dsigma_dphi.xy, central(sxy, phi, h), 1e-8) < 1e-6);
    // Elastic part is nonnegative.
    const double w = interp_h(phi).h;
    CHECK(r.psi - ((1 - w) * ph[0].psi0 + w * ph[1].psi0) >= -1e-15);
  }
}

TEST_CASE("interfacial energy") {
  const auto ip = InterfaceParams::make(0.0008, 0.03, 1.0);
  auto a = interfacial_energy(0.5, {0, 0}, ip);
  CHECK(a.psi == doctest::Approx(0.375 * 0.0008 / 0.03).epsilon(1e-14));
  CHECK(a.dpsi_dphi == doctest::Approx(0.0));
  for (double p : {0.0, 1.0}) {
    auto b = interfacial_energy(p, {0, 0}, ip);
    CHECK(b.psi == 0.0);
    CHECK(b.dpsi_dphi == 0.0);
  }
  for (int trial = 0; trial < 1000; ++trial) {
    const auto q = InterfaceParams::make(uniform(1e-4, 3e-3), uniform(0.005, 0.1), uniform(0.5, 2));
    const double phi = uniform(-0.2, 1.2);
    const Vec2 g{uniform(-30, 30), uniform(-30, 30)};
    const auto r = interfacial_energy(phi, g, q);
    CHECK(r.psi >= 0.0);
    const double h = 1e-4;
    CHECK(rel_diff(r.dpsi_dphi, central([&](double p) { return interfacial_energy(p, g, q).psi; }, phi, h),
                   1e-10) < 1e-6);
    CHECK(rel_diff(r.d2psi_dphi2,
                   central([&](double p) { return interfacial_energy(p, g, q).dpsi_dphi; }, phi, h), 1e-10) <
          1e-6);
    auto gx = [&](double d) { return interfacial_energy(phi, {g.x + d, g.y}, q).psi; };
    auto gy = [&](double d) { return interfacial_energy(phi, {g.x, g.y + d}, q).psi; };
    CHECK(rel_diff(r.dpsi_dgrad.x, central(gx, 0.0, 1e-3), 1e-10) < 1e-6);
    CHECK(rel_diff(r.dpsi_dgrad.y, central(gy, 0.0, 1e-3), 1e-10) < 1e-6);
    CHECK(r.dpsi_dgrad.x == doctest::Approx(3 * q.gamma * q.ell * g.x));
    CHECK(r.d2psi_dgrad2 == doctest::Approx(3 * q.gamma * q.ell));
  }
}

TEST_CASE("profile integral of the interfacial energy equals gamma") {
  // Composite Simpson over +-25 ell with the exact profile derivative.
  for (double ell : {0.01, 0.03, 0.5}) {
    const double gamma = 0.0008;
    const auto ip = InterfaceParams::make(gamma, ell, 1.0);
    const int n = 20000;
    const double a = -25 * ell, b = 25 * ell, dx = (b - a) / n;
    double sum = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double x = a + k * dx;
      const double phi = equilibrium_profile(x, 0.0, ell);
      const double sech = 1.0 / std::cosh(x / ell);
      const double dphi = 0.5 * sech * sech / ell;
      const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
      sum += w * interfacial_energy(phi, {dphi, 0.0}, ip).psi;
    }
    CHECK(std::abs(sum * dx / 3.0 - gamma) / gamma < 1e-6);
  }
}

TEST_CASE("equilibrium profile and mobility") {
  CHECK(equilibrium_profile(0.3, 0.3, 0.1) == 0.5);
  CHECK(equilibrium_profile(1e3, 0.0, 0.1) == doctest::Approx(1.0));
  CHECK(equilibrium_profile(0.1, 0.0, 0.1) == doctest::Approx(0.88079707797788).epsilon(1e-12));
  CHECK(mobility_from_effective(1.0, 1.0 / 3.0) == doctest::Approx(1.0));
  CHECK(mobility_from_effective(1.0, 0.03) == doctest::Approx(11.1111111111).epsilon(1e-9));
  const auto ip = InterfaceParams::make(0.001, 0.03, 1.7);
  CHECK(3.0 * ip.m * ip.ell == doctest::Approx(1.7).epsilon(1e-15));
  CHECK_THROWS(InterfaceParams::make(0.0, 0.03, 1.0));
  CHECK_THROWS(InterfaceParams::make(0.001, -1.0, 1.0));
}
