#include "doctest.h"
#include "support.hpp"

#include "letpf/jet.hpp"
#include "letpf/laminate.hpp"
#include "letpf/material.hpp"
#include "letpf/mesh.hpp"

#include <stdexcept>

using namespace letpf;
using testing::central;
using testing::rel_diff;
using testing::uniform;

TEST_CASE("volume fraction examples") {
  CHECK(volume_fraction({0.8, 0.8, 0.8, 0.8}, 0.0) == 1.0);
  CHECK(volume_fraction({0.0, 1.0, 1.0, 0.0}, 0.0) == 0.5);
  CHECK(volume_fraction({0.0, 0.6, 0.9, 0.1}, 0.0) == doctest::Approx(0.5 / 1.4).epsilon(1e-15));
  CHECK(reg_abs(0.05, 0.1) == doctest::Approx(0.0625));
  CHECK(reg_macauley(0.05, 0.1) == doctest::Approx(0.05625));
  CHECK_THROWS_AS(volume_fraction({0.5, 0.5, 0.5, 0.5}, 0.0), std::domain_error);
  CHECK(volume_fraction({0.5, 0.5, 0.5, 0.5}, 0.1) == doctest::Approx(0.5));
  CHECK_THROWS_AS(volume_fraction({0.1, 0.2, 0.3, 0.4}, 0.5), std::domain_error);
}

TEST_CASE("volume fraction properties") {
  for (int trial = 0; trial < 2000; ++trial) {
    const double reg = uniform(0.001, 0.2);
    std::array<double, 4> phi;
    for (auto& p : phi) p = uniform(-0.2, 1.2);
    const double eta = volume_fraction(phi, reg);
    CHECK(eta >= 0.0);
    CHECK(eta <= 1.0);
    // Continuity: an O(delta) change for a nodal perturbation delta.
    for (int k = 0; k < 4; ++k) {
      auto q = phi;
      q[k] += 1e-8;
      CHECK(std::abs(volume_fraction(q, reg) - eta) < 1e-6);
    }
    // Pure-phase limits.
    std::array<double, 4> hi, lo;
    for (int k = 0; k < 4; ++k) {
      hi[k] = 0.5 + reg + uniform(0.0, 0.5);
      lo[k] = 0.5 - reg - uniform(0.0, 0.5);
    }
    CHECK(volume_fraction(hi, reg) == 1.0);
    CHECK(volume_fraction(lo, reg) == 0.0);
    // Inside the regularization band the fraction is strictly between 0 and 1.
    std::array<double, 4> mid;
    for (auto& p : mid) p = 0.5 + uniform(-0.999 * reg, 0.999 * reg);
    const double em = volume_fraction(mid, reg);
    CHECK(em > 0.0);
    CHECK(em < 1.0);
  }
}

TEST_CASE("volume fraction is C1 across a classification change") {
  // One node sweeps through the regularization threshold.
  const double reg = 0.1;
  auto f = [&](double x) { return volume_fraction({x, 0.9, 0.95, 0.1}, reg); };
  for (double x0 : {0.4, 0.6}) {
    const double left = (f(x0) - f(x0 - 1e-7)) / 1e-7;
    const double right = (f(x0 + 1e-7) - f(x0)) / 1e-7;
    CHECK(std::abs(left - right) < 1e-5);
  }
}

TEST_CASE("lamination normal") {
  auto a = lamination_normal({0, 5}, 1e-10);
  REQUIRE(a);
  CHECK(a->x == 0.0);
  CHECK(a->y == 1.0);
  auto b = lamination_normal({3, 4}, 1e-10);
  REQUIRE(b);
  CHECK(b->x == doctest::Approx(0.6));
  CHECK(b->y == doctest::Approx(0.8));
  CHECK_FALSE(lamination_normal({1e-15, 0}, 1e-10).has_value());
}

TEST_CASE("element classification") {
  const Mesh m = build_square_grid(1.0, 20);
  SUBCASE("uniform phase 1") {
    std::vector<double> phi(m.num_nodes(), 0.0);
    for (const auto& c : classify_elements(m, phi, 0.1)) CHECK(c.kind == Phase::Phase1);
  }
  SUBCASE("planar profile gives a one-element band") {
    const double x0 = 0.5 + 0.3 * m.h;
    std::vector<double> phi(m.num_nodes());
    for (int k = 0; k < m.num_nodes(); ++k) phi[k] = equilibrium_profile(m.nodes[k].x, x0, 1.5 * m.h);
    const auto cls = classify_elements(m, phi, 0.0);
    for (int e = 0; e < m.num_elements(); ++e) {
      const auto c = m.element_centroid(e);
      const bool straddles = std::abs(c.x - x0) < 0.5 * m.h;
      CHECK((cls[e].kind == Phase::Interface) == straddles);
      if (cls[e].kind == Phase::Interface) {
        REQUIRE(cls[e].n);
        CHECK(cls[e].n->x == doctest::Approx(1.0));
        CHECK(cls[e].eta > 0.0);
        CHECK(cls[e].eta < 1.0);
      } else {
        CHECK(cls[e].eta == (c.x > x0 ? 1.0 : 0.0));
      }
    }
  }
  SUBCASE("regularized band values are interface") {
    std::vector<double> phi(m.num_nodes());
    for (int k = 0; k < m.num_nodes(); ++k) phi[k] = 0.5 + 0.09 * std::sin(7 * m.nodes[k].x + 3 * m.nodes[k].y);
    for (const auto& c : classify_elements(m, phi, 0.1)) CHECK(c.kind == Phase::Interface);
  }
  SUBCASE("flat interface element has no normal") {
    std::vector<double> phi(m.num_nodes(), 0.5);
    const auto cls = classify_elements(m, phi, 0.1);
    CHECK(cls[0].kind == Phase::Interface);
    CHECK_FALSE(cls[0].n.has_value());
  }
}

TEST_CASE("laminate invariants on random states") {
  for (int trial = 0; trial < 10000; ++trial) {
    const auto ph = testing::random_phases();
    const auto eps = testing::random_sym(0.2);
    const double eta = uniform(0.001, 0.999);
    const Vec2 n = testing::random_unit();
    const auto s = solve_laminate(eps, eta, n, ph);
    const Vec2 jump = (s.sigma2 - s.sigma1).dot(n);
    CHECK(jump.norm() <= 1e-10 * std::max(1.0, s.sigma_bar.norm()));
    const auto avg_eps = s.eps1 * (1 - eta) + s.eps2 * eta;
    CHECK((avg_eps - eps).norm() < 1e-12);
    const auto avg_sig = s.sigma1 * (1 - eta) + s.sigma2 * eta;
    CHECK((avg_sig - s.sigma_bar).norm() < 1e-12);
    CHECK((s.eps2 - s.eps1 - rank_one_sym(s.c, n)).norm() < 1e-14);
    CHECK(std::abs(s.psi_bar - ((1 - eta) * s.psi1 + eta * s.psi2)) < 1e-12);
    CHECK((s.dpsi_deps - s.sigma_bar).norm() == 0.0);
  }
}

TEST_CASE("homogeneous elasticity closed form") {
  for (int trial = 0; trial < 10000; ++trial) {
    const auto ph = testing::random_phases(true);
    const auto eps = testing::random_sym(0.2);
    const double eta = uniform(0.001, 0.999);
    const Vec2 n = testing::random_unit();
    const auto s = solve_laminate(eps, eta, n, ph);
    const auto h = homogeneous_laminate(eps, eta, n, ph);
    CHECK(std::abs(s.psi_bar - h.psi_bar) < 1e-10);
    CHECK((s.sigma_bar - h.sigma_bar).norm() < 1e-10);
  }
  CHECK_THROWS_AS(homogeneous_laminate({}, 0.5, {1, 0}, testing::random_phases()), std::invalid_argument);
}

TEST_CASE("laminate examples") {
  SUBCASE("no contrast") {
    auto ph = testing::random_phases(true);
    ph[1].eigenstrain = ph[0].eigenstrain;
    const auto eps = testing::random_sym(0.2);
    const auto s = solve_laminate(eps, 0.3, {0.6, 0.8}, ph);
    CHECK(s.c.norm() < 1e-15);
    CHECK((s.sigma1 - s.sigma2).norm() < 1e-15);
    const double el = 0.5 * ph[0].stiffness.contract(eps - ph[0].eigenstrain, eps - ph[0].eigenstrain);
    CHECK(s.psi_bar == doctest::Approx(0.7 * ph[0].psi0 + 0.3 * ph[1].psi0 + el).epsilon(1e-13));
  }
  SUBCASE("volumetric jump with isotropic phases gives c parallel to n") {
    PhasePair ph;
    ph[0].stiffness = ph[1].stiffness = isotropic_stiffness(1.0, 0.25);
    ph[0].eigenstrain = SymTensor2::identity() * -0.1;
    ph[1].eigenstrain = SymTensor2::identity() * 0.1;
    for (int t = 0; t < 50; ++t) {
      const Vec2 n = testing::random_unit();
      const auto s = solve_laminate(testing::random_sym(0.1), uniform(0.1, 0.9), n, ph);
      CHECK(std::abs(s.c.x * n.y - s.c.y * n.x) < 1e-14);
    }
  }
  SUBCASE("identical phases have zero eta sensitivity") {
    auto ph = testing::random_phases(true);
    ph[1] = ph[0];
    const auto s = solve_laminate(testing::random_sym(0.1), 0.4, {1, 0}, ph);
    CHECK(std::abs(s.dpsi_deta) < 1e-15);
  }
}

TEST_CASE("laminate sensitivities match finite differences") {
  for (int trial = 0; trial < 1000; ++trial) {
    const auto ph = testing::random_phases();
    const auto eps = testing::random_sym(0.2);
    const double eta = uniform(0.05, 0.95);
    const Vec2 n = testing::random_unit();
    const auto s = solve_laminate(eps, eta, n, ph);
    const double h = 1e-4;
    auto psi_eta = [&](double e) { return solve_laminate(eps, e, n, ph).psi_bar; };
    auto psi_nx = [&](double d) { return solve_laminate(eps, eta, {n.x + d, n.y}, ph).psi_bar; };
    auto psi_ny = [&](double d) { return solve_laminate(eps, eta, {n.x, n.y + d}, ph).psi_bar; };
    auto psi_exx = [&](double d) { return solve_laminate(eps + SymTensor2{d, 0, 0}, eta, n, ph).psi_bar; };
    auto psi_exy = [&](double d) { return solve_laminate(eps + SymTensor2{0, 0, d}, eta, n, ph).psi_bar; };
    const double scale = 1e-6;  // derivatives are O(1e-2); below this FD roundoff dominates
    CHECK(rel_diff(s.dpsi_deta, central(psi_eta, eta, h), scale) < 1e-6);
    CHECK(rel_diff(s.dpsi_dn.x, central(psi_nx, 0.0, h), scale) < 1e-6);
    CHECK(rel_diff(s.dpsi_dn.y, central(psi_ny, 0.0, h), scale) < 1e-6);
    CHECK(rel_diff(s.dpsi_deps.xx, central(psi_exx, 0.0, h), scale) < 1e-6);
    CHECK(rel_diff(2.0 * s.dpsi_deps.xy, central(psi_exy, 0.0, h), scale) < 1e-6);
  }
}

TEST_CASE("automatic differentiation of the laminate core") {
  using J = Jet<5>;
  for (int trial = 0; trial < 200; ++trial) {
    const auto ph = testing::random_phases();
    const auto eps = testing::random_sym(0.2);
    const Eigen::Vector3d ev = eps.strain_voigt();
    const double eta = uniform(0.05, 0.95);
    const Vec2 n = testing::random_unit();
    const V3<J> e{J::variable(ev[0], 0), J::variable(ev[1], 1), J::variable(ev[2], 2)};
    const auto core = laminate_core<J>(e, J::variable(eta, 3), J::variable(n.x, 4), J(n.y), ph);
    auto f = [&](int k, double d) {
      Eigen::Vector3d v = ev;
      double et = eta, nx = n.x;
      if (k < 3) v[k] += d;
      if (k == 3) et += d;
      if (k == 4) nx += d;
      return laminate_core<double>({v[0], v[1], v[2]}, et, nx, n.y, ph).psi_bar;
    };
    for (int k = 0; k < 5; ++k) {
      CHECK(rel_diff(core.psi_bar.g[k], central([&](double d) { return f(k, d); }, 0.0, 1e-4), 1e-6) < 1e-6);
    }
    // Second derivatives by differencing first derivatives of the Jet at shifted points.
    for (int l = 0; l < 5; ++l) {
      auto grad_k = [&](int k, double d) {
        Eigen::Vector3d v = ev;
        double et = eta, nx = n.x;
        if (l < 3) v[l] += d;
        if (l == 3) et += d;
        if (l == 4) nx += d;
        const V3<J> e2{J::variable(v[0], 0), J::variable(v[1], 1), J::variable(v[2], 2)};
        return laminate_core<J>(e2, J::variable(et, 3), J::variable(nx, 4), J(n.y), ph).psi_bar.g[k];
      };
      for (int k = 0; k < 5; ++k) {
        const double fd = central([&](double d) { return grad_k(k, d); }, 0.0, 1e-4);
        CHECK(rel_diff(core.psi_bar.H(k, l), fd, 1e-7) < 1e-5);
      }
    }
  }
}
