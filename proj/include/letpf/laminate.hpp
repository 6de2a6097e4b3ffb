#pragma once

// Laminated element technique: element volume fraction, lamination
// normal, element classification and the rank-one laminate
// micro-macro transition.

#include "letpf/jet.hpp"
#include "letpf/material.hpp"
#include "letpf/mesh.hpp"
#include "letpf/quad4.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <vector>

namespace letpf {

enum class Phase { Phase1, Phase2, Interface };

struct ElementClass {
  Phase kind = Phase::Phase1;
  double eta = 0.0;
  /// Lamination normal; empty for pure-phase elements and for interface
  /// elements whose centre gradient vanishes (Voigt-mixture fallback).
  std::optional<Vec2> n;
};

/// Regularized absolute value |x|_reg; plain |x| when reg == 0.
template <class T>
T reg_abs(const T& x, double reg) {
  const double v = value_of(x);
  if (reg > 0.0 && std::abs(v) < reg) return (x * x + reg * reg) / (2.0 * reg);
  return v < 0.0 ? -x : x;
}

/// Regularized Macauley bracket 1/2 (x + |x|_reg).
template <class T>
T reg_macauley(const T& x, double reg) {
  return 0.5 * (x + reg_abs(x, reg));
}

/// Volume fraction of phase 2 from nodal order parameters of a 4-node
/// element. Throws std::domain_error for an all-1/2 element with reg == 0.
template <class T>
T volume_fraction_t(const std::array<T, 4>& phi, double reg) {
  T num(0.0);
  T den(0.0);
  for (const auto& p : phi) {
    const T d = p - 0.5;
    num += reg_macauley(d, reg);
    den += reg_abs(d, reg);
  }
  if (value_of(den) == 0.0) throw std::domain_error("volume fraction undefined: all nodal values equal 1/2");
  return num / den;
}

double volume_fraction(const std::array<double, 4>& phi, double reg);

/// Unit normal grad/|grad|, or nothing when |grad| <= tol.
std::optional<Vec2> lamination_normal(const Vec2& grad_phi_centre, double tol);

/// Gradient tolerance below which an interface element uses the
/// Voigt-mixture fallback.
inline double degenerate_gradient_tol(double h) { return 1e-8 / h; }

ElementClass classify_element(const std::array<double, 4>& phi, const quad4::PointData& centre,
                              double reg, double grad_tol);
std::vector<ElementClass> classify_elements(const Mesh& mesh, const std::vector<double>& phi_nodal,
                                            double reg);

// ---------------------------------------------------------------------------
// Micro-macro transition, generic over the scalar type so that the same code
// serves plain evaluation and automatic differentiation.

template <class T>
using V3 = std::array<T, 3>;

template <class T>
struct LaminateCore {
  std::array<T, 2> c;
  V3<T> eps1, eps2;   // engineering Voigt strains
  V3<T> sig1, sig2;   // Voigt stresses
  T psi1, psi2, psi_bar;
};

namespace detail {

template <class T>
V3<T> mul(const Eigen::Matrix3d& C, const V3<T>& e) {
  V3<T> s;
  for (int i = 0; i < 3; ++i) s[i] = C(i, 0) * e[0] + C(i, 1) * e[1] + C(i, 2) * e[2];
  return s;
}

template <class T>
T dot(const V3<T>& a, const V3<T>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

}  // namespace detail

/// Solves traction continuity for the jump vector c and returns the
/// per-phase and averaged fields. With `voigt_mixture` set, c = 0 (both
/// phases carry the overall strain) and n is ignored.
template <class T>
LaminateCore<T> laminate_core(const V3<T>& eps_bar, const T& eta, const T& nx, const T& ny,
                              const PhasePair& phases, bool voigt_mixture = false) {
  using detail::mul;
  using detail::dot;
  const Eigen::Matrix3d& C1 = phases[0].stiffness.voigt;
  const Eigen::Matrix3d& C2 = phases[1].stiffness.voigt;
  const Eigen::Vector3d et1 = phases[0].eigenstrain.strain_voigt();
  const Eigen::Vector3d et2 = phases[1].eigenstrain.strain_voigt();

  V3<T> e1, e2;  // elastic strains at c = 0
  for (int i = 0; i < 3; ++i) {
    e1[i] = eps_bar[i] - et1[i];
    e2[i] = eps_bar[i] - et2[i];
  }

  LaminateCore<T> r;
  r.c = {T(0.0), T(0.0)};
  if (!voigt_mixture) {
    // N maps c to the engineering strain of sym(c (x) n).
    const T N[3][2] = {{nx, T(0.0)}, {T(0.0), ny}, {ny, nx}};
    const V3<T> s1 = mul(C1, e1);
    const V3<T> s2 = mul(C2, e2);
    T A[2][2];
    T b[2];
    for (int a = 0; a < 2; ++a) {
      b[a] = T(0.0);
      for (int p = 0; p < 3; ++p) b[a] -= N[p][a] * (s2[p] - s1[p]);
      for (int bb = 0; bb < 2; ++bb) {
        T k(0.0);
        for (int p = 0; p < 3; ++p) {
          for (int q = 0; q < 3; ++q) {
            k += N[p][a] * ((1.0 - eta) * C2(p, q) + eta * C1(p, q)) * N[q][bb];
          }
        }
        A[a][bb] = k;
      }
    }
    const T det = A[0][0] * A[1][1] - A[0][1] * A[1][0];
    if (std::abs(value_of(det)) < 1e-300) throw std::runtime_error("singular laminate compatibility system");
    r.c[0] = (A[1][1] * b[0] - A[0][1] * b[1]) / det;
    r.c[1] = (A[0][0] * b[1] - A[1][0] * b[0]) / det;
  }

  V3<T> djump;
  djump[0] = r.c[0] * nx;
  djump[1] = r.c[1] * ny;
  djump[2] = r.c[0] * ny + r.c[1] * nx;

  V3<T> el1, el2;
  for (int i = 0; i < 3; ++i) {
    r.eps1[i] = eps_bar[i] - eta * djump[i];
    r.eps2[i] = eps_bar[i] + (1.0 - eta) * djump[i];
    el1[i] = r.eps1[i] - et1[i];
    el2[i] = r.eps2[i] - et2[i];
  }
  r.sig1 = mul(C1, el1);
  r.sig2 = mul(C2, el2);
  r.psi1 = phases[0].psi0 + 0.5 * dot(el1, r.sig1);
  r.psi2 = phases[1].psi0 + 0.5 * dot(el2, r.sig2);
  r.psi_bar = (1.0 - eta) * r.psi1 + eta * r.psi2;
  return r;
}

// ---------------------------------------------------------------------------

struct LaminateSolution {
  Vec2 c;
  SymTensor2 eps1, eps2;
  SymTensor2 sigma1, sigma2;
  SymTensor2 sigma_bar;
  double psi1 = 0.0;
  double psi2 = 0.0;
  double psi_bar = 0.0;
  // Sensitivities of psi_bar.
  SymTensor2 dpsi_deps;
  double dpsi_deta = 0.0;
  Vec2 dpsi_dn;
};

struct LaminateSensitivities {
  SymTensor2 dpsi_deps;
  double dpsi_deta = 0.0;
  Vec2 dpsi_dn;
};

/// Rank-one laminate of the two phases with volume fraction eta of phase 2
/// and normal n (pointing from phase 1 to phase 2).
LaminateSolution solve_laminate(const SymTensor2& eps_bar, double eta, const Vec2& n,
                                const PhasePair& phases);

/// Partial derivatives of psi_bar at fixed c (exact by stationarity in c).
LaminateSensitivities laminate_sensitivities(const LaminateSolution& sol, const SymTensor2& eps_bar,
                                             double eta, const Vec2& n, const PhasePair& phases);

struct HomogeneousLaminate {
  double psi0_bar = 0.0;
  SymTensor2 eigenstrain_bar;
  Stiffness4 relaxation;  // S = L - L:(n (x) K^-1 (x) n):L
  double psi_bar = 0.0;
  SymTensor2 sigma_bar;
};

/// Closed-form laminate for phases sharing one stiffness tensor.
HomogeneousLaminate homogeneous_laminate(const SymTensor2& eps_bar, double eta, const Vec2& n,
                                         const PhasePair& phases);

}  // namespace letpf
