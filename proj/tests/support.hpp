#pragma once

// Shared helpers for the unit tests: seeded random generators and
// finite-difference utilities.

#include "letpf/material.hpp"
#include "letpf/tensor.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

namespace testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 g(20240521u);
  return g;
}

inline double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng()); }

inline letpf::Vec2 random_unit() {
  const double a = uniform(0.0, 2.0 * M_PI);
  return {std::cos(a), std::sin(a)};
}

inline letpf::SymTensor2 random_sym(double scale = 1.0) {
  return {uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale)};
}

inline letpf::Stiffness4 random_isotropic() {
  return letpf::isotropic_stiffness(uniform(0.5, 3.0), uniform(-0.3, 0.45));
}

/// Random symmetric positive definite 3x3 Voigt stiffness.
inline letpf::Stiffness4 random_spd() {
  Eigen::Matrix3d A;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) A(i, j) = uniform(-1.0, 1.0);
  return {A * A.transpose() + 0.5 * Eigen::Matrix3d::Identity()};
}

inline letpf::PhasePair random_phases(bool same_stiffness = false) {
  letpf::PhasePair p;
  for (auto& ph : p) {
    ph.psi0 = uniform(-0.01, 0.01);
    ph.eigenstrain = random_sym(0.1);
    ph.stiffness = random_isotropic();
  }
  if (same_stiffness) p[1].stiffness = p[0].stiffness;
  return p;
}

/// Relative difference with a floor on the denominator.
inline double rel_diff(double a, double b, double floor = 1e-12) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

/// Fourth-order central difference of a scalar function.
template <class F>
double central(F&& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

}  // namespace testing
