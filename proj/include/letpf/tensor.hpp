#pragma once

// Plane-strain tensor algebra.
//
// Storage convention (used everywhere in the library):
//   SymTensor2 keeps the tensorial components (xx, yy, xy).
//   Strain enters Voigt form with ENGINEERING shear, (xx, yy, 2 xy);
//   stress enters Voigt form as (xx, yy, xy).
//   Stiffness4 is the 3x3 matrix with sigma_voigt = C * strain_voigt.
// With this convention A : B = a_voigt_stress . b_voigt_strain and the
// elastic energy density is 1/2 e^T C e for an engineering-Voigt strain e.

#include <Eigen/Dense>

#include <cmath>
#include <optional>

namespace letpf {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  double norm() const { return std::hypot(x, y); }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator-() const { return {-x, -y}; }
};

struct SymTensor2 {
  double xx = 0.0;
  double yy = 0.0;
  double xy = 0.0;

  static SymTensor2 identity() { return {1.0, 1.0, 0.0}; }
  static SymTensor2 from_strain_voigt(const Eigen::Vector3d& v) {
    return {v[0], v[1], 0.5 * v[2]};
  }
  static SymTensor2 from_stress_voigt(const Eigen::Vector3d& v) {
    return {v[0], v[1], v[2]};
  }

  Eigen::Vector3d strain_voigt() const { return {xx, yy, 2.0 * xy}; }
  Eigen::Vector3d stress_voigt() const { return {xx, yy, xy}; }

  /// Double contraction A : B.
  double ddot(const SymTensor2& o) const {
    return xx * o.xx + yy * o.yy + 2.0 * xy * o.xy;
  }
  double norm() const { return std::sqrt(ddot(*this)); }

  /// Traction-like product (A . v).
  Vec2 dot(const Vec2& v) const { return {xx * v.x + xy * v.y, xy * v.x + yy * v.y}; }

  SymTensor2 operator+(const SymTensor2& o) const { return {xx + o.xx, yy + o.yy, xy + o.xy}; }
  SymTensor2 operator-(const SymTensor2& o) const { return {xx - o.xx, yy - o.yy, xy - o.xy}; }
  SymTensor2 operator*(double s) const { return {xx * s, yy * s, xy * s}; }
};

inline SymTensor2 operator*(double s, const SymTensor2& t) { return t * s; }

struct Stiffness4 {
  Eigen::Matrix3d voigt = Eigen::Matrix3d::Identity();

  SymTensor2 apply(const SymTensor2& strain) const {
    return SymTensor2::from_stress_voigt(voigt * strain.strain_voigt());
  }
  /// Quadratic form a : L : b for two strains.
  double contract(const SymTensor2& a, const SymTensor2& b) const {
    return a.strain_voigt().dot(voigt * b.strain_voigt());
  }

  Stiffness4 operator+(const Stiffness4& o) const { return {voigt + o.voigt}; }
  Stiffness4 operator-(const Stiffness4& o) const { return {voigt - o.voigt}; }
  Stiffness4 operator*(double s) const { return {voigt * s}; }
};

struct Lame {
  double lambda = 0.0;
  double mu = 0.0;
};

/// Lamé constants for plane strain; throws std::domain_error for
/// E <= 0 or nu outside (-1, 0.5).
Lame lame_from_young(double E, double nu);

Stiffness4 isotropic_stiffness(double E, double nu);
Stiffness4 isotropic_stiffness(const Lame& lame);

/// Maps a jump vector c to the engineering-Voigt strain of sym(c (x) n).
inline Eigen::Matrix<double, 3, 2> jump_operator(const Vec2& n) {
  Eigen::Matrix<double, 3, 2> N;
  N << n.x, 0.0,
       0.0, n.y,
       n.y, n.x;
  return N;
}

/// K_ij = n_a L_aijb n_b.
Eigen::Matrix2d acoustic_tensor(const Stiffness4& L, const Vec2& n);

/// 1/2 (c (x) n + n (x) c).
SymTensor2 rank_one_sym(const Vec2& c, const Vec2& n);

}  // namespace letpf
