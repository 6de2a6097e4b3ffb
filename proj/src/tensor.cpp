#include "letpf/tensor.hpp"

#include <stdexcept>
#include <string>

namespace letpf {

Lame lame_from_young(double E, double nu) {
  if (!(E > 0.0)) {
    throw std::domain_error("Young's modulus must be positive, got " + std::to_string(E));
  }
  if (!(nu > -1.0 && nu < 0.5)) {
    throw std::domain_error("Poisson's ratio must lie in (-1, 0.5), got " + std::to_string(nu));
  }
  return {E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)), E / (2.0 * (1.0 + nu))};
}

Stiffness4 isotropic_stiffness(const Lame& lame) {
  const double l = lame.lambda;
  const double m = lame.mu;
  Stiffness4 C;
  C.voigt << l + 2.0 * m, l, 0.0,
             l, l + 2.0 * m, 0.0,
             0.0, 0.0, m;
  return C;
}

Stiffness4 isotropic_stiffness(double E, double nu) {
  return isotropic_stiffness(lame_from_young(E, nu));
}

Eigen::Matrix2d acoustic_tensor(const Stiffness4& L, const Vec2& n) {
  const auto N = jump_operator(n);
  return N.transpose() * L.voigt * N;
}

SymTensor2 rank_one_sym(const Vec2& c, const Vec2& n) {
  return {c.x * n.x, c.y * n.y, 0.5 * (c.x * n.y + c.y * n.x)};
}

}  // namespace letpf
