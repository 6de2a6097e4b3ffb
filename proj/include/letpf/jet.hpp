#pragma once

// Second-order forward-mode automatic differentiation over N variables.
// A Jet carries a value, its gradient and its (symmetric) Hessian.

#include <Eigen/Dense>

#include <cmath>

namespace letpf {

template <int N>
struct Jet {
  using Grad = Eigen::Matrix<double, N, 1>;
  using Hess = Eigen::Matrix<double, N, N>;

  double v = 0.0;
  Grad g = Grad::Zero();
  Hess H = Hess::Zero();

  Jet() = default;
  Jet(double value) : v(value) {}  // NOLINT: implicit constant promotion

  static Jet variable(double value, int index) {
    Jet j(value);
    j.g[index] = 1.0;
    return j;
  }

  /// Compose with a scalar function given f(v), f'(v), f''(v).
  Jet chain(double f, double df, double d2f) const {
    Jet r;
    r.v = f;
    r.g = df * g;
    r.H = df * H + d2f * (g * g.transpose());
    return r;
  }

  Jet& operator+=(const Jet& o) {
    v += o.v;
    g += o.g;
    H += o.H;
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    v -= o.v;
    g -= o.g;
    H -= o.H;
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    H = v * o.H + o.v * H + g * o.g.transpose() + o.g * g.transpose();
    g = v * o.g + o.v * g;
    v *= o.v;
    return *this;
  }
  Jet& operator*=(double s) {
    v *= s;
    g *= s;
    H *= s;
    return *this;
  }
  Jet& operator/=(const Jet& o) { return *this *= o.inverse(); }

  Jet inverse() const {
    const double iv = 1.0 / v;
    return chain(iv, -iv * iv, 2.0 * iv * iv * iv);
  }

  Jet operator-() const {
    Jet r;
    r.v = -v;
    r.g = -g;
    r.H = -H;
    return r;
  }
};

template <int N> Jet<N> operator+(Jet<N> a, const Jet<N>& b) { return a += b; }
template <int N> Jet<N> operator-(Jet<N> a, const Jet<N>& b) { return a -= b; }
template <int N> Jet<N> operator*(Jet<N> a, const Jet<N>& b) { return a *= b; }
template <int N> Jet<N> operator/(Jet<N> a, const Jet<N>& b) { return a /= b; }
template <int N> Jet<N> operator+(Jet<N> a, double b) { a.v += b; return a; }
template <int N> Jet<N> operator+(double b, Jet<N> a) { a.v += b; return a; }
template <int N> Jet<N> operator-(Jet<N> a, double b) { a.v -= b; return a; }
template <int N> Jet<N> operator-(double b, const Jet<N>& a) { return (-a) + b; }
template <int N> Jet<N> operator*(Jet<N> a, double b) { return a *= b; }
template <int N> Jet<N> operator*(double b, Jet<N> a) { return a *= b; }
template <int N> Jet<N> operator/(Jet<N> a, double b) { return a *= 1.0 / b; }
template <int N> Jet<N> operator/(double b, const Jet<N>& a) { return a.inverse() * b; }

template <int N>
Jet<N> sqrt(const Jet<N>& a) {
  const double s = std::sqrt(a.v);
  return a.chain(s, 0.5 / s, -0.25 / (s * a.v));
}

inline double value_of(double x) { return x; }
template <int N> double value_of(const Jet<N>& x) { return x.v; }

}  // namespace letpf
