#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace gapstress {

/// Second-order forward-mode value: carries exact gradient and Hessian with
/// respect to N independent coordinates.  Used to differentiate the auxiliary
/// fields in closed form (chain rule, no finite differences).
template <int N>
struct Dual {
  using Vec = Eigen::Matrix<double, N, 1>;
  using Mat = Eigen::Matrix<double, N, N>;

  double v = 0.0;
  Vec g = Vec::Zero();
  Mat h = Mat::Zero();

  Dual() = default;
  Dual(double value) : v(value) {}  // implicit constant

  static Dual variable(int i, double value) {
    Dual d(value);
    d.g(i) = 1.0;
    return d;
  }

  Dual operator-() const {
    Dual r;
    r.v = -v; r.g = -g; r.h = -h;
    return r;
  }
};

template <int N>
Dual<N> operator+(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> r;
  r.v = a.v + b.v; r.g = a.g + b.g; r.h = a.h + b.h;
  return r;
}
template <int N>
Dual<N> operator-(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> r;
  r.v = a.v - b.v; r.g = a.g - b.g; r.h = a.h - b.h;
  return r;
}
template <int N>
Dual<N> operator*(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> r;
  r.v = a.v * b.v;
  r.g = a.g * b.v + b.g * a.v;
  r.h = a.h * b.v + b.h * a.v + a.g * b.g.transpose() + b.g * a.g.transpose();
  return r;
}

/// Composition with a scalar function given its value and first two
/// derivatives at a.v.
template <int N>
Dual<N> chain(const Dual<N>& a, double s0, double s1, double s2) {
  Dual<N> r;
  r.v = s0;
  r.g = s1 * a.g;
  r.h = s1 * a.h + s2 * (a.g * a.g.transpose());
  return r;
}

template <int N>
Dual<N> inverse(const Dual<N>& a) {
  const double iv = 1.0 / a.v;
  return chain(a, iv, -iv * iv, 2.0 * iv * iv * iv);
}

template <int N>
Dual<N> operator/(const Dual<N>& a, const Dual<N>& b) {
  return a * inverse(b);
}
template <int N>
Dual<N> operator*(double s, const Dual<N>& a) {
  return Dual<N>(s) * a;
}
template <int N>
Dual<N> operator*(const Dual<N>& a, double s) {
  return Dual<N>(s) * a;
}
template <int N>
Dual<N> operator+(double s, const Dual<N>& a) { return Dual<N>(s) + a; }
template <int N>
Dual<N> operator+(const Dual<N>& a, double s) { return a + Dual<N>(s); }
template <int N>
Dual<N> operator-(double s, const Dual<N>& a) { return Dual<N>(s) - a; }
template <int N>
Dual<N> operator-(const Dual<N>& a, double s) { return a - Dual<N>(s); }
template <int N>
Dual<N> operator/(const Dual<N>& a, double s) { return a * (1.0 / s); }

template <int N>
Dual<N> sqr(const Dual<N>& a) { return a * a; }

/// a^p for a >= 0.  At a == 0 the derivative factors are replaced by their
/// zero limits (valid whenever the seed gradient of a vanishes there, which
/// holds for a = |x'|^2 at the contact point).
template <int N>
Dual<N> pow_nonneg(const Dual<N>& a, double p) {
  if (a.v < 0.0) throw std::domain_error("pow_nonneg: negative base");
  if (a.v == 0.0) {
    double s1 = (p == 1.0) ? 1.0 : 0.0;
    double s2 = (p == 2.0) ? 2.0 : 0.0;
    return chain(a, 0.0, s1, s2);
  }
  const double s0 = std::pow(a.v, p);
  return chain(a, s0, p * s0 / a.v, p * (p - 1.0) * s0 / (a.v * a.v));
}

/// |x|^p for integer-like p >= 2 of a signed scalar coordinate, with the
/// removable-singularity guard at x = 0.
template <int N>
Dual<N> abs_pow(const Dual<N>& x, double p) {
  if (x.v == 0.0) {
    double s1 = (p == 1.0) ? 1.0 : 0.0;
    double s2 = (p == 2.0) ? 2.0 : 0.0;
    return chain(x, 0.0, s1, s2);
  }
  const double ax = std::abs(x.v);
  const double s0 = std::pow(ax, p);
  const double sgn = x.v > 0.0 ? 1.0 : -1.0;
  return chain(x, s0, sgn * p * s0 / ax, p * (p - 1.0) * s0 / (ax * ax));
}

}  // namespace gapstress
