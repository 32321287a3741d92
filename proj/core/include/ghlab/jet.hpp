#pragma once
// Second order forward-mode jets: value, gradient and Hessian in N variables.

#include <array>
#include <cmath>

namespace ghlab {

template <int N>
struct Jet {
  double v = 0.0;
  std::array<double, N> d{};
  std::array<std::array<double, N>, N> h{};

  Jet() = default;
  Jet(double value) : v(value) {}  // NOLINT: implicit constants are convenient

  static Jet variable(double value, int k) {
    Jet j(value);
    j.d[k] = 1.0;
    return j;
  }

  Jet& operator+=(const Jet& o) {
    v += o.v;
    for (int i = 0; i < N; ++i) {
      d[i] += o.d[i];
      for (int k = 0; k < N; ++k) h[i][k] += o.h[i][k];
    }
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    v -= o.v;
    for (int i = 0; i < N; ++i) {
      d[i] -= o.d[i];
      for (int k = 0; k < N; ++k) h[i][k] -= o.h[i][k];
    }
    return *this;
  }
  Jet& operator*=(double s) {
    v *= s;
    for (int i = 0; i < N; ++i) {
      d[i] *= s;
      for (int k = 0; k < N; ++k) h[i][k] *= s;
    }
    return *this;
  }
};

// g = phi(u) given phi(u.v), phi'(u.v), phi''(u.v).
template <int N>
Jet<N> chain(const Jet<N>& u, double f0, double f1, double f2) {
  Jet<N> r(f0);
  for (int i = 0; i < N; ++i) {
    r.d[i] = f1 * u.d[i];
    for (int k = 0; k < N; ++k) r.h[i][k] = f1 * u.h[i][k] + f2 * u.d[i] * u.d[k];
  }
  return r;
}

template <int N> Jet<N> operator+(Jet<N> a, const Jet<N>& b) { return a += b; }
template <int N> Jet<N> operator-(Jet<N> a, const Jet<N>& b) { return a -= b; }
template <int N> Jet<N> operator+(Jet<N> a, double s) { a.v += s; return a; }
template <int N> Jet<N> operator+(double s, Jet<N> a) { a.v += s; return a; }
template <int N> Jet<N> operator-(Jet<N> a, double s) { a.v -= s; return a; }
template <int N> Jet<N> operator-(double s, const Jet<N>& a) { Jet<N> r = a; r *= -1.0; r.v += s; return r; }
template <int N> Jet<N> operator-(Jet<N> a) { a *= -1.0; return a; }
template <int N> Jet<N> operator*(Jet<N> a, double s) { return a *= s; }
template <int N> Jet<N> operator*(double s, Jet<N> a) { return a *= s; }
template <int N> Jet<N> operator/(Jet<N> a, double s) { return a *= 1.0 / s; }

template <int N>
Jet<N> operator*(const Jet<N>& a, const Jet<N>& b) {
  Jet<N> r(a.v * b.v);
  for (int i = 0; i < N; ++i) {
    r.d[i] = a.d[i] * b.v + a.v * b.d[i];
    for (int k = 0; k < N; ++k)
      r.h[i][k] = a.h[i][k] * b.v + a.v * b.h[i][k] + a.d[i] * b.d[k] + a.d[k] * b.d[i];
  }
  return r;
}

template <int N>
Jet<N> inv(const Jet<N>& u) {
  const double x = u.v;
  return chain(u, 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x));
}
template <int N> Jet<N> operator/(const Jet<N>& a, const Jet<N>& b) { return a * inv(b); }
template <int N> Jet<N> operator/(double s, const Jet<N>& b) { return inv(b) * s; }

template <int N>
Jet<N> sqrt(const Jet<N>& u) {
  const double s = std::sqrt(u.v);
  return chain(u, s, 0.5 / s, -0.25 / (s * u.v));
}
template <int N>
Jet<N> log(const Jet<N>& u) {
  return chain(u, std::log(u.v), 1.0 / u.v, -1.0 / (u.v * u.v));
}
template <int N>
Jet<N> exp(const Jet<N>& u) {
  const double e = std::exp(u.v);
  return chain(u, e, e, e);
}
template <int N>
Jet<N> atan(const Jet<N>& u) {
  const double q = 1.0 + u.v * u.v;
  return chain(u, std::atan(u.v), 1.0 / q, -2.0 * u.v / (q * q));
}
template <int N>
Jet<N> asinh(const Jet<N>& u) {
  const double q = 1.0 + u.v * u.v;
  const double s = std::sqrt(q);
  return chain(u, std::asinh(u.v), 1.0 / s, -u.v / (q * s));
}

}  // namespace ghlab
