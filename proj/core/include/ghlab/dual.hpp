#pragma once
// First order forward-mode duals: value and gradient in N variables.

#include <array>
#include <cmath>

namespace ghlab {

template <int N>
struct Dual {
  double v = 0.0;
  std::array<double, N> d{};

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT: implicit constants are convenient

  static Dual variable(double value, int k) {
    Dual r(value);
    r.d[k] = 1.0;
    return r;
  }

  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (int i = 0; i < N; ++i) d[i] += o.d[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (int i = 0; i < N; ++i) d[i] -= o.d[i];
    return *this;
  }
  Dual& operator*=(double s) {
    v *= s;
    for (double& x : d) x *= s;
    return *this;
  }
};

template <int N>
Dual<N> chain(const Dual<N>& u, double f0, double f1) {
  Dual<N> r(f0);
  for (int i = 0; i < N; ++i) r.d[i] = f1 * u.d[i];
  return r;
}

template <int N> Dual<N> operator+(Dual<N> a, const Dual<N>& b) { return a += b; }
template <int N> Dual<N> operator-(Dual<N> a, const Dual<N>& b) { return a -= b; }
template <int N> Dual<N> operator+(Dual<N> a, double s) { a.v += s; return a; }
template <int N> Dual<N> operator+(double s, Dual<N> a) { a.v += s; return a; }
template <int N> Dual<N> operator-(Dual<N> a, double s) { a.v -= s; return a; }
template <int N> Dual<N> operator-(double s, Dual<N> a) { a *= -1.0; a.v += s; return a; }
template <int N> Dual<N> operator-(Dual<N> a) { a *= -1.0; return a; }
template <int N> Dual<N> operator*(Dual<N> a, double s) { return a *= s; }
template <int N> Dual<N> operator*(double s, Dual<N> a) { return a *= s; }
template <int N> Dual<N> operator/(Dual<N> a, double s) { return a *= 1.0 / s; }

template <int N>
Dual<N> operator*(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> r(a.v * b.v);
  for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
  return r;
}
template <int N>
Dual<N> operator/(const Dual<N>& a, const Dual<N>& b) {
  const double q = a.v / b.v;
  Dual<N> r(q);
  for (int i = 0; i < N; ++i) r.d[i] = (a.d[i] - q * b.d[i]) / b.v;
  return r;
}
template <int N>
Dual<N> operator/(double s, const Dual<N>& b) {
  return chain(b, s / b.v, -s / (b.v * b.v));
}

template <int N> Dual<N> sqrt(const Dual<N>& u) { const double s = std::sqrt(u.v); return chain(u, s, 0.5 / s); }
template <int N> Dual<N> exp(const Dual<N>& u) { const double e = std::exp(u.v); return chain(u, e, e); }
template <int N> Dual<N> log(const Dual<N>& u) { return chain(u, std::log(u.v), 1.0 / u.v); }
template <int N> Dual<N> cos(const Dual<N>& u) { return chain(u, std::cos(u.v), -std::sin(u.v)); }
template <int N> Dual<N> sin(const Dual<N>& u) { return chain(u, std::sin(u.v), std::cos(u.v)); }
template <int N>
Dual<N> erfc(const Dual<N>& u) {
  return chain(u, std::erfc(u.v), -1.1283791670955126 * std::exp(-u.v * u.v));
}

inline double value_of(double x) { return x; }
template <int N> double value_of(const Dual<N>& x) { return x.v; }

}  // namespace ghlab
