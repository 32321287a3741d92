#pragma once
// Numerical engines shared by the field modules: quadrature, finite differences,
// flux integrals, Fourier modes, certified lattice sums, regularized limits and
// path integrals. Every engine reports a value together with an error estimate.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace ghlab {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEulerGamma = 0.57721566490153286061;

struct Certified {
  double value = 0.0;
  double error = 0.0;
};

template <class T>
struct Estimate {
  T value{};
  double error = 0.0;
};

class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const cplx& v) { return std::abs(v); }
template <class Derived>
double magnitude(const Eigen::MatrixBase<Derived>& v) { return v.cwiseAbs().maxCoeff(); }
template <std::size_t K>
double magnitude(const std::array<double, K>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

template <class T>
T scaled(T v, double s) {
  v *= s;
  return v;
}

template <std::size_t K>
std::array<double, K>& operator+=(std::array<double, K>& a, const std::array<double, K>& b) {
  for (std::size_t i = 0; i < K; ++i) a[i] += b[i];
  return a;
}
template <std::size_t K>
std::array<double, K>& operator*=(std::array<double, K>& a, double s) {
  for (double& x : a) x *= s;
  return a;
}
template <std::size_t K>
std::array<double, K> operator*(double s, std::array<double, K> a) { return a *= s; }
template <std::size_t K>
std::array<double, K> operator-(std::array<double, K> a, const std::array<double, K>& b) {
  for (std::size_t i = 0; i < K; ++i) a[i] -= b[i];
  return a;
}

// ---------------------------------------------------------------------------
// Quadrature

struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

/// Gauss-Legendre rule on [-1, 1] (cached, thread safe).
const GaussRule& gauss_legendre(int n);

template <class T, class F>
T gauss_integrate(F&& f, double a, double b, int n) {
  const GaussRule& g = gauss_legendre(n);
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  T acc = f(c + r * g.x[0]);
  acc *= g.w[0];
  for (std::size_t i = 1; i < g.x.size(); ++i) {
    T v = f(c + r * g.x[i]);
    v *= g.w[i];
    acc += v;
  }
  acc *= r;
  return acc;
}

namespace detail {
struct KronrodTable {
  std::array<double, 8> xk;
  std::array<double, 8> wk;
  std::array<double, 4> wg;
};
const KronrodTable& gk15();

template <class T, class F>
void gk15_panel(F& f, double a, double b, T& result, double& err) {
  const auto& t = gk15();
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  T fc = f(c);
  T k = fc;
  k *= t.wk[7];
  T g = fc;
  g *= t.wg[3];
  for (int i = 0; i < 7; ++i) {
    T f1 = f(c - r * t.xk[i]);
    T f2 = f(c + r * t.xk[i]);
    T s = f1;
    s += f2;
    T sk = s;
    sk *= t.wk[i];
    k += sk;
    if (i % 2 == 1) {
      T sg = s;
      sg *= t.wg[i / 2];
      g += sg;
    }
  }
  k *= r;
  g *= r;
  T diff = k;
  diff += scaled(g, -1.0);
  err = magnitude(diff);
  result = k;
}
}  // namespace detail

/// Adaptive Gauss-Kronrod (7/15) with global bisection of the worst panel.
template <class T, class F>
Estimate<T> adaptive_gk(F&& f, double a, double b, double abs_tol, double rel_tol = 0.0,
                        int max_panels = 4000) {
  struct Panel {
    double a, b;
    T v;
    double e;
  };
  std::vector<Panel> panels;
  T v0;
  double e0 = 0.0;
  detail::gk15_panel<T>(f, a, b, v0, e0);
  panels.push_back({a, b, v0, e0});
  auto total = [&]() {
    T s = panels[0].v;
    double e = panels[0].e;
    for (std::size_t i = 1; i < panels.size(); ++i) {
      s += panels[i].v;
      e += panels[i].e;
    }
    return Estimate<T>{s, e};
  };
  Estimate<T> cur = total();
  while (cur.error > std::max(abs_tol, rel_tol * magnitude(cur.value)) &&
         static_cast<int>(panels.size()) < max_panels) {
    auto worst = std::max_element(panels.begin(), panels.end(),
                                  [](const Panel& p, const Panel& q) { return p.e < q.e; });
    const double m = 0.5 * (worst->a + worst->b);
    if (m <= worst->a || m >= worst->b) break;
    Panel left{worst->a, m, v0, 0.0}, right{m, worst->b, v0, 0.0};
    detail::gk15_panel<T>(f, left.a, left.b, left.v, left.e);
    detail::gk15_panel<T>(f, right.a, right.b, right.v, right.e);
    *worst = left;
    panels.push_back(right);
    cur = total();
  }
  return cur;
}

/// ∫_a^∞ f via t = a + s·u/(1−u).
template <class T, class F>
Estimate<T> integrate_to_infinity(F&& f, double a, double scale, double abs_tol, double rel_tol = 0.0) {
  auto g = [&](double u) {
    const double om = 1.0 - u;
    T v = f(a + scale * u / om);
    v *= scale / (om * om);
    return v;
  };
  return adaptive_gk<T>(g, 0.0, 1.0, abs_tol, rel_tol);
}

// ---------------------------------------------------------------------------
// Finite differences

using ScalarField = std::function<double(const Vec&)>;

struct LaplacianResult {
  double value = 0.0;
  double error = 0.0;
  double scale = 0.0;  // sum of |λ_k ∂²f/∂v_k²|, the size of the individual terms
  double relative() const { return std::abs(value) / std::max(scale, 1e-300); }
};

/// Constant-coefficient operator Σ G_ij ∂_i∂_j f by central differences along the
/// eigenvectors of G, Richardson-extrapolated over {h, h/2}.
LaplacianResult fd_laplacian(const ScalarField& f, const Vec& x, const Mat& G, double h);

/// Central-difference gradient, Richardson-extrapolated over {h, h/2}.
Vec fd_gradient(const ScalarField& f, const Vec& x, double h);

/// Richardson first derivative of a scalar function of one variable.
template <class T, class F>
T fd_derivative(F&& f, double t, double h) {
  T d1 = f(t + h);
  d1 += scaled(f(t - h), -1.0);
  d1 *= 1.0 / (2.0 * h);
  T d2 = f(t + 0.5 * h);
  d2 += scaled(f(t - 0.5 * h), -1.0);
  d2 *= 1.0 / h;
  T r = d2;
  r *= 4.0 / 3.0;
  d1 *= -1.0 / 3.0;
  r += d1;
  return r;
}

// ---------------------------------------------------------------------------
// Fluxes

/// Parametrized hypersurface patch u ∈ [lo, hi] ⊂ R^{n−1} → R^n.
struct Patch {
  std::function<Vec(const Vec&)> X;
  Vec lo, hi;
  double orientation = 1.0;
};

using GradientField = std::function<Vec(const Vec&)>;

/// Flux ∫ <grad_g f, ν> dσ_g of the differential df (given as a covector field)
/// through the union of patches, for the constant metric g. Tensor Gauss rule,
/// doubled until two levels agree within rel_tol.
Certified hypersurface_flux(const GradientField& df, const std::vector<Patch>& patches, const Mat& g,
                            int base_nodes = 6, double rel_tol = 1e-6, int max_nodes = 48,
                            double abs_floor = 1e-12);

/// Patches of the round coordinate sphere of radius r about c (outward orientation).
std::vector<Patch> sphere_patches(const Vec& c, double r);

/// Patches of the boundary of the tube of coordinate radius r around the segment
/// p0→p1 (side plus both end caps), outward orientation.
std::vector<Patch> tube_patches(const Vec& p0, const Vec& p1, double r);

Certified sphere_flux(const GradientField& df, const Vec& c, double r, const Mat& g, double rel_tol = 1e-8,
                      double abs_tol = 1e-12);
Certified tube_flux(const GradientField& df, const Vec& p0, const Vec& p1, double r, const Mat& g,
                    double rel_tol = 1e-7, double abs_tol = 1e-12);

// ---------------------------------------------------------------------------
// Fourier modes

/// h_n = (1/M) Σ_j f(j/M) e^{−2πinj/M} for n = −max_mode..max_mode (index n + max_mode).
std::vector<cplx> fourier_modes(const std::function<double(double)>& f, int samples, int max_mode);

/// Coefficients on the unit torus, row-major (n1 + max_mode)(2 max_mode + 1) + (n2 + max_mode).
std::vector<cplx> fourier_modes_2d(const std::function<double(double, double)>& f, int samples, int max_mode);

// ---------------------------------------------------------------------------
// Lattice sums

enum class TailModel { inverse_square, inverse_cube, exponential };

struct TruncSpec {
  int N = 48;
  double tail_tolerance = 1e-8;
  TailModel model = TailModel::inverse_square;
};

namespace detail {
template <class T, class H>
Estimate<T> tail_integral(H& h, double T0) {
  auto g = [&](double u) {
    T v = h(T0 / u);
    v *= T0 / (u * u);
    return v;
  };
  T a = gauss_integrate<T>(g, 0.0, 1.0, 32);
  T b = gauss_integrate<T>(g, 0.0, 1.0, 64);
  T d = b;
  d += scaled(a, -1.0);
  return {b, magnitude(d)};
}
}  // namespace detail

/// center + Σ_{n≥1} h(n), where h(t) = f(t) + f(−t) (counterterms included) is
/// smooth for t ≥ 1. Partial sum to N, then the midpoint Euler-Maclaurin tail
/// ∫_{N+½}^∞ h + h′(N+½)/24 with error bounded by the next term plus the tail
/// quadrature difference.
template <class T, class H>
Estimate<T> symmetric_sum_1d(H&& h, T center, const TruncSpec& spec) {
  T s = center;
  for (int n = 1; n <= spec.N; ++n) s += h(static_cast<double>(n));
  const double T0 = spec.N + 0.5;
  Estimate<T> tail = detail::tail_integral<T>(h, T0);
  s += tail.value;
  T d1 = fd_derivative<T>(h, T0, 0.25);
  d1 *= 1.0 / 24.0;
  s += d1;
  const double dl = 0.5;
  T d3 = h(T0 + 2 * dl);
  d3 += scaled(h(T0 + dl), -2.0);
  d3 += scaled(h(T0 - dl), 2.0);
  d3 += scaled(h(T0 - 2 * dl), -1.0);
  const double h3 = magnitude(d3) / (2 * dl * dl * dl);
  const double err = 2.0 * 7.0 / 5760.0 * h3 + tail.error;
  if (err > spec.tail_tolerance)
    throw NumericalFailure("lattice sum tail bound exceeds tolerance; raise N");
  return {s, err};
}

/// Σ_{(n1,n2)∈Z²} F(n1, n2): square partial sum |n|∞ ≤ N, exterior integral of the
/// continuous extension over four mapped wedges, midpoint Laplacian correction;
/// the reported error is twice the next Euler-Maclaurin term plus the quadrature difference.
Certified lattice_sum_2d(const std::function<double(double, double)>& F, const TruncSpec& spec);

// ---------------------------------------------------------------------------
// Regularized limits and fits

/// F(Λ) = c·logΛ + b + d/Λ + o(1/Λ) with c known: returns b from the ladder
/// {Λ0, 2Λ0, 4Λ0}. Throws when the three-point fit leaves a residual above fit_tol.
Certified log_regularized_limit(const std::function<double(double)>& F, double c, double Lambda0,
                                double fit_tol = 1e-6);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// ---------------------------------------------------------------------------
// Path integrals

struct Path {
  std::function<Vec(double)> position;
  std::function<Vec(double)> velocity;
  std::vector<double> breaks{0.0, 1.0};  // parameter interval split at kinks
};

Path polyline(const std::vector<Vec>& vertices);
Path circle(const Vec& center, const Vec& e1, const Vec& e2, double radius);

/// ∫ ω(x(t))[x′(t)] dt, the form given as ω(x, v).
template <class T>
Estimate<T> path_integral(const std::function<T(const Vec&, const Vec&)>& form, const Path& path,
                          double abs_tol = 1e-12, double rel_tol = 1e-12) {
  auto g = [&](double t) { return form(path.position(t), path.velocity(t)); };
  Estimate<T> acc = adaptive_gk<T>(g, path.breaks[0], path.breaks[1], abs_tol, rel_tol);
  for (std::size_t k = 2; k < path.breaks.size(); ++k) {
    Estimate<T> e = adaptive_gk<T>(g, path.breaks[k - 1], path.breaks[k], abs_tol, rel_tol);
    acc.value += e.value;
    acc.error += e.error;
  }
  return acc;
}

}  // namespace ghlab
