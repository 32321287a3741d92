#include "ghlab/taubnut_c3.hpp"

namespace ghlab::c3 {

namespace {

// g(t) = atan(√t)/√t with g′, g″.
std::array<double, 3> g_atan(double t) {
  if (t < 0.25) {
    // atan(√t)/√t = Σ (−t)^k/(2k+1)
    double g = 0.0, g1 = 0.0, g2 = 0.0, tk = 1.0;
    for (int k = 0; k < 44; ++k) {
      const double c = ((k % 2 == 0) ? 1.0 : -1.0) / (2.0 * k + 1.0);
      g += c * tk;
      const double c1 = -((k % 2 == 0) ? 1.0 : -1.0) * (k + 1.0) / (2.0 * k + 3.0);
      g1 += c1 * tk;
      const double c2 = ((k % 2 == 0) ? 1.0 : -1.0) * (k + 2.0) * (k + 1.0) / (2.0 * k + 5.0);
      g2 += c2 * tk;
      tk *= t;
    }
    return {g, g1, g2};
  }
  const double s = std::sqrt(t), at = std::atan(s), q = 1.0 + t;
  const double g = at / s;
  const double gs = 1.0 / (s * q) - at / t;
  const double gss = -(1.0 + 3.0 * t) / (s * s * q * q) - 1.0 / (q * t) + 2.0 * at / (t * s);
  return {g, gs / (2.0 * s), (gss * s - gs) / (4.0 * t * s)};
}

// α from c² and L, with the complementary form for L < 0.
J4 alpha_from(const J4& c2, const J4& L, double A) {
  const double sA = std::sqrt(A);
  if (L.v >= 0.0) {
    const J4 c = sqrt(c2);
    return (0.5 + atan(L / (sA * c)) * (1.0 / kPi)) / (2.0 * c);
  }
  const J4 t = A * c2 / (L * L);
  const auto gv = g_atan(t.v);
  return (sA / (2.0 * kPi)) * chain(t, gv[0], gv[1], gv[2]) / (-1.0 * L);
}

struct Coords {
  J4 mu1, mu2, x, y;
};

Coords coords(const C3Point& p) {
  return {J4::variable(p.mu1, 0), J4::variable(p.mu2, 1), J4::variable(p.eta.real(), 2),
          J4::variable(p.eta.imag(), 3)};
}

}  // namespace

J4 alpha_edge(int edge, const J4& mu1, const J4& mu2, const J4& x, const J4& y, const SymCoupling& a) {
  const J4 e2 = x * x + y * y;
  const double A = a.det();
  switch (edge) {
    case 1: return alpha_from(mu1 * mu1 + a.a22 * e2, a.a22 * mu2 + a.a12 * mu1, A);
    case 2: return alpha_from(mu2 * mu2 + a.a11 * e2, a.a11 * mu1 + a.a12 * mu2, A);
    case 3: {
      const J4 d = mu1 - mu2;
      return alpha_from(d * d + (a.a11 + 2.0 * a.a12 + a.a22) * e2,
                        -(a.a11 + a.a12) * mu1 - (a.a12 + a.a22) * mu2, A);
    }
    default: throw std::invalid_argument("edge must be 1, 2 or 3");
  }
}

AlphaTriple alpha(const C3Point& p, const SymCoupling& a) {
  const Coords c = coords(p);
  AlphaTriple t;
  for (int e = 1; e <= 3; ++e) t.jet[e - 1] = alpha_edge(e, c.mu1, c.mu2, c.x, c.y, a);
  return t;
}

double alpha_value(int edge, const C3Point& p, const SymCoupling& a) {
  const Coords c = coords(p);
  return alpha_edge(edge, c.mu1, c.mu2, c.x, c.y, a).v;
}

cplx d_eta(const J4& f) { return 0.5 * cplx(f.d[2], -f.d[3]); }

double integrability_residual(const C3Point& p, const SymCoupling& a) {
  const AlphaTriple t = alpha(p, a);
  const double n = norm_a(p, a);
  const double target = std::sqrt(a.det()) / (2.0 * kPi * n * n);
  return std::max({std::abs(t.jet[0].d[1] - target), std::abs(t.jet[1].d[0] - target),
                   std::abs(-t.jet[2].d[0] - t.jet[2].d[1] - target)});
}

C3Fields c3_fields(const C3Point& p, const SymCoupling& a) {
  const AlphaTriple t = alpha(p, a);
  const double a1 = t[0], a2 = t[1], a3 = t[2];
  C3Fields f;
  f.v << a1 + a3, -a3, -a3, a2 + a3;
  f.w = a.a22 * a1 + a.a11 * a2 + (a.a11 + a.a22 + 2.0 * a.a12) * a3;
  f.V1 = a.matrix() + f.v;
  f.W1 = a.det() + f.w;
  f.det_v = a1 * a2 + a1 * a3 + a2 * a3;
  const double den = a.det() + f.w + f.det_v;
  if (!(den > 0.0)) throw NumericalFailure("volume error denominator is not positive");
  f.E1 = -f.det_v / den;
  return f;
}

double E1_ratio_route(const C3Point& p, const SymCoupling& a) {
  const C3Fields f = c3_fields(p, a);
  const Eigen::Matrix2d vinv = a.det() * a.inverse();
  const double w_trace = (vinv.array() * f.v.array()).sum();
  return (a.det() + w_trace) / f.V1.determinant() - 1.0;
}

FieldJet field_jet(const C3Point& p, const SymCoupling& a) {
  const AlphaTriple t = alpha(p, a);
  const J4 v11 = t.jet[0] + t.jet[2], v12 = -t.jet[2], v22 = t.jet[1] + t.jet[2];
  const J4 w = a.a22 * t.jet[0] + a.a11 * t.jet[1] + (a.a11 + a.a22 + 2.0 * a.a12) * t.jet[2];
  FieldJet f;
  f.V = a.matrix() + (Mat(2, 2) << v11.v, v12.v, v12.v, v22.v).finished();
  f.W = CMat::Constant(1, 1, a.det() + w.v);
  f.d2V.assign(4, std::vector<Mat>(4));
  f.d2W.assign(4, std::vector<CMat>(4));
  for (int k = 0; k < 4; ++k) {
    f.dV.push_back((Mat(2, 2) << v11.d[k], v12.d[k], v12.d[k], v22.d[k]).finished());
    f.dW.push_back(CMat::Constant(1, 1, w.d[k]));
    for (int l = 0; l < 4; ++l) {
      f.d2V[k][l] = (Mat(2, 2) << v11.h[k][l], v12.h[k][l], v12.h[k][l], v22.h[k][l]).finished();
      f.d2W[k][l] = CMat::Constant(1, 1, w.h[k][l]);
    }
  }
  return f;
}

TaubModel taub_model(const C3Point& p, const SymCoupling& a, int edge) {
  const C3Fields f = c3_fields(p, a);
  const double e2 = std::norm(p.eta);
  TaubModel m;
  m.V = a.matrix();
  double s = 0.0, k = 0.0;
  if (edge == 1) {
    k = a.a22;
    s = 0.5 / std::sqrt(p.mu1 * p.mu1 + k * e2);
    m.V(0, 0) += s;
  } else if (edge == 2) {
    k = a.a11;
    s = 0.5 / std::sqrt(p.mu2 * p.mu2 + k * e2);
    m.V(1, 1) += s;
  } else if (edge == 3) {
    k = a.a11 + 2.0 * a.a12 + a.a22;
    const double d = p.mu1 - p.mu2;
    s = 0.5 / std::sqrt(d * d + k * e2);
    m.V(0, 0) += s;
    m.V(1, 1) += s;
    m.V(0, 1) -= s;
    m.V(1, 0) -= s;
  } else {
    throw std::invalid_argument("edge must be 1, 2 or 3");
  }
  m.W = a.det() + k * s;
  m.dev_V = (f.V1 - m.V).cwiseAbs().maxCoeff();
  m.dev_W = std::abs(f.W1 - m.W);
  return m;
}

Estimate<cplx> beta(const C3Point& p, const SymCoupling& a, int i, int variant) {
  if (std::abs(p.eta) == 0.0) throw std::domain_error("beta is evaluated at fixed eta != 0");
  // Limit direction d and the combination of ∂_η α_k paired with d.
  Eigen::Vector2d d;
  std::array<double, 3> w{};
  switch (i) {
    case 1:
      d = variant == 0 ? Eigen::Vector2d(1, 0) : Eigen::Vector2d(2, 1);
      w = {d(0), 0.0, d(0) - d(1)};
      break;
    case 2:
      d = variant == 0 ? Eigen::Vector2d(0, 1) : Eigen::Vector2d(1, 2);
      w = {0.0, d(1), d(1) - d(0)};
      break;
    case 0:
      d = variant == 0 ? Eigen::Vector2d(-1, -1) : Eigen::Vector2d(-2, -1);
      w = {-d(0), -d(1), 0.0};
      break;
    default: throw std::invalid_argument("beta index must be 0, 1 or 2");
  }
  const double x = p.eta.real(), y = p.eta.imag();
  auto integrand = [&](double t) {
    const J4 m1 = J4::variable(p.mu1 + t * d(0), 0), m2 = J4::variable(p.mu2 + t * d(1), 1);
    const J4 jx = J4::variable(x, 2), jy = J4::variable(y, 3);
    cplx s = 0.0;
    for (int e = 0; e < 3; ++e)
      if (w[e] != 0.0) s += w[e] * d_eta(alpha_edge(e + 1, m1, m2, jx, jy, a));
    return s;
  };
  const double scale = std::max(1.0, norm_a(p, a) / std::sqrt(a.matrix().maxCoeff()));
  Estimate<cplx> r = integrate_to_infinity<cplx>(integrand, 0.0, scale, 1e-13, 1e-12);
  r.value *= -2.0;
  r.error *= 2.0;
  return r;
}

std::array<double, 4> dlogmod(const C3Point& p, const SymCoupling& a, int which) {
  const C3Fields f = c3_fields(p, a);
  const cplx b = beta(p, a, which).value;
  std::array<double, 4> c{};
  if (which == 1) {
    c[0] = f.V1(0, 0);
    c[1] = f.V1(0, 1);
  } else if (which == 2) {
    c[0] = f.V1(1, 0);
    c[1] = f.V1(1, 1);
  } else {
    c[0] = -f.V1(0, 0) - f.V1(1, 0);
    c[1] = -f.V1(0, 1) - f.V1(1, 1);
  }
  c[2] = b.real();
  c[3] = -b.imag();
  return c;
}

Estimate<double> logmod_z(const Path& path, const SymCoupling& a, int which, double start_value) {
  std::function<double(const Vec&, const Vec&)> form = [&](const Vec& x, const Vec& v) {
    const auto c = dlogmod(C3Point{x(0), x(1), cplx(x(2), x(3))}, a, which);
    return c[0] * v(0) + c[1] * v(1) + c[2] * v(2) + c[3] * v(3);
  };
  Estimate<double> r = path_integral<double>(form, path, 1e-10, 1e-10);
  r.value += start_value;
  return r;
}

double anchor_log(const C3Point& anchor) { return std::log(std::abs(anchor.eta)) / 3.0; }

std::array<double, 3> sl_fibration(const C3Point& p) { return {p.mu1, p.mu2, p.eta.imag()}; }

}  // namespace ghlab::c3
