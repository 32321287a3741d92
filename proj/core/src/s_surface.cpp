#include "ghlab/negative_vertex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ghlab::neg {

namespace {

constexpr double kRho0 = 0.5;  // the η1 chart covers |z1| ≤ kRho0
const double kYPlus = std::log(1.0 / (1.0 - kRho0)) / (2.0 * kPi);
const double kYMinus = -std::log(1.0 + kRho0) / (2.0 * kPi);
const double kYChart1 = std::log(1.0 / kRho0) / (2.0 * kPi);
const cplx kTwoPiI(0.0, 2.0 * kPi);

const std::array<Eigen::Vector2d, 3> kDirs{Eigen::Vector2d(0, 1), Eigen::Vector2d(1, 0), Eigen::Vector2d(-1, -1)};

struct Region {
  int chart;  // 0: η2 coordinates, 1: η1 coordinates
  bool band;  // the strip y2 ∈ [kYMinus, kYPlus] with the disc |z1| < kRho0 removed
  double u0, u1, v0, v1;
};

struct ChartPoint {
  double x, y, jac;
};

ChartPoint region_map(const Region& r, double u, double v) {
  if (!r.band) return {u, v, 1.0};
  const double h = kYPlus - kYMinus;
  const double y = kYMinus + 0.5 * h * (1.0 - std::cos(kPi * v));
  const double R = std::exp(-2.0 * kPi * y);
  const double ct = std::clamp((1.0 + R * R - kRho0 * kRho0) / (2.0 * R), -1.0, 1.0);
  const double xm = std::acos(ct) / (2.0 * kPi);
  return {xm + (1.0 - 2.0 * xm) * u, y, (1.0 - 2.0 * xm) * 0.5 * h * kPi * std::sin(kPi * v)};
}

SNode make_node(int chart, double x, double y, double wgt, const HermCoupling& a) {
  const cplx eta(x, y);
  const cplx zf = z_of(eta), zo = 1.0 - zf;
  const cplx eo = std::log(zo) / kTwoPiI;
  SNode n;
  cplx J1 = 1.0, J2 = 1.0;
  if (chart == 0) {
    n.eta2 = eta;
    n.eta1 = eo;
    J1 = -zf / zo;
  } else {
    n.eta1 = eta;
    n.eta2 = eo;
    J2 = -zf / zo;
  }
  n.area = wgt * (a.a11 * std::norm(J1) + a.a22 * std::norm(J2) + 2.0 * (a.a12 * J1 * std::conj(J2)).real());
  n.w11 = 2.0 * wgt * std::norm(J1);
  n.w22 = 2.0 * wgt * std::norm(J2);
  n.w21 = 2.0 * wgt * J2 * std::conj(J1);
  return n;
}

double wrap_half(double x) { return x - std::round(x); }

struct Builder {
  const HermCoupling& a;
  const SQuadOptions& opt;
  std::array<std::vector<std::array<double, 2>>, 2> focus;  // chart coordinates of the focus points
  double r_scale;
  std::vector<SNode>* out;

  double focus_distance(int chart, double xa, double xb, double ya, double yb) const {
    double best = 1e300;
    const double xc = 0.5 * (xa + xb), hw = 0.5 * (xb - xa);
    for (const auto& f : focus[chart]) {
      const double dx = std::max(0.0, std::abs(wrap_half(f[0] - xc)) - hw);
      const double dy = std::max({0.0, ya - f[1], f[1] - yb});
      best = std::min(best, std::hypot(dx, dy));
    }
    return best;
  }

  void panel(const Region& r, double u0, double u1, double v0, double v1, int depth) {
    double xa = 1e300, xb = -1e300, ya = 1e300, yb = -1e300;
    for (int i = 0; i <= 2; ++i)
      for (int j = 0; j <= 2; ++j) {
        const ChartPoint c = region_map(r, u0 + 0.5 * i * (u1 - u0), v0 + 0.5 * j * (v1 - v0));
        xa = std::min(xa, c.x);
        xb = std::max(xb, c.x);
        ya = std::min(ya, c.y);
        yb = std::max(yb, c.y);
      }
    const double um = 0.5 * (u0 + u1), vm = 0.5 * (v0 + v1);
    const ChartPoint pu0 = region_map(r, u0, vm), pu1 = region_map(r, u1, vm);
    const ChartPoint pv0 = region_map(r, um, v0), pv1 = region_map(r, um, v1);
    const double lu = std::hypot(pu1.x - pu0.x, pu1.y - pu0.y), lv = std::hypot(pv1.x - pv0.x, pv1.y - pv0.y);
    const double h = std::max(lu, lv);
    const bool band = r.chart == 0 ? (ya < 0.6 && yb > -0.6) : ya < kYChart1 + 0.5;
    const double cap = band ? opt.h_band : opt.h_max;
    const double d = focus_distance(r.chart, xa, xb, ya, yb);
    if ((h > cap || h > opt.refine * std::max(d, r_scale)) && depth < 24) {
      // split the long side only when the panel is elongated
      const bool wide = lu > 1.6 * lv, tall = lv > 1.6 * lu;
      if (wide) {
        panel(r, u0, um, v0, v1, depth + 1);
        panel(r, um, u1, v0, v1, depth + 1);
      } else if (tall) {
        panel(r, u0, u1, v0, vm, depth + 1);
        panel(r, u0, u1, vm, v1, depth + 1);
      } else {
        panel(r, u0, um, v0, vm, depth + 1);
        panel(r, um, u1, v0, vm, depth + 1);
        panel(r, u0, um, vm, v1, depth + 1);
        panel(r, um, u1, vm, v1, depth + 1);
      }
      return;
    }
    const GaussRule& g = gauss_legendre(opt.order);
    const double hu = 0.5 * (u1 - u0), hv = 0.5 * (v1 - v0);
    for (int i = 0; i < opt.order; ++i)
      for (int j = 0; j < opt.order; ++j) {
        const double u = u0 + hu * (1.0 + g.x[i]), v = v0 + hv * (1.0 + g.x[j]);
        const ChartPoint c = region_map(r, u, v);
        out->push_back(make_node(r.chart, c.x, c.y, g.w[i] * g.w[j] * hu * hv * c.jac, a));
      }
  }
};

double end_k(const Eigen::Matrix2d& S, int e) { return kDirs[e].dot(S * kDirs[e]); }

// Regularized (L = ∞) or truncated tail ∫_T^L of the averaged kernel along end e.
double tail_gamma(const HermCoupling& a, int e, double T, double y1, double y2, double mu, double L) {
  const Eigen::Matrix2d S = a.real_part();
  const double A = a.det(), AA = a.big_det();
  const Eigen::Vector2d& d = kDirs[e];
  const Eigen::Vector2d y(y1, y2);
  const double k = end_k(S, e);
  const double sig = std::sqrt(A * k / AA);
  const double ts = d.dot(S * y) / k;
  const double cross = d(0) * y2 - d(1) * y1;
  const double b2 = A * (cross * cross / k + mu * mu);
  auto D = [&](double t) {
    const double X = sig * (t - ts);
    const double r = std::sqrt(X * X + b2);
    return X >= 0.0 ? X + r : b2 / (r - X);
  };
  const double pre = -1.0 / (4.0 * kPi * std::sqrt(AA) * sig);
  if (std::isinf(L)) return pre * std::log(2.0 * sig / D(T));
  return pre * std::log(D(L) / D(T));
}

// (y, μ)-gradient of the regularized tail.
std::array<double, 3> tail_gamma_grad(const HermCoupling& a, int e, double T, double y1, double y2, double mu) {
  const Eigen::Matrix2d S = a.real_part();
  const double A = a.det(), AA = a.big_det();
  const Eigen::Vector2d& d = kDirs[e];
  const Eigen::Vector2d y(y1, y2);
  const double k = end_k(S, e);
  const double sig = std::sqrt(A * k / AA);
  const double ts = d.dot(S * y) / k;
  const Eigen::Vector2d yT = y - T * d;
  const double rT = varrho(yT(0), yT(1), mu, a);
  const double X = sig * (T - ts);
  const double cross = d(0) * y2 - d(1) * y1;
  const double b2 = A * (cross * cross / k + mu * mu);
  const double Dv = X >= 0.0 ? X + rT : b2 / (rT - X);
  const Eigen::Vector2d gy = -sig * (S * d) / k + (A / AA) * (S * yT) / rT;
  const double gm = A * mu / rT;
  const double pre = 1.0 / (4.0 * kPi * std::sqrt(AA) * sig * Dv);
  return {pre * gy(0), pre * gy(1), pre * gm};
}

using C2 = std::array<cplx, 2>;

struct C2Ops {
  C2 v{};
  C2Ops& operator+=(const C2Ops& o) {
    v[0] += o.v[0];
    v[1] += o.v[1];
    return *this;
  }
  C2Ops& operator*=(double s) {
    v[0] *= s;
    v[1] *= s;
    return *this;
  }
};
double magnitude(const C2Ops& c) { return std::max(std::abs(c.v[0]), std::abs(c.v[1])); }

// Tail of the averaged γ_p3 along end e (area weight k_e), regularized or truncated at t = L.
C2 tail_p3(const LatticeKernel& K, int e, double T, double y1, double y2, double mu, double L) {
  const HermCoupling& a = K.coupling();
  const Eigen::Matrix2d S = a.real_part();
  const double k = end_k(S, e);
  const Eigen::Vector2d& d = kDirs[e];
  auto f = [&](double t) {
    C2Ops r{K.gamma_p3_average(y1 - t * d(0), y2 - t * d(1), mu)};
    r *= k;
    return r;
  };
  const double tol = 1e-13;
  if (!std::isinf(L)) {
    if (L <= T) return {};
    return adaptive_gk<C2Ops>(f, T, L, tol, 1e-12).value.v;
  }
  const double A = a.det(), AA = a.big_det();
  const Eigen::Vector2d s0 = a.a12.imag() * S.inverse() * Eigen::Vector2d(-d(1), d(0));
  const cplx b1(s0(0), -d(0)), b2(s0(1), -d(1));
  const double pc = std::sqrt(AA) / (4.0 * kPi * A * std::sqrt(A));
  const C2 C{pc * (a.entry(0, 0) * b1 + a.entry(0, 1) * b2), pc * (a.entry(1, 0) * b1 + a.entry(1, 1) * b2)};
  const double L0 = T + 20.0;
  C2Ops head = adaptive_gk<C2Ops>(f, T, L0, tol, 1e-12).value;
  auto g = [&](double t) {
    C2Ops r = f(t);
    r.v[0] -= C[0] / t;
    r.v[1] -= C[1] / t;
    return r;
  };
  C2Ops far = integrate_to_infinity<C2Ops>(g, L0, L0, tol, 1e-12).value;
  const double lg = std::log(L0);
  return {head.v[0] + far.v[0] - C[0] * lg, head.v[1] + far.v[1] - C[1] * lg};
}

NegVertexPoint node_point(const SNode& n) { return {n.eta1, n.eta2, 0.0}; }

}  // namespace

SMesh::SMesh(const HermCoupling& a, const std::vector<NegVertexPoint>& focus, const SQuadOptions& opt)
    : kernel_(a) {
  if (focus.empty()) throw std::invalid_argument("S mesh needs at least one focus point");
  const Eigen::Matrix2d S = a.real_part();
  const double A = a.det(), AA = a.big_det();

  double r_scale = opt.r_floor;
  if (r_scale <= 0.0) {
    r_scale = 1e300;
    for (const auto& p : focus) r_scale = std::min(r_scale, distance_to_S(p, a));
    if (r_scale < 0.01 / std::sqrt(A))
      throw NumericalFailure("point too close to S for the quadrature budget");
  }

  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(S);
  const double margin = opt.tail_margin > 0.0
                            ? opt.tail_margin
                            : 25.0 / (kappa_a(a) * std::sqrt(A / AA) * std::sqrt(es.eigenvalues()(0)));
  for (int e = 0; e < 3; ++e) {
    double t = 4.0;
    const double k = end_k(S, e);
    for (const auto& p : focus) {
      const Eigen::Vector2d y(p.eta1.imag(), p.eta2.imag());
      t = std::max(t, kDirs[e].dot(S * y) / k + margin);
    }
    tail_[e] = t;
  }

  Builder b{a, opt, {}, std::max(r_scale, 1e-4), &nodes_};
  for (const auto& p : focus) {
    b.focus[0].push_back({p.eta2.real(), p.eta2.imag()});
    b.focus[1].push_back({p.eta1.real(), p.eta1.imag()});
  }
  const std::array<Region, 4> regions{Region{1, false, 0.0, 1.0, kYChart1, tail_[1]},
                                      Region{0, false, 0.0, 1.0, kYPlus, tail_[0]},
                                      Region{0, false, 0.0, 1.0, -tail_[2], kYMinus},
                                      Region{0, true, 0.0, 1.0, 0.0, 1.0}};
  for (const Region& r : regions) {
    // roughly square starting cells in chart coordinates
    const ChartPoint c00 = region_map(r, r.u0, r.v0), c11 = region_map(r, r.u1, r.v1);
    const double W = r.band ? 1.0 : r.u1 - r.u0;
    const double H = std::abs(c11.y - c00.y);
    const int nu = std::max(1, static_cast<int>(std::lround(W / std::min(W, H))));
    const int nv = std::max(1, static_cast<int>(std::lround(H / std::min(W, H))));
    for (int i = 0; i < nu; ++i)
      for (int j = 0; j < nv; ++j)
        b.panel(r, r.u0 + (r.u1 - r.u0) * i / nu, r.u0 + (r.u1 - r.u0) * (i + 1) / nu,
                r.v0 + (r.v1 - r.v0) * j / nv, r.v0 + (r.v1 - r.v0) * (j + 1) / nv, 0);
  }
}

std::array<double, 4> SMesh::gamma_i(const NegVertexPoint& p, double cutoff) const {
  const HermCoupling& a = coupling();
  cplx X1 = 0.0, X2 = 0.0, X3 = 0.0;
  for (const SNode& n : nodes_) {
    const double g = kernel_.gamma(offset(p, node_point(n)));
    X1 += g * (n.w22 - n.w21);
    X2 += g * (n.w11 - std::conj(n.w21));
    X3 += g * n.w21;
  }
  const double y1 = p.eta1.imag(), y2 = p.eta2.imag();
  const bool reg = std::isinf(cutoff);
  if (!reg && cutoff <= *std::max_element(tail_.begin(), tail_.end()))
    throw std::invalid_argument("cutoff must exceed the start of the analytic tails");
  X1 += 2.0 * tail_gamma(a, 0, tail_[0], y1, y2, p.mu, cutoff);
  X2 += 2.0 * tail_gamma(a, 1, tail_[1], y1, y2, p.mu, cutoff);
  X3 += 2.0 * tail_gamma(a, 2, tail_[2], y1, y2, p.mu, cutoff);
  const double pa = kPi * std::sqrt(a.det());
  const std::array<double, 3> c = counterterm(a);
  const double lg = reg ? std::log(2.0) : std::log(2.0 * cutoff);
  return {-pa * X1.real() - c[0] * lg, -pa * X2.real() - c[1] * lg, -pa * X3.real() - c[2] * lg, -pa * X3.imag()};
}

std::array<double, 4> SMesh::gamma_bar_i(double y1, double y2, double mu) const {
  const HermCoupling& a = coupling();
  cplx X1 = 0.0, X2 = 0.0, X3 = 0.0;
  for (const SNode& n : nodes_) {
    const double g = kernel_.gamma_average(y1 - n.eta1.imag(), y2 - n.eta2.imag(), mu);
    X1 += g * (n.w22 - n.w21);
    X2 += g * (n.w11 - std::conj(n.w21));
    X3 += g * n.w21;
  }
  const double inf = std::numeric_limits<double>::infinity();
  X1 += 2.0 * tail_gamma(a, 0, tail_[0], y1, y2, mu, inf);
  X2 += 2.0 * tail_gamma(a, 1, tail_[1], y1, y2, mu, inf);
  X3 += 2.0 * tail_gamma(a, 2, tail_[2], y1, y2, mu, inf);
  const double pa = kPi * std::sqrt(a.det());
  const std::array<double, 3> c = counterterm(a);
  const double lg = std::log(2.0);
  return {-pa * X1.real() - c[0] * lg, -pa * X2.real() - c[1] * lg, -pa * X3.real() - c[2] * lg, -pa * X3.imag()};
}

std::array<double, 6> SMesh::v_grad(const NegVertexPoint& p) const {
  const HermCoupling& a = coupling();
  std::array<double, 6> s{};
  for (const SNode& n : nodes_) {
    std::array<double, 6> g = kernel_.gamma_grad(offset(p, node_point(n)));
    g *= n.area;
    s += g;
  }
  const double y1 = p.eta1.imag(), y2 = p.eta2.imag();
  const double inf = std::numeric_limits<double>::infinity();
  const Eigen::Matrix2d S = a.real_part();
  for (int e = 0; e < 3; ++e) {
    const double k = end_k(S, e);
    s[0] += k * tail_gamma(a, e, tail_[e], y1, y2, p.mu, inf);
    const std::array<double, 3> g = tail_gamma_grad(a, e, tail_[e], y1, y2, p.mu);
    s[2] += k * g[0];
    s[4] += k * g[1];
    s[5] += k * g[2];
  }
  s *= -2.0 * kPi * std::sqrt(a.det());
  return s;
}

std::array<cplx, 4> SMesh::beta_p34(const NegVertexPoint& p, double cutoff) const {
  const HermCoupling& a = coupling();
  C2 b3{}, b4{};
  for (const SNode& n : nodes_) {
    Offset d = offset(p, node_point(n));
    const C2 g3 = kernel_.gamma_p3(d);
    d.mu = -d.mu;
    const C2 g4 = kernel_.gamma_p3(d);
    for (int q = 0; q < 2; ++q) {
      b3[q] += n.area * g3[q];
      b4[q] += n.area * g4[q];
    }
  }
  const double y1 = p.eta1.imag(), y2 = p.eta2.imag();
  const Eigen::Matrix2d S = a.real_part();
  const bool reg = std::isinf(cutoff);
  for (int e = 0; e < 3; ++e) {
    const double k = end_k(S, e);
    const double L = reg ? cutoff : cutoff / std::sqrt(k);
    const C2 t3 = tail_p3(kernel_, e, tail_[e], y1, y2, p.mu, L);
    const C2 t4 = tail_p3(kernel_, e, tail_[e], y1, y2, -p.mu, L);
    for (int q = 0; q < 2; ++q) {
      b3[q] += t3[q];
      b4[q] += t4[q];
    }
    if (reg) {
      // Σ_e C_e log|d_e|_a from the cutoff |y'|_a < Λ (Σ_e C_e = 0)
      const Eigen::Vector2d& d = kDirs[e];
      const Eigen::Vector2d s0 = a.a12.imag() * S.inverse() * Eigen::Vector2d(-d(1), d(0));
      const cplx c1(s0(0), -d(0)), c2(s0(1), -d(1));
      const double pc = std::sqrt(a.big_det()) / (4.0 * kPi * a.det() * std::sqrt(a.det())) * 0.5 * std::log(k);
      for (int q = 0; q < 2; ++q) {
        const cplx C = pc * (a.entry(q, 0) * c1 + a.entry(q, 1) * c2);
        b3[q] -= C;
        b4[q] -= C;
      }
    }
  }
  const double f = -2.0 * kPi * std::sqrt(a.det());
  return {f * b3[0], f * b3[1], f * b4[0], f * b4[1]};
}

double SMesh::patch_area(const HermCoupling& a, double x0, double x1, double y0, double y1) {
  auto inner = [&](double x) {
    auto f = [&](double y) { return surface_S(z_of(cplx(x, y)), a).area_density; };
    return adaptive_gk<double>(f, y0, y1, 1e-13, 1e-12).value;
  };
  return adaptive_gk<double>(inner, x0, x1, 1e-12, 1e-11).value;
}

// ---------------------------------------------------------------------------

GammaFields fields_from(const std::array<double, 4>& g, double gamma, const HermCoupling& a) {
  GammaFields F;
  F.gamma = gamma;
  F.g = g;
  const cplx w12 = -cplx(g[2], g[3]);
  F.w << g[0] + g[2], w12, std::conj(w12), g[1] + g[2];
  const double A = a.det();
  cplx v = 0.0;
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) v += a.inverse_entry(p, q) * F.w(p, q);
  F.v = A * v.real();
  const double detw = (F.w(0, 0) * F.w(1, 1) - F.w(0, 1) * F.w(1, 0)).real();
  F.E1 = detw / (A + F.v);
  const double d11 = a.a11 + F.w(0, 0).real();
  const double det_aw = (a.det() + F.v + detw);
  F.positive = (A + F.v > 0.0) && d11 > 0.0 && det_aw > 0.0;
  return F;
}

GammaFields neg_fields(const NegVertexPoint& p, const SMesh& mesh) {
  return fields_from(mesh.gamma_i(p), mesh.kernel().gamma(offset(p, NegVertexPoint{})), mesh.coupling());
}

GammaFields neg_fields(const NegVertexPoint& p, const HermCoupling& a, const SQuadOptions& opt) {
  return neg_fields(p, SMesh(a, {p}, opt));
}

double gamma_i(const NegVertexPoint& p, const HermCoupling& a, int i, const SQuadOptions& opt) {
  if (i < 1 || i > 4) throw std::invalid_argument("γ_i index must be 1..4");
  return SMesh(a, {p}, opt).gamma_i(p)[i - 1];
}

// ---------------------------------------------------------------------------

namespace {

struct PatchGeometry {
  const HermCoupling& a;
  const SPatch& P;
  Mat G;

  Vec base(double x2, double y2) const {
    const cplx e2(x2, y2);
    const cplx e1 = std::log(1.0 - z_of(e2)) / kTwoPiI + P.shift1;
    Vec X(5);
    X << e1.real(), e1.imag(), x2 + P.shift2.real(), y2 + P.shift2.imag(), P.shift_mu;
    return X;
  }
  double ip(const Vec& u, const Vec& v) const { return u.dot(G * v); }
  std::array<Vec, 3> normals(double x2, double y2) const {
    const cplx z2 = z_of(cplx(x2, y2));
    const cplx J1 = -z2 / (1.0 - z2);
    Vec t1(5), t2(5);
    t1 << J1.real(), J1.imag(), 1, 0, 0;
    t2 << -J1.imag(), J1.real(), 0, 1, 0;
    std::vector<Vec> basis;
    auto push = [&](Vec v) {
      for (const Vec& b : basis) v -= ip(v, b) * b;
      v /= std::sqrt(ip(v, v));
      basis.push_back(v);
    };
    push(t1);
    push(t2);
    push(Vec::Unit(5, 0));
    push(Vec::Unit(5, 1));
    push(Vec::Unit(5, 4));
    return {basis[2], basis[3], basis[4]};
  }
  Vec psi(double x2, double y2, double th, double ph, double r) const {
    const auto n = normals(x2, y2);
    return base(x2, y2) + r * (std::sin(th) * std::cos(ph) * n[0] + std::sin(th) * std::sin(ph) * n[1] + std::cos(th) * n[2]);
  }
};

}  // namespace

FluxResult flux_S(const HermCoupling& a, const SPatch& patch, double r, const SQuadOptions& opt) {
  PatchGeometry geo{a, patch, metric_neg(a)};
  const Mat Gi = geo.G.inverse();
  const double sdet = std::sqrt(geo.G.determinant());

  const double size = std::max(patch.x1 - patch.x0, patch.y1 - patch.y0);
  const int nf = static_cast<int>(std::ceil(size / r)) + 1;
  std::vector<NegVertexPoint> focus;
  for (int i = 0; i <= nf; ++i)
    for (int j = 0; j <= nf; ++j) {
      const Vec X = geo.base(patch.x0 + (patch.x1 - patch.x0) * i / nf, patch.y0 + (patch.y1 - patch.y0) * j / nf);
      focus.push_back({cplx(X(0), X(1)), cplx(X(2), X(3)), X(4)});
    }
  SQuadOptions o = opt;
  o.r_floor = r;
  const SMesh mesh(a, focus, o);

  const double hfd = 1e-5;
  auto frame = [&](double x2, double y2, double th, double ph) {
    Mat M(5, 5);
    const auto n = geo.normals(x2, y2);
    M.col(1) = (geo.psi(x2 + hfd, y2, th, ph, r) - geo.psi(x2 - hfd, y2, th, ph, r)) / (2 * hfd);
    M.col(2) = (geo.psi(x2, y2 + hfd, th, ph, r) - geo.psi(x2, y2 - hfd, th, ph, r)) / (2 * hfd);
    M.col(3) = r * (std::cos(th) * std::cos(ph) * n[0] + std::cos(th) * std::sin(ph) * n[1] - std::sin(th) * n[2]);
    M.col(4) = r * (-std::sin(th) * std::sin(ph) * n[0] + std::sin(th) * std::cos(ph) * n[1]);
    M.col(0) = std::sin(th) * std::cos(ph) * n[0] + std::sin(th) * std::sin(ph) * n[1] + std::cos(th) * n[2];
    return M;
  };
  const double xc = 0.5 * (patch.x0 + patch.x1), yc = 0.5 * (patch.y0 + patch.y1);
  const double orient = frame(xc, yc, 0.5 * kPi, 0.3).determinant() > 0.0 ? 1.0 : -1.0;

  auto level = [&](int nu, int nt, int np) {
    const GaussRule& gu = gauss_legendre(nu);
    const GaussRule& gt = gauss_legendre(nt);
    const double hx = 0.5 * (patch.x1 - patch.x0), hy = 0.5 * (patch.y1 - patch.y0);
    double total = 0.0;
    for (int i = 0; i < nu; ++i)
      for (int j = 0; j < nu; ++j)
        for (int k = 0; k < nt; ++k)
          for (int l = 0; l < np; ++l) {
            const double x2 = xc + hx * gu.x[i], y2 = yc + hy * gu.x[j];
            const double th = 0.5 * kPi * (1.0 + gt.x[k]), ph = 2.0 * kPi * l / np;
            Mat M = frame(x2, y2, th, ph);
            const Vec X = geo.psi(x2, y2, th, ph, r);
            const std::array<double, 6> g = mesh.v_grad({cplx(X(0), X(1)), cplx(X(2), X(3)), X(4)});
            Vec dv(5);
            dv << g[1], g[2], g[3], g[4], g[5];
            M.col(0) = Gi * dv;
            const double w = gu.w[i] * gu.w[j] * hx * hy * gt.w[k] * 0.5 * kPi * 2.0 * kPi / np;
            total += w * orient * sdet * M.determinant();
          }
    return total;
  };
  FluxResult res;
  const double coarse = level(3, 3, 4);
  res.flux = level(3, 4, 6);
  res.error = std::abs(res.flux - coarse);
  res.area = SMesh::patch_area(a, patch.x0, patch.x1, patch.y0, patch.y1);
  res.expected = -2.0 * kPi * std::sqrt(a.det()) * res.area;
  return res;
}

// ---------------------------------------------------------------------------

LogModZ34 logmod_z34(const Path& path, const SMesh& mesh, int nodes_per_segment) {
  const HermCoupling& a = mesh.coupling();
  // the regularized integrals of γ_{p3} + γ_{p4} only see Re a12
  const std::array<cplx, 2> K = K_p(HermCoupling{a.a11, a.a22, cplx(a.a12.real(), 0.0)});
  const double A = a.det();
  auto form = [&](double t) {
    const Vec X = path.position(t), V = path.velocity(t);
    const NegVertexPoint p{cplx(X(0), X(1)), cplx(X(2), X(3)), X(4)};
    const double V1 = A + neg_fields(p, mesh).v;
    const std::array<cplx, 4> b = mesh.beta_p34(p);
    const cplx d1(V(0), V(1)), d2(V(2), V(3));
    return std::array<double, 2>{V1 * V(4) + (b[0] * d1 + b[1] * d2).real(),
                                 -V1 * V(4) + ((b[2] - K[0]) * d1 + (b[3] - K[1]) * d2).real()};
  };
  LogModZ34 out;
  std::array<double, 2> fine{}, coarse{};
  for (std::size_t s = 1; s < path.breaks.size(); ++s) {
    const double t0 = path.breaks[s - 1], t1 = path.breaks[s];
    std::array<double, 2> f = gauss_integrate<std::array<double, 2>>(form, t0, t1, nodes_per_segment);
    std::array<double, 2> c = gauss_integrate<std::array<double, 2>>(form, t0, t1, std::max(2, nodes_per_segment / 2));
    fine += f;
    coarse += c;
  }
  out.log_z3 = fine[0];
  out.log_z4 = fine[1];
  out.error = std::max(std::abs(fine[0] - coarse[0]), std::abs(fine[1] - coarse[1]));
  const Vec X0 = path.position(path.breaks.front()), X1 = path.position(path.breaks.back());
  out.log_fS = std::log(std::abs(f_S({cplx(X1(0), X1(1)), cplx(X1(2), X1(3)), X1(4)}))) -
               std::log(std::abs(f_S({cplx(X0(0), X0(1)), cplx(X0(2), X0(3)), X0(4)})));
  return out;
}

double logmod_z3_mu(const NegVertexPoint& p, double mu0, double mu1, const SMesh& mesh, int nodes) {
  if (!(mu0 > 0.0) || !(mu1 > 0.0)) throw std::invalid_argument("μ-segment must lie in μ > 0");
  const double A = mesh.coupling().det();
  auto f = [&](double s) {
    const double mu = std::exp(s);
    return (A + neg_fields({p.eta1, p.eta2, mu}, mesh).v) * mu;
  };
  return gauss_integrate<double>(f, std::log(mu0), std::log(mu1), nodes);
}

SymplecticArea symplectic_area(const HermCoupling& a, double y1, double y2, double mu, int grid,
                               const SQuadOptions& opt) {
  const SMesh mesh(a, {{cplx(0.5, y1), cplx(0.5, y2), mu}}, opt);
  double sum = 0.0, mx = 0.0;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      const NegVertexPoint p{cplx((i + 0.5) / grid, y1), cplx((j + 0.5) / grid, y2), mu};
      const double g4 = mesh.gamma_i(p)[3];
      sum += g4;
      mx = std::max(mx, std::abs(g4));
    }
  SymplecticArea s;
  s.value = a.a21().imag() + sum / (grid * grid);
  s.max_gamma4 = mx;
  s.decayed = mx < 1e-3;
  return s;
}

}  // namespace ghlab::neg
