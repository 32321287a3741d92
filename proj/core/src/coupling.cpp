#include "ghlab/coupling.hpp"

#include <boost/math/tools/minima.hpp>

#include <limits>
#include <string>

namespace ghlab {

SymCoupling SymCoupling::make(double a11, double a12, double a22) {
  SymCoupling a{a11, a12, a22};
  if (!(a11 > 0.0) || !(a.det() > 0.0) || !std::isfinite(a.det()))
    throw InvalidCoupling("coupling is not positive definite (need a11 > 0 and a11*a22 - a12^2 > 0)");
  return a;
}

Eigen::Matrix2d SymCoupling::matrix() const {
  Eigen::Matrix2d m;
  m << a11, a12, a12, a22;
  return m;
}

Eigen::Matrix2d SymCoupling::inverse() const {
  Eigen::Matrix2d m;
  m << a22, -a12, -a12, a11;
  return m / det();
}

HermCoupling HermCoupling::make(double a11, cplx a12, double a22) {
  HermCoupling a{a11, a22, a12};
  if (!(a11 > 0.0) || !(a.det() > 0.0) || !std::isfinite(a.det()))
    throw InvalidCoupling("coupling is not positive definite (need a11 > 0 and a11*a22 - |a12|^2 > 0)");
  return a;
}

cplx HermCoupling::entry(int p, int q) const {
  if (p == q) return p == 0 ? a11 : a22;
  return p == 0 ? a12 : a21();
}

Eigen::Matrix2d HermCoupling::real_part() const {
  Eigen::Matrix2d m;
  m << a11, a12.real(), a12.real(), a22;
  return m;
}

cplx HermCoupling::inverse_entry(int p, int q) const {
  const double A = det();
  if (p == q) return (p == 0 ? a22 : a11) / A;
  return -(p == 0 ? a21() : a12) / A;
}

PosVertexPoint PosVertexPoint::canonical() const {
  return {mu1, mu2, cplx(wrap_unit(eta.real()), eta.imag())};
}

NegVertexPoint NegVertexPoint::canonical() const {
  return {cplx(wrap_unit(eta1.real()), eta1.imag()), cplx(wrap_unit(eta2.real()), eta2.imag()), mu};
}

double wrap_unit(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

Mat metric_c3(const SymCoupling& a) {
  Mat g = Mat::Zero(4, 4);
  g.topLeftCorner(2, 2) = a.matrix();
  g(2, 2) = g(3, 3) = a.det();
  return g;
}

Mat metric_c3_prime(const SymCoupling& a) {
  Mat g = Mat::Zero(3, 3);
  g.topLeftCorner(2, 2) = a.matrix();
  g(2, 2) = a.det();
  return g;
}

Mat metric_neg(const HermCoupling& a) {
  const double r = a.a12.real(), m = a.a12.imag();
  Mat g = Mat::Zero(5, 5);
  g(0, 0) = g(1, 1) = a.a11;
  g(2, 2) = g(3, 3) = a.a22;
  g(0, 2) = g(2, 0) = r;
  g(1, 3) = g(3, 1) = r;
  g(1, 2) = g(2, 1) = -m;
  g(0, 3) = g(3, 0) = m;
  g(4, 4) = a.det();
  return g;
}

Mat metric_neg_prime(const HermCoupling& a) {
  Mat g = Mat::Zero(3, 3);
  g.topLeftCorner(2, 2) = a.det() / a.big_det() * a.real_part();
  g(2, 2) = a.det();
  return g;
}

double norm_a(const C3Point& p, const SymCoupling& a) {
  return std::sqrt(a.a11 * p.mu1 * p.mu1 + 2.0 * a.a12 * p.mu1 * p.mu2 + a.a22 * p.mu2 * p.mu2 +
                   a.det() * std::norm(p.eta));
}

double varrho(double mu1, double mu2, double y, const SymCoupling& a) {
  return std::sqrt(a.a11 * mu1 * mu1 + 2.0 * a.a12 * mu1 * mu2 + a.a22 * mu2 * mu2 + a.det() * y * y);
}

namespace {

double herm_form(const HermCoupling& a, cplx d1, cplx d2) {
  return a.a11 * std::norm(d1) + a.a22 * std::norm(d2) + 2.0 * (a.a12 * d1 * std::conj(d2)).real();
}

// Minimum of the periodic g_a quadratic form over lattice translates of (d1, d2).
double periodic_form(const HermCoupling& a, cplx d1, cplx d2) {
  const double x1 = d1.real() - std::round(d1.real());
  const double x2 = d2.real() - std::round(d2.real());
  double best = std::numeric_limits<double>::infinity();
  for (int n1 = -1; n1 <= 1; ++n1)
    for (int n2 = -1; n2 <= 1; ++n2)
      best = std::min(best, herm_form(a, cplx(x1 + n1, d1.imag()), cplx(x2 + n2, d2.imag())));
  return best;
}

}  // namespace

double norm_a(const NegVertexPoint& p, const HermCoupling& a) {
  return std::sqrt(periodic_form(a, p.eta1, p.eta2) + a.det() * p.mu * p.mu);
}

double varrho(double y1, double y2, double mu, const HermCoupling& a) {
  const Eigen::Vector2d y(y1, y2);
  return std::sqrt(a.det() / a.big_det() * y.dot(a.real_part() * y) + a.det() * mu * mu);
}

double ray_distance(double mu1, double mu2, double eta_abs2, const SymCoupling& a, int edge) {
  const Eigen::Vector2d mu(mu1, mu2);
  Eigen::Vector2d dir;
  switch (edge) {
    case 1: dir << 0.0, 1.0; break;
    case 2: dir << 1.0, 0.0; break;
    case 3: dir << -1.0, -1.0; break;
    default: throw std::invalid_argument("edge must be 1, 2 or 3");
  }
  const Eigen::Matrix2d g = a.matrix();
  const double t = std::max(0.0, dir.dot(g * mu) / dir.dot(g * dir));
  const Eigen::Vector2d d = mu - t * dir;
  return std::sqrt(d.dot(g * d) + a.det() * eta_abs2);
}

double trivalent_graph_distance(const C3Point& p, const SymCoupling& a) {
  const double e2 = std::norm(p.eta);
  return std::min({ray_distance(p.mu1, p.mu2, e2, a, 1), ray_distance(p.mu1, p.mu2, e2, a, 2),
                   ray_distance(p.mu1, p.mu2, e2, a, 3)});
}

double trivalent_graph_distance(const PosVertexPoint& p, const SymCoupling& a) {
  double best = std::numeric_limits<double>::infinity();
  const double x0 = std::round(p.eta.real());
  for (int n = -3; n <= 3; ++n) {
    const cplx e = p.eta - (x0 + n);
    best = std::min(best, trivalent_graph_distance(C3Point{p.mu1, p.mu2, e}, a));
  }
  return best;
}

double ray_distance_prime(double mu1, double mu2, double y, const SymCoupling& a, int edge) {
  return ray_distance(mu1, mu2, y * y, a, edge);
}

GeomScales scales(const C3Point& p, const SymCoupling& a) {
  GeomScales s;
  s.norm_a = norm_a(p, a);
  s.varrho = varrho(p.mu1, p.mu2, p.eta.imag(), a);
  s.dist_D = trivalent_graph_distance(p, a);
  s.ell = std::pow(a.det(), -0.25) + s.dist_D;
  const double dprime = std::min({ray_distance_prime(p.mu1, p.mu2, p.eta.imag(), a, 1),
                                  ray_distance_prime(p.mu1, p.mu2, p.eta.imag(), a, 2),
                                  ray_distance_prime(p.mu1, p.mu2, p.eta.imag(), a, 3)});
  s.ell_tilde = 2.0 * kPi / std::sqrt(a.det()) * dprime;
  return s;
}

GeomScales scales(const PosVertexPoint& p, const SymCoupling& a) {
  const PosVertexPoint c = p.canonical();
  const double x = c.eta.real() > 0.5 ? c.eta.real() - 1.0 : c.eta.real();
  GeomScales s = scales(C3Point{c.mu1, c.mu2, cplx(x, c.eta.imag())}, a);
  s.dist_D = trivalent_graph_distance(p, a);
  s.ell = std::pow(a.det(), -0.25) + s.dist_D;
  return s;
}

GeomScales scales(const NegVertexPoint& p, const HermCoupling& a) {
  GeomScales s;
  s.norm_a = norm_a(p, a);
  s.varrho = varrho(p.eta1.imag(), p.eta2.imag(), p.mu, a);
  s.dist_D = distance_to_S(p, a);
  s.ell = s.dist_D + 1.0 / std::sqrt(a.det());
  s.ell_tilde = kappa_a(a) * distance_to_amoeba(p.eta1.imag(), p.eta2.imag(), p.mu, a);
  return s;
}

cplx z_of(cplx eta) { return std::exp(cplx(0.0, 2.0 * kPi) * eta); }

cplx f_S(const NegVertexPoint& p) { return 1.0 - z_of(p.eta1) - z_of(p.eta2); }

namespace {
cplx eta_of(cplx z) {
  const cplx e = std::log(z) / cplx(0.0, 2.0 * kPi);
  return {wrap_unit(e.real()), e.imag()};
}
}  // namespace

SurfacePoint surface_S(cplx z2, const HermCoupling& a) {
  if (std::abs(z2) == 0.0 || std::abs(z2 - 1.0) == 0.0)
    throw std::invalid_argument("z2 must avoid the punctures 0 and 1 of S");
  SurfacePoint sp;
  sp.z2 = z2;
  sp.z1 = 1.0 - z2;
  sp.point = {eta_of(sp.z1), eta_of(z2), 0.0};
  const cplx J1 = -z2 / sp.z1;
  sp.area_density = a.a11 * std::norm(J1) + a.a22 + 2.0 * (a.a12 * J1).real();
  return sp;
}

AmoebaTest amoeba_contains(double y1, double y2) {
  const double r1 = std::exp(-2.0 * kPi * y1), r2 = std::exp(-2.0 * kPi * y2);
  const double s = std::min({r1 + r2 - 1.0, r1 + 1.0 - r2, r2 + 1.0 - r1});
  return {s >= 0.0, s};
}

double k_mode(int n1, int n2, const HermCoupling& a) {
  const Eigen::Vector2d n(n1, n2);
  return 2.0 * kPi * std::sqrt(n.dot(a.real_part().inverse() * n));
}

double kappa_a(const HermCoupling& a) {
  double best = std::numeric_limits<double>::infinity();
  for (int n1 = -1; n1 <= 1; ++n1)
    for (int n2 = -1; n2 <= 1; ++n2)
      if (n1 != 0 || n2 != 0) best = std::min(best, k_mode(n1, n2, a));
  return best;
}

namespace {

template <class F>
std::pair<double, double> brent(F&& f, double lo, double hi) {
  auto r = boost::math::tools::brent_find_minima(f, lo, hi, 40);
  return {r.first, r.second};
}

// Squared g_a-distance from p to the point of S with chart coordinate η in chart
// `chart` (0: η2 free, 1: η1 free).
double sq_dist_chart(const NegVertexPoint& p, const HermCoupling& a, int chart, double x, double y) {
  const cplx eta(x, y);
  const cplx zf = z_of(eta);
  const cplx zo = 1.0 - zf;
  if (std::abs(zo) < 1e-300) return std::numeric_limits<double>::infinity();
  const cplx eo = std::log(zo) / cplx(0.0, 2.0 * kPi);
  const cplx e1 = chart == 0 ? eo : eta;
  const cplx e2 = chart == 0 ? eta : eo;
  return periodic_form(a, p.eta1 - e1, p.eta2 - e2);
}

}  // namespace

double distance_to_S(const NegVertexPoint& p, const HermCoupling& a) {
  double best = std::numeric_limits<double>::infinity();
  for (int chart = 0; chart < 2; ++chart) {
    const double yc = chart == 0 ? p.eta2.imag() : p.eta1.imag();
    const double xc = chart == 0 ? p.eta2.real() : p.eta1.real();
    double bx = xc, by = yc, bv = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 24; ++i)
      for (int j = -24; j <= 24; ++j) {
        const double x = xc + i / 24.0, y = yc + j * 0.125;
        const double v = sq_dist_chart(p, a, chart, x, y);
        if (v < bv) {
          bv = v;
          bx = x;
          by = y;
        }
      }
    double step = 0.125;
    for (int it = 0; it < 30; ++it) {
      auto fx = [&](double x) { return sq_dist_chart(p, a, chart, x, by); };
      auto rx = brent(fx, bx - step, bx + step);
      bx = rx.first;
      auto fy = [&](double y) { return sq_dist_chart(p, a, chart, bx, y); };
      auto ry = brent(fy, by - step, by + step);
      const double moved = std::abs(ry.first - by);
      by = ry.first;
      bv = ry.second;
      if (moved < 1e-12 && it > 3) break;
      step = std::max(0.5 * step, 4.0 * moved + 1e-9);
    }
    best = std::min(best, bv);
  }
  return std::sqrt(best + a.det() * p.mu * p.mu);
}

double distance_to_amoeba(double y1, double y2, double mu, const HermCoupling& a) {
  const double mu_part = a.det() * mu * mu;
  if (amoeba_contains(y1, y2).inside) return std::sqrt(mu_part);
  const Eigen::Matrix2d g = a.det() / a.big_det() * a.real_part();
  const Eigen::Vector2d q(y1, y2);
  // Boundary of the amoeba: images of the three real arcs of S.
  auto boundary = [](int arc, double s) {
    double t;
    if (arc == 0) t = -std::exp(s);
    else if (arc == 1) t = 1.0 / (1.0 + std::exp(-s));
    else t = 1.0 + std::exp(s);
    return Eigen::Vector2d(-std::log(std::abs(1.0 - t)) / (2.0 * kPi), -std::log(std::abs(t)) / (2.0 * kPi));
  };
  double best = std::numeric_limits<double>::infinity();
  for (int arc = 0; arc < 3; ++arc) {
    auto f = [&](double s) {
      const Eigen::Vector2d d = boundary(arc, s) - q;
      return d.dot(g * d);
    };
    double bs = 0.0, bv = std::numeric_limits<double>::infinity();
    for (double s = -40.0; s <= 40.0; s += 0.25) {
      const double v = f(s);
      if (v < bv) {
        bv = v;
        bs = s;
      }
    }
    best = std::min(best, brent(f, bs - 0.25, bs + 0.25).second);
  }
  return std::sqrt(best + mu_part);
}

}  // namespace ghlab
