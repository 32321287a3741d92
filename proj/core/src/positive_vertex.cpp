#include "ghlab/positive_vertex.hpp"

namespace ghlab::pos {

namespace {

double edge_k(int edge, const SymCoupling& a) {
  switch (edge) {
    case 1: return a.a22;
    case 2: return a.a11;
    case 3: return a.a11 + 2.0 * a.a12 + a.a22;
    default: throw std::invalid_argument("edge must be 1, 2 or 3");
  }
}

// Linear form L_e(μ) appearing in α_e and ᾱ_e.
double edge_L(int edge, double mu1, double mu2, const SymCoupling& a) {
  switch (edge) {
    case 1: return a.a22 * mu2 + a.a12 * mu1;
    case 2: return a.a11 * mu1 + a.a12 * mu2;
    default: return -(a.a11 + a.a12) * mu1 - (a.a12 + a.a22) * mu2;
  }
}

double edge_mu(int edge, double mu1, double mu2) {
  return edge == 1 ? mu1 : edge == 2 ? mu2 : mu1 - mu2;
}

double centered(double x) { return x - std::round(x); }

TruncSpec widened(const TruncSpec& t, double reach) {
  TruncSpec s = t;
  s.N = std::max(t.N, static_cast<int>(std::ceil(8.0 * reach)));
  return s;
}

void check_off_D(const PosVertexPoint& p, const SymCoupling& a) {
  if (trivalent_graph_distance(p, a) == 0.0) throw std::domain_error("point lies on the periodic discriminant locus");
}

}  // namespace

double edge_weight(int edge, const SymCoupling& a) { return 1.0 / std::sqrt(edge_k(edge, a)); }

TildeAlphaTriple tilde_alpha(const PosVertexPoint& p, const SymCoupling& a, const TruncSpec& trunc) {
  check_off_D(p, a);
  const double x0 = centered(p.eta.real()), y = p.eta.imag();
  const J4 m1 = J4::variable(p.mu1, 0), m2 = J4::variable(p.mu2, 1), jy = J4::variable(y, 3);
  const TruncSpec spec = widened(trunc, (varrho(p.mu1, p.mu2, 0.0, a) / std::sqrt(a.det())) + std::abs(y));
  TildeAlphaTriple t;
  t.terms = spec.N;
  for (int e = 1; e <= 3; ++e) {
    const double c = 0.5 * edge_weight(e, a);
    auto h = [&](double s) {
      J4 r = c3::alpha_edge(e, m1, m2, J4::variable(x0 + s, 2), jy, a);
      r += c3::alpha_edge(e, m1, m2, J4::variable(x0 - s, 2), jy, a);
      r.v -= c / s;
      return r;
    };
    const Estimate<J4> s = symmetric_sum_1d<J4>(h, c3::alpha_edge(e, m1, m2, J4::variable(x0, 2), jy, a), spec);
    t.jet[e - 1] = s.value;
    t.error[e - 1] = s.error;
  }
  return t;
}

std::array<J3, 3> bar_alpha_jet(double mu1, double mu2, double y, const SymCoupling& a) {
  const J3 m1 = J3::variable(mu1, 0), m2 = J3::variable(mu2, 1), jy = J3::variable(y, 2);
  const double A = a.det(), sA = std::sqrt(A);
  const J3 rho = sqrt(a.a11 * m1 * m1 + 2.0 * a.a12 * m1 * m2 + a.a22 * m2 * m2 + A * jy * jy);
  std::array<J3, 3> out;
  for (int e = 1; e <= 3; ++e) {
    const double sk = std::sqrt(edge_k(e, a));
    J3 L;
    if (e == 1) L = a.a22 * m2 + a.a12 * m1;
    else if (e == 2) L = a.a11 * m1 + a.a12 * m2;
    else L = -(a.a11 + a.a12) * m1 - (a.a12 + a.a22) * m2;
    const J3 arg = (rho - L / sk) / sA;
    if (!(arg.v > 0.0)) throw std::domain_error("log argument of the averaged potential is not positive");
    out[e - 1] = (std::log(2.0) - kEulerGamma - log(arg)) / (2.0 * sk);
  }
  return out;
}

std::array<double, 3> bar_alpha(double mu1, double mu2, double y, const SymCoupling& a) {
  const auto j = bar_alpha_jet(mu1, mu2, y, a);
  return {j[0].v, j[1].v, j[2].v};
}

DecayFit fourier_decay_fit(const SymCoupling& a, double mu1, double mu2, const std::vector<double>& ys,
                           const TruncSpec& trunc) {
  DecayFit f;
  for (double y : ys) {
    const double bar = bar_alpha(mu1, mu2, y, a)[0];
    const auto modes = fourier_modes(
        [&](double x) { return tilde_alpha({mu1, mu2, cplx(x, y)}, a, trunc)[0] - bar; }, 16, 1);
    f.dist.push_back(ray_distance_prime(mu1, mu2, y, a, 1));
    f.amplitude.push_back(std::abs(modes[2]));
    f.mean.push_back(std::abs(modes[1]));
  }
  std::vector<double> la;
  for (double v : f.amplitude) {
    if (!(v > 1e-13)) throw NumericalFailure("Fourier amplitude below the noise floor");
    la.push_back(std::log(v));
  }
  f.slope = linear_fit(f.dist, la).slope;
  return f;
}

Estimate<double> reflection_residual(const PosVertexPoint& p, const SymCoupling& a, int edge,
                                     const TruncSpec& trunc) {
  const PosVertexPoint q{-p.mu1, -p.mu2, -p.eta};
  const TildeAlphaTriple tp = tilde_alpha(p, a, trunc), tq = tilde_alpha(q, a, trunc);
  const double k = edge_k(edge, a), m = edge_mu(edge, p.mu1, p.mu2);
  const double x0 = centered(p.eta.real()), y = p.eta.imag();
  auto term = [&](double x) { return 0.5 / std::sqrt(m * m + k * (x * x + y * y)); };
  auto h = [&](double s) { return term(x0 + s) + term(x0 - s) - 1.0 / (std::sqrt(k) * s); };
  const TruncSpec spec = widened(trunc, std::abs(m) / std::sqrt(k) + std::abs(y));
  const Estimate<double> ov = symmetric_sum_1d<double>(h, term(x0), spec);
  return {tp[edge - 1] + tq[edge - 1] - ov.value, tp.error[edge - 1] + tq.error[edge - 1] + ov.error};
}

Estimate<cplx> tilde_beta(const PosVertexPoint& p, const SymCoupling& a, int i, const TruncSpec& trunc) {
  const cplx e(centered(p.eta.real()), p.eta.imag());
  if (std::abs(e) == 0.0) throw std::domain_error("beta sums are singular for eta in Z");
  double qerr = 0.0;
  auto b = [&](cplx z) {
    const Estimate<cplx> r = c3::beta({p.mu1, p.mu2, z}, a, i);
    qerr += r.error;
    return r.value;
  };
  auto h = [&](double s) { return b(e + s) + b(e - s); };
  const TruncSpec spec = widened(trunc, varrho(p.mu1, p.mu2, 0.0, a) / std::sqrt(a.det()));
  Estimate<cplx> r = symmetric_sum_1d<cplx>(h, b(e), spec);
  r.error += qerr;
  return r;
}

Estimate<cplx> tilde_beta_sum(const PosVertexPoint& p, const SymCoupling& a, const TruncSpec& trunc) {
  Estimate<cplx> s;
  for (int i = 0; i < 3; ++i) {
    const Estimate<cplx> t = tilde_beta(p, a, i, trunc);
    s.value += t.value;
    s.error += t.error;
  }
  return s;
}

bool mplus_contains(double rho, double A, double eps0) {
  if (!(A > 0.0) || !(rho > 0.0)) throw std::invalid_argument("M+ test needs A > 0 and rho > 0");
  return std::log(rho / std::sqrt(A)) < eps0 * std::pow(A, 0.75);
}

PosFields pos_fields_from(const std::array<double, 3>& t, const SymCoupling& a) {
  PosFields f;
  f.v << t[0] + t[2], -t[2], -t[2], t[1] + t[2];
  f.w = a.a22 * t[0] + a.a11 * t[1] + (a.a11 + a.a22 + 2.0 * a.a12) * t[2];
  f.V1 = a.matrix() + f.v;
  f.W1 = a.det() + f.w;
  f.det_v = t[0] * t[1] + t[0] * t[2] + t[1] * t[2];
  f.positive = f.W1 > 0.0 && f.V1(0, 0) > 0.0 && f.V1.determinant() > 0.0;
  const double den = a.det() + f.w + f.det_v;
  f.E1 = -f.det_v / den;
  return f;
}

PosFields pos_fields(const PosVertexPoint& p, const SymCoupling& a, const TruncSpec& trunc) {
  const TildeAlphaTriple t = tilde_alpha(p, a, trunc);
  return pos_fields_from({t[0], t[1], t[2]}, a);
}

MPlusReport mplus_report(const PosVertexPoint& p, const SymCoupling& a, double eps0, const TruncSpec& trunc) {
  MPlusReport r;
  r.inside = mplus_contains(varrho(p.mu1, p.mu2, p.eta.imag(), a), a.det(), eps0);
  const PosFields f = pos_fields(p, a, trunc);
  r.V_positive = f.V1(0, 0) > 0.0 && f.V1.determinant() > 0.0;
  r.W_positive = f.W1 > 0.0;
  return r;
}

}  // namespace ghlab::pos
