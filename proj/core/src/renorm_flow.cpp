#include "ghlab/renorm_flow.hpp"

namespace ghlab::flow {

namespace {

using P3 = std::array<double, 3>;

void check_positive(const FlowState& s) {
  if (!(s.p1 > 0.0 && s.p2 > 0.0 && s.p3 > 0.0)) throw NumericalFailure("flow state has nonpositive p");
}

P3 dp_dlambda(const P3& p) {
  const double P = p[0] * p[1] * p[2];
  return {-(p[1] + p[2]) / (4.0 * P), -(p[0] + p[2]) / (4.0 * P), -(p[0] + p[1]) / (4.0 * P)};
}

P3 axpy(const P3& x, double a, const P3& y) { return {x[0] + a * y[0], x[1] + a * y[1], x[2] + a * y[2]}; }

P3 rk4(const P3& p, double h) {
  const P3 k1 = dp_dlambda(p);
  const P3 k2 = dp_dlambda(axpy(p, 0.5 * h, k1));
  const P3 k3 = dp_dlambda(axpy(p, 0.5 * h, k2));
  const P3 k4 = dp_dlambda(axpy(p, h, k3));
  P3 r;
  for (int i = 0; i < 3; ++i) r[i] = p[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return r;
}

bool positive(const P3& p) {
  return std::isfinite(p[0]) && std::isfinite(p[1]) && std::isfinite(p[2]) && p[0] > 0 && p[1] > 0 && p[2] > 0;
}

std::array<double, 2> conserved_p(const P3& p) {
  const double s = p[0] + p[1] + p[2];
  return {(p[0] - p[1]) * (p[0] - p[1]) * s, (p[0] - p[2]) * (p[0] - p[2]) * s};
}

// Regularized system: dp_i/ds = −(p_j + p_k)/4, dλ/ds = p1 p2 p3.
using Q4 = std::array<double, 4>;
Q4 reg_rhs(const Q4& q) {
  return {-(q[1] + q[2]) / 4.0, -(q[0] + q[2]) / 4.0, -(q[0] + q[1]) / 4.0, q[0] * q[1] * q[2]};
}
Q4 reg_step(const Q4& q, double h) {
  auto add = [](const Q4& x, double a, const Q4& y) {
    return Q4{x[0] + a * y[0], x[1] + a * y[1], x[2] + a * y[2], x[3] + a * y[3]};
  };
  const Q4 k1 = reg_rhs(q), k2 = reg_rhs(add(q, 0.5 * h, k1)), k3 = reg_rhs(add(q, 0.5 * h, k2)),
           k4 = reg_rhs(add(q, h, k3));
  Q4 r;
  for (int i = 0; i < 4; ++i) r[i] = q[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return r;
}

double locate_breakdown(const P3& p, double lambda) {
  Q4 q{p[0], p[1], p[2], lambda};
  const double ds = 1e-3;
  for (int it = 0; it < 200000000; ++it) {
    if (q[0] * q[1] * q[2] < 1e-13) return q[3];
    Q4 n = reg_step(q, ds);
    if (std::min({n[0], n[1], n[2]}) <= 0.0) {
      double lo = 0.0, hi = ds;
      for (int b = 0; b < 80; ++b) {
        const double mid = 0.5 * (lo + hi);
        const Q4 m = reg_step(q, mid);
        (std::min({m[0], m[1], m[2]}) > 0.0 ? lo : hi) = mid;
      }
      return reg_step(q, lo)[3];
    }
    q = n;
  }
  throw NumericalFailure("breakdown not reached in regularized time");
}

}  // namespace

Derivative flow_rhs(const FlowState& s) {
  check_positive(s);
  Derivative d;
  const P3 p{s.p1, s.p2, s.p3};
  d.dp2 = {-0.5 / s.p2 - 0.5 / s.p3, -0.5 / s.p1 - 0.5 / s.p3, -0.5 / s.p1 - 0.5 / s.p2};
  d.dp = dp_dlambda(p);
  d.d_im_a21 = 0.0;
  return d;
}

std::array<double, 2> conserved(const FlowState& s) { return conserved_p({s.p1, s.p2, s.p3}); }

Trajectory integrate(const FlowState& s0, double lambda_end, double step, const IntegrateOptions& opt) {
  check_positive(s0);
  if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
  Trajectory tr;
  tr.states.push_back(s0);
  P3 p{s0.p1, s0.p2, s0.p3};
  double lambda = s0.lambda;
  bool near_checked = false;
  while (lambda < lambda_end - 1e-15) {
    double h = std::min(step, lambda_end - lambda);
    // close to min p = 0 the λ-steps lose accuracy; the regularized time does not
    const P3 d = dp_dlambda(p);
    if (!near_checked && step * std::max({-d[0], -d[1], -d[2]}) > 0.02 * std::min({p[0], p[1], p[2]})) {
      near_checked = true;
      const double b = locate_breakdown(p, lambda);
      if (b <= lambda_end) {
        tr.breakdown_lambda = b;
        break;
      }
    }
    bool accepted = false;
    while (h >= opt.min_step) {
      const P3 n = rk4(p, h);
      if (positive(n)) {
        const auto c0 = conserved_p(p), c1 = conserved_p(n);
        const double drift = std::max(std::abs(c1[0] - c0[0]) / (1.0 + std::abs(c0[0])),
                                      std::abs(c1[1] - c0[1]) / (1.0 + std::abs(c0[1])));
        if (drift <= opt.drift_tolerance * h) {
          tr.max_drift_rate = std::max(tr.max_drift_rate, drift / h);
          p = n;
          lambda += h;
          accepted = true;
          break;
        }
      }
      h *= 0.5;
    }
    if (!accepted) {
      tr.breakdown_lambda = locate_breakdown(p, lambda);
      break;
    }
    tr.states.push_back({p[0], p[1], p[2], s0.im_a21, lambda});
  }
  return tr;
}

double closed_form_lambda(double K1, double K2, double K3, double t) {
  return -2.0 / 3.0 * t * t + 4.0 / 9.0 * (K1 * K1 + K2 * K2 - K1 * K2) * std::log(t) +
         4.0 / 81.0 * (K1 + K2) * (K2 - 2.0 * K1) * (K1 - 2.0 * K2) / t + K3;
}

FlowState closed_form(const FlowConstants& c, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
  const double a = std::pow(t, 2.0 / 3.0), b = std::pow(t, -1.0 / 3.0);
  FlowState s;
  s.p1 = a + (c.K1 + c.K2) * b / 3.0;
  s.p2 = a + (c.K2 - 2.0 * c.K1) * b / 3.0;
  s.p3 = a + (c.K1 - 2.0 * c.K2) * b / 3.0;
  s.lambda = closed_form_lambda(c.K1, c.K2, c.K3, t);
  if (!(s.p1 > 0.0 && s.p2 > 0.0 && s.p3 > 0.0)) throw NumericalFailure("closed form has nonpositive p at this t");
  return s;
}

FlowConstants fit_constants(const FlowState& s) {
  FlowConstants c;
  c.t = std::pow((s.p1 + s.p2 + s.p3) / 3.0, 1.5);
  const double r = std::cbrt(c.t);
  c.K1 = (s.p1 - s.p2) * r;
  c.K2 = (s.p1 - s.p3) * r;
  c.K3 = s.lambda - closed_form_lambda(c.K1, c.K2, 0.0, c.t);
  return c;
}

NeckEstimate neck_estimate(double A_max) {
  if (!(A_max > 0.0)) throw std::invalid_argument("A_max must be positive");
  NeckEstimate n;
  n.log_scales = 2.0 / 3.0 * std::pow(4.0 * A_max / 3.0, 0.75);
  n.log_diameter = n.log_scales;
  return n;
}

std::array<double, 3> p_variables(const SymCoupling& a) {
  return {std::sqrt(a.a22), std::sqrt(a.a11), std::sqrt(a.a11 + 2.0 * a.a12 + a.a22)};
}

std::array<double, 3> p_variables(const HermCoupling& a) {
  return {std::sqrt(a.a22), std::sqrt(a.a11), std::sqrt(a.a11 + 2.0 * a.a12.real() + a.a22)};
}

SymCoupling sym_from_p(const std::array<double, 3>& p) {
  return SymCoupling::make(p[1] * p[1], 0.5 * (p[2] * p[2] - p[0] * p[0] - p[1] * p[1]), p[0] * p[0]);
}

HermCoupling herm_from_p(const std::array<double, 3>& p, double im_a21) {
  // a21 = conj(a12), so Im a12 = −Im a21.
  return HermCoupling::make(p[1] * p[1], cplx(0.5 * (p[2] * p[2] - p[0] * p[0] - p[1] * p[1]), -im_a21),
                            p[0] * p[0]);
}

double mirror_discrepancy(const SymCoupling& sym, const HermCoupling& herm) {
  const auto ps = p_variables(sym), ph = p_variables(herm);
  const Derivative ds = flow_rhs({ps[0], ps[1], ps[2], 0.0, 0.0});
  const Derivative dh = flow_rhs({ph[0], ph[1], ph[2], herm.a21().imag(), 0.0});
  double m = std::abs(dh.d_im_a21);
  for (int i = 0; i < 3; ++i) m = std::max(m, std::abs(ds.dp2[i] - dh.dp2[i]));
  return m;
}

}  // namespace ghlab::flow
