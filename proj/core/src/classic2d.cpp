#include "ghlab/classic2d.hpp"

namespace ghlab::classic2d {

namespace {

double radius(double mu, cplx eta) { return std::sqrt(mu * mu + std::norm(eta)); }

void reject_origin(double mu, cplx eta) {
  if (radius(mu, eta) == 0.0) throw std::domain_error("potential is singular at the origin");
}

}  // namespace

double taubnut_potential(double mu, cplx eta, double A) {
  reject_origin(mu, eta);
  return 0.5 / radius(mu, eta) + A;
}

Vec3 taubnut_gradient(double mu, cplx eta) {
  reject_origin(mu, eta);
  const double r = radius(mu, eta);
  const double c = -0.5 / (r * r * r);
  return {c * mu, c * eta.real(), c * eta.imag()};
}

Estimate<double> ov_potential(double mu, cplx eta, const OVParams& p) {
  const cplx e(eta.real() - std::round(eta.real()), eta.imag());
  reject_origin(mu, e);
  auto h = [&](double t) { return 0.5 / radius(mu, e + t) + 0.5 / radius(mu, e - t) - 1.0 / t; };
  Estimate<double> s = symmetric_sum_1d<double>(h, 0.5 / radius(mu, e), p.trunc);
  s.value += p.A;
  return s;
}

Estimate<Vec3> ov_gradient(double mu, cplx eta, const OVParams& p) {
  const cplx e(eta.real() - std::round(eta.real()), eta.imag());
  reject_origin(mu, e);
  auto g = [&](cplx z) {
    const Vec3 v = taubnut_gradient(mu, z);
    return v;
  };
  auto h = [&](double t) {
    Vec3 a = g(e + t);
    a += g(e - t);
    return a;
  };
  return symmetric_sum_1d<Vec3>(h, g(e), p.trunc);
}

Estimate<double> ov_semiflat_deviation(double mu, cplx eta, const OVParams& p) {
  const double y = eta.imag();
  if (mu * mu + y * y < 1.0) throw std::domain_error("semiflat deviation needs mu^2 + y^2 >= 1");
  Estimate<double> v = ov_potential(mu, eta, p);
  v.value += -p.A + kEulerGamma - std::log(2.0) + 0.5 * std::log(mu * mu + y * y);
  return v;
}

cplx beta_taubnut(int which, double mu, cplx eta) {
  if (std::abs(eta) == 0.0) throw std::domain_error("beta is singular on eta = 0");
  const double s = which == 1 ? -1.0 : 1.0;
  return 1.0 / (2.0 * eta) + s * mu / (2.0 * eta * radius(mu, eta));
}

Estimate<cplx> beta_ov(int sign, double mu, cplx eta, const TruncSpec& trunc) {
  const cplx e(eta.real() - std::round(eta.real()), eta.imag());
  if (std::abs(e) == 0.0) throw std::domain_error("beta is singular on the lattice eta in Z");
  const double s = sign > 0 ? -1.0 : 1.0;
  auto f = [&](cplx z) { return 1.0 / (2.0 * z) + s * mu / (2.0 * z * radius(mu, z)); };
  auto h = [&](double t) { return f(e + t) + f(e - t); };
  Estimate<cplx> r = symmetric_sum_1d<cplx>(h, f(e), trunc);
  r.value += cplx(0.0, kPi / 2.0);
  return r;
}

Vec3 dlogmod_taubnut(int which, double mu, cplx eta, double A) {
  const double V = taubnut_potential(mu, eta, A);
  const cplx b = beta_taubnut(which, mu, eta);
  const double s = which == 1 ? 1.0 : -1.0;
  return {s * V, b.real(), -b.imag()};
}

Vec3 dlogmod_ov(int which, double mu, cplx eta, const OVParams& p) {
  const double V = ov_potential(mu, eta, p).value;
  const int sign = which == 1 ? 1 : -1;
  const cplx b = beta_ov(sign, mu, eta, p.trunc).value;
  return {sign * V, b.real(), -b.imag()};
}

namespace {

template <class Form>
Estimate<double> integrate_form(Form&& form, const Path& path) {
  std::function<double(const Vec&, const Vec&)> w = [&](const Vec& x, const Vec& v) {
    const Vec3 c = form(x(0), cplx(x(1), x(2)));
    return c[0] * v(0) + c[1] * v(1) + c[2] * v(2);
  };
  return path_integral<double>(w, path, 1e-11, 1e-11);
}

}  // namespace

LogmodResult logmod_functional_eq_taubnut(const Path& path, double A) {
  const Vec a = path.position(path.breaks.front()), b = path.position(path.breaks.back());
  const double log0 = 0.5 * std::log(std::abs(cplx(a(1), a(2))));
  auto f1 = [&](double mu, cplx eta) { return dlogmod_taubnut(1, mu, eta, A); };
  auto f0 = [&](double mu, cplx eta) { return dlogmod_taubnut(0, mu, eta, A); };
  const Estimate<double> i1 = integrate_form(f1, path), i0 = integrate_form(f0, path);
  LogmodResult r;
  r.log_z_first = log0 + i1.value;
  r.log_z_second = log0 + i0.value;
  r.residual = std::exp(r.log_z_first + r.log_z_second) - std::abs(cplx(b(1), b(2)));
  r.error = i1.error + i0.error;
  return r;
}

LogmodResult logmod_functional_eq_ov(const Path& path, const OVParams& p) {
  const Vec a = path.position(path.breaks.front()), b = path.position(path.breaks.back());
  auto fS = [](double x, double y) { return std::abs(1.0 - std::exp(cplx(0.0, 2.0 * kPi) * cplx(x, y))); };
  const double log0 = 0.5 * std::log(fS(a(1), a(2)));
  auto f1 = [&](double mu, cplx eta) { return dlogmod_ov(1, mu, eta, p); };
  auto f2 = [&](double mu, cplx eta) { return dlogmod_ov(2, mu, eta, p); };
  const Estimate<double> i1 = integrate_form(f1, path), i2 = integrate_form(f2, path);
  LogmodResult r;
  r.log_z_first = log0 + i1.value;
  r.log_z_second = log0 + i2.value;
  r.residual = std::exp(r.log_z_first + r.log_z_second) - fS(b(1), b(2));
  r.error = i1.error + i2.error;
  return r;
}

Estimate<double> ov_loop_period(int sign, double mu, double y, const OVParams& p) {
  Vec a(3), e1(3);
  a << mu, 0.0, y;
  e1 << 0.0, 1.0, 0.0;
  const Path path = polyline({a, Vec(a + e1)});
  auto f = [&](double m, cplx eta) { return dlogmod_ov(sign > 0 ? 1 : 2, m, eta, p); };
  return integrate_form(f, path);
}

}  // namespace ghlab::classic2d
