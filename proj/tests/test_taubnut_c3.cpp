#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ghlab/taubnut_c3.hpp"

#include <random>

using namespace ghlab;
using namespace ghlab::c3;

namespace {

// Straight arctan formulas, no branch switching, as an oracle away from the removable set.
std::array<double, 3> alpha_oracle(const C3Point& p, const SymCoupling& a) {
  const double e2 = std::norm(p.eta), sA = std::sqrt(a.det());
  auto f = [&](double c2, double L) {
    const double c = std::sqrt(c2);
    return (0.5 + std::atan(L / (sA * c)) / kPi) / (2 * c);
  };
  const double d = p.mu1 - p.mu2;
  return {f(p.mu1 * p.mu1 + a.a22 * e2, a.a22 * p.mu2 + a.a12 * p.mu1),
          f(p.mu2 * p.mu2 + a.a11 * e2, a.a11 * p.mu1 + a.a12 * p.mu2),
          f(d * d + (a.a11 + 2 * a.a12 + a.a22) * e2, -(a.a11 + a.a12) * p.mu1 - (a.a12 + a.a22) * p.mu2)};
}

C3Point at(const Vec& x) { return {x(0), x(1), cplx(x(2), x(3))}; }
Vec vec(const C3Point& p) { return (Vec(4) << p.mu1, p.mu2, p.eta.real(), p.eta.imag()).finished(); }

const SymCoupling kGeneric = SymCoupling::make(2.0, 0.3, 1.0);

}  // namespace

TEST_CASE("alpha closed forms") {
  const auto id = SymCoupling::identity();
  CHECK(alpha_value(1, {1, 0, 0.0}, id) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(alpha_value(1, {0, 1, 1.0}, id) == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(alpha_value(3, {1, 2, 0.0}, id) == doctest::Approx(0.5 * (0.5 - std::atan(3.0) / kPi)).epsilon(1e-14));
  CHECK(alpha_value(3, {1, 2, 0.0}, id) == doctest::Approx(0.051208).epsilon(1e-5));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int k = 0; k < 200; ++k) {
    const C3Point p{u(rng), u(rng), cplx(u(rng), u(rng))};
    const auto o = alpha_oracle(p, kGeneric);
    const AlphaTriple t = alpha(p, kGeneric);
    for (int i = 0; i < 3; ++i) CHECK(t[i] == doctest::Approx(o[i]).epsilon(1e-12));
  }
}

TEST_CASE("alpha is finite on the removable set and agrees with its limits") {
  const auto id = SymCoupling::identity();
  // {μ1 = μ2 > 0, η = 0} for α3
  const double v = alpha_value(3, {1, 1, 0.0}, id);
  CHECK(std::isfinite(v));
  CHECK(v == doctest::Approx(alpha_value(3, {1, 1, cplx(1e-7, 0)}, id)).epsilon(1e-6));
  CHECK(v == doctest::Approx(1.0 / (2 * kPi * 2)).epsilon(1e-12));
}

TEST_CASE("analytic derivatives match finite differences") {
  const C3Point p{0.4, -0.7, cplx(0.3, 0.5)};
  const AlphaTriple t = alpha(p, kGeneric);
  for (int e = 1; e <= 3; ++e) {
    ScalarField f = [&](const Vec& x) { return alpha_value(e, at(x), kGeneric); };
    const Vec g = fd_gradient(f, vec(p), 1e-3);
    for (int k = 0; k < 4; ++k) CHECK(t.jet[e - 1].d[k] == doctest::Approx(g(k)).epsilon(1e-7));
  }
}

TEST_CASE("integrability identity") {
  const auto id = SymCoupling::identity();
  CHECK(integrability_residual({1, 0, 0.0}, id) <= 1e-10);
  CHECK(alpha({1, 0, 0.0}, id).jet[0].d[1] == doctest::Approx(1 / (2 * kPi)).epsilon(1e-12));
  const auto d21 = SymCoupling::make(2, 0, 1);
  CHECK(integrability_residual({1, 1, cplx(0, 1)}, d21) <= 1e-10);
  const C3Point p{0.3, 1.1, cplx(0.2, -0.4)};
  const double L = 1.7;
  const C3Point q{p.mu1 / L, p.mu2 / L, p.eta * std::pow(L, -1.5)};
  CHECK(std::abs(integrability_residual(p, kGeneric) - integrability_residual(q, kGeneric.scaled(L)) / L / L) <
        1e-12);
}

TEST_CASE("scaling symmetry and nonnegativity") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5, 5);
  const double L = 2.5;
  const SymCoupling b = kGeneric.scaled(L);
  int negatives = 0;
  for (int k = 0; k < 10000; ++k) {
    const C3Point p{u(rng), u(rng), cplx(u(rng), u(rng))};
    const AlphaTriple t = alpha(p, kGeneric);
    for (int i = 0; i < 3; ++i) negatives += t[i] < 0.0;
    if (k % 100 == 0) {
      const C3Point q{p.mu1 / L, p.mu2 / L, p.eta * std::pow(L, -1.5)};
      const AlphaTriple s = alpha(q, b);
      for (int i = 0; i < 3; ++i) CHECK(s[i] == doctest::Approx(L * t[i]).epsilon(1e-13));
    }
  }
  CHECK(negatives == 0);
}

TEST_CASE("harmonicity") {
  const Mat G = metric_c3(kGeneric).inverse();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-4, 4);
  int tested = 0;
  while (tested < 30) {
    const C3Point p{u(rng), u(rng), cplx(u(rng), u(rng))};
    if (trivalent_graph_distance(p, kGeneric) < 0.1) continue;
    for (int e = 1; e <= 3; ++e) {
      ScalarField f = [&](const Vec& x) { return alpha_value(e, at(x), kGeneric); };
      const LaplacianResult r = fd_laplacian(f, vec(p), G, 1e-3);
      CHECK(r.relative() <= 1e-4);
    }
    ++tested;
  }
}

TEST_CASE("tube flux around D1") {
  for (const SymCoupling& a : {SymCoupling::identity(), kGeneric}) {
    GradientField df = [&](const Vec& x) {
      const J4 j = alpha(at(x), a).jet[0];
      return Vec((Vec(4) << j.d[0], j.d[1], j.d[2], j.d[3]).finished());
    };
    const Vec p0 = (Vec(4) << 0, 1, 0, 0).finished(), p1 = (Vec(4) << 0, 2, 0, 0).finished();
    const Certified f = tube_flux(df, p0, p1, 0.2, metric_c3(a), 1e-6);
    CHECK(f.value == doctest::Approx(-2 * kPi * std::sqrt(a.det())).epsilon(1e-2));
  }
}

TEST_CASE("first order fields") {
  const auto id = SymCoupling::identity();
  const C3Fields f = c3_fields({1, 2, 0.0}, id);
  CHECK(std::abs(f.E1 - E1_ratio_route({1, 2, 0.0}, id)) <= 1e-12);
  CHECK(std::abs(f.E1 * (id.det() + f.w + f.det_v) + f.det_v) < 1e-15);
  CHECK(f.v(0, 1) == doctest::Approx(-alpha_value(3, {1, 2, 0.0}, id)));
  const Eigen::Matrix2d ainv = kGeneric.inverse();
  const C3Fields g = c3_fields({0.3, -1.2, cplx(0.5, 0.1)}, kGeneric);
  CHECK(g.w == doctest::Approx(kGeneric.det() * (ainv.array() * g.v.array()).sum()).epsilon(1e-13));

  // decay along a generic ray
  std::vector<double> lx, ly;
  for (double s = 10; s <= 1000; s *= 1.5) {
    const C3Point p{s, 0.3 * s, cplx(0, 0.5 * s)};
    lx.push_back(std::log(norm_a(p, kGeneric)));
    ly.push_back(std::log(std::abs(c3_fields(p, kGeneric).E1)));
  }
  CHECK(linear_fit(lx, ly).slope == doctest::Approx(-2).epsilon(0.05));
  // α → 0 far away, and E1 with it
  CHECK(std::abs(c3_fields({1e6, 3e5, cplx(0, 1e6)}, id).E1) < 1e-11);
}

TEST_CASE("Taub-NUT model near D1") {
  const auto id = SymCoupling::identity();
  std::vector<double> dev;
  for (double m2 : {5.0, 10.0, 20.0}) dev.push_back(taub_model({0.01, m2, cplx(0, 0.01)}, id, 1).dev_V);
  CHECK(dev[0] > dev[1]);
  CHECK(dev[1] > dev[2]);
  for (double m2 : {5.0, 10.0, 20.0}) CHECK(taub_model({0.01, m2, cplx(0, 0.01)}, id, 1).dev_V * m2 < 1.0);
  // W_Taub − A − a22 α1 stays bounded on the tube
  for (double r : {1e-1, 1e-2, 1e-4}) {
    const C3Point p{r * 0.6, 3.0, cplx(0, r * 0.8)};
    const TaubModel m = taub_model(p, kGeneric, 1);
    CHECK(std::abs(m.W - kGeneric.det() - kGeneric.a22 * alpha_value(1, p, kGeneric)) < 1.0);
  }
  CHECK(taub_model({3.0, 0.01, cplx(0.01, 0)}, kGeneric, 2).dev_W < 1.0);
  CHECK(taub_model({-3.0, -3.01, cplx(0.01, 0)}, kGeneric, 3).dev_W < 1.0);
}

TEST_CASE("beta integrals") {
  for (const cplx eta : {cplx(1, 0), cplx(0, 2)}) {
    for (const auto& m : {std::pair{0.3, -0.4}, std::pair{1.2, 0.7}, std::pair{-0.5, -1.5}}) {
      const C3Point p{m.first, m.second, eta};
      const cplx s = beta(p, kGeneric, 1).value + beta(p, kGeneric, 2).value + beta(p, kGeneric, 0).value;
      CHECK(std::abs(s - 1.0 / eta) < 1e-3);
      for (int i = 0; i < 3; ++i)
        CHECK(std::abs(beta(p, kGeneric, i, 0).value - beta(p, kGeneric, i, 1).value) < 1e-8);
    }
  }
  const C3Point p{0.4, 0.9, cplx(0.3, -0.6)};
  const cplx fd =
      fd_derivative<cplx>([&](double t) { return beta({t, p.mu2, p.eta}, kGeneric, 1).value; }, p.mu1, 1e-3);
  const AlphaTriple t = alpha(p, kGeneric);
  CHECK(std::abs(fd - 2.0 * d_eta(t.jet[0] + t.jet[2])) < 1e-4);
}

TEST_CASE("moduli of the holomorphic functions") {
  const SymCoupling& a = kGeneric;
  const C3Point anchor{0.2, 0.1, cplx(0, 0.6)};
  const double z0 = anchor_log(anchor);
  auto path_to = [&](const C3Point& q) {
    return polyline({vec(anchor), vec({q.mu1, q.mu2, anchor.eta}), vec(q)});
  };
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2, 2), v(0.3, 1.5);
  double lo = 1e300, hi = -1e300;
  for (int k = 0; k < 5; ++k) {
    const C3Point q{u(rng), u(rng), cplx(u(rng), v(rng))};
    const Path path = path_to(q);
    double s = -std::log(std::abs(q.eta));
    for (int i = 0; i < 3; ++i) s += logmod_z(path, a, i, z0).value;
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  CHECK(hi - lo <= 1e-3);
  CHECK(std::abs(hi) <= 1e-3);

  // near D1, the log|z1| asymptote along a transverse arc at μ2 = 2
  const double rho = 0.01;
  std::vector<double> rem;
  const C3Point start{rho, 2.0, cplx(0, 0)};
  const double arc0 = 0.3;
  const C3Point first{rho * std::cos(arc0), 2.0, cplx(0, rho * std::sin(arc0))};
  const double l0 = logmod_z(polyline({vec(anchor), vec({first.mu1, first.mu2, anchor.eta}), vec(first)}), a, 1, z0).value;
  for (double th = arc0; th <= kPi - arc0 + 1e-12; th += (kPi - 2 * arc0) / 4) {
    const C3Point q{rho * std::cos(th), 2.0, cplx(0, rho * std::sin(th))};
    Path arc;
    arc.position = [&](double t) { return vec({rho * std::cos(t), 2.0, cplx(0, rho * std::sin(t))}); };
    arc.velocity = [&](double t) { return (Vec(4) << -rho * std::sin(t), 0, 0, rho * std::cos(t)).finished(); };
    arc.breaks = {arc0, th};
    const double lz = th == arc0 ? l0 : logmod_z(arc, a, 1, l0).value;
    const double e2 = std::norm(q.eta);
    const double m = std::log(q.mu1 / std::sqrt(a.a22) + std::sqrt((q.mu1 * q.mu1 + a.a22 * e2) / a.a22));
    rem.push_back(lz - 0.5 * m - (a.a11 * q.mu1 + a.a12 * q.mu2));
  }
  CHECK(*std::max_element(rem.begin(), rem.end()) - *std::min_element(rem.begin(), rem.end()) <= 1e-2);
  (void)start;

  // vanishing along D1
  double prev = 1e300;
  const C3Point base{0.0, 2.0, cplx(0, 0.5)};
  const double lb = logmod_z(path_to(base), a, 1, z0).value;
  for (double eps : {0.1, 0.01, 0.001, 1e-4}) {
    const double l = logmod_z(polyline({vec(base), vec({0.0, 2.0, cplx(0, eps)})}), a, 1, lb).value;
    CHECK(l < prev);
    prev = l;
  }
  CHECK(prev < lb - 1.5);
}

TEST_CASE("special Lagrangian coordinates") {
  const auto c = sl_fibration({0.5, -1.0, cplx(2, 3)});
  CHECK(c[0] == 0.5);
  CHECK(c[1] == -1.0);
  CHECK(c[2] == 3.0);
}
