#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ghlab/negative_vertex.hpp"

#include <cmath>
#include <random>

using namespace ghlab;
using namespace ghlab::neg;

namespace {

const HermCoupling kId = HermCoupling::identity();
const HermCoupling kReal{2.0, 1.5, cplx(0.3, 0.0)};
const HermCoupling kHerm{2.0, 1.5, cplx(0.3, 0.4)};

Vec v5(const NegVertexPoint& p) {
  return (Vec(5) << p.eta1.real(), p.eta1.imag(), p.eta2.real(), p.eta2.imag(), p.mu).finished();
}
NegVertexPoint from5(const Vec& v) { return {cplx(v(0), v(1)), cplx(v(2), v(3)), v(4)}; }

// Second order Richardson of the plain square truncation (error ~ 1/N).
double gamma_oracle(const NegVertexPoint& p, const HermCoupling& a) {
  const double s1 = gamma_lattice_sum(p, a, 32).value, s2 = gamma_lattice_sum(p, a, 64).value,
               s3 = gamma_lattice_sum(p, a, 128).value;
  const double r1 = 2 * s2 - s1, r2 = 2 * s3 - s2;
  return (4 * r2 - r1) / 3;
}

double cell_average(const std::function<double(double, double)>& f, int n) {
  double s = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += f((i + 0.5) / n, (j + 0.5) / n);
  return s / (n * n);
}

NegVertexPoint on_S(cplx eta2, double mu = 0.0) {
  return {std::log(1.0 - z_of(eta2)) / cplx(0.0, 2.0 * kPi), eta2, mu};
}

HermCoupling real_part(const HermCoupling& a) { return {a.a11, a.a22, cplx(a.a12.real(), 0.0)}; }

}  // namespace

TEST_CASE("Ewald kernel against the truncated lattice sum") {
  for (const HermCoupling& a : {kId, kHerm})
    for (const NegVertexPoint& p : {NegVertexPoint{cplx(0.2, 0.3), cplx(0.7, -0.2), 0.15},
                                    NegVertexPoint{cplx(-0.4, 0.05), cplx(0.1, 0.6), 0.8}})
      CHECK(gamma(p, a) == doctest::Approx(gamma_oracle(p, a)).epsilon(1e-6));
}

TEST_CASE("truncated lattice sum reports its tail") {
  const NegVertexPoint p{cplx(0.2, 0.3), cplx(0.7, -0.2), 0.15};
  const Estimate<double> e = gamma_lattice_sum(p, kId, 20);
  CHECK(std::abs(e.value - gamma(p, kId)) <= e.error);
}

TEST_CASE("five dimensional flux of the central term") {
  GradientField df = [](const Vec& x) -> Vec { return x / (8 * kPi * kPi) * 3.0 / std::pow(x.norm(), 5); };
  const Certified f = sphere_flux(df, Vec::Zero(5), 0.1, metric_neg(kId));
  CHECK(f.value == doctest::Approx(1.0).epsilon(1e-2));
  // the same through the full kernel gradient
  const LatticeKernel K(kId);
  GradientField dg = [&](const Vec& x) -> Vec {
    const auto g = K.gamma_grad({x(0), x(1), x(2), x(3), x(4)});
    return (Vec(5) << g[1], g[2], g[3], g[4], g[5]).finished();
  };
  CHECK(sphere_flux(dg, Vec::Zero(5), 0.1, metric_neg(kId), 1e-6).value == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("far field of the kernel") {
  const double g = gamma({cplx(0, 3), cplx(0, 0), 0.0}, kId);
  CHECK(std::abs(g + 1.0 / (4 * kPi * 3)) <= 2.0 / 27);
}

TEST_CASE("cell average of the kernel") {
  for (const HermCoupling& a : {kId, kHerm}) {
    const LatticeKernel K(a);
    for (const auto& y : {std::array<double, 3>{0, 0, 1}, {0.4, -0.3, 0.6}, {1.2, 0.5, 0.2}}) {
      auto f = [&](double x1, double x2) { return K.gamma({x1, y[0], x2, y[1], y[2]}); };
      const double expect = -1.0 / (4 * kPi * std::sqrt(a.big_det()) * varrho(y[0], y[1], y[2], a));
      CHECK(std::abs(cell_average(f, 48) - expect) <= 1e-8);
      CHECK(K.gamma_average(y[0], y[1], y[2]) == doctest::Approx(expect).epsilon(1e-14));
    }
  }
  CHECK(LatticeKernel(kId).gamma_average(0, 0, 1) == doctest::Approx(-1 / (4 * kPi)));
}

TEST_CASE("kernel across the Fourier switch") {
  const LatticeKernel K(kHerm);
  double lo = 0.05, hi = 3.0;
  // bracket where pure Fourier takes over along μ and compare both sides
  for (double mu = lo; mu < hi; mu *= 1.02) {
    const double a = K.gamma({0.3, 0.1, 0.2, -0.1, mu}), b = K.gamma({0.3, 0.1, 0.2, -0.1, mu * 1.0001});
    CHECK(std::abs(a - b) <= 1e-4 * std::abs(a) + 1e-12);
  }
  CHECK(K.gamma({0.3, 0.1, 0.2, -0.1, 1.1}) == doctest::Approx(gamma_oracle({cplx(0.3, 0.1), cplx(0.2, -0.1), 1.1}, kHerm)).epsilon(1e-6));
}

TEST_CASE("kernel gradient and harmonicity") {
  const LatticeKernel K(kHerm);
  const Mat G = metric_neg(kHerm).inverse();
  ScalarField f = [&](const Vec& v) { return K.gamma({v(0), v(1), v(2), v(3), v(4)}); };
  for (const Vec& x : {(Vec(5) << 0.3, 0.1, 0.2, -0.1, 0.4).finished(), (Vec(5) << -0.2, 0.7, 0.45, 0.3, -0.9).finished()}) {
    const auto g = K.gamma_grad({x(0), x(1), x(2), x(3), x(4)});
    const Vec fd = fd_gradient(f, x, 1e-3);
    for (int k = 0; k < 5; ++k) CHECK(g[k + 1] == doctest::Approx(fd(k)).epsilon(1e-7));
    CHECK(fd_laplacian(f, x, G, 1e-2).relative() <= 1e-4);
  }
}

TEST_CASE("gamma_p3 series and averages") {
  for (const HermCoupling& a : {kReal, kHerm}) {
    const NegVertexPoint p{cplx(0.2, 0.3), cplx(0.7, -0.2), 0.15};
    const auto v = gamma_p3(p, a);
    // pairing n, −n leaves an error ~ 1/N²
    const auto l1 = gamma_p3_lattice_sum(p, a, 48), l2 = gamma_p3_lattice_sum(p, a, 96);
    for (int q = 0; q < 2; ++q) {
      const cplx rich = (4.0 * l2.value[q] - l1.value[q]) / 3.0;
      CHECK(std::abs(v[q] - rich) <= 2e-8);
    }
    const LatticeKernel K(a);
    for (double mu : {0.3, -0.4}) {
      std::array<cplx, 2> s{};
      const int n = 48;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const auto g = K.gamma_p3({(i + 0.5) / n, 0.7, (j + 0.5) / n, -0.5, mu});
          s[0] += g[0];
          s[1] += g[1];
        }
      const auto av = K.gamma_p3_average(0.7, -0.5, mu);
      for (int q = 0; q < 2; ++q) CHECK(std::abs(s[q] / double(n * n) - av[q]) <= 1e-9);
    }
  }
  // γ_{p4}(η, μ) = γ_{p3}(η, −μ)
  const NegVertexPoint p{cplx(0.2, 0.3), cplx(0.7, -0.2), 0.15};
  NegVertexPoint m = p;
  m.mu = -p.mu;
  CHECK(std::abs(gamma_p4(p, kHerm)[0] - gamma_p3(m, kHerm)[0]) <= 1e-15);
}

TEST_CASE("differential identity for gamma_p3") {
  // ∂γ_{p3}/∂μ = 2∂γ/∂η_p = (∂_x − i∂_y)γ
  const LatticeKernel K(kHerm);
  const Offset d{0.3, 0.1, 0.2, -0.1, 0.4};
  const double h = 1e-4;
  Offset up = d, dn = d;
  up.mu += h;
  dn.mu -= h;
  const auto dmu = (K.gamma_p3(up)[0] - K.gamma_p3(dn)[0]) / (2 * h);
  const auto g = K.gamma_grad(d);
  CHECK(std::abs(dmu - cplx(g[1], -g[2])) <= 1e-6);
}

TEST_CASE("leading asymptotes gammabarbar") {
  CHECK(gammabarbar(0, 0, 1, kId)[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(gammabarbar(0.5, 2, 0, kId)[0] == doctest::Approx(-0.5 * std::log(std::sqrt(4.25) - 2)).epsilon(1e-12));
  CHECK(gammabarbar(0.5, 2, 0, kId)[0] == doctest::Approx(1.39393).epsilon(1e-5));
  CHECK_THROWS_AS(gammabarbar(0, 2, 0, kId), std::domain_error);

  const Mat G = metric_neg_prime(kHerm).inverse();
  for (int e = 0; e < 3; ++e) {
    ScalarField f = [&](const Vec& v) { return gammabarbar(v(0), v(1), v(2), kHerm)[e]; };
    CHECK(fd_laplacian(f, (Vec(3) << 0.7, -0.4, 0.5).finished(), G, 1e-2).relative() <= 1e-4);
  }
}

TEST_CASE("I integrals") {
  const PIntegralPack P = p_integrals(1, 0, 1, kId);
  CHECK(std::abs(P.Ip3[0] - cplx(0, 1 / (4 * kPi * (2 + std::sqrt(2.0))))) <= 1e-12);
  CHECK(std::abs(P.Ip3[0] - cplx(0, 0.0233078)) <= 1e-7);
  CHECK(p_integrals(1, 0, 0.3, kId).I03 == doctest::Approx(kPi));
  const PIntegralPack Q = p_integrals_quadrature(1, 0, 1, kId);
  CHECK(std::abs(Q.Ip3[0] - P.Ip3[0]) <= 1e-4);
  CHECK(std::abs(p_integrals_quadrature(1, 0, 0.3, kId).I03 - kPi) <= 1e-5);

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.5, 1.5), m(-1, 1);
  for (int k = 0; k < 4; ++k) {
    const double y1 = u(rng), y2 = u(rng), mu = m(rng);
    const PIntegralPack c = p_integrals(y1, y2, mu, kReal), q = p_integrals_quadrature(y1, y2, mu, kReal);
    CHECK(std::abs(c.I03 - q.I03) <= 1e-3);
    for (int p = 0; p < 2; ++p) {
      CHECK(std::abs(c.Ip3[p] - q.Ip3[p]) <= 1e-3);
      CHECK(std::abs(c.Ip4[p] - q.Ip4[p]) <= 1e-3);
    }
    const PIntegralPack r = p_integrals(y1, y2, -mu, kReal);
    CHECK(std::abs(r.Ip4[0] - c.Ip3[0]) <= 1e-15);
  }
}

TEST_CASE("constants K_p") {
  const auto K = K_p(kId);
  CHECK(std::abs(K[0] - cplx(0, -3 * kPi / 4)) <= 1e-12);
  CHECK(std::abs(K[1] - cplx(0, -3 * kPi / 4)) <= 1e-12);
  for (const cplx& k : K_p(kReal)) CHECK(k.real() == 0.0);
}

TEST_CASE("beta sum against the surface integral") {
  for (const NegVertexPoint& p : {NegVertexPoint{cplx(0.3, 0.2), cplx(0.1, 0.4), 0.5},
                                  NegVertexPoint{cplx(0.1, -0.3), cplx(0.6, 0.2), 1.0}}) {
    const SMesh mesh(kReal, {p});
    const auto b = mesh.beta_p34(p);
    const auto closed = beta_p_sum(p, kReal);
    CHECK(std::abs(b[0] + b[2] - closed[0]) <= 1e-2);
    CHECK(std::abs(b[1] + b[3] - closed[1]) <= 1e-2);
  }
  // large diagonal: (β13 + β14)(ib, ib) → K_1
  const auto K = K_p(kReal);
  double prev = 1e300;
  for (double b : {2.0, 3.0}) {
    const NegVertexPoint p{cplx(0, b), cplx(0, b), 0.2};
    const auto s = SMesh(kReal, {p}).beta_p34(p);
    const double d = std::abs(s[0] + s[2] - K[0]);
    CHECK(d < prev);
    CHECK(d <= 10 * std::exp(-2 * kPi * b));
    prev = d;
  }
}

TEST_CASE("beta sum constant for a Hermitian coupling") {
  // the regularized integral sees only Re a12
  const auto K = K_p(real_part(kHerm));
  for (const NegVertexPoint& p : {NegVertexPoint{cplx(0.3, 0.2), cplx(0.1, 0.4), 0.5},
                                  NegVertexPoint{cplx(0, 2), cplx(0, 2), 0.3}}) {
    const auto b = SMesh(kHerm, {p}).beta_p34(p);
    const auto closed = beta_p_sum(p, kHerm);
    const auto Kd = K_p(kHerm);
    for (int q = 0; q < 2; ++q) {
      const cplx c = b[q] + b[q + 2] - (closed[q] - Kd[q]);
      CHECK(std::abs(c - K[q]) <= 1e-4);
      CHECK(std::abs(c - Kd[q]) >= 0.1);
    }
  }
}

TEST_CASE("mesh convergence of gamma_i") {
  const NegVertexPoint p{cplx(0.3, 0.2), cplx(0.1, 0.4), 0.5};
  SQuadOptions fine;
  fine.order = 10;
  fine.refine = 0.25;
  const auto g0 = SMesh(kHerm, {p}).gamma_i(p), g1 = SMesh(kHerm, {p}, fine).gamma_i(p);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(g0[i] - g1[i]) <= 1e-7);
}

TEST_CASE("regularized limit against the cutoff ladder") {
  const NegVertexPoint p{cplx(0.3, 0.2), cplx(0.1, 0.4), 0.5};
  const SMesh mesh(kHerm, {p});
  const auto reg = mesh.gamma_i(p);
  for (int i = 0; i < 3; ++i) {
    // the truncated integrals already carry −c log 2Λ
    const Certified lim = log_regularized_limit([&](double L) { return mesh.gamma_i(p, L)[i]; }, 0.0, 40.0, 1e-4);
    CHECK(lim.value == doctest::Approx(reg[i]).epsilon(1e-4));
  }
}

TEST_CASE("averaged gamma_i and the leading asymptotes") {
  const SMesh mesh(kHerm, {{cplx(0, 1.0), cplx(0, 1.0), 1.0}});
  // γ̄4 vanishes by the reflection symmetry of S
  CHECK(std::abs(mesh.gamma_bar_i(0.4, -0.3, 0.6)[3]) <= 1e-10);
  double prev = 0;
  for (double s : {2.0, 4.0, 8.0}) {
    const double y1 = 0.3 * s, y2 = 0.2 * s, mu = 0.5 * s;
    const auto gb = mesh.gamma_bar_i(y1, y2, mu);
    const auto gbb = gammabarbar(y1, y2, mu, kHerm);
    double d = 0;
    for (int i = 0; i < 3; ++i) d = std::max(d, std::abs(gb[i] - gbb[i]));
    const double rho = varrho(y1, y2, mu, kHerm);
    if (prev > 0) CHECK(d * rho <= 1.5 * prev);
    prev = d * rho;
  }
}

TEST_CASE("cell average of gamma_1 matches the averaged integral") {
  const NegVertexPoint c{cplx(0, 0.4), cplx(0, -0.3), 0.6};
  const SMesh mesh(kHerm, {c});
  auto f = [&](double x1, double x2) { return mesh.gamma_i({cplx(x1, 0.4), cplx(x2, -0.3), 0.6})[0]; };
  CHECK(cell_average(f, 12) == doctest::Approx(mesh.gamma_bar_i(0.4, -0.3, 0.6)[0]).epsilon(1e-6));
}

TEST_CASE("fields: hermiticity, constant limit and positivity") {
  const NegVertexPoint p{cplx(0.3, 0.2), cplx(0.1, 0.4), 0.5};
  const GammaFields F = neg_fields(p, kHerm);
  CHECK(std::abs(F.w(1, 0) - std::conj(F.w(0, 1))) <= 1e-12);
  CHECK(F.w(0, 0).imag() == 0.0);
  const double v = kHerm.det() * (kHerm.inverse_entry(0, 0) * F.w(0, 0) + kHerm.inverse_entry(0, 1) * F.w(0, 1) +
                                  kHerm.inverse_entry(1, 0) * F.w(1, 0) + kHerm.inverse_entry(1, 1) * F.w(1, 1)).real();
  CHECK(F.v == doctest::Approx(v).epsilon(1e-12));
  const GammaFields Z = fields_from({0, 0, 0, 0}, 0.0, kHerm);
  CHECK(Z.E1 == 0.0);
  CHECK(Z.positive);
  // E1 from det(a + w)/(A + v) − 1
  const Eigen::Matrix2cd aw = (Eigen::Matrix2cd() << kHerm.a11, kHerm.a12, kHerm.a21(), kHerm.a22).finished() + F.w;
  CHECK(F.E1 == doctest::Approx(aw.determinant().real() / (kHerm.det() + F.v) - 1).epsilon(1e-10));
}

TEST_CASE("near S leading term") {
  for (const HermCoupling& a : {kId, kHerm}) {
    const double A = a.det();
    const NegVertexPoint s = on_S(cplx(0.3, 0.1));
    const cplx z1 = z_of(s.eta1), z2 = z_of(s.eta2);
    const double den = (a.inverse_entry(0, 0) * std::norm(z1) + a.inverse_entry(1, 1) * std::norm(z2) +
                        2.0 * (a.inverse_entry(0, 1) * z1 * std::conj(z2)))
                           .real();
    double prev = 1e300;
    for (double f : {0.2, 0.1, 0.05}) {
      const double R = f * std::pow(A, 0.25);
      NegVertexPoint p = s;
      p.mu = R / std::sqrt(A);
      const double lead = std::norm(z1) / (2 * R * std::sqrt(A) * den);
      const double rel = std::abs(neg_fields(p, a).w(0, 0).real() - lead) / lead;
      CHECK(rel <= 0.2);
      CHECK(rel < prev);
      prev = rel;
    }
  }
}

TEST_CASE("integrability and harmonicity of the fields") {
  const NegVertexPoint p{cplx(0.3, 0.6), cplx(0.1, 0.5), 0.7};
  const SMesh mesh(kHerm, {p});
  auto w = [&](const Vec& v, int r, int c) { return fields_from(mesh.gamma_i(from5(v)), 0.0, kHerm).w(r, c); };
  const Vec x = v5(p);
  const double h = 1e-3;
  auto d_eta = [&](int r, int c, int k) {
    // ∂/∂η_k = ½(∂_x − i∂_y)
    Vec e = Vec::Zero(5), f = Vec::Zero(5);
    e(2 * k) = h;
    f(2 * k + 1) = h;
    return 0.5 * ((w(x + e, r, c) - w(x - e, r, c)) - cplx(0, 1) * (w(x + f, r, c) - w(x - f, r, c))) / (2 * h);
  };
  // ∂w^{1 1̄}/∂η_2 = ∂w^{2 1̄}/∂η_1
  CHECK(std::abs(d_eta(0, 0, 1) - d_eta(1, 0, 0)) <= 1e-3);
  CHECK(std::abs(d_eta(0, 1, 1) - d_eta(1, 1, 0)) <= 1e-3);

  ScalarField g1 = [&](const Vec& v) { return mesh.gamma_i(from5(v))[0]; };
  CHECK(std::abs(fd_laplacian(g1, x, metric_neg(kHerm).inverse(), 2e-2).value) <= 1e-3);
}

TEST_CASE("v gradient") {
  const NegVertexPoint p{cplx(0.3, 0.2), cplx(0.1, 0.4), 0.5};
  const SMesh mesh(kHerm, {p});
  ScalarField f = [&](const Vec& v) { return mesh.v_grad(from5(v))[0]; };
  const Vec fd = fd_gradient(f, v5(p), 1e-3);
  const auto g = mesh.v_grad(p);
  for (int k = 0; k < 5; ++k) CHECK(g[k + 1] == doctest::Approx(fd(k)).epsilon(1e-6));
  // v from the fields differs from the Green integral by a constant
  const NegVertexPoint q{cplx(0.5, -0.1), cplx(0.7, 0.3), 0.9};
  const SMesh both(kHerm, {p, q});
  CHECK(neg_fields(p, both).v - neg_fields(q, both).v == doctest::Approx(both.v_grad(p)[0] - both.v_grad(q)[0]).epsilon(1e-7));
}

TEST_CASE("flux of grad v around S") {
  SQuadOptions opt;
  opt.refine = 1.5;
  const FluxResult f = flux_S(kId, {0.35, 0.65, -0.15, 0.15}, 0.08, opt);
  CHECK(f.ratio() == doctest::Approx(1.0).epsilon(2e-2));
  CHECK(f.error <= 2e-2 * std::abs(f.expected));
  SPatch away{0.35, 0.65, -0.15, 0.15, cplx(0, 0.3), 0.0, 0.0};
  CHECK(std::abs(flux_S(kId, away, 0.08, opt).flux) <= 2e-2 * std::abs(f.expected));
}

TEST_CASE("winding of f_S") {
  CHECK(winding_f_S(on_S(cplx(0.3, 0.1)), 0.05) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(winding_f_S({cplx(0.3, 0.5), cplx(0.1, 0.2), 0.0}, 0.05)) <= 1e-10);
}

TEST_CASE("symplectic area") {
  const double A = HermCoupling{1.5, 1.2, cplx(0, 0.3)}.det();
  const double mu = 5 * std::pow(A, -0.25);
  const SymplecticArea z = symplectic_area({1.5, 1.2, cplx(0.2, 0)}, 0.3, -0.2, mu);
  CHECK(std::abs(z.value) <= 1e-3);
  const SymplecticArea s = symplectic_area({1.5, 1.2, cplx(0, 0.3)}, 0.3, -0.2, mu);
  CHECK(s.decayed);
  CHECK(s.value == doctest::Approx(-0.3).epsilon(1e-2));
  CHECK(std::abs(symplectic_area({1.5, 1.2, cplx(0, 0.3)}, 0.3, -0.2, 1.6 * mu).value - s.value) <= 1e-3);
  CHECK_FALSE(symplectic_area({1.5, 1.2, cplx(0, 0.3)}, 0.3, -0.2, 0.05).decayed);
}

TEST_CASE("moduli of z3 and z4") {
  const HermCoupling a{1.5, 1.2, cplx(0.2, 0.1)};
  const std::vector<NegVertexPoint> pts{{cplx(0.2, 0.1), cplx(0.4, 0.3), 0.4},
                                        {cplx(0.5, 0.6), cplx(0.1, -0.3), 0.7},
                                        {cplx(0.8, -0.4), cplx(0.3, 0.5), 0.3}};
  const SMesh mesh(a, pts);
  for (std::size_t k = 1; k < pts.size(); ++k) {
    const Vec v0 = v5(pts[0]), v1 = v5(pts[k]);
    Vec mid = 0.5 * (v0 + v1);
    mid(4) += 1.0;
    const LogModZ34 L = logmod_z34(polyline({v0, mid, v1}), mesh);
    CHECK(std::abs(L.constant()) <= 5e-2);
    CHECK(L.error <= 1e-2);
  }
  // log|z3| increases with μ
  const NegVertexPoint p{cplx(0.3, 0.1), cplx(0.2, 0.15), 0.0};
  for (double mu : {1.0, 0.5, 0.25}) CHECK(logmod_z3_mu(p, mu / 2, mu, mesh) > 0);
}

TEST_CASE("Fourier decay of gamma_1") {
  for (const HermCoupling& a : {kId, HermCoupling{1.3, 1.0, cplx(0.2, 0.1)}}) {
    REQUIRE(k_mode(1, 0, a) == doctest::Approx(kappa_a(a)));
    const SMesh mesh(a, {{cplx(0, 0), cplx(0, 0), 0.3}});
    std::vector<double> d, lg;
    for (double s : {0.6, 0.8, 1.0, 1.2, 1.4}) {
      const double mu = s / std::sqrt(a.det());
      auto f = [&](double x1, double x2) { return mesh.gamma_i({cplx(x1, 0), cplx(x2, 0), mu})[0]; };
      const std::vector<cplx> m = fourier_modes_2d(f, 8, 1);
      d.push_back(distance_to_amoeba(0, 0, mu, a));
      lg.push_back(std::log(std::abs(m[(1 + 1) * 3 + 1])));
    }
    CHECK(-linear_fit(d, lg).slope == doctest::Approx(kappa_a(a)).epsilon(0.15));
  }
}

TEST_CASE("A scaling of the volume error") {
  const HermCoupling a{3, 2.5, cplx(0.4, 0.2)};
  const double s = std::sqrt(2.0);
  const HermCoupling b = a.scaled(s);
  for (const NegVertexPoint& p : {NegVertexPoint{cplx(0.3, 0.1), cplx(0.6, -0.05), 0.3},
                                  NegVertexPoint{cplx(0.5, -0.1), cplx(0.2, 0.2), 0.5}}) {
    NegVertexPoint q = p;
    q.mu = p.mu / std::sqrt(s);
    const double wa = std::sqrt(a.det()) * scales(p, a).ell * std::abs(neg_fields(p, a).E1);
    const double wb = std::sqrt(b.det()) * scales(q, b).ell * std::abs(neg_fields(q, b).E1);
    CHECK(wb / wa == doctest::Approx(std::pow(2.0, -0.75)).epsilon(0.25));
  }
}

TEST_CASE("decay of gamma_4") {
  double C = 0;
  for (double rho : {3.0, 6.0}) {
    const NegVertexPoint p{cplx(0.3, 0.0), cplx(0.1, 0.0), rho / std::sqrt(kHerm.det())};
    const double g4 = std::abs(neg_fields(p, kHerm).g[3]);
    if (C == 0) C = g4 * rho;
    CHECK(g4 <= 1.01 * C / rho);
  }
}

TEST_CASE("Taub-NUT model coefficients") {
  const double A = 2.5;
  const GNutCoefficients c = gnut_model(0.0, 0.3, 1 / (2 * A), A);
  CHECK(c.radial == doctest::Approx(2 * A));
  CHECK(c.flat == A);
  const GNutCoefficients d = gnut_model(0.0, cplx(-4, 7), 1 / (2 * A), A);
  CHECK(d.radial == c.radial);
  CHECK(d.fibre == c.fibre);
}

TEST_CASE("points too close to S are rejected") {
  NegVertexPoint p = on_S(cplx(0.3, 0.1));
  p.mu = 1e-3;
  CHECK_THROWS_AS(SMesh(kId, {p}), NumericalFailure);
}
