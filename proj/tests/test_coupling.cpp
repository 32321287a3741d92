#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ghlab/coupling.hpp"

#include <random>

using namespace ghlab;

TEST_CASE("coupling validation and inverses") {
  CHECK_THROWS_AS(SymCoupling::make(1.0, 2.0, 1.0), InvalidCoupling);
  CHECK_THROWS_AS(HermCoupling::make(1.0, cplx(0.0, 1.5), 1.0), InvalidCoupling);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double a11 = 1.0 + u(rng) * 0.9, a22 = 1.0 + u(rng) * 0.9;
    const double a12 = u(rng) * 0.9 * std::sqrt(a11 * a22);
    const SymCoupling a = SymCoupling::make(a11, a12, a22);
    CHECK((a.matrix() * a.inverse() - Eigen::Matrix2d::Identity()).norm() < 1e-12);
    const HermCoupling h = HermCoupling::make(a11, cplx(a12, 0.3 * u(rng)) * 0.7, a22);
    for (int j = 0; j < 2; ++j)
      for (int p = 0; p < 2; ++p) {
        cplx s = 0.0;
        for (int q = 0; q < 2; ++q) s += h.entry(j, q) * h.inverse_entry(p, q);
        CHECK(std::abs(s - (j == p ? 1.0 : 0.0)) < 1e-12);
      }
    CHECK(h.big_det() >= h.det());
  }
}

TEST_CASE("distance to the trivalent graph") {
  const SymCoupling I = SymCoupling::identity();
  CHECK(trivalent_graph_distance(C3Point{0, 5, 0.0}, I) == doctest::Approx(0.0));
  CHECK(trivalent_graph_distance(C3Point{1, 5, 0.0}, I) == doctest::Approx(1.0));
  CHECK(trivalent_graph_distance(C3Point{-1, -1, 0.0}, I) == doctest::Approx(0.0));
  // periodic: η near the lattice point 2
  CHECK(trivalent_graph_distance(PosVertexPoint{0, 5, cplx(2.0, 0.0)}, I) == doctest::Approx(0.0));
  CHECK(trivalent_graph_distance(PosVertexPoint{0, 5, cplx(1.9, 0.0)}, I) == doctest::Approx(0.1));
}

TEST_CASE("scale covariance of A^{1/4}|mu|_a") {
  const SymCoupling a = SymCoupling::make(2.0, -0.4, 1.3);
  const C3Point p{0.7, -1.1, cplx(0.2, 0.5)};
  for (double L : {0.5, 3.0, 17.0}) {
    const SymCoupling b = a.scaled(L);
    const C3Point q{p.mu1 / L, p.mu2 / L, p.eta * std::pow(L, -1.5)};
    CHECK(std::pow(b.det(), 0.25) * norm_a(q, b) == doctest::Approx(std::pow(a.det(), 0.25) * norm_a(p, a)).epsilon(1e-14));
  }
}

TEST_CASE("surface S parametrization") {
  const HermCoupling I = HermCoupling::identity();
  SurfacePoint s = surface_S(-1.0, I);
  CHECK(s.point.eta2.real() == doctest::Approx(0.5));
  CHECK(std::abs(s.point.eta2.imag()) < 1e-15);
  CHECK(s.point.eta1.imag() == doctest::Approx(-std::log(2.0) / (2 * kPi)));
  // identity coupling: d𝒜 = (|z2/z1|^2 + 1) dx2 dy2
  CHECK(s.area_density == doctest::Approx(1.25));
  SurfacePoint h = surface_S(0.5, I);
  CHECK(h.point.eta1.imag() == doctest::Approx(0.110318).epsilon(1e-5));
  CHECK(h.point.eta2.imag() == doctest::Approx(std::log(2.0) / (2 * kPi)));
  CHECK_THROWS(surface_S(1.0, I));
  CHECK_THROWS(surface_S(0.0, I));
  std::mt19937 rng(3);
  std::normal_distribution<double> n(0.0, 2.0);
  for (int k = 0; k < 100; ++k) {
    const cplx z2(n(rng), n(rng));
    const SurfacePoint sp = surface_S(z2, I);
    CHECK(std::abs(f_S(sp.point)) < 1e-12 * (1.0 + std::abs(z2)));
  }
}

TEST_CASE("amoeba membership") {
  CHECK(amoeba_contains(0, 0).inside);
  CHECK(amoeba_contains(0, 0).slack == doctest::Approx(1.0));
  CHECK_FALSE(amoeba_contains(1, 1).inside);
  const double b = std::log(2.0) / (2 * kPi);
  CHECK(std::abs(amoeba_contains(b, b).slack) <= 1e-12);
}

TEST_CASE("distance to S and to the amoeba") {
  const HermCoupling I = HermCoupling::identity();
  const SurfacePoint sp = surface_S(cplx(-0.7, 0.4), I);
  CHECK(distance_to_S(sp.point, I) < 1e-6);
  NegVertexPoint up = sp.point;
  up.mu = 0.3;
  CHECK(distance_to_S(up, I) == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(distance_to_amoeba(0.0, 0.0, 0.5, I) == doctest::Approx(0.5));
  // (1,1) lies in the complement component containing the positive quadrant
  CHECK(distance_to_amoeba(1.0, 1.0, 0.0, I) > 0.5);
}

TEST_CASE("kappa_a") {
  CHECK(kappa_a(HermCoupling::identity()) == doctest::Approx(2 * kPi));
  const HermCoupling a = HermCoupling::make(2.0, cplx(0.5, 0.3), 1.0);
  double m = 1e9;
  for (int i = -3; i <= 3; ++i)
    for (int j = -3; j <= 3; ++j)
      if (i || j) m = std::min(m, k_mode(i, j, a));
  CHECK(kappa_a(a) == doctest::Approx(m));
}
