#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ghlab/numverify.hpp"

using namespace ghlab;

namespace {
Vec unit(int n, int k) {
  Vec v = Vec::Zero(n);
  v(k) = 1.0;
  return v;
}
}  // namespace

TEST_CASE("fd laplacian of quadratic and harmonic kernels") {
  const Mat I4 = Mat::Identity(4, 4);
  auto quad = [](const Vec& x) { return x.squaredNorm(); };
  Vec x(4);
  x << 0.3, -0.2, 0.5, 0.1;
  CHECK(std::abs(fd_laplacian(quad, x, I4, 1e-2).value - 8.0) < 1e-8);

  Vec u4 = Vec::Ones(4) / 2.0;
  auto k4 = [](const Vec& y) { return 1.0 / y.squaredNorm(); };
  CHECK(std::abs(fd_laplacian(k4, u4, I4, 1e-3).value) < 1e-6);

  Vec u5 = Vec::Ones(5) / std::sqrt(5.0);
  auto k5 = [](const Vec& y) { return std::pow(y.norm(), -3); };
  CHECK(std::abs(fd_laplacian(k5, u5, Mat::Identity(5, 5), 1e-3).value) < 1e-6);
}

TEST_CASE("fd laplacian respects a non-diagonal metric") {
  Mat G(2, 2);
  G << 2.0, 0.5, 0.5, 1.0;
  auto f = [](const Vec& y) { return y(0) * y(0) + 3.0 * y(0) * y(1); };
  // Σ G_ij ∂_i∂_j f = 2·2 + 2·0.5·3
  CHECK(fd_laplacian(f, Vec::Zero(2), G, 1e-2).value == doctest::Approx(7.0).epsilon(1e-9));
}

TEST_CASE("fundamental solution fluxes are normalized") {
  auto g4 = [](const Vec& y) { return Vec(y * (1.0 / (2.0 * kPi * kPi * std::pow(y.squaredNorm(), 2)))); };
  for (double r : {0.5, 1.7}) {
    Certified c = sphere_flux(g4, Vec::Zero(4), r, Mat::Identity(4, 4));
    CHECK(std::abs(c.value - 1.0) < 1e-4);
  }
  auto g5 = [](const Vec& y) { return Vec(y * (3.0 / (8.0 * kPi * kPi * std::pow(y.norm(), 5)))); };
  Certified c5 = sphere_flux(g5, Vec::Zero(5), 1.0, Mat::Identity(5, 5), 1e-6);
  CHECK(std::abs(c5.value - 1.0) < 1e-4);
  // Off-centre sphere not containing the pole.
  Certified off = sphere_flux(g4, 3.0 * unit(4, 0), 1.0, Mat::Identity(4, 4), 1e-6);
  CHECK(std::abs(off.value) < 1e-6);
}

TEST_CASE("tube flux counts the enclosed line density") {
  // Potential of a uniform line along e_3 in R^3: grad = −ρ̂/(2π ρ).
  auto g = [](const Vec& y) {
    Vec r = y;
    r(2) = 0.0;
    return Vec(-r / (2.0 * kPi * r.squaredNorm()));
  };
  Certified c = tube_flux(g, Vec::Zero(3), 2.0 * unit(3, 2), 0.3, Mat::Identity(3, 3));
  CHECK(std::abs(c.value + 2.0) < 1e-6);
}

TEST_CASE("fourier modes") {
  auto f = [](double x) { return 0.7 * std::cos(2.0 * kPi * x) + 0.2; };
  auto h = fourier_modes(f, 32, 4);
  CHECK(std::abs(std::abs(h[5]) - 0.35) < 1e-14);
  CHECK(std::abs(h[4] - 0.2) < 1e-14);
  auto g = [](double x) { return std::exp(std::sin(2.0 * kPi * x)); };
  auto hg = fourier_modes(g, 64, 32);
  double s = 0.0, m = 0.0;
  for (auto c : hg) s += std::norm(c);
  for (int j = 0; j < 64; ++j) m += std::pow(g(j / 64.0), 2) / 64.0;
  // With 64 samples and modes −32..32, mode ±32 alias to one bin.
  s -= std::norm(hg.front());
  CHECK(std::abs(s - m) < 1e-10);
}

TEST_CASE("certified one dimensional lattice sums") {
  auto h = [](double t) { return 2.0 / (t * t + 1.0); };
  Estimate<double> e = symmetric_sum_1d<double>(h, 1.0, TruncSpec{});
  CHECK(std::abs(e.value - kPi / std::tanh(kPi)) < 1e-6);
  CHECK(e.error < 1e-8);

  auto h2 = [](double t) { return 1.0 / (2.0 * (t + 0.5)) + 1.0 / (2.0 * (t - 0.5)) - 1.0 / t; };
  Estimate<double> e2 = symmetric_sum_1d<double>(h2, 0.0, TruncSpec{});
  CHECK(std::abs(e2.value - (2.0 * std::log(2.0) - 1.0)) < 1e-8);
}

TEST_CASE("two dimensional lattice sum is cutoff independent") {
  auto F = [](double a, double b) { return std::pow((a + 0.3) * (a + 0.3) + b * b + 1.0, -1.5); };
  Certified s1 = lattice_sum_2d(F, {24, 1e-6});
  Certified s2 = lattice_sum_2d(F, {48, 1e-6});
  CHECK(std::abs(s1.value - s2.value) < s1.error + s2.error + 1e-9);
}

TEST_CASE("log regularized limit") {
  auto F = [](double L) { return 3.0 + 2.0 * std::log(L) + 5.0 / L; };
  CHECK(std::abs(log_regularized_limit(F, 2.0, 100.0).value - 3.0) < 1e-6);
  auto G = [](double) { return -1.0; };
  CHECK(log_regularized_limit(G, 0.0, 10.0).value == doctest::Approx(-1.0));
  CHECK_THROWS_AS(log_regularized_limit(F, 1.0, 100.0), NumericalFailure);
}

TEST_CASE("path integrals") {
  std::function<double(const Vec&, const Vec&)> dtheta = [](const Vec& x, const Vec& v) {
    return (x(0) * v(1) - x(1) * v(0)) / x.squaredNorm();
  };
  Path c = circle(Vec::Zero(2), unit(2, 0), unit(2, 1), 0.8);
  CHECK(std::abs(path_integral(dtheta, c).value - 2.0 * kPi) < 1e-8);

  std::function<double(const Vec&, const Vec&)> exact = [](const Vec& x, const Vec& v) {
    return 2.0 * x(0) * x(1) * v(0) + x(0) * x(0) * v(1);
  };
  Vec a(2), b(2), d(2);
  a << 0, 0;
  b << 1, 0.5;
  d << -0.4, 2;
  CHECK(std::abs(path_integral(exact, polyline({a, b, d, a})).value) < 1e-8);

  // Reparametrization: the square loop around the origin traversed as polyline
  Vec p1(2), p2(2), p3(2), p4(2);
  p1 << 1, -1;
  p2 << 1, 1;
  p3 << -1, 1;
  p4 << -1, -1;
  const double sq = path_integral(dtheta, polyline({p1, p2, p3, p4, p1})).value;
  CHECK(std::abs(sq - 2.0 * kPi) < 1e-10);
}

TEST_CASE("adaptive quadrature handles complex integrands") {
  auto f = [](double t) { return std::exp(cplx(0.0, t)); };
  Estimate<cplx> e = adaptive_gk<cplx>(f, 0.0, kPi, 1e-13);
  CHECK(std::abs(e.value - cplx(0.0, 2.0)) < 1e-12);
  auto g = [](double t) { return 1.0 / (1.0 + t * t); };
  CHECK(std::abs(integrate_to_infinity<double>(g, 0.0, 1.0, 1e-12).value - kPi / 2) < 1e-10);
}
