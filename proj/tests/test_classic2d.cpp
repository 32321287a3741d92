#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ghlab/classic2d.hpp"

#include <random>

using namespace ghlab;
using namespace ghlab::classic2d;

namespace {
// Direct partial sum with pairwise counterterms, as an oracle.
double ov_direct(double mu, cplx eta, double A, int N) {
  double s = A + 0.5 / std::sqrt(mu * mu + std::norm(eta));
  for (int n = N; n >= 1; --n)
    s += 0.5 / std::sqrt(mu * mu + std::norm(eta + double(n))) + 0.5 / std::sqrt(mu * mu + std::norm(eta - double(n))) -
         1.0 / n;
  return s;
}
}  // namespace

TEST_CASE("Taub-NUT potential") {
  CHECK(taubnut_potential(1, 0.0, 1) == doctest::Approx(1.5));
  CHECK(taubnut_potential(0, 1.0, 0) == doctest::Approx(0.5));
  CHECK(taubnut_potential(3, 4.0, 2) == doctest::Approx(2.1));
  CHECK_THROWS(taubnut_potential(0, 0.0, 1));
}

TEST_CASE("Ooguri-Vafa potential values") {
  const OVParams p{10.0, {}};
  CHECK(std::abs(ov_potential(0, 0.5, p).value - (10.0 + 2.0 * std::log(2.0))) < 1e-8);
  const OVParams q{0.0, {}};
  CHECK(std::abs(ov_potential(0, cplx(0, 2), q).value + kEulerGamma) < 1e-5);
  const cplx e(0.23, 0.7);
  CHECK(std::abs(ov_potential(0.4, e, q).value - ov_potential(0.4, e + 1.0, q).value) < 1e-14);
  // Richardson on the direct sum: error ~ c/N^2.
  const double d1 = ov_direct(0.4, e, 0, 20000), d2 = ov_direct(0.4, e, 0, 40000);
  CHECK(std::abs(ov_potential(0.4, e, q).value - (4 * d2 - d1) / 3) < 1e-8);
}

TEST_CASE("Ooguri-Vafa semiflat deviation") {
  const OVParams p{0.0, {200, 1e-11}};
  CHECK(std::abs(ov_semiflat_deviation(0, cplx(0, 1), p).value) <= 10 * std::exp(-2 * kPi));
  CHECK(std::abs(ov_semiflat_deviation(0, cplx(0, 2), p).value) <= 10 * std::exp(-4 * kPi));
  std::vector<double> ys, ls;
  for (double y = 1.0; y <= 2.5 + 1e-9; y += 0.25) {
    ys.push_back(y);
    ls.push_back(std::log(std::abs(ov_semiflat_deviation(0, cplx(0, y), p).value)));
  }
  const LinearFit f = linear_fit(ys, ls);
  CHECK(std::abs(f.slope / (-2 * kPi) - 1) < 0.1);
}

TEST_CASE("harmonicity and flux normalization") {
  const OVParams p{1.0, {}};
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Mat I = Mat::Identity(3, 3);
  for (int k = 0; k < 20; ++k) {
    Vec x(3);
    x << u(rng), u(rng) * 0.5, u(rng);
    if (x.norm() < 0.2) continue;
    auto f = [&](const Vec& z) { return ov_potential(z(0), cplx(z(1), z(2)), p).value; };
    LaplacianResult l = fd_laplacian(f, x, I, 1e-2);
    CHECK(l.relative() < 1e-4);
  }
  auto grad = [&](const Vec& z) {
    const Vec3 g = ov_gradient(z(0), cplx(z(1), z(2)), p).value;
    return Vec(Eigen::Vector3d(g[0], g[1], g[2]));
  };
  CHECK(std::abs(sphere_flux(grad, Vec::Zero(3), 0.3, I, 1e-8).value + 2 * kPi) < 0.02 * 2 * kPi);
  Vec c(3);
  c << 0.0, 0.5, 0.0;
  CHECK(std::abs(sphere_flux(grad, c, 0.2, I, 1e-8, 1e-9).value) < 1e-6);
}

TEST_CASE("Taub-NUT functional equation") {
  Vec a(3), b(3);
  a << 0, 1, 0;
  b << 1, 1, 0;
  LogmodResult r = logmod_functional_eq_taubnut(polyline({a, b}), 1.0);
  CHECK(std::abs(r.residual) <= 1e-6);
  Vec c(3), d(3);
  c << -0.5, 0.3, 1.2;
  d << 0.8, -0.6, -0.4;
  CHECK(std::abs(logmod_functional_eq_taubnut(polyline({a, c, d}), 2.0).residual) <= 1e-6);
  // Closedness of d log|z1| by finite differences.
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 10; ++k) {
    Vec x(3);
    x << u(rng), u(rng), u(rng) + 1.5;
    auto comp = [&](int i) {
      return [i](const Vec& z) { return dlogmod_taubnut(1, z(0), cplx(z(1), z(2)), 1.0)[i]; };
    };
    Mat J(3, 3);
    for (int i = 0; i < 3; ++i) J.row(i) = fd_gradient(comp(i), x, 1e-3).transpose();
    CHECK((J - J.transpose()).cwiseAbs().maxCoeff() <= 1e-6);
  }
}

TEST_CASE("Ooguri-Vafa functional equation and loop period") {
  const OVParams p{3.0, {48, 1e-8}};
  Vec a(3), b(3), c(3);
  a << 0.2, 0.3, 0.8;
  b << -0.4, 0.7, 0.3;
  c << 0.5, 1.4, -0.6;
  const LogmodResult r = logmod_functional_eq_ov(polyline({a, b, c}), p);
  CHECK(std::abs(r.residual) < 1e-6);
  for (double y : {1.0, 2.0}) {
    const Estimate<double> per = ov_loop_period(1, 0.3, y, p);
    CHECK(std::abs(per.value) <= std::exp(-2 * kPi * y));
  }
}
