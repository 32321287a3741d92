#include "verify.hpp"

#include "ghlab/ghlab.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace ghlab::verify {
namespace {

const SymCoupling kSymId = SymCoupling::identity();
const SymCoupling kSym = SymCoupling::make(2.0, 0.3, 1.0);
const HermCoupling kHermId = HermCoupling::identity();
const HermCoupling kHerm{2.0, 1.5, cplx(0.3, 0.4)};
const HermCoupling kHermReal{2.0, 1.5, cplx(0.3, 0.0)};

constexpr int kHarmonicPoints = 200;

Vec v3(double a, double b, double c) { return (Vec(3) << a, b, c).finished(); }
Vec v4(double a, double b, double c, double d) { return (Vec(4) << a, b, c, d).finished(); }
Vec v4(const C3Point& p) { return v4(p.mu1, p.mu2, p.eta.real(), p.eta.imag()); }
Vec v5(const NegVertexPoint& p) {
  return (Vec(5) << p.eta1.real(), p.eta1.imag(), p.eta2.real(), p.eta2.imag(), p.mu).finished();
}
C3Point c3_at(const Vec& x) { return {x(0), x(1), cplx(x(2), x(3))}; }

// ---------------------------------------------------------------------------
// 1. harmonicity

void harmonic_c3(Report& r, const Budget&) {
  const Mat G = metric_c3(kSym).inverse();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-4, 4);
  double worst = 0.0;
  int n = 0;
  while (n < kHarmonicPoints) {
    const C3Point p{u(rng), u(rng), cplx(u(rng), u(rng))};
    if (trivalent_graph_distance(p, kSym) < 0.1) continue;
    for (int e = 1; e <= 3; ++e) {
      ScalarField f = [&](const Vec& x) { return c3::alpha_value(e, c3_at(x), kSym); };
      worst = std::max(worst, fd_laplacian(f, v4(p), G, 1e-3).relative());
    }
    ++n;
  }
  r.at_most("C3 alpha_1..3 relative Laplacian residual, max over 200 points", worst, 1e-4);
}

void harmonic_pos(Report& r, const Budget& b) {
  const Mat G = metric_c3(kSym).inverse();
  const TruncSpec trunc{b.n(48), 1e-8, TailModel::inverse_square};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2, 2), x(0, 1);
  double worst = 0.0;
  int n = 0;
  while (n < kHarmonicPoints) {
    const PosVertexPoint p{u(rng), u(rng), cplx(x(rng), u(rng))};
    if (trivalent_graph_distance(p, kSym) < 0.1) continue;
    std::map<std::array<double, 4>, std::array<double, 3>> memo;
    auto triple = [&](const Vec& v) {
      const std::array<double, 4> key{v(0), v(1), v(2), v(3)};
      auto it = memo.find(key);
      if (it != memo.end()) return it->second;
      const pos::TildeAlphaTriple t = pos::tilde_alpha({v(0), v(1), cplx(v(2), v(3))}, kSym, trunc);
      return memo[key] = {t[0], t[1], t[2]};
    };
    for (int e = 0; e < 3; ++e) {
      ScalarField f = [&](const Vec& v) { return triple(v)[e]; };
      worst = std::max(worst, fd_laplacian(f, v4(p.mu1, p.mu2, p.eta.real(), p.eta.imag()), G, 1e-3).relative());
    }
    ++n;
  }
  r.at_most("positive vertex tilde alpha_1..3 relative Laplacian residual, max over 200 points", worst, 1e-4);
}

// g_a-distance from an offset to the nearest lattice translate of the origin.
double lattice_distance(const Vec& d, const Mat& g) {
  double best = 1e300;
  for (int n1 = -2; n1 <= 2; ++n1)
    for (int n2 = -2; n2 <= 2; ++n2) {
      Vec e = d;
      e(0) += n1;
      e(2) += n2;
      best = std::min(best, std::sqrt(e.dot(g * e)));
    }
  return best;
}

// g′-distance from (y1, y2, μ) to the three shadow rays {t d_e, μ = 0, t ≥ 0}.
double ray_shadow_distance(const Vec& p, const Mat& g) {
  double best = 1e300;
  for (const Vec& d : {v3(0, 1, 0), v3(1, 0, 0), v3(-1, -1, 0)}) {
    const double t = std::max(0.0, p.dot(g * d) / d.dot(g * d));
    const Vec e = p - t * d;
    best = std::min(best, std::sqrt(e.dot(g * e)));
  }
  return best;
}

void harmonic_neg(Report& r, const Budget&) {
  {
    const Mat g = metric_neg(kHerm), G = g.inverse();
    const neg::LatticeKernel K(kHerm);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> x(0, 1), y(-1.5, 1.5);
    double worst = 0.0;
    int n = 0;
    while (n < kHarmonicPoints) {
      const Vec p = (Vec(5) << x(rng), y(rng), x(rng), y(rng), y(rng)).finished();
      const double d = lattice_distance(p, g);
      if (d < 0.1) continue;
      ScalarField f = [&](const Vec& v) { return K.gamma({v(0), v(1), v(2), v(3), v(4)}); };
      // step shrinks with the distance to the nearest image
      worst = std::max(worst, fd_laplacian(f, p, G, 1e-2 * std::min(1.0, d)).relative());
      ++n;
    }
    r.at_most("negative vertex gamma relative Laplacian residual, max over 200 points", worst, 1e-4);
  }
  {
    const Mat g = metric_neg_prime(kHerm), G = g.inverse();
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-2, 2);
    double worst = 0.0;
    int n = 0;
    while (n < kHarmonicPoints) {
      const Vec p = v3(u(rng), u(rng), u(rng));
      if (ray_shadow_distance(p, g) < 0.1) continue;
      for (int e = 0; e < 3; ++e) {
        ScalarField f = [&](const Vec& v) { return neg::gammabarbar(v(0), v(1), v(2), kHerm)[e]; };
        worst = std::max(worst, fd_laplacian(f, p, G, 1e-3).relative());
      }
      ++n;
    }
    r.at_most("negative vertex gammabarbar_1..3 relative Laplacian residual, max over 200 points", worst, 1e-4);
  }
}

// ---------------------------------------------------------------------------
// 2. integrability

void integrability(Report& r, const Budget&) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> diag(0.5, 3.0), t(-0.8, 0.8), u(-3, 3);
  double worst = 0.0, worst_all = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double a11 = diag(rng), a22 = diag(rng);
    const SymCoupling a = SymCoupling::make(a11, t(rng) * std::sqrt(a11 * a22), a22);
    const C3Point p{u(rng), u(rng), cplx(u(rng), u(rng))};
    const double na = norm_a(p, a);
    const double target = std::sqrt(a.det()) / (2 * kPi * na * na);
    const c3::AlphaTriple al = c3::alpha(p, a);
    worst = std::max({worst, std::abs(al.jet[0].d[1] - target) / target, std::abs(al.jet[1].d[0] - target) / target});
    worst_all = std::max(worst_all, c3::integrability_residual(p, a) / target);
  }
  r.at_most("d alpha_1/d mu_2 and d alpha_2/d mu_1 against sqrt(A)/(2 pi |mu|_a^2), max relative over 100 points", worst,
            1e-8);
  r.at_most("all three identities, max relative over 100 points", worst_all, 1e-8);
}

// ---------------------------------------------------------------------------
// 3. fluxes

// Tube × x-circle in (μ1, μ2, x, y) from a tube in (μ1, μ2, y). Inserting x
// before y flips the orientation of the frame.
std::vector<Patch> lift_over_x(const std::vector<Patch>& tube) {
  std::vector<Patch> out;
  for (const Patch& p : tube) {
    Patch q;
    q.lo = Vec(3);
    q.hi = Vec(3);
    q.lo << p.lo(0), p.lo(1), 0.0;
    q.hi << p.hi(0), p.hi(1), 1.0;
    q.X = [X = p.X](const Vec& u) {
      const Vec b = X(u.head(2));
      return v4(b(0), b(1), u(2), b(2));
    };
    q.orientation = -p.orientation;
    out.push_back(q);
  }
  return out;
}

void fluxes(Report& r, const Budget&) {
  for (const SymCoupling& a : {kSymId, kSym}) {
    const std::string tag = a.a12 == 0.0 ? "identity" : "generic";
    GradientField df = [&](const Vec& x) {
      const c3::J4 j = c3::alpha(c3_at(x), a).jet[0];
      return v4(j.d[0], j.d[1], j.d[2], j.d[3]);
    };
    const double target = -2 * kPi * std::sqrt(a.det());
    const Certified f = tube_flux(df, v4(0, 1, 0, 0), v4(0, 2, 0, 0), 0.2, metric_c3(a), 1e-6);
    r.expect("C3 tube flux of alpha_1 around D1, mu_2 in [1,2], " + tag, f.value, target, 1e-2 * std::abs(target),
             f.error);

    // averaged potential: the tube in (μ1, μ2, y) swept over the x-circle
    GradientField dbar = [&](const Vec& x) {
      const pos::J3 j = pos::bar_alpha_jet(x(0), x(1), x(3), a)[0];
      return v4(j.d[0], j.d[1], 0.0, j.d[2]);
    };
    const Certified fb =
        hypersurface_flux(dbar, lift_over_x(tube_patches(v3(0, 1, 0), v3(0, 2, 0), 0.2)), metric_c3(a), 6, 1e-6, 96);
    r.expect("averaged alpha_1 flux through tube x circle, mu_2 in [1,2], " + tag, fb.value, target,
             1e-2 * std::abs(target), fb.error);
    GradientField dbar3 = [&](const Vec& x) {
      const pos::J3 j = pos::bar_alpha_jet(x(0), x(1), x(2), a)[0];
      return v3(j.d[0], j.d[1], j.d[2]);
    };
    const Certified f3 = tube_flux(dbar3, v3(0, 1, 0), v3(0, 2, 0), 0.2, metric_c3_prime(a), 1e-6);
    r.expect("averaged alpha_1 flux in the three dimensional metric, " + tag, f3.value, -2 * kPi, 2e-2 * kPi,
             f3.error);
  }

  neg::SQuadOptions opt;
  opt.refine = 1.5;
  const std::pair<const char*, std::pair<HermCoupling, neg::SPatch>> cases[] = {
      {"identity, x2 in [0.35,0.65], y2 in [-0.15,0.15]", {kHermId, {0.35, 0.65, -0.15, 0.15}}},
      {"identity, x2 in [0.1,0.4], y2 in [0.2,0.5]", {kHermId, {0.1, 0.4, 0.2, 0.5}}},
      {"hermitian, x2 in [0.35,0.65], y2 in [-0.15,0.15]", {kHerm, {0.35, 0.65, -0.15, 0.15}}},
  };
  for (const auto& [name, c] : cases) {
    const neg::FluxResult f = neg::flux_S(c.first, c.second, 0.08, opt);
    r.expect(std::string("flux of grad v around the S patch, ") + name, f.flux, f.expected,
             2e-2 * std::abs(f.expected), f.error);
  }
}

// ---------------------------------------------------------------------------
// 4. Chern quantization

void chern(Report& r, const Budget&) {
  for (const SymCoupling& a : {kSymId, kSym}) {
    const std::string tag = a.a12 == 0.0 ? " (identity)" : " (generic)";
    CurvatureProvider F = [a](const Vec& x) { return assemble(c3::field_jet(c3_at(x), a), Geometry::C3).F; };
    const auto d1 = chern_flux(F, linking_sphere(v4(0, 2, 0, 0), v4(0, 1, 0, 0), 0.5));
    const auto d2 = chern_flux(F, linking_sphere(v4(2, 0, 0, 0), v4(1, 0, 0, 0), 0.5));
    const auto d3 = chern_flux(F, linking_sphere(v4(-2, -2, 0, 0), v4(-1, -1, 0, 0), 0.5));
    const auto none = chern_flux(F, linking_sphere(v4(2, 2, 0, 0), v4(1, 1, 0, 0), 0.5));
    r.expect("|c(D1)_1|" + tag, std::abs(d1[0].value), 1, 1e-2);
    r.expect("c(D1)_2" + tag, d1[1].value, 0, 1e-2);
    r.expect("c(D2)_1" + tag, d2[0].value, 0, 1e-2);
    r.expect("|c(D2)_2|" + tag, std::abs(d2[1].value), 1, 1e-2);
    r.expect("|c(D3)_1|" + tag, std::abs(d3[0].value), 1, 1e-2);
    r.expect("|c(D3)_2|" + tag, std::abs(d3[1].value), 1, 1e-2);
    r.expect("unlinked sphere, generator 1" + tag, none[0].value, 0, 1e-2);
    r.expect("unlinked sphere, generator 2" + tag, none[1].value, 0, 1e-2);
    const double s = d1[0].value;
    r.holds("relative signs e1, -e2, -e1+e2" + tag, d2[1].value * s < 0 && d3[0].value * s < 0 && d3[1].value * s > 0);
  }
}

// ---------------------------------------------------------------------------
// 5. functional equations

void functional_c3(Report& r, const Budget&) {
  const C3Point pts[] = {{0.3, -0.4, cplx(1, 0)},
                         {1.2, 0.7, cplx(0, 2)},
                         {-0.5, -1.5, cplx(0.4, 0.8)},
                         {0.8, 0.2, cplx(-0.6, 0.5)},
                         {-1.0, 0.6, cplx(1.3, -0.7)}};
  double worst = 0.0, err = 0.0;
  for (const C3Point& p : pts) {
    cplx s = 0.0;
    double e = 0.0;
    for (int i = 0; i < 3; ++i) {
      const Estimate<cplx> b = c3::beta(p, kSym, i);
      s += b.value;
      e += b.error;
    }
    const double d = std::abs(s - 1.0 / p.eta);
    if (d > worst) {
      worst = d;
      err = e;
    }
  }
  r.expect("beta_0 + beta_1 + beta_2 - 1/eta, max over 5 points", worst, 0.0, 1e-3, err);

  const C3Point anchor{0.2, 0.1, cplx(0, 0.6)};
  const double z0 = c3::anchor_log(anchor);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2, 2), v(0.3, 1.5);
  double lo = 1e300, hi = -1e300, path_gap = 0.0;
  for (int k = 0; k < 5; ++k) {
    const C3Point q{u(rng), u(rng), cplx(u(rng), v(rng))};
    const Path mu_first = polyline({v4(anchor), v4({q.mu1, q.mu2, anchor.eta}), v4(q)});
    const Path eta_first = polyline({v4(anchor), v4({anchor.mu1, anchor.mu2, q.eta}), v4(q)});
    double s[2];
    int j = 0;
    for (const Path* path : {&mu_first, &eta_first}) {
      s[j] = -std::log(std::abs(q.eta));
      for (int i = 0; i < 3; ++i) s[j] += c3::logmod_z(*path, kSym, i, z0).value;
      lo = std::min(lo, s[j]);
      hi = std::max(hi, s[j]);
      ++j;
    }
    path_gap = std::max(path_gap, std::abs(s[0] - s[1]));
  }
  r.at_most("log|z0 z1 z2|/|eta|: difference between two paths, max over 5 endpoints", path_gap, 1e-3);
  r.at_most("log|z0 z1 z2|/|eta|: spread over endpoints and paths", hi - lo, 1e-3);
}

void functional_pos(Report& r, const Budget& b) {
  const TruncSpec t{b.n(48), 1e-8, TailModel::inverse_square};
  for (const cplx eta : {cplx(0, 1), cplx(0.5, 0), cplx(0.25, 0)}) {
    const cplx target = kPi * std::cos(kPi * eta) / std::sin(kPi * eta);
    const Estimate<cplx> s = pos::tilde_beta_sum({0.3, -0.2, eta}, kSym, t);
    r.expect("tilde beta sum - pi cot(pi eta) at eta = (" + std::to_string(eta.real()) + ", " +
                 std::to_string(eta.imag()) + ")",
             std::abs(s.value - target), 0.0, 1e-3, s.error);
  }
}

void functional_neg(Report& r, const Budget& b) {
  neg::SQuadOptions opt;
  opt.order = b.n(6);
  {
    const HermCoupling a{1.5, 1.2, cplx(0.2, 0.1)};
    const std::vector<NegVertexPoint> pts{{cplx(0.2, 0.1), cplx(0.4, 0.3), 0.4},
                                          {cplx(0.5, 0.6), cplx(0.1, -0.3), 0.7},
                                          {cplx(0.8, -0.4), cplx(0.3, 0.5), 0.3}};
    const neg::SMesh mesh(a, pts, opt);
    double worst = 0.0, err = 0.0;
    for (std::size_t k = 1; k < pts.size(); ++k) {
      const Vec p0 = v5(pts[0]), p1 = v5(pts[k]);
      Vec mid = 0.5 * (p0 + p1);
      mid(4) += 1.0;
      const neg::LogModZ34 L = neg::logmod_z34(polyline({p0, mid, p1}), mesh);
      if (std::abs(L.constant()) >= worst) {
        worst = std::abs(L.constant());
        err = L.error;
      }
    }
    r.expect("log|z3 z4|/|f_S| relative to the start point, max over 2 endpoints", worst, 0.0, 5e-2, err);
  }
  {
    const NegVertexPoint p{cplx(0.3, 0.2), cplx(0.1, 0.4), 0.5};
    const neg::SMesh mesh(kHermReal, {p}, opt);
    const auto s = mesh.beta_p34(p);
    const auto closed = neg::beta_p_sum(p, kHermReal);
    r.at_most("beta_13 + beta_14: surface integral against the closed form", std::abs(s[0] + s[2] - closed[0]), 1e-2);
  }
}

// ---------------------------------------------------------------------------
// 6. Ooguri-Vafa

void ooguri_vafa(Report& r, const Budget& b) {
  const classic2d::OVParams p{10.0, {b.n(48), 1e-8, TailModel::inverse_square}};
  const Estimate<double> v = classic2d::ov_potential(0, 0.5, p);
  r.expect("V(0, 1/2; A = 10) - (10 + 2 log 2)", v.value, 10.0 + 2.0 * std::log(2.0), 1e-8);
  const classic2d::OVParams q{0.0, {b.n(200), 1e-11, TailModel::inverse_square}};
  std::vector<double> ys, ls;
  for (double y = 1.0; y <= 2.5 + 1e-9; y += 0.25) {
    ys.push_back(y);
    ls.push_back(std::log(std::abs(classic2d::ov_semiflat_deviation(0, cplx(0, y), q).value)));
  }
  r.expect("semiflat deviation log slope on y in [1, 2.5]", linear_fit(ys, ls).slope, -2 * kPi, 0.1 * 2 * kPi);
}

// ---------------------------------------------------------------------------
// 7. averages

void averages(Report& r, const Budget& b) {
  const TruncSpec trunc{b.n(48), 1e-8, TailModel::inverse_square};
  double worst = 0.0, err = 0.0;
  for (const SymCoupling& a : {kSymId, kSym})
    for (const Vec& y : {v3(1, 1, 1.5), v3(-0.4, 0.7, 0.8), v3(0.3, -0.5, 1.2)}) {
      const Estimate<double> avg = adaptive_gk<double>(
          [&](double x) { return pos::tilde_alpha({y(0), y(1), cplx(x, y(2))}, a, trunc)[0]; }, 0.0, 1.0, 1e-10);
      const double d = std::abs(avg.value - pos::bar_alpha(y(0), y(1), y(2), a)[0]);
      if (d >= worst) {
        worst = d;
        err = avg.error;
      }
    }
  r.expect("x-average of tilde alpha_1 - bar alpha_1, max over 3 points x 2 couplings", worst, 0.0, 1e-6, err);

  const neg::LatticeKernel K(kHerm);
  const int n = b.n(48);
  double gworst = 0.0;
  for (const Vec& y : {v3(0, 0, 1), v3(0.4, -0.3, 0.6), v3(1.2, 0.5, 0.2)}) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += K.gamma({(i + 0.5) / n, y(0), (j + 0.5) / n, y(1), y(2)});
    const double expect = -1.0 / (4 * kPi * std::sqrt(kHerm.big_det()) * varrho(y(0), y(1), y(2), kHerm));
    gworst = std::max(gworst, std::abs(s / (n * n) - expect));
  }
  r.at_most("cell average of gamma + 1/(4 pi varrho sqrt(AA)), max over 3 points", gworst, 1e-8);
}

// ---------------------------------------------------------------------------
// 8. Fourier decay

void fourier_decay(Report& r, const Budget&) {
  for (const SymCoupling& a : {kSymId, kSym}) {
    const pos::DecayFit f = pos::fourier_decay_fit(a, 0, 0, {1.0, 1.5, 2.0});
    const double target = -2 * kPi / std::sqrt(a.det());
    r.expect(std::string("positive vertex first mode decay rate, ") + (a.a12 == 0.0 ? "identity" : "generic"), f.slope,
             target, 0.1 * std::abs(target));
  }
  for (const HermCoupling& a : {kHermId, HermCoupling{1.3, 1.0, cplx(0.2, 0.1)}}) {
    const neg::SMesh mesh(a, {{cplx(0, 0), cplx(0, 0), 0.3}});
    std::vector<double> d, lg;
    for (double s : {0.6, 0.8, 1.0, 1.2, 1.4}) {
      const double mu = s / std::sqrt(a.det());
      auto f = [&](double x1, double x2) { return mesh.gamma_i({cplx(x1, 0), cplx(x2, 0), mu})[0]; };
      const std::vector<cplx> m = fourier_modes_2d(f, 8, 1);
      d.push_back(distance_to_amoeba(0, 0, mu, a));
      lg.push_back(std::log(std::abs(m[(1 + 1) * 3 + 1])));
    }
    r.expect(std::string("negative vertex first mode decay rate against kappa_a, ") +
                 (a.a12 == 0.0 ? "identity" : "hermitian"),
             -linear_fit(d, lg).slope, kappa_a(a), 0.15 * kappa_a(a));
  }
}

// ---------------------------------------------------------------------------
// 9. I-integrals

void i_integrals(Report& r, const Budget&) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.5, 1.5), m(-1, 1);
  const HermCoupling couplings[] = {kHermReal, kHerm};
  double w03 = 0.0, w3 = 0.0, w4 = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double y1 = u(rng), y2 = u(rng), mu = m(rng);
    const HermCoupling& a = couplings[k % 2];
    const neg::PIntegralPack c = neg::p_integrals(y1, y2, mu, a), q = neg::p_integrals_quadrature(y1, y2, mu, a);
    w03 = std::max(w03, std::abs(c.I03 - q.I03));
    for (int p = 0; p < 2; ++p) {
      w3 = std::max(w3, std::abs(c.Ip3[p] - q.Ip3[p]));
      w4 = std::max(w4, std::abs(c.Ip4[p] - q.Ip4[p]));
    }
  }
  r.at_most("I_03 closed form - quadrature, max over 20 points", w03, 1e-3);
  r.at_most("I_p3 closed form - quadrature, max over 20 points", w3, 1e-3);
  r.at_most("I_p4 closed form - quadrature, max over 20 points", w4, 1e-3);
  r.at_most("|K_1(identity) + 3 pi i/4|", std::abs(neg::K_p(kHermId)[0] - cplx(0, -3 * kPi / 4)), 1e-10);
}

// ---------------------------------------------------------------------------
// 10. volume error

void volume_error(Report& r, const Budget&) {
  std::vector<double> lx, ly;
  for (double s = 10; s <= 1000; s *= 1.5) {
    const C3Point p{s, 0.3 * s, cplx(0, 0.5 * s)};
    lx.push_back(std::log(norm_a(p, kSym)));
    ly.push_back(std::log(std::abs(c3::c3_fields(p, kSym).E1)));
  }
  r.expect("log-log slope of |E1| along a generic ray", linear_fit(lx, ly).slope, -2.0, 0.1);

  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-3, 3);
  double gap = 0.0;
  int n = 0;
  while (n < 100) {
    const C3Point p{u(rng), u(rng), cplx(u(rng), u(rng))};
    if (trivalent_graph_distance(p, kSym) < 0.1) continue;
    gap = std::max(gap, std::abs(c3::c3_fields(p, kSym).E1 - c3::E1_ratio_route(p, kSym)));
    ++n;
  }
  r.at_most("E1 from -det v/(A + w + det v) against W/det V - 1, max over 100 points", gap, 1e-12);

  const HermCoupling a{3, 2.5, cplx(0.4, 0.2)};
  const double s = std::sqrt(2.0);
  const HermCoupling b = a.scaled(s);
  for (const NegVertexPoint& p : {NegVertexPoint{cplx(0.3, 0.1), cplx(0.6, -0.05), 0.3},
                                  NegVertexPoint{cplx(0.5, -0.1), cplx(0.2, 0.2), 0.5}}) {
    NegVertexPoint q = p;
    q.mu = p.mu / std::sqrt(s);
    const double wa = std::sqrt(a.det()) * scales(p, a).ell * std::abs(neg::neg_fields(p, a).E1);
    const double wb = std::sqrt(b.det()) * scales(q, b).ell * std::abs(neg::neg_fields(q, b).E1);
    const double target = std::pow(2.0, -0.75);
    r.expect("negative vertex sqrt(A) l |E1| ratio under A -> 2A at mu = " + std::to_string(p.mu), wb / wa, target,
             0.25 * target);
  }
}

// ---------------------------------------------------------------------------
// 11. flow

void flow_exact(Report& r, const Budget&) {
  const flow::FlowState s0{1.2, 1.0, 0.9, 0.3, 0.0};
  const flow::Trajectory t = flow::integrate(s0, 0.5, 1e-3);
  const flow::FlowConstants k = flow::fit_constants(s0);
  double dev = 0.0;
  for (const auto& s : t.states) {
    const flow::FlowState c = flow::closed_form(k, flow::fit_constants(s).t);
    dev = std::max({dev, std::abs(c.p1 - s.p1), std::abs(c.p2 - s.p2), std::abs(c.p3 - s.p3),
                    std::abs(c.lambda - s.lambda)});
  }
  r.at_most("RK4 against the parametrized closed form, max deviation", dev, 1e-6);
}

void flow_suite(Report& r, const Budget& b) {
  flow_exact(r, b);
  const flow::FlowState s0{1.2, 1.0, 0.9, 0.3, 0.0};
  const flow::Trajectory t = flow::integrate(s0, 0.5, 1e-3);
  const auto c0 = flow::conserved(s0);
  double drift = 0.0;
  bool im_const = true;
  for (const auto& s : t.states) {
    const auto c = flow::conserved(s);
    if (s.lambda > 0.0) drift = std::max(drift, std::max(std::abs(c[0] - c0[0]), std::abs(c[1] - c0[1])) / s.lambda);
    im_const = im_const && s.im_a21 == s0.im_a21;
  }
  r.at_most("conserved quantities drift per unit lambda, step 1e-3", drift, 1e-8);
  const flow::Trajectory sym = flow::integrate({1, 1, 1}, 1.0, 1e-3);
  r.expect("symmetric breakdown lambda", sym.breakdown_lambda.value_or(-1.0), 2.0 / 3.0, 1e-6);
  r.expect("neck K_3(A_max = 12)", flow::neck_estimate(12.0).log_scales, 16.0 / 3.0, 0.0);
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> d(0.5, 3.0), o(-0.8, 0.8), im(-1, 1);
  double mirror = 0.0;
  for (int k = 0; k < 50; ++k) {
    const double a11 = d(rng), a22 = d(rng), a12 = o(rng) * std::sqrt(a11 * a22);
    const double m = 0.9 * im(rng) * std::sqrt(a11 * a22 - a12 * a12);
    mirror = std::max(mirror, flow::mirror_discrepancy(SymCoupling::make(a11, a12, a22),
                                                       HermCoupling::make(a11, cplx(a12, m), a22)));
  }
  r.expect("mirror identity discrepancy, max over 50 pairs", mirror, 0.0, 0.0);
  r.holds("Im a21 identical along the trajectory", im_const);
}

// ---------------------------------------------------------------------------
// 12. symplectic area

void symplectic(Report& r, const Budget& b) {
  neg::SQuadOptions opt;
  opt.order = b.n(6);
  for (const cplx a12 : {cplx(0, 0), cplx(0, 0.3)}) {
    const HermCoupling a{1.5, 1.2, a12};
    const double mu = 5 * std::pow(a.det(), -0.25);
    const neg::SymplecticArea s = neg::symplectic_area(a, 0.3, -0.2, mu, 8, opt);
    const neg::SymplecticArea t = neg::symplectic_area(a, 0.3, -0.2, 1.6 * mu, 8, opt);
    const std::string tag = " for a12 = " + std::to_string(a12.imag()) + "i";
    r.expect("torus quadrature against Im a21" + tag, s.value, a.a21().imag(), 1e-2);
    r.at_most("mu-independence" + tag, std::abs(t.value - s.value), 1e-3);
  }
}

// ---------------------------------------------------------------------------
// 13. Harvey-Lawson

void harvey_lawson(Report& r, const Budget&) {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> n(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const cplx z0(n(rng), n(rng)), z1(n(rng), n(rng)), z2(n(rng), n(rng));
    worst = std::max(worst, std::abs(harvey_lawson_check(z0, z1, z2)));
  }
  r.at_most("det V^-1 - W^-1, max over 1000 points", worst, 1e-12);
}

// ---------------------------------------------------------------------------
// 14. amoeba

void amoeba(Report& r, const Budget&) {
  std::mt19937_64 rng(37);
  std::normal_distribution<double> n(0.0, 2.0);
  int outside = 0;
  for (int k = 0; k < 1000; ++k) {
    const cplx z2(n(rng), n(rng));
    const cplx z1 = 1.0 - z2;
    const double y1 = -std::log(std::abs(z1)) / (2 * kPi), y2 = -std::log(std::abs(z2)) / (2 * kPi);
    if (!(amoeba_contains(y1, y2).slack >= -1e-12)) ++outside;
  }
  r.expect("projected points of S reported outside, of 1000", outside, 0, 0);

  // circle sampling of the fibre |z2| = r2 decides whether |z1| = r1 is attained
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  int disagree = 0;
  const int samples = 720;
  for (int k = 0; k < 1000; ++k) {
    const double y1 = u(rng), y2 = u(rng);
    const double r1 = std::exp(-2 * kPi * y1), r2 = std::exp(-2 * kPi * y2);
    double lo = 1e300, hi = 0.0;
    for (int j = 0; j < samples; ++j) {
      const double m = std::abs(1.0 - std::polar(r2, 2 * kPi * j / samples));
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
    const bool sampled = lo <= r1 && r1 <= hi;
    if (sampled != amoeba_contains(y1, y2).inside) ++disagree;
  }
  r.expect("raster points where membership disagrees with fibre sampling, of 1000", disagree, 0, 0);
  const double bnd = std::log(2.0) / (2 * kPi);
  r.at_most("|slack| at (log 2/2 pi, log 2/2 pi)", std::abs(amoeba_contains(bnd, bnd).slack), 1e-12);
}

template <class... F>
std::function<void(Report&, const Budget&)> all_of(F... f) {
  return [=](Report& r, const Budget& b) { (f(r, b), ...); };
}

}  // namespace

const std::vector<Suite>& suites() {
  static const std::vector<Suite> list{
      {"harmonicity", 1, "harmonicity of the potentials", 120, all_of(harmonic_c3, harmonic_pos, harmonic_neg)},
      {"integrability", 2, "integrability identity", 10, integrability},
      {"fluxes", 3, "distributional fluxes", 180, fluxes},
      {"chern", 4, "Chern quantization", 120, chern},
      {"functional-equations", 5, "functional equations", 600, all_of(functional_c3, functional_pos, functional_neg)},
      {"ooguri-vafa", 6, "Ooguri-Vafa numerics", 30, ooguri_vafa},
      {"averages", 7, "unit cell averages", 120, averages},
      {"fourier-decay", 8, "Fourier decay", 180, fourier_decay},
      {"i-integrals", 9, "closed form I-integrals", 120, i_integrals},
      {"volume-error", 10, "volume error decay", 120, volume_error},
      {"flow", 11, "renormalization flow", 30, flow_suite},
      {"symplectic-area", 12, "symplectic area", 60, symplectic},
      {"harvey-lawson", 13, "Harvey-Lawson identity", 5, harvey_lawson},
      {"amoeba", 14, "amoeba membership", 10, amoeba},
      {"harmonicity-c3", 0, "harmonicity of alpha_1..3 on C3", 0, harmonic_c3},
      {"harmonicity-pos", 0, "harmonicity of the lattice sums", 0, harmonic_pos},
      {"harmonicity-neg", 0, "harmonicity of gamma and gammabarbar", 0, harmonic_neg},
      {"flow-exact", 0, "RK4 against the closed form", 0, flow_exact},
  };
  return list;
}

}  // namespace ghlab::verify
