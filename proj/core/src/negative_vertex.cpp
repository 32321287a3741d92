#include "ghlab/negative_vertex.hpp"

#include "ghlab/dual.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ghlab::neg {

namespace {

constexpr double kCut = 40.0;  // exponents beyond e^{-40} are dropped
constexpr int kNodes = 32;     // Gauss-Legendre nodes of the Ewald t-integrals

template <class T>
T lift(const T& u, double f, double fp) {
  if constexpr (std::is_same_v<T, double>) {
    (void)u;
    (void)fp;
    return f;
  } else {
    return chain(u, f, fp);
  }
}

double herm_form(const HermCoupling& a, cplx d1, cplx d2) {
  return a.a11 * std::norm(d1) + a.a22 * std::norm(d2) + 2.0 * (a.a12 * d1 * std::conj(d2)).real();
}

}  // namespace

Offset offset(const NegVertexPoint& p, const NegVertexPoint& q) {
  const cplx d1 = p.eta1 - q.eta1, d2 = p.eta2 - q.eta2;
  return {d1.real(), d1.imag(), d2.real(), d2.imag(), p.mu - q.mu};
}

struct LatticeKernel::Tables {
  struct KVec {
    double k1, k2, kappa;
  };
  double alpha = 0.0;
  double rho_fourier = 0.0;
  std::vector<std::array<double, 2>> images;
  std::vector<KVec> ks;  // half plane, increasing κ
  std::size_t n_ewald = 0;
  std::vector<double> t, w;
  std::vector<double> P;  // e^{-π²κ²/t_j²}, row per Ewald k
};

LatticeKernel::LatticeKernel(const HermCoupling& a)
    : a_(a), A_(a.det()), AA_(a.big_det()), m_(a.a12.imag()), S_(a.real_part()) {
  if (!(a.a11 > 0.0) || !(A_ > 0.0)) throw InvalidCoupling("coupling must be positive definite");
  Sinv_ = S_.inverse();
  auto tab = std::make_shared<Tables>();
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(S_);
  const double lmin = es.eigenvalues()(0), lmax = es.eigenvalues()(1);
  tab->alpha = std::sqrt(kPi) / std::pow(AA_, 0.25);
  const double al = tab->alpha;

  const int M = static_cast<int>(std::ceil(std::sqrt(kCut) / (al * std::sqrt(lmin)))) + 1;
  for (int n1 = -M; n1 <= M; ++n1)
    for (int n2 = -M; n2 <= M; ++n2) tab->images.push_back({double(n1), double(n2)});

  // smallest |k| in the S^{-1} norm fixes where the pure Fourier series is cheap
  double kappa1 = 1e300;
  for (int k1 = -2; k1 <= 2; ++k1)
    for (int k2 = -2; k2 <= 2; ++k2)
      if (k1 || k2) {
        const Eigen::Vector2d k(k1, k2);
        kappa1 = std::min(kappa1, std::sqrt(k.dot(Sinv_ * k)));
      }
  tab->rho_fourier = 1.0 / kappa1;
  const double kappa_ewald = std::sqrt(kCut) * al / kPi;
  const double kappa_fourier = kCut / (2.0 * kPi * tab->rho_fourier);
  const double kappa_max = std::max(kappa_ewald, kappa_fourier);
  const int K = static_cast<int>(std::ceil(kappa_max * std::sqrt(lmax))) + 1;
  for (int k1 = 0; k1 <= K; ++k1)
    for (int k2 = -K; k2 <= K; ++k2) {
      if (k1 == 0 && k2 <= 0) continue;
      const Eigen::Vector2d k(k1, k2);
      const double kap = std::sqrt(k.dot(Sinv_ * k));
      if (kap <= kappa_max) tab->ks.push_back({double(k1), double(k2), kap});
    }
  std::sort(tab->ks.begin(), tab->ks.end(), [](const auto& x, const auto& y) { return x.kappa < y.kappa; });
  while (tab->n_ewald < tab->ks.size() && tab->ks[tab->n_ewald].kappa <= kappa_ewald) ++tab->n_ewald;

  const GaussRule& g = gauss_legendre(kNodes);
  for (int j = 0; j < kNodes; ++j) {
    tab->t.push_back(0.5 * al * (1.0 + g.x[j]));
    tab->w.push_back(0.5 * al * g.w[j]);
  }
  tab->P.resize(tab->n_ewald * kNodes);
  for (std::size_t k = 0; k < tab->n_ewald; ++k) {
    const double B = kPi * kPi * tab->ks[k].kappa * tab->ks[k].kappa;
    for (int j = 0; j < kNodes; ++j) tab->P[k * kNodes + j] = std::exp(-B / (tab->t[j] * tab->t[j]));
  }
  tab_ = tab;
}

double LatticeKernel::varrho(double y1, double y2, double mu) const {
  const double q = A_ / AA_ * (S_(0, 0) * y1 * y1 + 2.0 * S_(0, 1) * y1 * y2 + S_(1, 1) * y2 * y2);
  return std::sqrt(q + A_ * mu * mu);
}

template <class T>
T LatticeKernel::gamma_impl(const T& x1, const T& y1, const T& x2, const T& y2, const T& mu) const {
  using std::cos, std::erfc, std::exp, std::sqrt;
  const Tables& tb = *tab_;
  const T xr1 = x1 - std::round(value_of(x1));
  const T xr2 = x2 - std::round(value_of(x2));
  const T ySy = S_(0, 0) * y1 * y1 + 2.0 * S_(0, 1) * y1 * y2 + S_(1, 1) * y2 * y2;
  const T rho2 = (A_ / AA_) * ySy + A_ * mu * mu;
  const T s01 = m_ * (Sinv_(0, 1) * y1 - Sinv_(0, 0) * y2);
  const T s02 = m_ * (Sinv_(1, 1) * y1 - Sinv_(0, 1) * y2);
  const double rv2 = value_of(rho2);
  const double sqAA = std::sqrt(AA_);

  if (rv2 >= tb.rho_fourier * tb.rho_fourier) {
    const T rho = sqrt(rho2);
    const double kcut = kCut / (2.0 * kPi * value_of(rho));
    T sum = 1.0;
    for (const auto& k : tb.ks) {
      if (k.kappa > kcut) break;
      sum += 2.0 * exp(-2.0 * kPi * k.kappa * rho) * cos(2.0 * kPi * (k.k1 * (xr1 - s01) + k.k2 * (xr2 - s02)));
    }
    return -1.0 * sum / (4.0 * kPi * sqAA * rho);
  }

  const double al = tb.alpha, al2 = al * al;
  const double cz = 2.0 * al / std::sqrt(kPi);
  T real = 0.0;
  const double xv1 = value_of(xr1), xv2 = value_of(xr2), yv1 = value_of(y1), yv2 = value_of(y2);
  const double mv = value_of(mu);
  for (const auto& n : tb.images) {
    const double a1 = xv1 + n[0], a2 = xv2 + n[1];
    const double Qv = S_(0, 0) * a1 * a1 + 2.0 * S_(0, 1) * a1 * a2 + S_(1, 1) * a2 * a2 -
                      2.0 * m_ * (yv1 * a2 - yv2 * a1) + value_of(ySy);
    const double R2v = Qv + A_ * mv * mv;
    if (al2 * R2v > kCut) continue;
    if (R2v <= 0.0) throw NumericalFailure("γ is singular on the lattice orbit of the origin");
    const T s1 = xr1 + n[0], s2 = xr2 + n[1];
    const T R2 = S_(0, 0) * s1 * s1 + 2.0 * S_(0, 1) * s1 * s2 + S_(1, 1) * s2 * s2 -
                 2.0 * m_ * (y1 * s2 - y2 * s1) + ySy + A_ * mu * mu;
    const T R = sqrt(R2);
    real += erfc(al * R) / (R2 * R) + cz * exp(-al2 * R2) / R2;
  }
  real *= -1.0 / (8.0 * kPi * kPi);

  std::array<double, kNodes> E{};
  double F0 = 0.0, F0p = 0.0;
  for (int j = 0; j < kNodes; ++j) {
    const double t2 = tb.t[j] * tb.t[j];
    E[j] = std::exp(-t2 * rv2);
    F0 += tb.w[j] * E[j];
    F0p -= tb.w[j] * t2 * E[j];
  }
  T lsum = lift(rho2, F0, F0p);
  for (std::size_t k = 0; k < tb.n_ewald; ++k) {
    const double* P = &tb.P[k * kNodes];
    double F = 0.0, Fp = 0.0;
    for (int j = 0; j < kNodes; ++j) {
      const double c = tb.w[j] * E[j] * P[j];
      F += c;
      Fp -= c * tb.t[j] * tb.t[j];
    }
    const auto& kv = tb.ks[k];
    lsum += 2.0 * cos(2.0 * kPi * (kv.k1 * (xr1 - s01) + kv.k2 * (xr2 - s02))) * lift(rho2, F, Fp);
  }
  return real - lsum / (2.0 * std::pow(kPi, 1.5) * sqAA);
}

double LatticeKernel::gamma(const Offset& d) const { return gamma_impl<double>(d.x1, d.y1, d.x2, d.y2, d.mu); }

std::array<double, 6> LatticeKernel::gamma_grad(const Offset& d) const {
  using D = Dual<5>;
  const D r = gamma_impl<D>(D::variable(d.x1, 0), D::variable(d.y1, 1), D::variable(d.x2, 2),
                            D::variable(d.y2, 3), D::variable(d.mu, 4));
  return {r.v, r.d[0], r.d[1], r.d[2], r.d[3], r.d[4]};
}

double LatticeKernel::gamma_average(double y1, double y2, double mu) const {
  return -1.0 / (4.0 * kPi * std::sqrt(AA_) * varrho(y1, y2, mu));
}

std::array<double, 3> LatticeKernel::gamma_average_grad(double y1, double y2, double mu) const {
  const double rho = varrho(y1, y2, mu);
  const double f = 1.0 / (4.0 * kPi * std::sqrt(AA_) * rho * rho * rho);
  const double c = A_ / AA_;
  return {f * c * (S_(0, 0) * y1 + S_(0, 1) * y2), f * c * (S_(0, 1) * y1 + S_(1, 1) * y2), f * A_ * mu};
}

std::array<cplx, 2> LatticeKernel::gamma_p3(const Offset& d) const {
  using D = Dual<4>;
  const Tables& tb = *tab_;
  const D x1 = D::variable(d.x1 - std::round(d.x1), 0), y1 = D::variable(d.y1, 1);
  const D x2 = D::variable(d.x2 - std::round(d.x2), 2), y2 = D::variable(d.y2, 3);
  const double c = std::sqrt(A_) * d.mu;
  const double al = tb.alpha, al2 = al * al;
  const D ySy = S_(0, 0) * y1 * y1 + 2.0 * S_(0, 1) * y1 * y2 + S_(1, 1) * y2 * y2;
  const D q = (A_ / AA_) * ySy;
  const D s01 = m_ * (Sinv_(0, 1) * y1 - Sinv_(0, 0) * y2);
  const D s02 = m_ * (Sinv_(1, 1) * y1 - Sinv_(0, 1) * y2);
  const double erfc_ca = std::erfc(c * al);

  // H = Σ_n (1 − c/R)/(√A Q); only its η-derivatives enter.
  D H = 0.0;
  for (const auto& n : tb.images) {
    const double a1 = x1.v + n[0], a2 = x2.v + n[1];
    const double Qv = S_(0, 0) * a1 * a1 + 2.0 * S_(0, 1) * a1 * a2 + S_(1, 1) * a2 * a2 -
                      2.0 * m_ * (y1.v * a2 - y2.v * a1) + ySy.v;
    if (al2 * Qv > kCut) continue;
    if (Qv <= 1e-300) throw NumericalFailure("γ_p3 is singular on the lattice orbit of the origin");
    const D s1 = x1 + n[0], s2 = x2 + n[1];
    const D Q = S_(0, 0) * s1 * s1 + 2.0 * S_(0, 1) * s1 * s2 + S_(1, 1) * s2 * s2 - 2.0 * m_ * (y1 * s2 - y2 * s1) + ySy;
    const D R = sqrt(Q + c * c);
    H += (exp(-al2 * Q) * erfc_ca - (c / R) * erfc(al * R)) / Q;
  }
  H *= 1.0 / std::sqrt(A_);

  std::array<double, kNodes> EC{};
  for (int j = 0; j < kNodes; ++j) EC[j] = tb.w[j] * std::exp(-tb.t[j] * tb.t[j] * q.v) * std::erfc(c * tb.t[j]);
  const double pre = 2.0 * kPi / (std::sqrt(A_) * std::sqrt(AA_));
  for (std::size_t k = 0; k < tb.n_ewald; ++k) {
    const double* P = &tb.P[k * kNodes];
    double L = 0.0, Lp = 0.0;
    for (int j = 0; j < kNodes; ++j) {
      const double v = EC[j] * P[j];
      L += v / tb.t[j];
      Lp -= v * tb.t[j];
    }
    const auto& kv = tb.ks[k];
    H += (2.0 * pre) * cos(2.0 * kPi * (kv.k1 * (x1 - s01) + kv.k2 * (x2 - s02))) * chain(q, L, Lp);
  }
  // k = 0: dL0/dq = −∫_0^α t e^{−qt²} erfc(ct) dt
  double N0;
  if (q.v < 1e-2) {
    N0 = 0.0;
    for (int j = 0; j < kNodes; ++j) N0 += EC[j] * tb.t[j];
  } else {
    const double r = std::sqrt(q.v + c * c);
    N0 = (1.0 - std::exp(-q.v * al2) * erfc_ca) / (2.0 * q.v) - c * std::erf(al * r) / (2.0 * q.v * r);
  }
  H += pre * chain(q, 0.0, -N0);

  const double s = 1.0 / (8.0 * kPi * kPi);
  return {s * cplx(H.d[0], -H.d[1]), s * cplx(H.d[2], -H.d[3])};
}

std::array<cplx, 2> LatticeKernel::gamma_p3_average(double y1, double y2, double mu) const {
  const double rho = varrho(y1, y2, mu);
  const double c = std::sqrt(A_) * mu;
  const double q = rho * rho - c * c;
  // 1/(ϱ(ϱ + c)) written without cancellation for c < 0
  const double inv = c >= 0.0 ? 1.0 / (rho * (rho + c)) : (rho - c) / (rho * q);
  const cplx s1 = m_ * (Sinv_(0, 1) * y1 - Sinv_(0, 0) * y2);
  const cplx s2 = m_ * (Sinv_(1, 1) * y1 - Sinv_(0, 1) * y2);
  const cplx b1 = s1 - cplx(0.0, y1), b2 = s2 - cplx(0.0, y2);
  const double f = -inv / (4.0 * kPi * std::sqrt(A_) * std::sqrt(AA_));
  return {f * (a_.entry(0, 0) * b1 + a_.entry(0, 1) * b2), f * (a_.entry(1, 0) * b1 + a_.entry(1, 1) * b2)};
}

// ---------------------------------------------------------------------------

double gamma(const NegVertexPoint& p, const HermCoupling& a) {
  return LatticeKernel(a).gamma(offset(p, NegVertexPoint{}));
}

Estimate<double> gamma_lattice_sum(const NegVertexPoint& p, const HermCoupling& a, int N) {
  const double x1 = p.eta1.real() - std::round(p.eta1.real());
  const double x2 = p.eta2.real() - std::round(p.eta2.real());
  const double A = a.det();
  double s = 0.0;
  for (int n1 = -N; n1 <= N; ++n1)
    for (int n2 = -N; n2 <= N; ++n2) {
      const double R2 = herm_form(a, cplx(x1 + n1, p.eta1.imag()), cplx(x2 + n2, p.eta2.imag())) + A * p.mu * p.mu;
      if (R2 <= 0.0) throw NumericalFailure("γ is singular on the lattice orbit of the origin");
      s += std::pow(R2, -1.5);
    }
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(a.real_part());
  const double lmin = es.eigenvalues()(0);
  const Eigen::Vector2d y(p.eta1.imag(), p.eta2.imag());
  const Eigen::Vector2d s0 = a.a12.imag() * a.real_part().inverse() * Eigen::Vector2d(-y(1), y(0));
  const double L = N + 0.5 - 0.5 * std::sqrt(2.0) - s0.norm();
  if (L <= 1.0) throw NumericalFailure("truncation too small for the tail bound");
  const double tail = (2.0 * kPi / (std::pow(lmin, 1.5) * L)) / (8.0 * kPi * kPi);
  return {-s / (8.0 * kPi * kPi), tail};
}

double gamma_pm(cplx eta1, cplx eta2, double mu, const HermCoupling& a, int sign) {
  const double Q = herm_form(a, eta1, eta2);
  const double c = std::sqrt(a.det()) * mu;
  const double R = std::sqrt(Q + c * c);
  const double s = sign >= 0 ? 1.0 : -1.0;
  return c / (3.0 * R * R * R * Q) + 2.0 / (3.0 * Q * Q) * (c / R - s);
}

std::array<cplx, 2> gamma_p3(const NegVertexPoint& p, const HermCoupling& a) {
  return LatticeKernel(a).gamma_p3(offset(p, NegVertexPoint{}));
}

std::array<cplx, 2> gamma_p4(const NegVertexPoint& p, const HermCoupling& a) {
  Offset d = offset(p, NegVertexPoint{});
  d.mu = -d.mu;
  return LatticeKernel(a).gamma_p3(d);
}

Estimate<std::array<cplx, 2>> gamma_p3_lattice_sum(const NegVertexPoint& p, const HermCoupling& a, int N) {
  const double x1 = p.eta1.real() - std::round(p.eta1.real());
  const double x2 = p.eta2.real() - std::round(p.eta2.real());
  const double f = 3.0 / (8.0 * kPi * kPi * std::sqrt(a.det()));
  auto term = [&](int n1, int n2) {
    const cplx e1(x1 + n1, p.eta1.imag()), e2(x2 + n2, p.eta2.imag());
    const double g = gamma_pm(e1, e2, p.mu, a, +1);
    const cplx b1 = std::conj(e1), b2 = std::conj(e2);
    return std::array<cplx, 2>{f * g * (a.entry(0, 0) * b1 + a.entry(0, 1) * b2),
                               f * g * (a.entry(1, 0) * b1 + a.entry(1, 1) * b2)};
  };
  std::array<cplx, 2> s{};
  std::array<cplx, 2> shell{};
  for (int n1 = -N; n1 <= N; ++n1)
    for (int n2 = -N; n2 <= N; ++n2) {
      const auto t = term(n1, n2);
      s[0] += t[0];
      s[1] += t[1];
      if (std::max(std::abs(n1), std::abs(n2)) == N) {
        shell[0] += t[0];
        shell[1] += t[1];
      }
    }
  return {s, N * std::max(std::abs(shell[0]), std::abs(shell[1]))};
}

// ---------------------------------------------------------------------------

std::array<double, 3> counterterm(const HermCoupling& a) {
  const double k3 = a.a11 + 2.0 * a.a12.real() + a.a22;
  return {0.5 / std::sqrt(a.a22), 0.5 / std::sqrt(a.a11), 0.5 / std::sqrt(k3)};
}

std::array<double, 3> gammabarbar(double y1, double y2, double mu, const HermCoupling& a) {
  const double A = a.det(), AA = a.big_det();
  const Eigen::Matrix2d S = a.real_part();
  const Eigen::Vector2d y(y1, y2);
  const double rho = varrho(y1, y2, mu, a);
  const std::array<Eigen::Vector2d, 3> dirs{Eigen::Vector2d(0, 1), Eigen::Vector2d(1, 0), Eigen::Vector2d(-1, -1)};
  std::array<double, 3> out{};
  for (int e = 0; e < 3; ++e) {
    const Eigen::Vector2d& d = dirs[e];
    const double k = d.dot(S * d);
    const double c = std::sqrt(AA / (A * k));
    const double u = d.dot(S * y) / k;
    const double cross = d(0) * y2 - d(1) * y1;
    const double diff = AA * (cross * cross / k + mu * mu) / k;  // c²ϱ² − u²
    const double arg = u <= 0.0 ? c * rho - u : diff / (c * rho + u);
    if (!(arg > 0.0)) throw std::domain_error("γ̄̄ log argument is not positive (point on the ray shadow)");
    out[e] = -0.5 / std::sqrt(k) * std::log(arg);
  }
  return out;
}

std::array<cplx, 2> K_p(const HermCoupling& a) {
  const double A = a.det(), sAA = std::sqrt(a.big_det()), r = a.a12.real();
  const double t1 = kPi / 2 + std::atan((a.a22 + r) / sAA);
  const double t2 = kPi / 2 + std::atan((a.a11 + r) / sAA);
  const cplx I(0.0, 1.0);
  std::array<cplx, 2> K{};
  for (int p = 0; p < 2; ++p) {
    const cplx ap1 = a.entry(p, 0), ap2 = a.entry(p, 1);
    K[p] = I * (ap2 * r - ap1 * a.a22) / A * t1 + I * (ap1 * r - ap2 * a.a11) / A * t2;
  }
  return K;
}

std::array<cplx, 2> beta_p_sum(const NegVertexPoint& p, const HermCoupling& a) {
  const cplx f = f_S(p);
  if (std::abs(f) < 1e-14) throw std::domain_error("β_p3 + β_p4 is singular on S");
  const std::array<cplx, 2> K = K_p(a);
  const cplx c(0.0, -2.0 * kPi);
  return {c * z_of(p.eta1) / f + K[0], c * z_of(p.eta2) / f + K[1]};
}

namespace {

// (atanh(b)/b − 1)/b² = Σ_{k≥1} b^{2k−2}/(2k+1)
double atanh_ratio(double b) {
  if (b < 0.2) {
    double s = 0.0, p = 1.0;
    for (int k = 1; k < 30; ++k) {
      s += p / (2 * k + 1);
      p *= b * b;
    }
    return s;
  }
  return (std::atanh(b) / b - 1.0) / (b * b);
}

std::array<cplx, 2> times_a_iy(const HermCoupling& a, double y1, double y2, cplx f) {
  const cplx I(0.0, 1.0);
  return {f * I * (a.entry(0, 0) * y1 + a.entry(0, 1) * y2), f * I * (a.entry(1, 0) * y1 + a.entry(1, 1) * y2)};
}

}  // namespace

PIntegralPack p_integrals(double y1, double y2, double mu, const HermCoupling& a) {
  const double A = a.det(), AA = a.big_det();
  const Eigen::Vector2d y(y1, y2);
  const double ya2 = y.dot(a.real_part() * y);
  if (!(ya2 > 0.0)) throw std::domain_error("p_integrals need |y|_a > 0");
  const double rho = varrho(y1, y2, mu, a);
  const double c = std::sqrt(A) * mu;
  PIntegralPack P;
  P.gplus = gamma_pm(cplx(0, y1), cplx(0, y2), mu, a, +1);
  P.gminus = gamma_pm(cplx(0, y1), cplx(0, y2), mu, a, -1);
  const LatticeKernel k(a);
  P.gp3 = k.gamma_p3({0.0, y1, 0.0, y2, mu});
  P.gp4 = k.gamma_p3({0.0, y1, 0.0, y2, -mu});
  const double b = std::abs(c) / rho;
  P.I01 = kPi / std::sqrt(AA) * 2.0 / (rho * rho * rho) * atanh_ratio(b);
  P.I02 = -0.5 * P.I01 + kPi * std::sqrt(AA) / (A * rho * ya2);
  P.I03 = kPi * std::sqrt(AA) / (A * ya2);
  const double q = rho * rho - c * c;
  const double inv3 = c >= 0.0 ? 1.0 / (rho * (rho + c)) : (rho - c) / (rho * q);
  const double inv4 = c <= 0.0 ? 1.0 / (rho * (rho - c)) : (rho + c) / (rho * q);
  const double f = 1.0 / (4.0 * kPi * std::sqrt(A) * std::sqrt(AA));
  P.Ip3 = times_a_iy(a, y1, y2, f * inv3);
  P.Ip4 = times_a_iy(a, y1, y2, f * inv4);
  P.K = K_p(a);
  return P;
}

PIntegralPack p_integrals_quadrature(double y1, double y2, double mu, const HermCoupling& a, double tol) {
  const double A = a.det();
  const double c = std::sqrt(A) * mu;
  const Eigen::Matrix2d S = a.real_part();
  const Eigen::Vector2d s0 = a.a12.imag() * S.inverse() * Eigen::Vector2d(-y2, y1);
  const double scale = std::max(0.25, std::sqrt(y1 * y1 + y2 * y2 + mu * mu));
  // s = s0 + scale·u/(1 − u²) on each axis
  auto map = [&](double u, double& jac) {
    const double d = 1.0 - u * u;
    jac = scale * (1.0 + u * u) / (d * d);
    return scale * u / d;
  };
  using V5 = std::array<double, 5>;
  auto integrand = [&](double s1, double s2) {
    const double Q = herm_form(a, cplx(s1, y1), cplx(s2, y2));
    const double R = std::sqrt(Q + c * c);
    V5 v{1.0 / (R * R * R * Q), 1.0 / (Q * Q * R), 1.0 / (Q * Q), 0.0, 0.0};
    v[3] = c / (3.0 * R * R * R * Q) + 2.0 / (3.0 * Q * Q) * (c / R - 1.0);
    v[4] = c / (3.0 * R * R * R * Q) + 2.0 / (3.0 * Q * Q) * (c / R + 1.0);
    return v;
  };
  auto inner = [&](double u1) {
    double j1;
    const double s1 = s0(0) + map(u1, j1);
    auto f2 = [&](double u2) {
      double j2;
      const double s2 = s0(1) + map(u2, j2);
      V5 v = integrand(s1, s2);
      v *= j1 * j2;
      return v;
    };
    return adaptive_gk<V5>(f2, -1.0, 1.0, 0.1 * tol * 1e-2, 0.1 * tol).value;
  };
  const V5 r = adaptive_gk<V5>(inner, -1.0, 1.0, tol * 1e-2, tol).value;
  PIntegralPack P = p_integrals(y1, y2, mu, a);
  P.I01 = r[0];
  P.I02 = r[1];
  P.I03 = r[2];
  const double f = 3.0 / (8.0 * kPi * kPi * std::sqrt(A));
  P.Ip3 = times_a_iy(a, y1, y2, -f * r[3]);
  P.Ip4 = times_a_iy(a, y1, y2, f * r[4]);
  return P;
}

GNutCoefficients gnut_model(cplx xi1, cplx xi2, double mu, double A) {
  (void)xi2;
  const double r = std::sqrt(mu * mu + std::norm(xi1));
  if (r == 0.0) throw std::domain_error("g_NUT is singular at μ = ξ1 = 0");
  GNutCoefficients g;
  g.radial = A + 1.0 / (2.0 * r);
  g.fibre = 1.0 / g.radial;
  g.flat = A;
  return g;
}

double winding_f_S(const NegVertexPoint& s, double eps, int samples) {
  double total = 0.0;
  auto f = [&](int j) {
    const double th = 2.0 * kPi * j / samples;
    return f_S({s.eta1 + eps * std::exp(cplx(0.0, th)), s.eta2, s.mu});
  };
  cplx prev = f(0);
  for (int j = 1; j <= samples; ++j) {
    const cplx cur = f(j);
    total += std::arg(cur / prev);
    prev = cur;
  }
  return total / (2.0 * kPi);
}

}  // namespace ghlab::neg
