#include "ghlab/numverify.hpp"

#include <map>
#include <mutex>

namespace ghlab {

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return cache.emplace(n, std::move(r)).first->second;
}

namespace detail {
const KronrodTable& gk15() {
  static const KronrodTable t{
      {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
       0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
       0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
       0.207784955007898467600689403773245, 0.0},
      {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
       0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
       0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
       0.204432940075298892414161999234649, 0.209482141084727828012999174891714},
      {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
       0.381830050505118944950369775488975, 0.417959183673469387755102040816327}};
  return t;
}
}  // namespace detail

LaplacianResult fd_laplacian(const ScalarField& f, const Vec& x, const Mat& G, double h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (G + G.transpose()));
  const Vec lam = es.eigenvalues();
  const Mat V = es.eigenvectors();
  const double f0 = f(x);
  double L1 = 0.0, L2 = 0.0, scale = 0.0;
  for (int k = 0; k < x.size(); ++k) {
    const Vec v = V.col(k);
    const double s1 = (f(x + h * v) - 2.0 * f0 + f(x - h * v)) / (h * h);
    const double hh = 0.5 * h;
    const double s2 = (f(x + hh * v) - 2.0 * f0 + f(x - hh * v)) / (hh * hh);
    L1 += lam(k) * s1;
    L2 += lam(k) * s2;
    scale += std::abs(lam(k) * (4.0 * s2 - s1) / 3.0);
  }
  LaplacianResult r;
  r.value = (4.0 * L2 - L1) / 3.0;
  r.error = std::abs(L2 - L1) / 3.0;
  r.scale = scale;
  return r;
}

Vec fd_gradient(const ScalarField& f, const Vec& x, double h) {
  Vec g(x.size());
  for (int k = 0; k < x.size(); ++k) {
    Vec e = Vec::Zero(x.size());
    e(k) = 1.0;
    const double d1 = (f(x + h * e) - f(x - h * e)) / (2.0 * h);
    const double d2 = (f(x + 0.5 * h * e) - f(x - 0.5 * h * e)) / h;
    g(k) = (4.0 * d2 - d1) / 3.0;
  }
  return g;
}

namespace {

Mat tangents(const Patch& p, const Vec& u) {
  const int m = static_cast<int>(u.size());
  const Vec X0 = p.X(u);
  Mat T(X0.size(), m);
  for (int k = 0; k < m; ++k) {
    const double d = 1e-5 * std::max(1.0, p.hi(k) - p.lo(k));
    Vec up = u, um = u, up2 = u, um2 = u;
    up(k) += d;
    um(k) -= d;
    up2(k) += 0.5 * d;
    um2(k) -= 0.5 * d;
    const Vec c1 = (p.X(up) - p.X(um)) / (2.0 * d);
    const Vec c2 = (p.X(up2) - p.X(um2)) / d;
    T.col(k) = (4.0 * c2 - c1) / 3.0;
  }
  return T;
}

double patch_integral(const GradientField& df, const Patch& p, const Mat& g, const Mat& ginv, double sqrtg,
                      int q) {
  const int m = static_cast<int>(p.lo.size());
  const GaussRule& gr = gauss_legendre(q);
  std::vector<int> idx(m, 0);
  double total = 0.0;
  const Vec c = 0.5 * (p.lo + p.hi), r = 0.5 * (p.hi - p.lo);
  double jac = 1.0;
  for (int k = 0; k < m; ++k) jac *= r(k);
  const int n = static_cast<int>(g.rows());
  while (true) {
    Vec u(m);
    double w = 1.0;
    for (int k = 0; k < m; ++k) {
      u(k) = c(k) + r(k) * gr.x[idx[k]];
      w *= gr.w[idx[k]];
    }
    const Vec X = p.X(u);
    const Vec grad = ginv * df(X);
    Mat M(n, n);
    M.col(0) = grad;
    M.rightCols(m) = tangents(p, u);
    total += w * M.determinant();
    int k = 0;
    while (k < m && ++idx[k] == q) idx[k++] = 0;
    if (k == m) break;
  }
  return p.orientation * sqrtg * jac * total;
}

// Unit vector on S^{m-1} from m-1 hyperspherical angles.
Vec hyperspherical(const Vec& ang, int m) {
  Vec w(m);
  double s = 1.0;
  for (int k = 0; k < m - 1; ++k) {
    w(k) = s * std::cos(ang(k));
    s *= std::sin(ang(k));
  }
  w(m - 1) = s;
  return w;
}

void angle_box(int m, Vec& lo, Vec& hi, int offset) {
  for (int k = 0; k < m - 1; ++k) {
    lo(offset + k) = 0.0;
    hi(offset + k) = (k == m - 2) ? 2.0 * kPi : kPi;
  }
}

void orient(Patch& p, const std::function<Vec(const Vec&)>& outward) {
  Vec u = p.lo + 0.37 * (p.hi - p.lo);
  const Vec X = p.X(u);
  const Mat T = tangents(p, u);
  Mat M(X.size(), X.size());
  M.col(0) = outward(X);
  M.rightCols(T.cols()) = T;
  p.orientation = M.determinant() >= 0.0 ? 1.0 : -1.0;
}

Mat normal_basis(const Vec& e) {
  const int n = static_cast<int>(e.size());
  Mat B(n, n);
  B.col(0) = e.normalized();
  int col = 1;
  for (int k = 0; k < n && col < n; ++k) {
    Vec v = Vec::Zero(n);
    v(k) = 1.0;
    for (int j = 0; j < col; ++j) v -= B.col(j).dot(v) * B.col(j);
    if (v.norm() > 1e-6) B.col(col++) = v.normalized();
  }
  return B.rightCols(n - 1);
}

}  // namespace

Certified hypersurface_flux(const GradientField& df, const std::vector<Patch>& patches, const Mat& g,
                            int base_nodes, double rel_tol, int max_nodes, double abs_floor) {
  const Mat ginv = g.inverse();
  const double sqrtg = std::sqrt(g.determinant());
  auto eval = [&](int q) {
    double s = 0.0;
    for (const auto& p : patches) s += patch_integral(df, p, g, ginv, sqrtg, q);
    return s;
  };
  int q = base_nodes;
  double prev = eval(q);
  while (true) {
    const int q2 = 2 * q;
    if (q2 > max_nodes) throw NumericalFailure("flux quadrature did not stabilize at " + std::to_string(q) + " nodes: " + std::to_string(prev));
    const double cur = eval(q2);
    const double diff = std::abs(cur - prev);
    if (diff <= std::max(rel_tol * std::abs(cur), abs_floor)) return {cur, diff};
    prev = cur;
    q = q2;
  }
}

std::vector<Patch> sphere_patches(const Vec& c, double r) {
  const int n = static_cast<int>(c.size());
  Patch p;
  p.lo = Vec(n - 1);
  p.hi = Vec(n - 1);
  angle_box(n, p.lo, p.hi, 0);
  p.X = [c, r, n](const Vec& u) { return Vec(c + r * hyperspherical(u, n)); };
  orient(p, [c](const Vec& X) { return Vec(X - c); });
  return {p};
}

std::vector<Patch> tube_patches(const Vec& p0, const Vec& p1, double r) {
  const int n = static_cast<int>(p0.size());
  const Vec e = (p1 - p0).normalized();
  const Mat B = normal_basis(e);
  const int m = n - 1;  // normal space dimension
  std::vector<Patch> out;
  Patch side;
  side.lo = Vec(n - 1);
  side.hi = Vec(n - 1);
  side.lo(0) = 0.0;
  side.hi(0) = 1.0;
  angle_box(m, side.lo, side.hi, 1);
  side.X = [=](const Vec& u) {
    return Vec(p0 + u(0) * (p1 - p0) + r * (B * hyperspherical(u.tail(m - 1), m)));
  };
  orient(side, [=](const Vec& X) {
    Vec d = X - p0;
    return Vec(d - d.dot(e) * e);
  });
  out.push_back(side);
  for (int end = 0; end < 2; ++end) {
    const Vec base = end == 0 ? p0 : p1;
    const Vec out_dir = end == 0 ? Vec(-e) : e;
    Patch cap;
    cap.lo = Vec(n - 1);
    cap.hi = Vec(n - 1);
    cap.lo(0) = 0.0;
    cap.hi(0) = r;
    angle_box(m, cap.lo, cap.hi, 1);
    cap.X = [=](const Vec& u) { return Vec(base + u(0) * (B * hyperspherical(u.tail(m - 1), m))); };
    orient(cap, [out_dir](const Vec&) { return out_dir; });
    out.push_back(cap);
  }
  return out;
}

Certified sphere_flux(const GradientField& df, const Vec& c, double r, const Mat& g, double rel_tol,
                      double abs_tol) {
  const int n = static_cast<int>(c.size());
  return hypersurface_flux(df, sphere_patches(c, r), g, 6, rel_tol, n <= 4 ? 96 : 48, abs_tol);
}

Certified tube_flux(const GradientField& df, const Vec& p0, const Vec& p1, double r, const Mat& g,
                    double rel_tol, double abs_tol) {
  const int n = static_cast<int>(p0.size());
  return hypersurface_flux(df, tube_patches(p0, p1, r), g, 6, rel_tol, n <= 4 ? 96 : 48, abs_tol);
}

std::vector<cplx> fourier_modes(const std::function<double(double)>& f, int samples, int max_mode) {
  std::vector<double> v(samples);
  for (int j = 0; j < samples; ++j) v[j] = f(static_cast<double>(j) / samples);
  std::vector<cplx> h(2 * max_mode + 1);
  for (int n = -max_mode; n <= max_mode; ++n) {
    cplx acc = 0.0;
    for (int j = 0; j < samples; ++j) acc += v[j] * std::polar(1.0, -2.0 * kPi * n * j / samples);
    h[n + max_mode] = acc / static_cast<double>(samples);
  }
  return h;
}

std::vector<cplx> fourier_modes_2d(const std::function<double(double, double)>& f, int samples, int max_mode) {
  std::vector<double> v(samples * samples);
  for (int i = 0; i < samples; ++i)
    for (int j = 0; j < samples; ++j)
      v[i * samples + j] = f(static_cast<double>(i) / samples, static_cast<double>(j) / samples);
  const int w = 2 * max_mode + 1;
  std::vector<cplx> h(w * w);
  for (int n1 = -max_mode; n1 <= max_mode; ++n1)
    for (int n2 = -max_mode; n2 <= max_mode; ++n2) {
      cplx acc = 0.0;
      for (int i = 0; i < samples; ++i)
        for (int j = 0; j < samples; ++j)
          acc += v[i * samples + j] * std::polar(1.0, -2.0 * kPi * (n1 * i + n2 * j) / samples);
      h[(n1 + max_mode) * w + (n2 + max_mode)] = acc / static_cast<double>(samples * samples);
    }
  return h;
}

Certified lattice_sum_2d(const std::function<double(double, double)>& F, const TruncSpec& spec) {
  const int N = spec.N;
  double s = 0.0;
  for (int i = -N; i <= N; ++i)
    for (int j = -N; j <= N; ++j) s += F(i, j);
  const double M = N + 0.5;
  const double dl = 0.05;
  auto lap = [&](double a, double b) {
    return (F(a + dl, b) + F(a - dl, b) + F(a, b + dl) + F(a, b - dl) - 4.0 * F(a, b)) / (dl * dl);
  };
  auto wedges = [&](int q, const std::function<double(double, double)>& G) {
    const GaussRule& g = gauss_legendre(q);
    double acc = 0.0;
    for (int a = 0; a < q; ++a) {
      const double u = 0.5 * (g.x[a] + 1.0);
      for (int b = 0; b < q; ++b) {
        const double v = g.x[b];
        const double w = 0.5 * g.w[a] * g.w[b] * M * M / (u * u * u);
        const double s1 = M / u, s2 = v * s1;
        acc += w * (G(s1, s2) + G(-s1, -s2) + G(s2, s1) + G(-s2, -s1));
      }
    }
    return acc;
  };
  const double I1 = wedges(24, F), I2 = wedges(48, F);
  const double corr = wedges(24, lap) / 24.0;
  const double d4 = 0.25;
  auto fourth = [&](double a, double b) {
    auto dxx = [&](double aa, double bb) { return F(aa + d4, bb) - 2.0 * F(aa, bb) + F(aa - d4, bb); };
    const double fxxxx = (dxx(a + d4, b) - 2.0 * dxx(a, b) + dxx(a - d4, b)) / std::pow(d4, 4);
    auto dyy = [&](double aa, double bb) { return F(aa, bb + d4) - 2.0 * F(aa, bb) + F(aa, bb - d4); };
    const double fyyyy = (dyy(a, b + d4) - 2.0 * dyy(a, b) + dyy(a, b - d4)) / std::pow(d4, 4);
    const double fxxyy = (dyy(a + d4, b) - 2.0 * dyy(a, b) + dyy(a - d4, b)) / std::pow(d4, 4);
    return 7.0 / 5760.0 * (fxxxx + fyyyy) + fxxyy / 576.0;
  };
  const double err = 2.0 * std::abs(wedges(24, fourth)) + std::abs(I2 - I1);
  if (err > spec.tail_tolerance) throw NumericalFailure("2D lattice tail bound exceeds tolerance; raise N");
  return {s + I2 - corr, err};
}

Certified log_regularized_limit(const std::function<double(double)>& F, double c, double Lambda0,
                                double fit_tol) {
  const double L[3] = {Lambda0, 2.0 * Lambda0, 4.0 * Lambda0};
  double G[3];
  for (int k = 0; k < 3; ++k) G[k] = F(L[k]) - c * std::log(L[k]);
  // least squares for b + d/Λ
  double s1 = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
  for (int k = 0; k < 3; ++k) {
    const double x = 1.0 / L[k];
    s1 += 1;
    sx += x;
    sxx += x * x;
    sy += G[k];
    sxy += x * G[k];
  }
  const double det = s1 * sxx - sx * sx;
  const double b = (sxx * sy - sx * sxy) / det;
  const double d = (s1 * sxy - sx * sy) / det;
  double res = 0.0;
  for (int k = 0; k < 3; ++k) res = std::max(res, std::abs(G[k] - b - d / L[k]));
  if (res > fit_tol * (1.0 + std::abs(b)))
    throw NumericalFailure("regularized limit: ladder fit residual too large (check the log coefficient)");
  return {b, 2.0 * res};
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LinearFit f;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / n;
  for (std::size_t i = 0; i < n; ++i)
    f.max_residual = std::max(f.max_residual, std::abs(y[i] - f.intercept - f.slope * x[i]));
  return f;
}

Path polyline(const std::vector<Vec>& vertices) {
  Path p;
  const int segs = static_cast<int>(vertices.size()) - 1;
  if (segs < 1) throw std::invalid_argument("polyline needs two vertices");
  auto seg = [segs](double t) { return std::clamp(static_cast<int>(std::floor(t)), 0, segs - 1); };
  p.position = [vertices, seg](double t) {
    const int k = seg(t);
    return Vec(vertices[k] + (t - k) * (vertices[k + 1] - vertices[k]));
  };
  p.velocity = [vertices, seg](double t) {
    const int k = seg(t);
    return Vec(vertices[k + 1] - vertices[k]);
  };
  p.breaks.clear();
  for (int k = 0; k <= segs; ++k) p.breaks.push_back(k);
  return p;
}

Path circle(const Vec& center, const Vec& e1, const Vec& e2, double radius) {
  Path p;
  p.position = [=](double t) { return Vec(center + radius * (std::cos(t) * e1 + std::sin(t) * e2)); };
  p.velocity = [=](double t) { return Vec(radius * (-std::sin(t) * e1 + std::cos(t) * e2)); };
  p.breaks = {0.0, kPi, 2.0 * kPi};
  return p;
}

}  // namespace ghlab
