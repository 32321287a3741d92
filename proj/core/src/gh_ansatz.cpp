#include "ghlab/gh_ansatz.hpp"

#include <cmath>

namespace ghlab {

namespace {

double diff_of_products(double a, double b, double c, double d) {
  const double w = c * d;
  const double e = std::fma(-c, d, w);
  return std::fma(a, b, -w) + e;
}

void add_form(Eigen::MatrixXcd& M, int a, int b, cplx c) {
  M(a, b) += c;
  M(b, a) -= c;
}

}  // namespace

double det_compensated(const Mat& M) {
  if (M.rows() == 1) return M(0, 0);
  if (M.rows() == 2) return diff_of_products(M(0, 0), M(1, 1), M(0, 1), M(1, 0));
  return M.determinant();
}

double det_hermitian(const CMat& W) {
  if (W.rows() == 1) return W(0, 0).real();
  if (W.rows() == 2) return diff_of_products(W(0, 0).real(), W(1, 1).real(), std::abs(W(0, 1)), std::abs(W(0, 1)));
  return W.determinant().real();
}

GHBundle assemble(const FieldJet& f, Geometry geometry) {
  const int n = f.n(), m = f.m(), dim = f.dim();
  if (static_cast<int>(f.dV.size()) != dim || static_cast<int>(f.dW.size()) != dim)
    throw AnsatzError("field jet is missing first derivatives");
  GHBundle b;
  b.geometry = geometry;
  b.V = f.V;
  b.W = f.W;
  if (Eigen::LLT<Mat>(f.V).info() != Eigen::Success) {
    b.valid = false;
    b.flag = "V is not positive definite";
  } else if (Eigen::LLT<CMat>(f.W).info() != Eigen::Success) {
    b.valid = false;
    b.flag = "W is not positive definite";
  }
  const double dV = det_compensated(f.V), dW = det_hermitian(f.W);
  b.cy_residual = dV - dW;
  b.volume_error = dW / dV - 1.0;

  const cplx I(0.0, 1.0);
  auto xi = [&](int p) { return n + 2 * p; };
  auto yi = [&](int p) { return n + 2 * p + 1; };
  for (int j = 0; j < n; ++j) {
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(dim, dim);
    // i/2 ∂W^{pq̄}/∂μ_j dη_p∧dη̄_q
    for (int p = 0; p < m; ++p)
      for (int q = 0; q < m; ++q) {
        const cplx c = 0.5 * I * f.dW[j](p, q);
        if (p != q) add_form(M, xi(p), xi(q), c);
        add_form(M, xi(p), yi(q), -I * c);
        add_form(M, yi(p), xi(q), I * c);
        if (p != q) add_form(M, yi(p), yi(q), c);
      }
    // i(∂V/∂η_p dμ_i∧dη_p − ∂V/∂η̄_p dμ_i∧dη̄_p)
    for (int i = 0; i < n; ++i)
      for (int p = 0; p < m; ++p) {
        const cplx dh = 0.5 * (f.dV[xi(p)](i, j) - I * f.dV[yi(p)](i, j));
        add_form(M, i, xi(p), I * dh - I * std::conj(dh));
        add_form(M, i, yi(p), I * dh * I + I * std::conj(dh) * I);
      }
    b.F.push_back(M.real());
  }
  return b;
}

double integrability_residual(const FieldJet& f) {
  if (!f.has_second()) throw AnsatzError("integrability residual needs second derivatives");
  const int n = f.n(), m = f.m();
  const cplx I(0.0, 1.0);
  double r = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) r = std::max(r, std::abs(f.dV[k](i, j) - f.dV[j](i, k)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q) {
          const int xp = n + 2 * p, yp = xp + 1, xq = n + 2 * q, yq = xq + 1;
          // 4∂_{η_p}∂_{η̄_q} = (∂x_p − i∂y_p)(∂x_q + i∂y_q)
          const cplx lap = f.d2V[xp][xq](i, j) + I * f.d2V[xp][yq](i, j) - I * f.d2V[yp][xq](i, j) +
                           f.d2V[yp][yq](i, j);
          r = std::max(r, std::abs(f.d2W[i][j](p, q) + lap));
        }
  return r;
}

double harvey_lawson_check(cplx z0, cplx z1, cplx z2) {
  const double s0 = std::norm(z0), s1 = std::norm(z1), s2 = std::norm(z2);
  if ((s0 == 0.0) + (s1 == 0.0) + (s2 == 0.0) > 1) throw AnsatzError("at most one coordinate may vanish");
  const double detVinv = diff_of_products(s0 + s1, s0 + s2, s0, s0);
  const double Winv = s1 * s2 + s0 * s2 + s0 * s1;
  return detVinv - Winv;
}

double exterior_derivative_residual(const CurvatureProvider& F, const Vec& x, double h) {
  const int dim = static_cast<int>(x.size());
  std::vector<std::vector<Mat>> dF(dim);
  for (int c = 0; c < dim; ++c) {
    auto along = [&](double t) {
      Vec y = x;
      y(c) += t;
      return F(y);
    };
    const auto p1 = along(h), m1 = along(-h), p2 = along(0.5 * h), m2 = along(-0.5 * h);
    for (std::size_t j = 0; j < p1.size(); ++j)
      dF[c].push_back((4.0 * (p2[j] - m2[j]) / h - (p1[j] - m1[j]) / (2.0 * h)) / 3.0);
  }
  double worst = 0.0;
  for (std::size_t j = 0; j < dF[0].size(); ++j)
    for (int a = 0; a < dim; ++a)
      for (int b = a + 1; b < dim; ++b)
        for (int c = b + 1; c < dim; ++c) {
          const double t1 = dF[a][j](b, c), t2 = dF[b][j](c, a), t3 = dF[c][j](a, b);
          const double s = std::abs(t1) + std::abs(t2) + std::abs(t3);
          if (s > 0.0) worst = std::max(worst, std::abs(t1 + t2 + t3) / std::max(s, 1.0));
        }
  return worst;
}

LinkingSphere linking_sphere(const Vec& center, const Vec& direction, double radius) {
  const int dim = static_cast<int>(center.size());
  if (dim != 4) throw AnsatzError("linking spheres are built in a 4-dimensional base");
  Mat basis(dim, dim);
  basis.col(0) = direction.normalized();
  int filled = 1;
  for (int k = 0; k < dim && filled < dim; ++k) {
    Vec e = Vec::Unit(dim, k);
    for (int c = 0; c < filled; ++c) e -= basis.col(c).dot(e) * basis.col(c);
    if (e.norm() > 1e-8) basis.col(filled++) = e.normalized();
  }
  if (basis.determinant() < 0.0) basis.col(3) *= -1.0;
  return {center, basis.rightCols(3), radius};
}

std::vector<Certified> chern_flux(const CurvatureProvider& F, const LinkingSphere& s, double tol) {
  auto level = [&](int nodes) {
    const GaussRule& gt = gauss_legendre(nodes);
    const GaussRule& gp = gauss_legendre(2 * nodes);
    std::vector<double> acc;
    for (int a = 0; a < nodes; ++a) {
      const double th = 0.5 * kPi * (gt.x[a] + 1.0), wt = 0.5 * kPi * gt.w[a];
      for (int b = 0; b < 2 * nodes; ++b) {
        const double ph = kPi * (gp.x[b] + 1.0), wp = kPi * gp.w[b];
        const Vec n = std::cos(th) * s.frame.col(0) + std::sin(th) * std::cos(ph) * s.frame.col(1) +
                      std::sin(th) * std::sin(ph) * s.frame.col(2);
        const Vec Xt = s.radius * (-std::sin(th) * s.frame.col(0) + std::cos(th) * std::cos(ph) * s.frame.col(1) +
                                   std::cos(th) * std::sin(ph) * s.frame.col(2));
        const Vec Xp = s.radius * std::sin(th) * (-std::sin(ph) * s.frame.col(1) + std::cos(ph) * s.frame.col(2));
        const std::vector<Mat> f = F(s.center + s.radius * n);
        acc.resize(f.size(), 0.0);
        for (std::size_t j = 0; j < f.size(); ++j) acc[j] += wt * wp * Xt.dot(f[j] * Xp);
      }
    }
    for (double& v : acc) v /= 2.0 * kPi;
    return acc;
  };
  std::vector<double> prev = level(8);
  for (int nodes = 16; nodes <= 128; nodes *= 2) {
    const std::vector<double> cur = level(nodes);
    double diff = 0.0;
    for (std::size_t j = 0; j < cur.size(); ++j) diff = std::max(diff, std::abs(cur[j] - prev[j]));
    if (diff <= tol) {
      std::vector<Certified> out;
      for (std::size_t j = 0; j < cur.size(); ++j) out.push_back({cur[j], std::abs(cur[j] - prev[j])});
      return out;
    }
    prev = cur;
  }
  throw NumericalFailure("Chern flux quadrature did not stabilize");
}

}  // namespace ghlab
