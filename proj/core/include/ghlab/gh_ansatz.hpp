#pragma once
// Generalized Gibbons-Hawking data from V^{ij}, W^{pq̄} and their derivatives.
// Base coordinates are ordered (μ_1..μ_n, x_1, y_1, .., x_m, y_m) with η_p = x_p + i y_p.

#include "ghlab/numverify.hpp"

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

namespace ghlab {

using CMat = Eigen::MatrixXcd;

struct FieldJet {
  Mat V;                                  // n×n real symmetric
  CMat W;                                 // m×m Hermitian
  std::vector<Mat> dV;                    // ∂V/∂u_k, k over all base coordinates
  std::vector<CMat> dW;
  std::vector<std::vector<Mat>> d2V;      // optional
  std::vector<std::vector<CMat>> d2W;     // optional
  int n() const { return static_cast<int>(V.rows()); }
  int m() const { return static_cast<int>(W.rows()); }
  int dim() const { return n() + 2 * m(); }
  bool has_second() const { return !d2V.empty() && !d2W.empty(); }
};

enum class Geometry { C2, C3, PositiveVertex, NegativeVertex };

struct GHBundle {
  Geometry geometry = Geometry::C3;
  Mat V;
  CMat W;
  std::vector<Mat> F;  // F_j as antisymmetric matrices, F = Σ_{a<b} F[a][b] du_a∧du_b
  double cy_residual = 0.0;   // det V − det W
  double volume_error = 0.0;  // det W / det V − 1
  bool valid = true;
  std::string flag;
};

class AnsatzError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// 2×2 and smaller determinants with compensated products; LU above that.
double det_compensated(const Mat& M);
double det_hermitian(const CMat& W);

GHBundle assemble(const FieldJet& f, Geometry geometry);

/// Largest violation of the linear integrability conditions; needs second derivatives.
double integrability_residual(const FieldJet& f);

/// det(V^{-1}) − W^{-1} for the Harvey-Lawson solution on C^3.
double harvey_lawson_check(cplx z0, cplx z1, cplx z2);

using CurvatureProvider = std::function<std::vector<Mat>(const Vec&)>;

/// Max |dF_j| component by central differences, relative to the size of the
/// individual derivative terms.
double exterior_derivative_residual(const CurvatureProvider& F, const Vec& x, double h);

/// Round 2-sphere in the 3-space orthogonal to a ray direction, oriented so that
/// (direction, outward normal, sphere frame) is positive in the base.
struct LinkingSphere {
  Vec center;
  Mat frame;  // dim × 3 orthonormal columns
  double radius = 0.0;
};
LinkingSphere linking_sphere(const Vec& center, const Vec& direction, double radius);

/// (1/2π)∮ F_j per generator, refined until two levels agree within tol.
std::vector<Certified> chern_flux(const CurvatureProvider& F, const LinkingSphere& s, double tol = 1e-3);

}  // namespace ghlab
