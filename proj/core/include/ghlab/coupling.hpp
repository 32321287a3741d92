#pragma once
// Coupling matrices, base points, reference metrics and distance scales for the
// three base geometries: R^2 x C, R^2 x (S^1 x R) and (S^1 x R)^2 x R.

#include "ghlab/numverify.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>

namespace ghlab {

class InvalidCoupling : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Real symmetric positive definite 2x2 coupling a_ij.
struct SymCoupling {
  double a11 = 1.0, a12 = 0.0, a22 = 1.0;

  static SymCoupling make(double a11, double a12, double a22);
  static SymCoupling identity() { return {1.0, 0.0, 1.0}; }

  double det() const { return a11 * a22 - a12 * a12; }
  Eigen::Matrix2d matrix() const;
  Eigen::Matrix2d inverse() const;
  SymCoupling scaled(double s) const { return {s * a11, s * a12, s * a22}; }
};

/// Hermitian positive definite 2x2 coupling a_{p q̄}, a21 = conj(a12).
struct HermCoupling {
  double a11 = 1.0, a22 = 1.0;
  cplx a12 = 0.0;

  static HermCoupling make(double a11, cplx a12, double a22);
  static HermCoupling identity() { return {1.0, 1.0, 0.0}; }

  cplx a21() const { return std::conj(a12); }
  cplx entry(int p, int q) const;  // a_{p q̄}, indices 0/1
  double det() const { return a11 * a22 - std::norm(a12); }
  double big_det() const { return det() + a12.imag() * a12.imag(); }
  /// S = [[a11, Re a12], [Re a12, a22]], det S = 𝔸.
  Eigen::Matrix2d real_part() const;
  /// a^{p q̄} with a_{j q̄} a^{p q̄} = δ_j^p.
  cplx inverse_entry(int p, int q) const;
  HermCoupling scaled(double s) const { return {s * a11, s * a22, s * a12}; }
};

struct C3Point {
  double mu1 = 0.0, mu2 = 0.0;
  cplx eta = 0.0;
};

struct PosVertexPoint {
  double mu1 = 0.0, mu2 = 0.0;
  cplx eta = 0.0;
  PosVertexPoint canonical() const;
};

struct NegVertexPoint {
  cplx eta1 = 0.0, eta2 = 0.0;
  double mu = 0.0;
  NegVertexPoint canonical() const;
};

struct GeomScales {
  double norm_a = 0.0;
  double varrho = 0.0;
  double dist_D = 0.0;  // distance to 𝔇, or R = distance to S for the negative vertex
  double ell = 0.0;
  double ell_tilde = 0.0;
};

double wrap_unit(double x);

// Reference metrics, coordinates in the order listed.
Mat metric_c3(const SymCoupling& a);             // (μ1, μ2, x, y)
Mat metric_c3_prime(const SymCoupling& a);       // (μ1, μ2, y)
Mat metric_neg(const HermCoupling& a);           // (x1, y1, x2, y2, μ)
Mat metric_neg_prime(const HermCoupling& a);     // (y1, y2, μ)

double norm_a(const C3Point& p, const SymCoupling& a);
double varrho(double mu1, double mu2, double y, const SymCoupling& a);
double norm_a(const NegVertexPoint& p, const HermCoupling& a);
double varrho(double y1, double y2, double mu, const HermCoupling& a);

/// g_a-distance to the ray 𝔇_edge (edge = 1, 2, 3) of the trivalent graph.
double ray_distance(double mu1, double mu2, double eta_abs2, const SymCoupling& a, int edge);
double trivalent_graph_distance(const C3Point& p, const SymCoupling& a);
/// Periodic version: η is reduced to the nearest lattice translate.
double trivalent_graph_distance(const PosVertexPoint& p, const SymCoupling& a);
/// g_a'-distance from (μ1, μ2, y) to 𝔇_edge in the averaged geometry.
double ray_distance_prime(double mu1, double mu2, double y, const SymCoupling& a, int edge);

GeomScales scales(const C3Point& p, const SymCoupling& a);
GeomScales scales(const PosVertexPoint& p, const SymCoupling& a);
GeomScales scales(const NegVertexPoint& p, const HermCoupling& a);

// The surface S = {z1 + z2 = 1} with z_p = exp(2πi η_p).

cplx z_of(cplx eta);
cplx f_S(const NegVertexPoint& p);

struct SurfacePoint {
  NegVertexPoint point;
  cplx z1, z2;
  double area_density = 0.0;  // d𝒜 / dx2 dy2
};

SurfacePoint surface_S(cplx z2, const HermCoupling& a);

struct AmoebaTest {
  bool inside = false;
  double slack = 0.0;
};
AmoebaTest amoeba_contains(double y1, double y2);

/// k_{n1,n2} = 2π (A a^{p q̄} n_p n_q / 𝔸)^{1/2}.
double k_mode(int n1, int n2, const HermCoupling& a);
double kappa_a(const HermCoupling& a);

/// g_a-distance to S, by minimization over the parametrization of S.
double distance_to_S(const NegVertexPoint& p, const HermCoupling& a);
/// g_a'-distance from (y1, y2, μ) to the image of S in R^3.
double distance_to_amoeba(double y1, double y2, double mu, const HermCoupling& a);

}  // namespace ghlab
