#pragma once
// The C^3 ansatz: α1, α2, α3 in closed form with analytic derivatives, the first
// order fields v^{ij}, w, E^{(1)}, the transverse Taub-NUT model, the β_i improper
// integrals and the moduli log|z_i|. Jet variables are ordered (μ1, μ2, x, y).

#include "ghlab/coupling.hpp"
#include "ghlab/gh_ansatz.hpp"
#include "ghlab/jet.hpp"

#include <array>

namespace ghlab::c3 {

using J4 = Jet<4>;

/// α for edge 1, 2, 3 as a function of jet coordinates.
J4 alpha_edge(int edge, const J4& mu1, const J4& mu2, const J4& x, const J4& y, const SymCoupling& a);

struct AlphaTriple {
  std::array<J4, 3> jet;
  double operator[](int i) const { return jet[i].v; }
};

AlphaTriple alpha(const C3Point& p, const SymCoupling& a);
double alpha_value(int edge, const C3Point& p, const SymCoupling& a);

/// ∂α/∂η = ½(∂_x − i∂_y)α.
cplx d_eta(const J4& f);

/// max over the three identities of |∂α_i/∂(edge direction) − √A/(2π|μ|_a²)|.
double integrability_residual(const C3Point& p, const SymCoupling& a);

struct C3Fields {
  Eigen::Matrix2d v;
  double w = 0.0;
  Eigen::Matrix2d V1;
  double W1 = 0.0;
  double det_v = 0.0;
  double E1 = 0.0;
};

C3Fields c3_fields(const C3Point& p, const SymCoupling& a);
/// E^{(1)} from W_(1)/det V_(1) − 1, the second evaluation route.
double E1_ratio_route(const C3Point& p, const SymCoupling& a);

/// V_(1), W_(1) with analytic first and second derivatives in (μ1, μ2, x, y).
FieldJet field_jet(const C3Point& p, const SymCoupling& a);

struct TaubModel {
  Eigen::Matrix2d V;
  double W = 0.0;
  double dev_V = 0.0;  // max entry of |V_(1) − V_Taub|
  double dev_W = 0.0;
};
TaubModel taub_model(const C3Point& p, const SymCoupling& a, int edge);

/// β_i (i = 0, 1, 2) by adaptive quadrature along a ray to the limit direction.
/// variant 0 and 1 use two different rays, for path-independence checks.
Estimate<cplx> beta(const C3Point& p, const SymCoupling& a, int i, int variant = 0);

/// Components (μ1, μ2, x, y) of d log|z_i|.
std::array<double, 4> dlogmod(const C3Point& p, const SymCoupling& a, int which);

/// log|z_i| at the end of the path, given its value at the start.
Estimate<double> logmod_z(const Path& path, const SymCoupling& a, int which, double start_value);

/// Anchor normalization |z0| = |z1| = |z2| = |η|^{1/3}.
double anchor_log(const C3Point& anchor);

std::array<double, 3> sl_fibration(const C3Point& p);

}  // namespace ghlab::c3
