#pragma once
// Periodic lattice sums α̃_i over η ↦ η + n, their x-averages ᾱ_i, the β̃ sums,
// the region M⁺ and the periodic first order fields.

#include "ghlab/taubnut_c3.hpp"

namespace ghlab {
template <int N>
double magnitude(const Jet<N>& j) {
  double m = std::abs(j.v);
  for (double d : j.d) m = std::max(m, std::abs(d));
  return m;
}
}  // namespace ghlab

namespace ghlab::pos {

using c3::J4;
using J3 = Jet<3>;

struct TildeAlphaTriple {
  std::array<J4, 3> jet;
  std::array<double, 3> error{};  // certified truncation bound per component
  int terms = 0;
  double operator[](int i) const { return jet[i].v; }
};

/// 1/√k_i for the counterterm 1/(4|n|√k_i): k = a22, a11, a11 + 2a12 + a22.
double edge_weight(int edge, const SymCoupling& a);

TildeAlphaTriple tilde_alpha(const PosVertexPoint& p, const SymCoupling& a, const TruncSpec& trunc = {});

/// ᾱ_i as jets in (μ1, μ2, y).
std::array<J3, 3> bar_alpha_jet(double mu1, double mu2, double y, const SymCoupling& a);
std::array<double, 3> bar_alpha(double mu1, double mu2, double y, const SymCoupling& a);

struct DecayFit {
  std::vector<double> dist;
  std::vector<double> amplitude;  // |c_1| of α̃1 − ᾱ1 in x
  std::vector<double> mean;       // |c_0|
  double slope = 0.0;             // d log amplitude / d dist
};
/// Points (mu1, mu2, y_k); distances are g_a′-distances to 𝔇₁.
DecayFit fourier_decay_fit(const SymCoupling& a, double mu1, double mu2, const std::vector<double>& ys,
                           const TruncSpec& trunc = {1200, 1e-12, TailModel::inverse_square});

/// α̃_e(p) + α̃_e(−p) minus the two dimensional Ooguri-Vafa type sum along 𝔇_e.
Estimate<double> reflection_residual(const PosVertexPoint& p, const SymCoupling& a, int edge,
                                     const TruncSpec& trunc = {});

/// Σ_n over symmetric partial sums of β_i(μ1, μ2, η + n).
Estimate<cplx> tilde_beta(const PosVertexPoint& p, const SymCoupling& a, int i, const TruncSpec& trunc = {});
Estimate<cplx> tilde_beta_sum(const PosVertexPoint& p, const SymCoupling& a, const TruncSpec& trunc = {});

bool mplus_contains(double rho, double A, double eps0);

struct MPlusReport {
  bool inside = false;
  bool V_positive = false;
  bool W_positive = false;
};
MPlusReport mplus_report(const PosVertexPoint& p, const SymCoupling& a, double eps0, const TruncSpec& trunc = {});

struct PosFields {
  Eigen::Matrix2d v;
  double w = 0.0;
  Eigen::Matrix2d V1;
  double W1 = 0.0;
  double det_v = 0.0;
  double E1 = 0.0;
  bool positive = false;
};
PosFields pos_fields_from(const std::array<double, 3>& alpha, const SymCoupling& a);
PosFields pos_fields(const PosVertexPoint& p, const SymCoupling& a, const TruncSpec& trunc = {});

}  // namespace ghlab::pos
