#pragma once
// Negative vertex: the periodic Newtonian potential γ on (C*)^2 x R, Green
// integrals over S = {z1 + z2 = 1}, the first order fields w, v, E, the γ_{p3},
// γ_{p4} kernels with the β data, and the z3, z4 moduli.

#include "ghlab/coupling.hpp"

#include <array>
#include <limits>
#include <memory>
#include <vector>

namespace ghlab::neg {

/// Offset (x1, y1, x2, y2, μ) between a target and a source point.
struct Offset {
  double x1 = 0.0, y1 = 0.0, x2 = 0.0, y2 = 0.0, mu = 0.0;
};
Offset offset(const NegVertexPoint& p, const NegVertexPoint& q);

/// Lattice sums with a fixed coupling. Ewald split for ϱ small, pure Fourier
/// series in x otherwise.
class LatticeKernel {
 public:
  explicit LatticeKernel(const HermCoupling& a);

  const HermCoupling& coupling() const { return a_; }

  double gamma(const Offset& d) const;
  /// γ and its gradient in (x1, y1, x2, y2, μ).
  std::array<double, 6> gamma_grad(const Offset& d) const;
  /// x-average of γ: −1/(4π√𝔸 ϱ).
  double gamma_average(double y1, double y2, double mu) const;
  /// (y, μ)-gradient of the x-average.
  std::array<double, 3> gamma_average_grad(double y1, double y2, double mu) const;

  /// γ_{13}, γ_{23}. Valid for every μ; γ_{p4}(η, μ) = γ_{p3}(η, −μ).
  std::array<cplx, 2> gamma_p3(const Offset& d) const;
  /// x-average of γ_{p3}.
  std::array<cplx, 2> gamma_p3_average(double y1, double y2, double mu) const;

  double varrho(double y1, double y2, double mu) const;

  struct Tables;

 private:
  template <class T>
  T gamma_impl(const T& x1, const T& y1, const T& x2, const T& y2, const T& mu) const;

  HermCoupling a_;
  double A_, AA_, m_;
  Eigen::Matrix2d S_, Sinv_;
  std::shared_ptr<const Tables> tab_;
};

double gamma(const NegVertexPoint& p, const HermCoupling& a);

/// Symmetric square truncation |n|∞ ≤ N with the continuum tail bound.
Estimate<double> gamma_lattice_sum(const NegVertexPoint& p, const HermCoupling& a, int N);

/// γ_± at the single point (η, μ), sign = ±1.
double gamma_pm(cplx eta1, cplx eta2, double mu, const HermCoupling& a, int sign);

std::array<cplx, 2> gamma_p3(const NegVertexPoint& p, const HermCoupling& a);
std::array<cplx, 2> gamma_p4(const NegVertexPoint& p, const HermCoupling& a);

/// Symmetric truncation of γ_{p3} with the pairing n, −n. Error is the size of
/// the outermost shell times N.
Estimate<std::array<cplx, 2>> gamma_p3_lattice_sum(const NegVertexPoint& p, const HermCoupling& a, int N);

// ---------------------------------------------------------------------------
// Closed forms

/// γ̄̄_1, γ̄̄_2, γ̄̄_3. Throws std::domain_error when a log argument is not positive.
std::array<double, 3> gammabarbar(double y1, double y2, double mu, const HermCoupling& a);

/// Counterterm coefficients 1/(2√a22), 1/(2√a11), 1/(2√(a11 + 2Re a12 + a22)).
std::array<double, 3> counterterm(const HermCoupling& a);

struct PIntegralPack {
  double gplus = 0.0, gminus = 0.0;
  std::array<cplx, 2> gp3{}, gp4{};
  double I01 = 0.0, I02 = 0.0, I03 = 0.0;
  std::array<cplx, 2> Ip3{}, Ip4{};
  std::array<cplx, 2> K{};
};

PIntegralPack p_integrals(double y1, double y2, double mu, const HermCoupling& a);
/// I-integrals from their defining integrals over R^2 (adaptive, nested).
PIntegralPack p_integrals_quadrature(double y1, double y2, double mu, const HermCoupling& a,
                                     double tol = 1e-10);

std::array<cplx, 2> K_p(const HermCoupling& a);

/// −2πi z_p / f_S + K_p.
std::array<cplx, 2> beta_p_sum(const NegVertexPoint& p, const HermCoupling& a);

// ---------------------------------------------------------------------------
// Quadrature over S

struct SQuadOptions {
  int order = 6;            // Gauss-Legendre nodes per panel side
  double h_max = 0.5;       // panel size away from the punctures
  double h_band = 0.125;    // panel size where |z1| or |z2| is of order one
  double refine = 0.5;      // panel size / distance to the focus
  double r_floor = 0.0;     // finest scale; 0 uses the focus distance to S
  double tail_margin = 0.0; // extra length before the analytic tails; 0 picks one from κ_a
};

struct SNode {
  cplx eta1, eta2;
  double area = 0.0;         // d𝒜
  double w11 = 0.0, w22 = 0.0;
  cplx w21;                  // i dη_2 ∧ dη̄_1
};

/// Quadrature of S refined toward a set of focus points; the three ends beyond
/// tail_start are handled by the x-averaged kernels.
class SMesh {
 public:
  SMesh(const HermCoupling& a, const std::vector<NegVertexPoint>& focus, const SQuadOptions& opt = {});

  const HermCoupling& coupling() const { return kernel_.coupling(); }
  const LatticeKernel& kernel() const { return kernel_; }
  const std::vector<SNode>& nodes() const { return nodes_; }
  const std::array<double, 3>& tail_start() const { return tail_; }

  /// γ_1..γ_4. cutoff = ∞ gives the regularized limit; finite cutoff gives the
  /// truncated integral with its log 2Λ counterterm.
  std::array<double, 4> gamma_i(const NegVertexPoint& p,
                                double cutoff = std::numeric_limits<double>::infinity()) const;
  /// The same integrals with the x-averaged kernel: γ̄_1..γ̄_4.
  std::array<double, 4> gamma_bar_i(double y1, double y2, double mu) const;
  /// −2π√A ∫_S γ d𝒜 (v up to its additive constant) and its gradient in (x1, y1, x2, y2, μ).
  std::array<double, 6> v_grad(const NegVertexPoint& p) const;
  /// β_{13}, β_{23}, β_{14}, β_{24}; cutoff as for gamma_i with |y'|_a < Λ.
  std::array<cplx, 4> beta_p34(const NegVertexPoint& p,
                               double cutoff = std::numeric_limits<double>::infinity()) const;
  /// ∫ d𝒜 over the chart patch x2 ∈ [x0, x1], y2 ∈ [y0, y1] (independent adaptive rule).
  static double patch_area(const HermCoupling& a, double x0, double x1, double y0, double y1);

 private:
  LatticeKernel kernel_;
  std::vector<SNode> nodes_;
  std::array<double, 3> tail_{};
};

struct GammaFields {
  double gamma = 0.0;
  std::array<double, 4> g{};
  Eigen::Matrix2cd w;
  double v = 0.0;
  double E1 = 0.0;
  bool positive = false;  // A + v > 0 and a + w > 0
};

GammaFields fields_from(const std::array<double, 4>& g, double gamma, const HermCoupling& a);
GammaFields neg_fields(const NegVertexPoint& p, const SMesh& mesh);
GammaFields neg_fields(const NegVertexPoint& p, const HermCoupling& a, const SQuadOptions& opt = {});

double gamma_i(const NegVertexPoint& p, const HermCoupling& a, int i, const SQuadOptions& opt = {});

/// Chart patch of S: x2 ∈ [x0, x1], y2 ∈ [y0, y1], optionally displaced by (dη1, dη2, dμ).
struct SPatch {
  double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;
  cplx shift1 = 0.0, shift2 = 0.0;
  double shift_mu = 0.0;
};

struct FluxResult {
  double flux = 0.0;
  double error = 0.0;     // difference between two quadrature levels
  double area = 0.0;      // ∫ d𝒜 over the patch
  double expected = 0.0;  // −2π√A·area
  double ratio() const { return flux / expected; }
};

/// Flux of grad v through the boundary of the sphere bundle of radius r over the patch.
FluxResult flux_S(const HermCoupling& a, const SPatch& patch, double r, const SQuadOptions& opt = {});

/// (1/2π) Δarg f_S along the loop η1 = s1 + ε e^{iθ} at fixed η2 = s2.
double winding_f_S(const NegVertexPoint& s, double eps, int samples = 256);

// ---------------------------------------------------------------------------
// z3, z4 and the symplectic area

struct LogModZ34 {
  double log_z3 = 0.0, log_z4 = 0.0, log_fS = 0.0;
  double error = 0.0;
  double constant() const { return log_z3 + log_z4 - log_fS; }
};

/// Integrates d log|z3| = V dμ + Re(β_{p3} dη_p) and d log|z4| = −V dμ + Re((β_{p4} − K_p) dη_p)
/// along a path in (x1, y1, x2, y2, μ), starting from log|z3| = log|z4| = 0.
LogModZ34 logmod_z34(const Path& path, const SMesh& mesh, int nodes_per_segment = 8);
/// ∫ V dμ along the segment (η, μ0) → (η, μ1), with the signs of log|z3|.
double logmod_z3_mu(const NegVertexPoint& p, double mu0, double mu1, const SMesh& mesh, int nodes = 12);

struct SymplecticArea {
  double value = 0.0;
  double max_gamma4 = 0.0;
  bool decayed = false;  // max |γ4| on the grid below 1e−3
};
SymplecticArea symplectic_area(const HermCoupling& a, double y1, double y2, double mu, int grid = 8,
                               const SQuadOptions& opt = {});

struct GNutCoefficients {
  double radial = 0.0;  // dμ², |dξ1|²
  double fibre = 0.0;   // connection form squared
  double flat = 0.0;    // |dξ2|²
};
GNutCoefficients gnut_model(cplx xi1, cplx xi2, double mu, double A);

}  // namespace ghlab::neg
