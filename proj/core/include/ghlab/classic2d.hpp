#pragma once
// Complex dimension two: the Taub-NUT and Ooguri-Vafa potentials, the semiflat
// deviation and the modulus-level functional equations z1 z0 = η and
// z1 z2 = 1 − e^{2πiη}. Base coordinates are ordered (μ, x, y) with η = x + iy.

#include "ghlab/numverify.hpp"

#include <array>

namespace ghlab::classic2d {

using Vec3 = std::array<double, 3>;

double taubnut_potential(double mu, cplx eta, double A);
/// ∇V in (μ, x, y).
Vec3 taubnut_gradient(double mu, cplx eta);

struct OVParams {
  double A = 0.0;
  TruncSpec trunc{};
};

Estimate<double> ov_potential(double mu, cplx eta, const OVParams& p);
Estimate<Vec3> ov_gradient(double mu, cplx eta, const OVParams& p);
/// V − A + γ_E − log 2 + ½ log(μ² + y²); requires μ² + y² ≥ 1.
Estimate<double> ov_semiflat_deviation(double mu, cplx eta, const OVParams& p);

/// β for z1 (which = 1) or z0 (which = 0): 1/(2η) ∓ μ/(2η r).
cplx beta_taubnut(int which, double mu, cplx eta);
/// β_+ (sign = +1) and β_− (sign = −1) with θ_∞ = 0, symmetric partial sums.
Estimate<cplx> beta_ov(int sign, double mu, cplx eta, const TruncSpec& trunc);

/// Components (μ, x, y) of d log|z|: ±V dμ + Re(β dη).
Vec3 dlogmod_taubnut(int which, double mu, cplx eta, double A);
Vec3 dlogmod_ov(int which, double mu, cplx eta, const OVParams& p);

struct LogmodResult {
  double log_z_first = 0.0;   // log|z1|
  double log_z_second = 0.0;  // log|z0| (Taub-NUT) or log|z2| (Ooguri-Vafa)
  double residual = 0.0;      // |z z'| − |η| or |z z'| − |1 − e^{2πiη}|
  double error = 0.0;
};

/// Path from the anchor to the target in (μ, x, y); the anchor fixes
/// |z1| = |z0| = |η|^{1/2}.
LogmodResult logmod_functional_eq_taubnut(const Path& path, double A);
/// Same for Ooguri-Vafa with |z1| = |z2| = |1 − e^{2πiη}|^{1/2} at the anchor.
LogmodResult logmod_functional_eq_ov(const Path& path, const OVParams& p);

/// Change of log|z1| (sign = +1) or log|z2| (sign = −1) along the x-circle at fixed (μ, y).
Estimate<double> ov_loop_period(int sign, double mu, double y, const OVParams& p);

}  // namespace ghlab::classic2d
