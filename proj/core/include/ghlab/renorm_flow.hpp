#pragma once
// Renormalization flow d(p_i^2)/dλ = −1/(2p_j) − 1/(2p_k) for the couplings of
// either vertex, its exact parametrized solution and conserved quantities.

#include "ghlab/coupling.hpp"

#include <array>
#include <optional>
#include <vector>

namespace ghlab::flow {

struct FlowState {
  double p1 = 1.0, p2 = 1.0, p3 = 1.0;
  double im_a21 = 0.0;
  double lambda = 0.0;
};

struct FlowConstants {
  double K1 = 0.0, K2 = 0.0, K3 = 0.0;
  double t = 1.0;
};

struct Derivative {
  std::array<double, 3> dp2;  // d(p_i^2)/dλ
  std::array<double, 3> dp;   // dp_i/dλ
  double d_im_a21 = 0.0;
};

Derivative flow_rhs(const FlowState& s);

/// (p1−p2)^2 Σp and (p1−p3)^2 Σp.
std::array<double, 2> conserved(const FlowState& s);

struct Trajectory {
  std::vector<FlowState> states;
  std::optional<double> breakdown_lambda;
  double max_drift_rate = 0.0;  // max |ΔC|/Δλ over accepted steps
};

struct IntegrateOptions {
  double drift_tolerance = 1e-10;  // per unit λ, relative to 1 + |C|
  double min_step = 1e-9;
};

/// RK4 with step halving on conserved-quantity drift. When the flow reaches
/// min p_i = 0 before lambda_end the breakdown is located in the regularized
/// time s (dλ/ds = p1p2p3), where the system is linear in p.
Trajectory integrate(const FlowState& s0, double lambda_end, double step, const IntegrateOptions& opt = {});

FlowState closed_form(const FlowConstants& c, double t);
double closed_form_lambda(double K1, double K2, double K3, double t);
/// Constants (K1, K2, K3, t) through the state, from the conserved combinations.
FlowConstants fit_constants(const FlowState& s);

struct NeckEstimate {
  double log_scales = 0.0;      // K3
  double log_diameter = 0.0;    // diameter ~ e^{K3}
};
NeckEstimate neck_estimate(double A_max);

std::array<double, 3> p_variables(const SymCoupling& a);
std::array<double, 3> p_variables(const HermCoupling& a);
SymCoupling sym_from_p(const std::array<double, 3>& p);
HermCoupling herm_from_p(const std::array<double, 3>& p, double im_a21);

/// Max discrepancy between the two flow vector fields at the p-values of the pair.
double mirror_discrepancy(const SymCoupling& sym, const HermCoupling& herm);

}  // namespace ghlab::flow
