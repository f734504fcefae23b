#pragma once

#include <optional>
#include <vector>

#include "esjj/errors.hpp"

namespace esjj {

// Physical and geometric constants of the tapered-junction strip problem.
// alpha: dissipation across the junction, epsilon: dissipation along it,
// lambda: taper constant (>= 0), length: strip width l, horizon: final time T.
struct Parameters {
  double alpha = 1.0;
  double epsilon = 1.0;
  double lambda = 0.0;
  double length = 1.0;
  double horizon = 1.0;

  // true when alpha*epsilon < 1, the singular-perturbation regime where the
  // mode spectrum splits into a circular band between two real thresholds
  bool small_product_regime() const { return alpha * epsilon < 1.0; }
};

// Throws on invalid fields, returns the validated value otherwise.
Parameters validate_params(double alpha, double epsilon, double lambda, double length,
                           double horizon);
inline void validate_params(const Parameters& p) {
  validate_params(p.alpha, p.epsilon, p.lambda, p.length, p.horizon);
}

enum class Branch { Hyperbolic, Circular, Degenerate };

// Per-mode spectral quantities. omega_sq = g_n^2 - b_n keeps its sign; the
// branch records which kernel formula applies. r_slow/r_fast are the two real
// decay rates on the hyperbolic branch, with r_slow = b/(g+omega) computed
// without cancellation (r_slow*r_fast = b exactly).
struct ModeData {
  int n = 1;
  double gamma_n = 0.0;
  double b_n = 0.0;
  double g_n = 0.0;
  double omega_sq = 0.0;
  Branch branch = Branch::Degenerate;
  double omega = 0.0;   // sqrt(|omega_sq|); 0 on the Degenerate branch
  double r_slow = 0.0;  // hyperbolic only: g - omega
  double r_fast = 0.0;  // hyperbolic only: g + omega
};

// |omega_sq| <= deg_tol(g) selects the Degenerate branch.
inline double deg_tol(double g_n) {
  double s = g_n * g_n;
  return 1e-10 * (s > 1.0 ? s : 1.0);
}

ModeData mode_params(int n, const Parameters& p);

std::vector<std::pair<int, Branch>> classify_modes(const Parameters& p, int n_max);

// Real mode-index thresholds bounding the circular band when they exist
// (requires alpha*epsilon < 1 and a nonnegative bracket). first < second.
std::optional<std::pair<double, double>> circular_band(const Parameters& p);

// Uniform decay machinery: a_lambda = alpha + eps*lambda^2/4,
// p_lambda = pi^2/(eps*pi^2 + a_lambda*l^2), q_lambda = (a_lambda + eps*(pi/l)^2)/2,
// delta = min(p_lambda, q_lambda). q_lambda equals g_1.
struct DecayConstants {
  double a_lambda = 0.0;
  double p_lambda = 0.0;
  double q_lambda = 0.0;
  double delta = 0.0;
};

DecayConstants decay_constants(const Parameters& p);

} // namespace esjj
