#include "esjj/params.hpp"

#include <cmath>
#include <numbers>

namespace esjj {

Parameters validate_params(double alpha, double epsilon, double lambda, double length,
                           double horizon) {
  auto finite = [](double v, const char* name) {
    if (!std::isfinite(v)) fail(ErrKind::NonFinite, std::string(name) + " is not finite");
  };
  finite(alpha, "alpha");
  finite(epsilon, "epsilon");
  finite(lambda, "lambda");
  finite(length, "length");
  finite(horizon, "horizon");
  if (alpha <= 0.0) fail(ErrKind::NonPositive, "alpha must be > 0");
  if (epsilon <= 0.0) fail(ErrKind::NonPositive, "epsilon must be > 0");
  if (length <= 0.0) fail(ErrKind::NonPositive, "length must be > 0");
  if (horizon <= 0.0) fail(ErrKind::NonPositive, "horizon must be > 0");
  if (lambda < 0.0) fail(ErrKind::NegativeTaper, "lambda must be >= 0");
  return Parameters{alpha, epsilon, lambda, length, horizon};
}

ModeData mode_params(int n, const Parameters& p) {
  if (n < 1) fail(ErrKind::NonPositive, "mode index must be >= 1");
  ModeData m;
  m.n = n;
  m.gamma_n = static_cast<double>(n) * std::numbers::pi / p.length;
  m.b_n = m.gamma_n * m.gamma_n + 0.25 * p.lambda * p.lambda;
  m.g_n = 0.5 * (p.alpha + p.epsilon * m.b_n);
  m.omega_sq = m.g_n * m.g_n - m.b_n;
  double tol = deg_tol(m.g_n);
  if (m.omega_sq > tol) {
    m.branch = Branch::Hyperbolic;
    m.omega = std::sqrt(m.omega_sq);
    // g - omega cancels when omega ~ g; b/(g+omega) is the same number exactly
    m.r_fast = m.g_n + m.omega;
    m.r_slow = m.b_n / m.r_fast;
  } else if (m.omega_sq < -tol) {
    m.branch = Branch::Circular;
    m.omega = std::sqrt(-m.omega_sq);
  } else {
    m.branch = Branch::Degenerate;
    m.omega = 0.0;
  }
  return m;
}

std::vector<std::pair<int, Branch>> classify_modes(const Parameters& p, int n_max) {
  if (n_max < 1) fail(ErrKind::NonPositive, "n_max must be >= 1");
  std::vector<std::pair<int, Branch>> out;
  out.reserve(static_cast<size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) out.emplace_back(n, mode_params(n, p).branch);
  return out;
}

std::optional<std::pair<double, double>> circular_band(const Parameters& p) {
  // Solve g^2 = b for b as if n were continuous: eps^2 b^2 + (2 alpha eps - 4) b
  // + alpha^2 = 0, i.e. b = (1 +- sqrt(1 - alpha eps))^2 / eps^2. Real distinct
  // roots need alpha*eps < 1; converting b to n subtracts the taper lambda^2/4.
  if (!p.small_product_regime()) return std::nullopt;
  double root = std::sqrt(1.0 - p.alpha * p.epsilon);
  double el2 = p.epsilon * p.lambda * 0.5;
  auto thr = [&](double sgn) -> double {
    double q = 4.0 * (1.0 + sgn * root) * (1.0 + sgn * root) - el2 * el2 * 4.0;
    if (q < 0.0) return -1.0;
    return p.length / (2.0 * p.epsilon * std::numbers::pi) * std::sqrt(q);
  };
  double n_lo = thr(-1.0);
  double n_hi = thr(+1.0);
  if (n_lo < 0.0 || n_hi < 0.0 || n_hi <= n_lo) return std::nullopt;
  return std::make_pair(n_lo, n_hi);
}

DecayConstants decay_constants(const Parameters& p) {
  DecayConstants d;
  double pi = std::numbers::pi;
  d.a_lambda = p.alpha + p.epsilon * p.lambda * p.lambda * 0.25;
  d.p_lambda = pi * pi / (p.epsilon * pi * pi + d.a_lambda * p.length * p.length);
  d.q_lambda = 0.5 * (d.a_lambda + p.epsilon * (pi / p.length) * (pi / p.length));
  d.delta = std::min(d.p_lambda, d.q_lambda);
  return d;
}

} // namespace esjj
