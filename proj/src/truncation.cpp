#include "esjj/truncation.hpp"

#include <cmath>
#include <numbers>

namespace esjj {

namespace {

// sup over t >= t_min of |G_n(t)|, per branch
double per_mode_sup(const ModeData& m, double t_min) {
  switch (m.branch) {
    case Branch::Hyperbolic:
      // |G_n| <= e^{-r_slow t} / (2 omega), decreasing in t
      return std::exp(-m.r_slow * t_min) / (2.0 * m.omega);
    case Branch::Circular: {
      double by_amp = std::exp(-m.g_n * t_min) / m.omega;
      double by_time = t_min >= 1.0 / m.g_n ? t_min * std::exp(-m.g_n * t_min)
                                            : std::exp(-1.0) / m.g_n;
      return std::min(by_amp, by_time);
    }
    case Branch::Degenerate:
    default: {
      // |G_n| <= t e^{-gt} + |omega_sq|/6 t^3 e^{-gt}, each supped separately
      double g = m.g_n;
      double lin = t_min >= 1.0 / g ? t_min * std::exp(-g * t_min) : std::exp(-1.0) / g;
      double cub = t_min >= 3.0 / g
                       ? t_min * t_min * t_min * std::exp(-g * t_min)
                       : 27.0 * std::exp(-3.0) / (g * g * g);
      return lin + std::abs(m.omega_sq) / 6.0 * cub;
    }
  }
}

} // namespace

double truncation_tail_bound(const Parameters& p, double t_min, int n_from) {
  if (t_min <= 0.0) fail(ErrKind::NeedPositiveTime, "tail bound requires t_min > 0");
  if (n_from < 1) fail(ErrKind::NonPositive, "n_from must be >= 1");

  double prefactor = (2.0 / p.length) * std::exp(0.5 * p.lambda * p.length);
  DecayConstants d = decay_constants(p);

  // explicit per-mode sups until the mode is safely quadratic (b <= g^2 / 2,
  // which also implies hyperbolic), then one closed-form remainder
  double head = 0.0;
  int n = n_from;
  for (; n < n_from + 200000; ++n) {
    ModeData m = mode_params(n, p);
    if (m.branch == Branch::Hyperbolic && m.b_n <= 0.5 * m.g_n * m.g_n) break;
    head += per_mode_sup(m, t_min);
  }

  // for b <= g^2/2: 1/(2 omega) <= sqrt(2)/(2g) <= sqrt(2) l^2/(eps pi^2 n^2),
  // and r_slow >= p_lambda uniformly, so the remainder is a p_lambda-decayed
  // sum of n^{-2} terms
  double pi = std::numbers::pi;
  double tail = std::exp(-d.p_lambda * t_min) * std::numbers::sqrt2 * p.length * p.length /
                (p.epsilon * pi * pi) / static_cast<double>(n - 1);

  return prefactor * (head + tail);
}

} // namespace esjj
