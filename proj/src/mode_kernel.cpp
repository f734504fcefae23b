#include "esjj/mode_kernel.hpp"

#include <cmath>

namespace esjj {

namespace {

void need_nonnegative(double t) {
  if (t < 0.0) fail(ErrKind::NegativeTime, "mode kernel defined for t >= 0");
}

} // namespace

double mode_kernel(const ModeData& m, double t) {
  need_nonnegative(t);
  switch (m.branch) {
    case Branch::Hyperbolic: {
      // e^{-gt} sinh(wt)/w = -e^{-r_slow t} expm1(-2wt) / (2w)
      double e_slow = std::exp(-m.r_slow * t);
      return -e_slow * std::expm1(-2.0 * m.omega * t) / (2.0 * m.omega);
    }
    case Branch::Circular:
      return std::exp(-m.g_n * t) * std::sin(m.omega * t) / m.omega;
    case Branch::Degenerate:
    default:
      // two-term series of sinh(wt)/w in omega_sq; error O(omega_sq^2 t^5)
      return std::exp(-m.g_n * t) * t * (1.0 + m.omega_sq * t * t / 6.0);
  }
}

double mode_kernel_dt(const ModeData& m, double t, int order) {
  need_nonnegative(t);
  if (order != 1 && order != 2) fail(ErrKind::BadTruncation, "derivative order must be 1 or 2");
  // t = 0 values are contractual and branch-free; the hyperbolic formula only
  // reproduces them to rounding because r_fast - r_slow = 2w holds in exact
  // arithmetic, not in floating point.
  if (t == 0.0) return order == 1 ? 1.0 : -2.0 * m.g_n;
  switch (m.branch) {
    case Branch::Hyperbolic: {
      double e_slow = std::exp(-m.r_slow * t);
      double e_gap = std::exp(-2.0 * m.omega * t);
      if (order == 1)
        return e_slow * (m.r_fast * e_gap - m.r_slow) / (2.0 * m.omega);
      return e_slow * (m.r_slow * m.r_slow - m.r_fast * m.r_fast * e_gap) / (2.0 * m.omega);
    }
    case Branch::Circular: {
      double e = std::exp(-m.g_n * t);
      double s = std::sin(m.omega * t), c = std::cos(m.omega * t);
      if (order == 1) return e * (c - m.g_n * s / m.omega);
      return e * ((m.g_n * m.g_n - m.omega * m.omega) * s / m.omega - 2.0 * m.g_n * c);
    }
    case Branch::Degenerate:
    default: {
      double e = std::exp(-m.g_n * t);
      double k = t * (1.0 + m.omega_sq * t * t / 6.0);
      double k1 = 1.0 + 0.5 * m.omega_sq * t * t;
      if (order == 1) return e * (k1 - m.g_n * k);
      double k2 = m.omega_sq * t;
      return e * (k2 - 2.0 * m.g_n * k1 + m.g_n * m.g_n * k);
    }
  }
}

double star_kernel(const ModeData& m, double t) {
  need_nonnegative(t);
  if (t == 0.0) return 1.0;
  switch (m.branch) {
    case Branch::Hyperbolic: {
      // (r_fast e^{-r_slow t} - r_slow e^{-r_fast t}) / (2w): both terms positive
      double e_slow = std::exp(-m.r_slow * t);
      double e_gap = std::exp(-2.0 * m.omega * t);
      return e_slow * (m.r_fast - m.r_slow * e_gap) / (2.0 * m.omega);
    }
    case Branch::Circular: {
      double e = std::exp(-m.g_n * t);
      return e * (std::cos(m.omega * t) + m.g_n * std::sin(m.omega * t) / m.omega);
    }
    case Branch::Degenerate:
    default: {
      double e = std::exp(-m.g_n * t);
      double k = t * (1.0 + m.omega_sq * t * t / 6.0);
      double k1 = 1.0 + 0.5 * m.omega_sq * t * t;
      return e * (k1 + m.g_n * k);
    }
  }
}

double c_kernel(const ModeData& m, double eps, double t) {
  return eps * mode_kernel_dt(m, t, 1) + mode_kernel(m, t);
}

double mode_kernel_integral(const ModeData& m, double t) {
  return (1.0 - star_kernel(m, t)) / m.b_n;
}

double slow_rate_coefficient(const ModeData& m, double eps) {
  if (m.branch != Branch::Hyperbolic)
    fail(ErrKind::OutOfDomain, "slow-rate coefficient exists on the hyperbolic branch only");
  return 1.0 - eps * m.r_slow;
}

} // namespace esjj
