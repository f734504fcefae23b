#include "esjj/quadrature.hpp"

#include <array>

#include "esjj/kernels.hpp"

namespace esjj {

void validate_quadrature(const QuadratureSpec& q) {
  if (q.xi_points < 8) fail(ErrKind::BadTruncation, "xi_points must be >= 8");
  if (q.rule == QuadRule::CompositeSimpson && q.xi_points % 2 != 0)
    fail(ErrKind::BadTruncation, "composite Simpson needs an even interval count");
  if (q.tau_points < 1) fail(ErrKind::NonPositive, "tau_points must be >= 1");
}

namespace {

// 8-point Gauss-Legendre on [-1, 1], positive half; abscissae/weights from
// Abramowitz & Stegun 25.4.30
constexpr std::array<double, 4> gl8_x = {0.1834346424956498, 0.5255324099163290,
                                         0.7966664774136267, 0.9602898564975363};
constexpr std::array<double, 4> gl8_w = {0.3626837833783620, 0.3137066458778873,
                                         0.2223810344533745, 0.1012285362903763};

} // namespace

QuadGrid quad_grid(const QuadratureSpec& q, double length) {
  validate_quadrature(q);
  QuadGrid g;
  if (q.rule == QuadRule::CompositeSimpson) {
    int n = q.xi_points;
    double h = length / n;
    g.nodes.resize(static_cast<size_t>(n) + 1);
    g.weights.resize(static_cast<size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
      g.nodes[static_cast<size_t>(k)] = length * static_cast<double>(k) / n;
      double w = (k == 0 || k == n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
      g.weights[static_cast<size_t>(k)] = w * h / 3.0;
    }
    g.nodes.back() = length;
  } else {
    int panels = q.xi_points / 8;
    if (panels < 1) panels = 1;
    double h = length / panels;
    g.nodes.reserve(static_cast<size_t>(panels) * 8);
    g.weights.reserve(static_cast<size_t>(panels) * 8);
    for (int pnl = 0; pnl < panels; ++pnl) {
      double mid = (static_cast<double>(pnl) + 0.5) * h;
      for (int k = 3; k >= 0; --k) {
        g.nodes.push_back(mid - 0.5 * h * gl8_x[static_cast<size_t>(k)]);
        g.weights.push_back(0.5 * h * gl8_w[static_cast<size_t>(k)]);
      }
      for (int k = 0; k < 4; ++k) {
        g.nodes.push_back(mid + 0.5 * h * gl8_x[static_cast<size_t>(k)]);
        g.weights.push_back(0.5 * h * gl8_w[static_cast<size_t>(k)]);
      }
    }
  }
  return g;
}

int band_limit(const QuadratureSpec& q) { return q.xi_points / 4; }

double integrate(const QuadGrid& g, const std::vector<double>& fvals) {
  if (fvals.size() != g.nodes.size())
    fail(ErrKind::GridMismatch, "integrand sample count does not match the rule");
  return kernels::dot2(g.weights.data(), fvals.data(), fvals.size());
}

} // namespace esjj
