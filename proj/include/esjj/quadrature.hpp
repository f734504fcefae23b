#pragma once

#include <vector>

#include "esjj/errors.hpp"

namespace esjj {

enum class QuadRule { CompositeSimpson, GaussLegendreComposite };

// xi_points: spatial rule resolution (number of intervals for Simpson, total
// node budget for composite Gauss-Legendre). tau_points: temporal resolution
// per unit time for Volterra convolutions.
struct QuadratureSpec {
  int xi_points = 256;
  int tau_points = 512;
  QuadRule rule = QuadRule::CompositeSimpson;
};

void validate_quadrature(const QuadratureSpec& q);

// nodes and matching weights on [0, length]; integral f ~= sum w_k f(x_k)
struct QuadGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
};

QuadGrid quad_grid(const QuadratureSpec& q, double length);

// Highest sine mode the rule resolves without aliasing garbage. Coefficients
// above roughly 3/4 of the node density come out O(1) wrong, so consumers cut
// conservatively at a quarter of the node count.
int band_limit(const QuadratureSpec& q);

double integrate(const QuadGrid& g, const std::vector<double>& fvals);

} // namespace esjj
