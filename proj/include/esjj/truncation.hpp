#pragma once

#include "esjj/params.hpp"

namespace esjj {

enum class TruncationPolicy { FixedN, TailTol };

struct Truncation {
  int n_max = 512;
  double tail_bound = 0.0;  // rigorous sup bound on the discarded tail, at the reference time
  TruncationPolicy policy = TruncationPolicy::FixedN;
  double tol = 0.0;    // requested tolerance when policy is TailTol
  double t_ref = 0.1;  // time from which tail_bound holds
};

// Rigorous upper bound on sup over x, xi in [0,l] and t >= t_min of the
// absolute sum of series terms with mode index n >= n_from. Uses the uniform
// slow-rate floor (every hyperbolic mode decays at least at the p_lambda rate)
// and the quadratic growth of omega_n; circular and degenerate modes are
// bounded individually. Cost O(modes scanned before the quadratic regime).
double truncation_tail_bound(const Parameters& p, double t_min, int n_from);

} // namespace esjj
