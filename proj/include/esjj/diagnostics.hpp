#pragma once

#include <utility>
#include <vector>

#include "esjj/field.hpp"
#include "esjj/params.hpp"
#include "esjj/profile.hpp"

namespace esjj {

// Everything entering the envelope check
//   sup_x |u(., t)| <= (1/delta)(1 - e^{-delta t}) sup|F|
//                      + K (||h1|| + ||h0|| + ||h0''||) e^{-delta t}
struct BoundReport {
  double delta = 0.0;
  double sup_f = 0.0;
  double norm_h1 = 0.0, norm_h0 = 0.0, norm_h0pp = 0.0;
  double fitted_k = 0.0;      // smallest constant matching the earliest grid times
  bool bound_satisfied = false;
  double margin = 0.0;        // min over the grid of envelope minus observed sup
};

// Fit K on the three earliest grid times (t = 0 included), then check the
// envelope on the whole grid. Zero data under zero forcing satisfies it with
// margin 0.
BoundReport apriori_bound(const Field& u, const Profile& h0, const Profile& h1, const SourceFn& F,
                          const Parameters& p);

// ||ua - ub||_inf over the (shared) grid divided by the perturbation size
// sup|h0a - h0b| + sup|h1a - h1b| + sup|Fa - Fb|. Throws ZeroPerturbation when
// the denominator vanishes.
double continuous_dependence_ratio(const Field& ua, const Profile& h0a, const Profile& h1a,
                                   const SourceFn& fa, const Field& ub, const Profile& h0b,
                                   const Profile& h1b, const SourceFn& fb, const Parameters& p);

// least-squares slope of log(v) against s, with the r^2 goodness of fit
std::pair<double, double> log_slope(const std::vector<double>& s, const std::vector<double>& v);

// slope of log sup_x |u(., t)| over grid times in [t_lo, t_hi]; needs at least
// 4 samples (WindowTooShort) all above 1e-13 (Underflow). Returns (rate, r^2).
std::pair<double, double> decay_rate_estimate(const Field& u, double t_lo, double t_hi);

} // namespace esjj
