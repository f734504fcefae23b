#pragma once

#include <utility>
#include <vector>

#include "esjj/params.hpp"
#include "esjj/truncation.hpp"

namespace esjj {

// Which exponential prefactor multiplies the sine series. SelfAdjoint uses
// e^{lambda (x-xi)/2}: the operator annihilates it equally (the xi factor is
// constant in x and t) and the initial condition is recovered exactly in the
// t -> 0 limit. OneSided keeps e^{lambda x/2} only; retained because the
// finite-difference oracle arbitrates between the two (it sides with
// SelfAdjoint whenever lambda > 0).
enum class WeightMode { SelfAdjoint, OneSided };

struct GreenEvaluator {
  Parameters params;
  DecayConstants decay;
  std::vector<ModeData> modes;  // 1 .. truncation.n_max
  Truncation truncation;
  WeightMode weight_mode = WeightMode::SelfAdjoint;
};

inline constexpr int default_mode_floor = 512;
inline constexpr int default_mode_cap = 4096;

GreenEvaluator evaluator_fixed_n(const Parameters& p, int n_max,
                                 WeightMode w = WeightMode::SelfAdjoint);

// Picks the smallest n_max (>= floor, <= cap) whose rigorous tail bound at
// t_ref meets tol. When the cap cannot meet tol the evaluator degrades to
// FixedN at the cap with the achieved bound recorded, so the TailTol
// invariant (tail_bound <= tol) is never silently violated.
GreenEvaluator evaluator_tail_tol(const Parameters& p, double tol, double t_ref = 0.1,
                                  WeightMode w = WeightMode::SelfAdjoint);

// (2/l) W(x,xi) sum G_n(t) sin(gamma_n xi) sin(gamma_n x)
double green_eval(const GreenEvaluator& ev, double x, double xi, double t);

// termwise time derivative of order 1 or 2; order 2 needs t > 0
double green_dt(const GreenEvaluator& ev, double x, double xi, double t, int order);

// the combined series eps G_t + G, x-differentiated termwise x_order times.
// The sine-coefficient of term n decays like n^{-4} (times the slow
// exponential), so x_order <= 2 converges absolutely for t > 0.
double eps_gt_plus_g(const GreenEvaluator& ev, double x, double xi, double t, int x_order);

// Truncation defect of the operator identity: the absolute remainder
//   sum_{n > n_max} | b_n C_n(t) (2/l) W sin sin |
// that the truncated assembly leaves unbalanced. Tends to 0 as n_max grows;
// summed explicitly up to the reference depth below.
inline constexpr int lop_reference_depth = 4096;
double lop_residual(const GreenEvaluator& ev, double x, double xi, double t);

// The two independently assembled termwise pieces of the operator applied to
// single mode n: spatial piece (applied to the x factor by explicit
// differentiation) and temporal piece (from the analytic time derivatives).
// They agree to roundoff because each mode solves its ODE exactly.
std::pair<double, double> lop_term_pieces(const GreenEvaluator& ev, int n, double x, double xi,
                                          double t);

} // namespace esjj
