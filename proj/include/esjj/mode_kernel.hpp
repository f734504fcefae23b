#pragma once

#include "esjj/params.hpp"

namespace esjj {

// Time kernel G_n(t) of mode n: the causal solution of
//   G'' + 2 g_n G' + b_n G = 0,  G(0) = 0,  G'(0) = 1.
// Hyperbolic evaluation is arranged around the slow rate r_slow = b/(g+omega)
// and expm1 so neither overflow nor small-t cancellation occurs.
double mode_kernel(const ModeData& m, double t);

// Exact analytic d/dt or d^2/dt^2 of mode_kernel on each branch.
// order 1: value 1 at t=0. order 2: value -2 g_n at t=0.
double mode_kernel_dt(const ModeData& m, double t, int order);

// S_n = G_n' + 2 g_n G_n. S_n(0) = 1, S_n' = -b_n G_n. This is the time kernel
// multiplying the initial-value data in the curvature-corrected convolution.
double star_kernel(const ModeData& m, double t);

// C_n = eps G_n' + G_n, the coefficient kernel of the combined series; equals
// eps exactly at t = 0. Evaluated from the stable G and G' forms because the
// two-exponential split cancels catastrophically near t = 0.
double c_kernel(const ModeData& m, double eps, double t);

// int_0^t G_n(s) ds = (1 - S_n(t)) / b_n, exact via the star-kernel identity.
double mode_kernel_integral(const ModeData& m, double t);

// Coefficient of the slow exponential in C_n: 1 - eps * r_slow. Decays like
// n^{-2} for large n, which is what makes the combined series twice
// x-differentiable. Defined on the Hyperbolic branch only.
double slow_rate_coefficient(const ModeData& m, double eps);

} // namespace esjj
