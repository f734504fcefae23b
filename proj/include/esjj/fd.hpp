#pragma once

#include "esjj/field.hpp"
#include "esjj/params.hpp"
#include "esjj/profile.hpp"

namespace esjj {

enum class FdScheme { ExplicitRK4, SemiImplicit };

// nx counts interior points; dx = l / (nx + 1)
struct FdGrid {
  int nx = 200;
  double dt = 1e-4;
  double t_end = 1.0;
  FdScheme scheme = FdScheme::ExplicitRK4;
};

// explicit stability ceiling against the stiffest term (eps d_xx v)
inline constexpr double fd_c_stab = 0.25;

// Direct second-order finite-difference integration of the primal system
//   u_t = v,  v_t = (d_xx - lambda d_x)(eps v + u) - alpha v - F(x, t, u)
// with u = v = 0 at the strip edges. Completely independent of the series
// machinery: this is the arbiter for cross-validation. Output is sampled at
// x_out (which must nest into the solver grid) and linearly interpolated in
// time at t_out.
Field fd_solve(const Profile& h0, const Profile& h1, const SourceFn& F, const Parameters& p,
               const FdGrid& g, const std::vector<double>& x_out,
               const std::vector<double>& t_out);

// Sup of the discrete operator defect of a field on its own (uniform) grid,
// central differences in x and t over interior points. Solver outputs should
// drive this to 0 under refinement at first order or better.
double discrete_operator_residual(const Field& u, const Parameters& p, const SourceFn& F);

} // namespace esjj
