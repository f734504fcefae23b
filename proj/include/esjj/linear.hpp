#pragma once

#include <utility>

#include "esjj/field.hpp"
#include "esjj/green.hpp"
#include "esjj/profile.hpp"
#include "esjj/quadrature.hpp"

namespace esjj {

// Spectral tables binding an evaluator to a quadrature rule: sine samples at
// the quadrature nodes with the xi-side weight and quadrature weights folded
// in, so a profile's mode coefficients are one dot product per mode. The mode
// count is cut at the quadrature band limit: coefficients above it alias.
struct SpectralWorkspace {
  const GreenEvaluator* ev = nullptr;
  QuadGrid grid;
  int n_modes = 0;
  std::vector<double> premul;  // [k] quadrature weight x xi-side weight at node k
  std::vector<double> sin_xi;  // [n * nodes + k] = sin(gamma_n xi_k)

  size_t nodes() const { return grid.nodes.size(); }
  // chat[n] = (2/l) sum_k premul[k] * samples[k] * sin(gamma_n xi_k)
  std::vector<double> coefficients(const std::vector<double>& node_samples) const;
  std::vector<double> coefficients_of(const Profile& h) const;
};

SpectralWorkspace make_workspace(const GreenEvaluator& ev, const QuadratureSpec& q);

// largest coefficient shift when the node count doubles; an aliased rule
// moves coefficients by O(1)
double coefficient_error_estimate(const GreenEvaluator& ev, const QuadratureSpec& q,
                                  const Profile& h);
inline constexpr double quad_check_tol = 1e-4;

// u(x_i, t_j) = e^{lambda x_i / 2} sum_n rows[j][n] sin(gamma_n x_i); the 2/l
// analysis factor is already folded into coefficient rows.
// rows is j-major: rows[j * n_modes + n].
Field synthesize(const SpectralWorkspace& ws, const std::vector<double>& rows,
                 const std::vector<double>& x_grid, const std::vector<double>& t_grid,
                 Provenance meta);

// Internal uniform refinement of an output time grid for Volterra work.
// Requires t_grid uniform starting at 0; refine divides each output step so
// the internal spacing meets the tau_points-per-unit-time resolution.
struct TimeRefinement {
  int refine = 1;
  double dtau = 0.0;
  size_t m_points = 0;  // internal point count, (nt-1)*refine + 1
};
TimeRefinement volterra_refinement(const std::vector<double>& t_grid, const QuadratureSpec& q);

// Product-trapezoid Volterra convolution I(t_jj) = int_0^{t_jj} K(t_jj - s) f(s) ds
// over a uniform grid; K[0] = 0 makes the upper endpoint weight moot.
double volterra_value(const double* fhat, const double* kern, size_t jj, double dtau);
// the same at every grid time up to m - 1
std::vector<double> volterra_all(const double* fhat, const double* kern, size_t m, double dtau);

// u_h(x,t) = int h(xi) G(x,xi,t) dxi: per mode, coefficient times G_n(t)
Field convolve_initial(const Profile& h, const GreenEvaluator& ev, const QuadratureSpec& q,
                       const std::vector<double>& x_grid, const std::vector<double>& t_grid);

// Coefficients feeding the star rows: first the profile's own, second those
// of its effective curvature. Profiles with analytic curvature go through
// quadrature of the effective second derivative; C2-declared profiles without
// closures use the spectral identity (-gamma_n^2 on coefficients). Shared by
// the direct solver and the fixed-point iteration.
std::pair<std::vector<double>, std::vector<double>> star_coefficients(const SpectralWorkspace& ws,
                                                                      const Profile& h0);

// (d_t + alpha + eps lambda d_x - eps d_xx) u_h, computed through the
// curvature identity (the xi-side integration by parts turns the x-operator
// into b_n on coefficients) rather than by differencing u_h in x.
Field star_operator(const Profile& h0, const GreenEvaluator& ev, const QuadratureSpec& q,
                    const std::vector<double>& x_grid, const std::vector<double>& t_grid);

// u_f(x,t) = -int_0^t dtau int_0^l f(xi,tau) G(x,xi,t-tau) dxi
Field convolve_source(const SourceFn& f, const GreenEvaluator& ev, const QuadratureSpec& q,
                      const std::vector<double>& x_grid, const std::vector<double>& t_grid);

// u_{h1} + star(h0) + u_f
Field linear_solve(const Profile& h0, const Profile& h1, const SourceFn& f,
                   const GreenEvaluator& ev, const QuadratureSpec& q,
                   const std::vector<double>& x_grid, const std::vector<double>& t_grid);

// Closed-form solution for pure mode-n data: h1 = c_h1 W_xi sin(gamma_n xi),
// h0 likewise, f = c_f W_xi sin(gamma_n xi) constant in time, where W_xi is
// the xi-side weight of the evaluator convention (e^{lambda xi / 2} under the
// default). u = [c_h1 G_n + c_h0 S_n - c_f int_0^t G_n] e^{lambda x/2} sin(gamma_n x).
Field single_mode_reference(int n, double c_h0, double c_h1, double c_f, const Parameters& p,
                            const std::vector<double>& x_grid, const std::vector<double>& t_grid);

} // namespace esjj
