#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "esjj/field.hpp"
#include "esjj/green.hpp"
#include "esjj/linear.hpp"
#include "esjj/profile.hpp"
#include "esjj/quadrature.hpp"

namespace esjj {

enum class PicardStart { LinearSolution, ZeroField };

struct PicardConfig {
  double tol = 1e-8;      // sup-norm change between sweeps that counts as converged
  int max_iter = 60;      // sweeps per window before the window is halved
  double window = std::numeric_limits<double>::infinity(); // marching span; inf lets
                          // the declared Lipschitz constant pick one
  double damping = 1.0;   // fraction of each update applied, in (0, 1]
  PicardStart start = PicardStart::LinearSolution;
};

struct PicardReport {
  int iterations = 0;                  // total sweeps across all windows
  double final_change = 0.0;
  std::vector<double> change_history;  // change per sweep, windows concatenated
  double contraction_ratio = 0.0;      // worst late-stage ratio observed over windows
  double residual = 0.0;               // defect under the whole-horizon discrete map
  bool converged = false;
  int windows = 1;
  double window_length = 0.0;          // span actually used after any halving
};

// Fixed-point iteration for the semilinear problem: u = (linear part) - V[F(u)]
// where V is the space-time kernel convolution. The caller's uniform time grid
// is the integration grid, so the reported residual is measured with exactly
// the discrete map being iterated. Long horizons are marched window by window,
// restarting from the window-end state and its one-sided time derivative.
std::pair<Field, PicardReport> picard_solve(const Profile& h0, const Profile& h1,
                                            const SourceFn& F, const GreenEvaluator& ev,
                                            const QuadratureSpec& q,
                                            const std::vector<double>& x_grid,
                                            const std::vector<double>& t_grid,
                                            const PicardConfig& cfg = {});

// F(x, t, u) = sin(u) - bias: junction phase dynamics with a constant bias drive
SourceFn sine_gordon_source(double bias);

// sup over the grid of |u - (linear part - V[F(u)])| under the same discrete
// map the solver iterates. Exact when the field is tabulated at the quadrature
// nodes; other x grids are linearly interpolated onto the nodes first.
double integral_residual(const Field& u, const Profile& h0, const Profile& h1, const SourceFn& F,
                         const GreenEvaluator& ev, const QuadratureSpec& q);

} // namespace esjj
