#pragma once

#include <functional>
#include <vector>

#include "esjj/errors.hpp"

namespace esjj {

enum class Regularity { C0, C1, C2, C3 };

// Initial-data profile on [0, l]. Closures rather than samples, so spectral
// coefficients can be computed by quadrature at any resolution. d1/d2 may be
// empty; operations that need curvature fall back to the spectral identity
// when the declared regularity permits, and reject the profile otherwise.
struct Profile {
  std::function<double(double)> f;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
  Regularity regularity = Regularity::C0;
  bool vanishing_ends = true;
};

inline constexpr double endpoint_tol = 1e-9;

// Throws ProfileEndpointViolation when the declared endpoint flags do not hold.
void check_endpoints(const Profile& h, double length);

// Built-in library.
Profile zero_profile();
// amp * sin(k pi x / l)
Profile sine_mode(int k, double amp, double length);
// amp * 16 x^2 (l-x)^2 / l^4, peak value amp at x = l/2; C^infty, h' vanishes at ends
Profile poly_bump(double amp, double length);
// amp * x (l-x); curvature is constant -2 amp, nonzero at the ends
Profile parabola(double amp, double length);
// piecewise-linear interpolant of (x_i, v_i); carries no derivative closures.
// declared_reg documents the smoothness of the underlying function the table
// samples, which decides whether curvature-needing operations accept it.
Profile tabulated(std::vector<double> xs, std::vector<double> vs, Regularity declared_reg);

// Source term F(x, t, u) with declared Lipschitz constant in u.
struct SourceFn {
  std::function<double(double, double, double)> f;
  double lipschitz_const = 0.0;
  bool depends_on_u = false;
};

SourceFn zero_source();
// f(x, t) independent of u
SourceFn plain_source(std::function<double(double, double)> f);

inline constexpr double lipschitz_check_tol = 1e-8;

// Statistical verification of the declared Lipschitz constant on random
// (x, t, u1, u2) samples; throws LipschitzViolation on failure.
void spot_check_lipschitz(const SourceFn& F, double length, double horizon, double u_range,
                          int samples = 256, unsigned seed = 20260816u);

} // namespace esjj
