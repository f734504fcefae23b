#include "esjj/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <utility>

namespace esjj {

void check_endpoints(const Profile& h, double length) {
  if (!h.vanishing_ends) return;
  double a = std::abs(h.f(0.0));
  double b = std::abs(h.f(length));
  if (a > endpoint_tol || b > endpoint_tol)
    fail(ErrKind::ProfileEndpointViolation,
         "profile endpoint values " + std::to_string(a) + ", " + std::to_string(b) +
             " exceed tolerance");
}

Profile zero_profile() {
  Profile p;
  p.f = [](double) { return 0.0; };
  p.d1 = [](double) { return 0.0; };
  p.d2 = [](double) { return 0.0; };
  p.regularity = Regularity::C3;
  p.vanishing_ends = true;
  return p;
}

Profile sine_mode(int k, double amp, double length) {
  if (k < 1) fail(ErrKind::NonPositive, "sine_mode index must be >= 1");
  double g = static_cast<double>(k) * std::numbers::pi / length;
  Profile p;
  p.f = [amp, g](double x) { return amp * std::sin(g * x); };
  p.d1 = [amp, g](double x) { return amp * g * std::cos(g * x); };
  p.d2 = [amp, g](double x) { return -amp * g * g * std::sin(g * x); };
  p.regularity = Regularity::C3;
  p.vanishing_ends = true;
  return p;
}

Profile poly_bump(double amp, double length) {
  double c = 16.0 * amp / (length * length * length * length);
  double l = length;
  Profile p;
  p.f = [c, l](double x) { double y = x * (l - x); return c * y * y; };
  p.d1 = [c, l](double x) { return c * 2.0 * x * (l - x) * (l - 2.0 * x); };
  p.d2 = [c, l](double x) { return c * 2.0 * (l * l - 6.0 * l * x + 6.0 * x * x); };
  p.regularity = Regularity::C3;
  p.vanishing_ends = true;
  return p;
}

Profile parabola(double amp, double length) {
  double l = length;
  Profile p;
  p.f = [amp, l](double x) { return amp * x * (l - x); };
  p.d1 = [amp, l](double x) { return amp * (l - 2.0 * x); };
  p.d2 = [amp](double) { return -2.0 * amp; };
  p.regularity = Regularity::C3;
  p.vanishing_ends = true;
  return p;
}

Profile tabulated(std::vector<double> xs, std::vector<double> vs, Regularity declared_reg) {
  if (xs.size() != vs.size() || xs.size() < 2)
    fail(ErrKind::GridMismatch, "tabulated profile needs matching sample arrays, >= 2 points");
  for (size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1])) fail(ErrKind::GridMismatch, "tabulated abscissae must increase");
  auto eval = [xs = std::move(xs), vs = std::move(vs)](double x) {
    if (x <= xs.front()) return vs.front();
    if (x >= xs.back()) return vs.back();
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    size_t j = static_cast<size_t>(it - xs.begin());
    double w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
    return vs[j - 1] + w * (vs[j] - vs[j - 1]);
  };
  Profile p;
  p.f = eval;
  p.regularity = declared_reg;
  p.vanishing_ends = std::abs(p.f(0.0)) <= endpoint_tol;
  return p;
}

SourceFn zero_source() {
  SourceFn s;
  s.f = [](double, double, double) { return 0.0; };
  s.lipschitz_const = 0.0;
  s.depends_on_u = false;
  return s;
}

SourceFn plain_source(std::function<double(double, double)> f) {
  SourceFn s;
  s.f = [g = std::move(f)](double x, double t, double) { return g(x, t); };
  s.lipschitz_const = 0.0;
  s.depends_on_u = false;
  return s;
}

void spot_check_lipschitz(const SourceFn& F, double length, double horizon, double u_range,
                          int samples, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dx(0.0, length);
  std::uniform_real_distribution<double> dt(0.0, horizon);
  std::uniform_real_distribution<double> du(-u_range, u_range);
  for (int i = 0; i < samples; ++i) {
    double x = dx(rng), t = dt(rng);
    double u1 = du(rng), u2 = du(rng);
    double lhs = std::abs(F.f(x, t, u1) - F.f(x, t, u2));
    double rhs = F.lipschitz_const * std::abs(u1 - u2) + lipschitz_check_tol;
    if (lhs > rhs)
      fail(ErrKind::LipschitzViolation,
           "declared Lipschitz constant violated: |dF| = " + std::to_string(lhs) +
               " > " + std::to_string(rhs));
  }
}

} // namespace esjj
