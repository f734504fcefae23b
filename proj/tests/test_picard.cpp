#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "esjj/picard.hpp"

using namespace esjj;

namespace {

const double kPi = 3.14159265358979323846;
const Parameters kCorner{1.0, 1.0, 0.0, kPi, 2.0};

SourceFn restoring_source(double gain) {
  SourceFn f;
  f.f = [gain](double, double, double u) { return gain * u; };
  f.lipschitz_const = std::abs(gain);
  f.depends_on_u = true;
  return f;
}

double max_err_against(const Field& u, const std::function<double(double, double)>& ref) {
  double worst = 0.0;
  for (size_t i = 0; i < u.nx(); ++i)
    for (size_t j = 0; j < u.nt(); ++j)
      worst = std::max(worst, std::abs(u.at(i, j) - ref(u.x[i], u.t[j])));
  return worst;
}

} // namespace

TEST_CASE("zero reaction term reduces the iteration to the direct solver") {
  GreenEvaluator ev = evaluator_fixed_n(kCorner, 64);
  QuadratureSpec q;
  auto x_grid = uniform_grid(0.0, kPi, 33);
  auto t_grid = uniform_grid(0.0, 2.0, 129);
  auto [u, rep] = picard_solve(sine_mode(1, 1.0, kPi), sine_mode(1, -1.0, kPi), zero_source(),
                               ev, q, x_grid, t_grid);
  Field lin = linear_solve(sine_mode(1, 1.0, kPi), sine_mode(1, -1.0, kPi), zero_source(), ev, q,
                           x_grid, t_grid);
  CHECK(rep.converged);
  CHECK(compare_fields(u, lin).l_inf < 1e-10);
  CHECK(u.meta == Provenance::Picard);
}

TEST_CASE("linear feedback F = -u has a one-mode closed form") {
  // h0 = 0, h1 = sin x at the critical corner: the feedback cancels the
  // stiffness of mode one exactly and u = (1 - e^{-2t})/2 sin x
  GreenEvaluator ev = evaluator_fixed_n(kCorner, 64);
  QuadratureSpec q;
  auto x_grid = uniform_grid(0.0, kPi, 33);
  auto t_grid = uniform_grid(0.0, 2.0, 257);
  auto ref = [](double x, double t) { return 0.5 * (1.0 - std::exp(-2 * t)) * std::sin(x); };

  // marching windows picked from the declared Lipschitz budget
  auto [uw, rw] = picard_solve(zero_profile(), sine_mode(1, 1.0, kPi), restoring_source(-1.0),
                               ev, q, x_grid, t_grid);
  CHECK(rw.converged);
  CHECK(max_err_against(uw, ref) < 1e-4);

  // one explicit window spanning the whole horizon
  PicardConfig one;
  one.window = 100.0;
  auto [u1, r1] = picard_solve(zero_profile(), sine_mode(1, 1.0, kPi), restoring_source(-1.0),
                               ev, q, x_grid, t_grid, one);
  CHECK(r1.converged);
  CHECK(r1.windows == 1);
  CHECK(max_err_against(u1, ref) < 1e-4);

  // the window restart machinery does not visibly perturb the solution
  CHECK(rw.windows >= 2);
  CHECK(compare_fields(uw, u1).l_inf < 5e-5);
  CHECK(rw.window_length > 0.0);
  CHECK(rw.iterations >= rw.windows);
}

TEST_CASE("u-independent forcing through the iteration matches the closed form") {
  GreenEvaluator ev = evaluator_fixed_n(kCorner, 64);
  QuadratureSpec q;
  auto x_grid = uniform_grid(0.0, kPi, 33);
  auto t_grid = uniform_grid(0.0, 1.0, 257);
  SourceFn f = plain_source([](double x, double) { return std::sin(x); });
  auto [u, rep] = picard_solve(zero_profile(), zero_profile(), f, ev, q, x_grid, t_grid);
  CHECK(rep.converged);
  CHECK(max_err_against(u, [](double x, double t) {
          return -(1.0 - (1.0 + t) * std::exp(-t)) * std::sin(x);
        }) < 1e-4);
}

TEST_CASE("biased pendulum nonlinearity converges with a contraction certificate") {
  GreenEvaluator ev = evaluator_fixed_n(kCorner, 64);
  QuadratureSpec q;
  q.xi_points = 128;
  SpectralWorkspace ws = make_workspace(ev, q);
  const std::vector<double>& nodes = ws.grid.nodes;  // exact residual path
  auto t_grid = uniform_grid(0.0, 1.5, 193);
  SourceFn f = sine_gordon_source(0.3);
  CHECK(f.depends_on_u);
  CHECK(f.lipschitz_const == doctest::Approx(1.0));
  CHECK(f.f(0.3, 0.7, 0.0) == doctest::Approx(-0.3));  // sin(0) - bias

  auto [u, rep] = picard_solve(poly_bump(0.1, kPi), zero_profile(), f, ev, q, nodes, t_grid);
  CHECK(rep.converged);
  CHECK(rep.iterations >= 2);
  CHECK(rep.contraction_ratio > 0.0);
  CHECK(rep.contraction_ratio < 1.0);
  CHECK(rep.residual <= 10.0 * 1e-8);
  CHECK(rep.final_change <= 1e-8);
  REQUIRE(rep.change_history.size() >= 2);
  CHECK(rep.change_history.back() < rep.change_history.front());

  // recomputing the defect from the returned field agrees with the report
  double standalone = integral_residual(u, poly_bump(0.1, kPi), zero_profile(), f, ev, q);
  CHECK(standalone <= 2.0 * rep.residual + 1e-9);
}

TEST_CASE("damped updates land on the same fixed point") {
  GreenEvaluator ev = evaluator_fixed_n(kCorner, 48);
  QuadratureSpec q;
  q.xi_points = 128;
  auto x_grid = uniform_grid(0.0, kPi, 17);
  auto t_grid = uniform_grid(0.0, 1.0, 129);
  SourceFn f = restoring_source(-1.0);
  auto [plain, rp] = picard_solve(zero_profile(), sine_mode(1, 1.0, kPi), f, ev, q, x_grid,
                                  t_grid);
  PicardConfig damped;
  damped.damping = 0.5;
  damped.max_iter = 120;  // half-steps need more sweeps
  auto [slow, rs] = picard_solve(zero_profile(), sine_mode(1, 1.0, kPi), f, ev, q, x_grid,
                                 t_grid, damped);
  CHECK(rp.converged);
  CHECK(rs.converged);
  CHECK(rs.iterations >= rp.iterations);
  CHECK(compare_fields(plain, slow).l_inf < 1e-6);
}

TEST_CASE("cold start and warm start agree") {
  GreenEvaluator ev = evaluator_fixed_n(kCorner, 48);
  QuadratureSpec q;
  q.xi_points = 128;
  auto x_grid = uniform_grid(0.0, kPi, 17);
  auto t_grid = uniform_grid(0.0, 1.0, 129);
  SourceFn f = sine_gordon_source(0.2);
  auto [warm, rw] = picard_solve(poly_bump(0.2, kPi), zero_profile(), f, ev, q, x_grid, t_grid);
  PicardConfig cold;
  cold.start = PicardStart::ZeroField;
  auto [zero, rz] = picard_solve(poly_bump(0.2, kPi), zero_profile(), f, ev, q, x_grid, t_grid,
                                 cold);
  CHECK(rw.converged);
  CHECK(rz.converged);
  CHECK(compare_fields(warm, zero).l_inf < 1e-6);
}

TEST_CASE("expanding feedback resolves to the growing discrete solution") {
  // gain -20 overwhelms the mode-one stiffness and the true solution grows
  // like e^{3.5 t}. The kernel vanishes at lag zero, so the discrete map is
  // strictly lower triangular in time and the sweeps still land exactly.
  GreenEvaluator ev = evaluator_fixed_n(kCorner, 32);
  QuadratureSpec q;
  q.xi_points = 64;
  auto x_grid = uniform_grid(0.0, kPi, 9);
  auto t_grid = uniform_grid(0.0, 2.0, 9);
  auto [u, rep] = picard_solve(zero_profile(), sine_mode(1, 1.0, kPi), restoring_source(-20.0),
                               ev, q, x_grid, t_grid);
  CHECK(rep.converged);
  CHECK(rep.residual < 1e-10);
  double sup = 0.0;
  for (double v : u.v) sup = std::max(sup, std::abs(v));
  CHECK(sup > 10.0);  // data sup is 1: the growth is real, not an artifact
}

TEST_CASE("a sweep budget below the triangular depth fails loudly") {
  // resolving the window exactly takes up to one sweep per time step; a
  // max_iter below that with feedback this strong cannot meet the tolerance
  GreenEvaluator ev = evaluator_fixed_n(kCorner, 32);
  QuadratureSpec q;
  q.xi_points = 64;
  auto x_grid = uniform_grid(0.0, kPi, 9);
  auto t_grid = uniform_grid(0.0, 2.0, 9);
  PicardConfig starved;
  starved.max_iter = 3;
  try {
    picard_solve(zero_profile(), sine_mode(1, 1.0, kPi), restoring_source(-20.0), ev, q, x_grid,
                 t_grid, starved);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrKind::NoConvergence);
  }
}

TEST_CASE("window too short to restart is reported as such") {
  GreenEvaluator ev = evaluator_fixed_n(kCorner, 32);
  QuadratureSpec q;
  q.xi_points = 64;
  auto x_grid = uniform_grid(0.0, kPi, 9);
  auto t_grid = uniform_grid(0.0, 1.0, 6);  // 5 coarse steps
  PicardConfig cfg;
  cfg.window = 0.4;  // 2 steps per window: restart slope needs 3
  try {
    picard_solve(zero_profile(), sine_mode(1, 0.1, kPi), restoring_source(-0.5), ev, q, x_grid,
                 t_grid, cfg);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrKind::WindowRestartFailure);
  }
}

TEST_CASE("declared Lipschitz constants are spot checked") {
  GreenEvaluator ev = evaluator_fixed_n(kCorner, 32);
  QuadratureSpec q;
  q.xi_points = 64;
  auto x_grid = uniform_grid(0.0, kPi, 9);
  auto t_grid = uniform_grid(0.0, 1.0, 33);
  SourceFn liar;
  liar.f = [](double, double, double u) { return 5.0 * u; };
  liar.lipschitz_const = 1.0;  // actual constant is 5
  liar.depends_on_u = true;
  try {
    picard_solve(zero_profile(), sine_mode(1, 1.0, kPi), liar, ev, q, x_grid, t_grid);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrKind::LipschitzViolation);
  }
}

TEST_CASE("bad grids and configs are rejected") {
  GreenEvaluator ev = evaluator_fixed_n(kCorner, 32);
  QuadratureSpec q;
  q.xi_points = 64;
  auto x_grid = uniform_grid(0.0, kPi, 9);
  auto kind_of = [&](const std::function<void()>& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrKind::IoError;  // sentinel: "did not throw"
  };
  std::vector<double> crooked{0.0, 0.1, 0.25, 0.6, 1.0};
  CHECK(kind_of([&] {
          picard_solve(zero_profile(), zero_profile(), zero_source(), ev, q, x_grid, crooked);
        }) == ErrKind::GridMismatch);
  auto t_grid = uniform_grid(0.0, 1.0, 33);
  PicardConfig bad;
  bad.tol = 0.0;
  CHECK(kind_of([&] {
          picard_solve(zero_profile(), zero_profile(), zero_source(), ev, q, x_grid, t_grid,
                       bad);
        }) == ErrKind::NonPositive);
  PicardConfig overdamped;
  overdamped.damping = 0.0;
  CHECK(kind_of([&] {
          picard_solve(zero_profile(), zero_profile(), zero_source(), ev, q, x_grid, t_grid,
                       overdamped);
        }) == ErrKind::NonPositive);
  // negative lipschitz declaration
  SourceFn neg;
  neg.f = [](double, double, double) { return 0.0; };
  neg.lipschitz_const = -1.0;
  neg.depends_on_u = true;
  CHECK(kind_of([&] {
          picard_solve(zero_profile(), zero_profile(), neg, ev, q, x_grid, t_grid);
        }) == ErrKind::ConfigError);
}

TEST_CASE("integral residual flags fields that do not solve the equation") {
  GreenEvaluator ev = evaluator_fixed_n(kCorner, 48);
  QuadratureSpec q;
  q.xi_points = 128;
  auto t_grid = uniform_grid(0.0, 1.0, 65);
  SpectralWorkspace ws = make_workspace(ev, q);
  auto [u, rep] = picard_solve(zero_profile(), sine_mode(1, 1.0, kPi), restoring_source(-1.0),
                               ev, q, ws.grid.nodes, t_grid);
  REQUIRE(rep.converged);
  // perturbing the field inflates its defect far beyond the converged one
  Field bent = u;
  for (size_t i = 0; i < bent.nx(); ++i)
    for (size_t j = 0; j < bent.nt(); ++j)
      bent.at(i, j) += 1e-3 * std::sin(bent.x[i]) * bent.t[j];
  double clean = integral_residual(u, zero_profile(), sine_mode(1, 1.0, kPi),
                                   restoring_source(-1.0), ev, q);
  double broken = integral_residual(bent, zero_profile(), sine_mode(1, 1.0, kPi),
                                    restoring_source(-1.0), ev, q);
  CHECK(clean < 1e-6);
  CHECK(broken > 100.0 * clean);
  CHECK(broken > 1e-4);
}
