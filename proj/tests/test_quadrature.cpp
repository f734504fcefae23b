#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "esjj/quadrature.hpp"

using namespace esjj;

namespace {

const double kPi = 3.14159265358979323846;

double integrate_fn(const QuadGrid& g, const std::function<double(double)>& f) {
  std::vector<double> v(g.nodes.size());
  for (size_t k = 0; k < v.size(); ++k) v[k] = f(g.nodes[k]);
  return integrate(g, v);
}

} // namespace

TEST_CASE("both rules integrate constants to the interval length") {
  for (QuadRule rule : {QuadRule::CompositeSimpson, QuadRule::GaussLegendreComposite}) {
    QuadratureSpec q;
    q.rule = rule;
    q.xi_points = 64;
    QuadGrid g = quad_grid(q, 2.5);
    CHECK(integrate_fn(g, [](double) { return 1.0; }) == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(g.nodes.front() >= 0.0);
    CHECK(g.nodes.back() <= 2.5);
    for (size_t k = 1; k < g.nodes.size(); ++k) CHECK(g.nodes[k] > g.nodes[k - 1]);
  }
}

TEST_CASE("node layout follows rule conventions") {
  QuadratureSpec simpson;  // default rule
  simpson.xi_points = 32;
  QuadGrid gs = quad_grid(simpson, kPi);
  CHECK(gs.nodes.size() == 33);  // intervals + 1, endpoints included
  CHECK(gs.nodes.front() == 0.0);
  CHECK(gs.nodes.back() == kPi);

  QuadratureSpec gl;
  gl.rule = QuadRule::GaussLegendreComposite;
  gl.xi_points = 32;
  QuadGrid gg = quad_grid(gl, kPi);
  CHECK(gg.nodes.size() == 32);  // 4 panels of 8, endpoints open
  CHECK(gg.nodes.front() > 0.0);
  CHECK(gg.nodes.back() < kPi);
}

TEST_CASE("smooth integrands are reproduced to near machine accuracy") {
  for (QuadRule rule : {QuadRule::CompositeSimpson, QuadRule::GaussLegendreComposite}) {
    QuadratureSpec q;
    q.rule = rule;
    q.xi_points = 256;
    QuadGrid g = quad_grid(q, kPi);
    // int_0^pi sin(x) dx = 2
    CHECK(integrate_fn(g, [](double x) { return std::sin(x); }) ==
          doctest::Approx(2.0).epsilon(1e-10));
    // int_0^pi x e^{-x} dx = 1 - (1+pi)e^{-pi}; Simpson is O(h^4) here, ~2e-9
    double expect = 1.0 - (1.0 + kPi) * std::exp(-kPi);
    CHECK(integrate_fn(g, [](double x) { return x * std::exp(-x); }) ==
          doctest::Approx(expect).epsilon(1e-8));
  }
}

TEST_CASE("sine modes are orthogonal under both rules") {
  for (QuadRule rule : {QuadRule::CompositeSimpson, QuadRule::GaussLegendreComposite}) {
    QuadratureSpec q;
    q.rule = rule;
    q.xi_points = 256;
    QuadGrid g = quad_grid(q, kPi);
    int band = band_limit(q);
    // interior of the band: near machine accuracy for both rules
    for (int n : {1, 3, band / 4, 3 * band / 4}) {
      for (int m : {1, 2, band / 4, 3 * band / 4}) {
        double v = integrate_fn(
            g, [&](double x) { return std::sin(n * x) * std::sin(m * x); });
        double expect = (n == m) ? kPi / 2 : 0.0;
        CHECK(v == doctest::Approx(expect).epsilon(1e-9).scale(1.0));
      }
    }
    // band edge: the GL panels start to feel the frequency but stay well
    // inside the advertised coefficient check tolerance
    double edge = integrate_fn(
        g, [&](double x) { return std::sin(band * x) * std::sin(band * x); });
    CHECK(std::abs(edge - kPi / 2) < 1e-4);
  }
}

TEST_CASE("band limit is a quarter of the node budget") {
  QuadratureSpec q;
  q.xi_points = 256;
  CHECK(band_limit(q) == 64);
  q.xi_points = 64;
  CHECK(band_limit(q) == 16);
}

TEST_CASE("modes above the band limit alias, modes below do not") {
  QuadratureSpec q;
  q.xi_points = 64;  // band limit 16
  QuadGrid g = quad_grid(q, kPi);
  // coefficient of sin(kx) against itself: fine below the band, garbage well above
  auto coeff = [&](int k) {
    return (2.0 / kPi) *
           integrate_fn(g, [&](double x) { return std::sin(k * x) * std::sin(k * x); });
  };
  CHECK(coeff(8) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(coeff(16) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(std::abs(coeff(64) - 1.0) > 0.5);  // exactly at the node frequency: totally aliased
}

TEST_CASE("invalid specs are rejected with the right kinds") {
  auto kind_of = [](QuadratureSpec q) {
    try {
      validate_quadrature(q);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrKind::IoError;  // sentinel: "did not throw"
  };
  QuadratureSpec small;
  small.xi_points = 4;
  CHECK(kind_of(small) == ErrKind::BadTruncation);
  QuadratureSpec odd;
  odd.xi_points = 33;
  CHECK(kind_of(odd) == ErrKind::BadTruncation);
  QuadratureSpec tau;
  tau.tau_points = 0;
  CHECK(kind_of(tau) == ErrKind::NonPositive);
  QuadratureSpec odd_gl;
  odd_gl.xi_points = 33;
  odd_gl.rule = QuadRule::GaussLegendreComposite;
  CHECK(kind_of(odd_gl) == ErrKind::IoError);  // odd counts are fine for GL panels
}

TEST_CASE("integrate rejects sample vectors of the wrong length") {
  QuadratureSpec q;
  QuadGrid g = quad_grid(q, 1.0);
  std::vector<double> bad(g.nodes.size() + 1, 1.0);
  try {
    integrate(g, bad);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrKind::GridMismatch);
  }
}
