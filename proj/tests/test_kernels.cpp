#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "esjj/kernels.hpp"

using namespace esjj;

namespace {

std::vector<double> random_vec(size_t n, std::mt19937& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

} // namespace

TEST_CASE("scalar backend reductions match straight loops") {
  std::mt19937 rng(101);
  const kernels::Backend& s = kernels::scalar_backend();
  for (size_t n : {size_t(0), size_t(1), size_t(2), size_t(7), size_t(64), size_t(257)}) {
    auto a = random_vec(n, rng);
    auto b = random_vec(n, rng);
    auto c = random_vec(n, rng);
    auto d = random_vec(n, rng);
    double sum = 0, d2 = 0, d3 = 0, d4 = 0, rev = 0;
    for (size_t i = 0; i < n; ++i) {
      sum += a[i];
      d2 += a[i] * b[i];
      d3 += a[i] * b[i] * c[i];
      d4 += a[i] * b[i] * c[i] * d[i];
      rev += a[i] * b[n - 1 - i];
    }
    CHECK(s.sum(a.data(), n) == doctest::Approx(sum).epsilon(1e-13));
    CHECK(s.dot2(a.data(), b.data(), n) == doctest::Approx(d2).epsilon(1e-13));
    CHECK(s.dot3(a.data(), b.data(), c.data(), n) == doctest::Approx(d3).epsilon(1e-13));
    CHECK(s.dot4(a.data(), b.data(), c.data(), d.data(), n) == doctest::Approx(d4).epsilon(1e-13));
    CHECK(s.dot2_rev(a.data(), b.data(), n) == doctest::Approx(rev).epsilon(1e-13));
  }
}

TEST_CASE("active backend agrees with scalar reference") {
  std::mt19937 rng(202);
  const kernels::Backend& s = kernels::scalar_backend();
  const kernels::Backend& act = kernels::active_backend();
  INFO("active backend: ", act.name);
  // lengths straddling every SIMD remainder case
  for (size_t n = 0; n <= 67; ++n) {
    auto a = random_vec(n, rng, 3.0);
    auto b = random_vec(n, rng, 3.0);
    auto c = random_vec(n, rng, 3.0);
    auto d = random_vec(n, rng, 3.0);
    double scale = double(n) + 1.0;
    CHECK(std::abs(act.sum(a.data(), n) - s.sum(a.data(), n)) <= 1e-13 * scale);
    CHECK(std::abs(act.dot2(a.data(), b.data(), n) - s.dot2(a.data(), b.data(), n)) <=
          1e-12 * scale);
    CHECK(std::abs(act.dot3(a.data(), b.data(), c.data(), n) -
                   s.dot3(a.data(), b.data(), c.data(), n)) <= 1e-12 * scale);
    CHECK(std::abs(act.dot4(a.data(), b.data(), c.data(), d.data(), n) -
                   s.dot4(a.data(), b.data(), c.data(), d.data(), n)) <= 1e-12 * scale);
    CHECK(std::abs(act.dot2_rev(a.data(), b.data(), n) - s.dot2_rev(a.data(), b.data(), n)) <=
          1e-12 * scale);
  }
}

TEST_CASE("avx2 backend, when present, matches scalar on large vectors") {
  const kernels::Backend* v = kernels::avx2_backend();
  if (v == nullptr) {
    MESSAGE("no avx2 backend compiled in or cpu lacks it; skipping");
    return;
  }
  std::mt19937 rng(303);
  const kernels::Backend& s = kernels::scalar_backend();
  size_t n = 4096 + 3;  // force a remainder tail
  auto a = random_vec(n, rng);
  auto b = random_vec(n, rng);
  auto c = random_vec(n, rng);
  auto d = random_vec(n, rng);
  CHECK(v->dot2(a.data(), b.data(), n) ==
        doctest::Approx(s.dot2(a.data(), b.data(), n)).epsilon(1e-12));
  CHECK(v->dot3(a.data(), b.data(), c.data(), n) ==
        doctest::Approx(s.dot3(a.data(), b.data(), c.data(), n)).epsilon(1e-12));
  CHECK(v->dot4(a.data(), b.data(), c.data(), d.data(), n) ==
        doctest::Approx(s.dot4(a.data(), b.data(), c.data(), d.data(), n)).epsilon(1e-12));
  CHECK(v->dot2_rev(a.data(), b.data(), n) ==
        doctest::Approx(s.dot2_rev(a.data(), b.data(), n)).epsilon(1e-12));
  CHECK(std::string(v->name) == "avx2");
}

TEST_CASE("dot2_rev pairs a forward with b reversed") {
  const kernels::Backend& act = kernels::active_backend();
  // a = (1, 2, 3), b = (10, 100, 1000): rev = 1*1000 + 2*100 + 3*10 = 1230
  std::vector<double> a{1, 2, 3}, b{10, 100, 1000};
  CHECK(act.dot2_rev(a.data(), b.data(), 3) == doctest::Approx(1230.0).epsilon(1e-15));
  CHECK(kernels::dot2_rev(a.data(), b.data(), 3) == doctest::Approx(1230.0).epsilon(1e-15));
}

TEST_CASE("compensated accumulator survives cancellation that kills naive sums") {
  // classic probe: 1 followed by many tiny values, then -1; the naive sum
  // loses every tiny value, the compensated one keeps them all
  const size_t m = 100000;
  const double tiny = 1e-16;
  kernels::Compensated acc;
  double naive = 0.0;
  acc.add(1.0);
  naive += 1.0;
  for (size_t i = 0; i < m; ++i) {
    acc.add(tiny);
    naive += tiny;
  }
  acc.add(-1.0);
  naive += -1.0;
  double expect = double(m) * tiny;
  CHECK(acc.value() == doctest::Approx(expect).epsilon(1e-12));
  CHECK(std::abs(naive - expect) > 0.5 * expect);  // demonstrates the trap is real
}

TEST_CASE("compensated accumulator handles sign-flipped large terms") {
  kernels::Compensated acc;
  acc.add(1e16);
  acc.add(1.0);
  acc.add(-1e16);
  CHECK(acc.value() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("active backend name is one of the known implementations") {
  std::string name = kernels::active_backend_name();
  bool known = (name == "scalar" || name == "avx2");
  CHECK(known);
  CHECK(std::string(kernels::scalar_backend().name) == "scalar");
}
