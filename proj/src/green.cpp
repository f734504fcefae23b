#include "esjj/green.hpp"

#include <cmath>

#include "esjj/kernels.hpp"
#include "esjj/mode_kernel.hpp"

namespace esjj {

namespace {

std::vector<ModeData> build_modes(const Parameters& p, int n_max) {
  std::vector<ModeData> ms;
  ms.reserve(static_cast<size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) ms.push_back(mode_params(n, p));
  return ms;
}

void check_domain(const GreenEvaluator& ev, double x, double xi) {
  if (x < 0.0 || x > ev.params.length || xi < 0.0 || xi > ev.params.length)
    fail(ErrKind::OutOfDomain, "x and xi must lie in [0, l]");
}

double weight(const GreenEvaluator& ev, double x, double xi) {
  double arg = ev.weight_mode == WeightMode::SelfAdjoint ? 0.5 * ev.params.lambda * (x - xi)
                                                         : 0.5 * ev.params.lambda * x;
  return std::exp(arg);
}

// x factor of term n after x_order termwise derivatives: coefficients of
// sin(gamma x) and cos(gamma x) under the e^{lambda x / 2} envelope
struct XFactor {
  double cs = 1.0, cc = 0.0;
};

XFactor x_factor(double lambda, double gamma, int x_order) {
  XFactor f;
  double h = 0.5 * lambda;
  if (x_order == 1) {
    f.cs = h;
    f.cc = gamma;
  } else if (x_order == 2) {
    f.cs = h * h - gamma * gamma;
    f.cc = lambda * gamma;
  }
  return f;
}

} // namespace

GreenEvaluator evaluator_fixed_n(const Parameters& p, int n_max, WeightMode w) {
  if (n_max < 1) fail(ErrKind::BadTruncation, "n_max must be >= 1");
  GreenEvaluator ev;
  ev.params = p;
  ev.decay = decay_constants(p);
  ev.modes = build_modes(p, n_max);
  ev.truncation.n_max = n_max;
  ev.truncation.policy = TruncationPolicy::FixedN;
  ev.truncation.tail_bound = truncation_tail_bound(p, ev.truncation.t_ref, n_max + 1);
  ev.weight_mode = w;
  return ev;
}

GreenEvaluator evaluator_tail_tol(const Parameters& p, double tol, double t_ref, WeightMode w) {
  if (tol <= 0.0) fail(ErrKind::BadTruncation, "tail tolerance must be > 0");
  if (t_ref <= 0.0) fail(ErrKind::NeedPositiveTime, "tail reference time must be > 0");

  int n_max = default_mode_cap;
  bool met = false;
  // bound is nonincreasing in the truncation point: bisect for the smallest
  // admissible n_max between floor and cap
  if (truncation_tail_bound(p, t_ref, default_mode_cap + 1) <= tol) {
    met = true;
    int lo = default_mode_floor, hi = default_mode_cap;
    if (truncation_tail_bound(p, t_ref, lo + 1) <= tol) {
      n_max = lo;
    } else {
      while (hi - lo > 1) {
        int mid = lo + (hi - lo) / 2;
        (truncation_tail_bound(p, t_ref, mid + 1) <= tol ? hi : lo) = mid;
      }
      n_max = hi;
    }
  }

  GreenEvaluator ev;
  ev.params = p;
  ev.decay = decay_constants(p);
  ev.modes = build_modes(p, n_max);
  ev.truncation.n_max = n_max;
  ev.truncation.policy = met ? TruncationPolicy::TailTol : TruncationPolicy::FixedN;
  ev.truncation.tol = tol;
  ev.truncation.t_ref = t_ref;
  ev.truncation.tail_bound = truncation_tail_bound(p, t_ref, n_max + 1);
  ev.weight_mode = w;
  return ev;
}

double green_eval(const GreenEvaluator& ev, double x, double xi, double t) {
  check_domain(ev, x, xi);
  kernels::Compensated acc;
  for (const ModeData& m : ev.modes)
    acc.add(mode_kernel(m, t) * std::sin(m.gamma_n * xi) * std::sin(m.gamma_n * x));
  return (2.0 / ev.params.length) * weight(ev, x, xi) * acc.value();
}

double green_dt(const GreenEvaluator& ev, double x, double xi, double t, int order) {
  check_domain(ev, x, xi);
  if (order == 2 && t == 0.0)
    fail(ErrKind::NeedPositiveTime, "second time derivative series needs t > 0");
  kernels::Compensated acc;
  for (const ModeData& m : ev.modes)
    acc.add(mode_kernel_dt(m, t, order) * std::sin(m.gamma_n * xi) * std::sin(m.gamma_n * x));
  return (2.0 / ev.params.length) * weight(ev, x, xi) * acc.value();
}

double eps_gt_plus_g(const GreenEvaluator& ev, double x, double xi, double t, int x_order) {
  check_domain(ev, x, xi);
  if (x_order < 0 || x_order > 2) fail(ErrKind::BadTruncation, "x_order must be 0, 1, or 2");
  double lambda = ev.params.lambda;
  kernels::Compensated acc;
  for (const ModeData& m : ev.modes) {
    XFactor f = x_factor(lambda, m.gamma_n, x_order);
    double xf = f.cs * std::sin(m.gamma_n * x) + f.cc * std::cos(m.gamma_n * x);
    acc.add(c_kernel(m, ev.params.epsilon, t) * std::sin(m.gamma_n * xi) * xf);
  }
  return (2.0 / ev.params.length) * weight(ev, x, xi) * acc.value();
}

double lop_residual(const GreenEvaluator& ev, double x, double xi, double t) {
  if (t <= 0.0) fail(ErrKind::NeedPositiveTime, "operator residual needs t > 0");
  check_domain(ev, x, xi);
  if (x == 0.0 || x == ev.params.length || xi == 0.0 || xi == ev.params.length)
    fail(ErrKind::OutOfDomain, "operator residual needs interior x, xi");
  kernels::Compensated acc;
  for (int n = ev.truncation.n_max + 1; n <= lop_reference_depth; ++n) {
    ModeData m = mode_params(n, ev.params);
    double term = m.b_n * c_kernel(m, ev.params.epsilon, t) * std::sin(m.gamma_n * xi) *
                  std::sin(m.gamma_n * x);
    acc.add(std::abs(term));
  }
  return (2.0 / ev.params.length) * weight(ev, x, xi) * acc.value();
}

std::pair<double, double> lop_term_pieces(const GreenEvaluator& ev, int n, double x, double xi,
                                          double t) {
  check_domain(ev, x, xi);
  ModeData m = mode_params(n, ev.params);
  double lambda = ev.params.lambda;
  double eps = ev.params.epsilon;
  double common = (2.0 / ev.params.length) * weight(ev, x, xi) * std::sin(m.gamma_n * xi);

  // spatial piece (d_xx - lambda d_x)(eps d_t + 1) applied to the term, with
  // the x derivatives expanded numerically rather than through -b_n
  XFactor d1 = x_factor(lambda, m.gamma_n, 1);
  XFactor d2 = x_factor(lambda, m.gamma_n, 2);
  double s = std::sin(m.gamma_n * x), c = std::cos(m.gamma_n * x);
  double xop = (d2.cs - lambda * d1.cs) * s + (d2.cc - lambda * d1.cc) * c;
  double spatial = common * c_kernel(m, eps, t) * xop;

  // temporal piece d_t (d_t + alpha) applied to the term
  double temporal = common * (mode_kernel_dt(m, t, 2) + ev.params.alpha * mode_kernel_dt(m, t, 1)) *
                    s;
  return {spatial, temporal};
}

} // namespace esjj
