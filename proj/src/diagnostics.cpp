#include "esjj/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace esjj {

namespace {

constexpr int sup_samples = 2049;

double profile_sup(const Profile& h, double length) {
  double worst = 0.0;
  for (int i = 0; i < sup_samples; ++i) {
    double x = length * static_cast<double>(i) / (sup_samples - 1);
    worst = std::max(worst, std::abs(h.f(x)));
  }
  return worst;
}

// sup of |h''|: the closure when present, otherwise interior second differences
double curvature_sup(const Profile& h, double length) {
  double worst = 0.0;
  if (h.d2) {
    for (int i = 0; i < sup_samples; ++i) {
      double x = length * static_cast<double>(i) / (sup_samples - 1);
      worst = std::max(worst, std::abs(h.d2(x)));
    }
    return worst;
  }
  const double dx = length / (sup_samples - 1);
  for (int i = 1; i + 1 < sup_samples; ++i) {
    double x = i * dx;
    double dd = (h.f(x + dx) - 2.0 * h.f(x) + h.f(x - dx)) / (dx * dx);
    worst = std::max(worst, std::abs(dd));
  }
  return worst;
}

std::vector<double> slice_sups(const Field& u) {
  std::vector<double> s(u.nt(), 0.0);
  for (size_t j = 0; j < u.nt(); ++j)
    for (size_t i = 0; i < u.nx(); ++i) s[j] = std::max(s[j], std::abs(u.at(i, j)));
  return s;
}

} // namespace

BoundReport apriori_bound(const Field& u, const Profile& h0, const Profile& h1, const SourceFn& F,
                          const Parameters& p) {
  validate_field(u);
  if (u.nt() == 0 || u.nx() == 0) fail(ErrKind::GridMismatch, "empty field");
  BoundReport rep;
  rep.delta = decay_constants(p).delta;
  rep.norm_h0 = profile_sup(h0, p.length);
  rep.norm_h1 = profile_sup(h1, p.length);
  rep.norm_h0pp = curvature_sup(h0, p.length);

  for (size_t j = 0; j < u.nt(); ++j)
    for (size_t i = 0; i < u.nx(); ++i)
      rep.sup_f = std::max(rep.sup_f, std::abs(F.f(u.x[i], u.t[j], u.at(i, j))));

  const std::vector<double> sups = slice_sups(u);
  const double data_norm = rep.norm_h1 + rep.norm_h0 + rep.norm_h0pp;
  const double d = rep.delta;
  auto forced = [&](double t) { return rep.sup_f / d * -std::expm1(-d * t); };

  // smallest K making the envelope hold at the three earliest grid times.
  // t = 0 belongs in the fit: any decaying field would otherwise be short of
  // its own initial slice by exactly e^{-delta t_1}.
  int fitted_at = 0;
  bool saw_positive = false;
  for (size_t j = 0; j < u.nt() && fitted_at < 3; ++j) {
    const double t = u.t[j];
    if (t < 0.0) continue;
    ++fitted_at;
    if (t > 0.0) saw_positive = true;
    if (data_norm <= 0.0) continue;
    const double need = (sups[j] - forced(t)) * std::exp(d * t) / data_norm;
    rep.fitted_k = std::max(rep.fitted_k, need);
  }
  if (!saw_positive && data_norm > 0.0)
    fail(ErrKind::WindowTooShort, "no positive grid times to fit the envelope constant");

  double worst_margin = 0.0, largest_rhs = 0.0;
  bool have = false;
  for (size_t j = 0; j < u.nt(); ++j) {
    const double t = u.t[j];
    const double rhs = forced(t) + rep.fitted_k * data_norm * std::exp(-d * t);
    const double m = rhs - sups[j];
    largest_rhs = std::max(largest_rhs, rhs);
    if (!have || m < worst_margin) worst_margin = m;
    have = true;
  }
  rep.margin = worst_margin;
  rep.bound_satisfied = worst_margin >= -1e-9 * std::max(1.0, largest_rhs);
  return rep;
}

double continuous_dependence_ratio(const Field& ua, const Profile& h0a, const Profile& h1a,
                                   const SourceFn& fa, const Field& ub, const Profile& h0b,
                                   const Profile& h1b, const SourceFn& fb, const Parameters& p) {
  if (ua.nx() != ub.nx() || ua.nt() != ub.nt())
    fail(ErrKind::GridMismatch, "dependence ratio needs matching grids");
  for (size_t i = 0; i < ua.nx(); ++i)
    if (std::abs(ua.x[i] - ub.x[i]) > 1e-12 * std::max(1.0, p.length))
      fail(ErrKind::GridMismatch, "dependence ratio needs matching grids");
  for (size_t j = 0; j < ua.nt(); ++j)
    if (std::abs(ua.t[j] - ub.t[j]) > 1e-12 * std::max(1.0, p.horizon))
      fail(ErrKind::GridMismatch, "dependence ratio needs matching grids");

  double num = 0.0, u_scale = 1.0;
  for (size_t i = 0; i < ua.v.size(); ++i) {
    num = std::max(num, std::abs(ua.v[i] - ub.v[i]));
    u_scale = std::max({u_scale, std::abs(ua.v[i]), std::abs(ub.v[i])});
  }

  double denom = 0.0;
  for (int i = 0; i < sup_samples; ++i) {
    double x = p.length * static_cast<double>(i) / (sup_samples - 1);
    denom = std::max(denom, std::abs(h0a.f(x) - h0b.f(x)));
  }
  double d1 = 0.0;
  for (int i = 0; i < sup_samples; ++i) {
    double x = p.length * static_cast<double>(i) / (sup_samples - 1);
    d1 = std::max(d1, std::abs(h1a.f(x) - h1b.f(x)));
  }
  double df = 0.0;
  for (int i = 0; i <= 32; ++i)
    for (int j = 0; j <= 32; ++j)
      for (int k = -4; k <= 4; ++k) {
        double x = p.length * i / 32.0;
        double t = p.horizon * j / 32.0;
        double uu = u_scale * k / 4.0;
        df = std::max(df, std::abs(fa.f(x, t, uu) - fb.f(x, t, uu)));
      }
  denom += d1 + df;
  if (denom < 1e-14) fail(ErrKind::ZeroPerturbation, "the two problems are identical");
  return num / denom;
}

std::pair<double, double> log_slope(const std::vector<double>& s, const std::vector<double>& v) {
  if (s.size() != v.size() || s.size() < 2)
    fail(ErrKind::GridMismatch, "slope fit needs matched samples");
  const size_t n = s.size();
  std::vector<double> y(n);
  for (size_t i = 0; i < n; ++i) {
    if (!(v[i] > 0.0)) fail(ErrKind::Underflow, "slope fit needs positive values");
    y[i] = std::log(v[i]);
  }
  double ms = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    ms += s[i];
    my += y[i];
  }
  ms /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (s[i] - ms) * (s[i] - ms);
    sxy += (s[i] - ms) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) fail(ErrKind::GridMismatch, "slope fit needs distinct abscissae");
  const double slope = sxy / sxx;
  double r2 = 1.0;
  if (syy > 0.0) {
    double ss_res = 0.0;
    const double icept = my - slope * ms;
    for (size_t i = 0; i < n; ++i) {
      double r = y[i] - (icept + slope * s[i]);
      ss_res += r * r;
    }
    r2 = 1.0 - ss_res / syy;
  }
  return {slope, r2};
}

std::pair<double, double> decay_rate_estimate(const Field& u, double t_lo, double t_hi) {
  const std::vector<double> sups = slice_sups(u);
  std::vector<double> ts, es;
  for (size_t j = 0; j < u.nt(); ++j)
    if (u.t[j] >= t_lo && u.t[j] <= t_hi) {
      ts.push_back(u.t[j]);
      es.push_back(sups[j]);
    }
  if (ts.size() < 4) fail(ErrKind::WindowTooShort, "decay fit needs at least 4 grid times");
  for (double e : es)
    if (e <= 1e-13) fail(ErrKind::Underflow, "field too small to fit a decay rate");
  return log_slope(ts, es);
}

} // namespace esjj
