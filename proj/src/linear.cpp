#include "esjj/linear.hpp"

#include <cmath>

#include "esjj/kernels.hpp"
#include "esjj/mode_kernel.hpp"
#include "esjj/parallel.hpp"

namespace esjj {

namespace {

double xi_side_weight(const GreenEvaluator& ev, double xi) {
  return ev.weight_mode == WeightMode::SelfAdjoint ? std::exp(-0.5 * ev.params.lambda * xi) : 1.0;
}

std::vector<double> sample_profile(const Profile& h, const std::vector<double>& nodes) {
  std::vector<double> s(nodes.size());
  for (size_t k = 0; k < nodes.size(); ++k) s[k] = h.f(nodes[k]);
  return s;
}

void require_same_stamp(const std::vector<double>& t_grid) {
  if (t_grid.empty()) fail(ErrKind::GridMismatch, "empty time grid");
  for (double t : t_grid)
    if (t < 0.0) fail(ErrKind::NegativeTime, "time grid must be nonnegative");
}

} // namespace

std::vector<double> SpectralWorkspace::coefficients(const std::vector<double>& node_samples) const {
  if (node_samples.size() != nodes())
    fail(ErrKind::GridMismatch, "sample count does not match quadrature nodes");
  std::vector<double> c(static_cast<size_t>(n_modes));
  double scale = 2.0 / ev->params.length;
  for (int n = 0; n < n_modes; ++n)
    c[static_cast<size_t>(n)] = scale * kernels::dot3(premul.data(), node_samples.data(),
                                                      &sin_xi[static_cast<size_t>(n) * nodes()],
                                                      nodes());
  return c;
}

std::vector<double> SpectralWorkspace::coefficients_of(const Profile& h) const {
  return coefficients(sample_profile(h, grid.nodes));
}

SpectralWorkspace make_workspace(const GreenEvaluator& ev, const QuadratureSpec& q) {
  SpectralWorkspace ws;
  ws.ev = &ev;
  ws.grid = quad_grid(q, ev.params.length);
  ws.n_modes = std::min(ev.truncation.n_max, band_limit(q));
  size_t nk = ws.grid.nodes.size();
  ws.premul.resize(nk);
  for (size_t k = 0; k < nk; ++k)
    ws.premul[k] = ws.grid.weights[k] * xi_side_weight(ev, ws.grid.nodes[k]);
  ws.sin_xi.resize(static_cast<size_t>(ws.n_modes) * nk);
  for (int n = 0; n < ws.n_modes; ++n) {
    double gamma = ev.modes[static_cast<size_t>(n)].gamma_n;
    for (size_t k = 0; k < nk; ++k)
      ws.sin_xi[static_cast<size_t>(n) * nk + k] = std::sin(gamma * ws.grid.nodes[k]);
  }
  return ws;
}

double coefficient_error_estimate(const GreenEvaluator& ev, const QuadratureSpec& q,
                                  const Profile& h) {
  QuadratureSpec q2 = q;
  q2.xi_points = 2 * q.xi_points;
  SpectralWorkspace a = make_workspace(ev, q);
  SpectralWorkspace b = make_workspace(ev, q2);
  std::vector<double> ca = a.coefficients_of(h);
  std::vector<double> cb = b.coefficients_of(h);
  double worst = 0.0;
  for (size_t n = 0; n < ca.size(); ++n) worst = std::max(worst, std::abs(ca[n] - cb[n]));
  return worst;
}

Field synthesize(const SpectralWorkspace& ws, const std::vector<double>& rows,
                 const std::vector<double>& x_grid, const std::vector<double>& t_grid,
                 Provenance meta) {
  size_t nm = static_cast<size_t>(ws.n_modes);
  if (rows.size() != t_grid.size() * nm)
    fail(ErrKind::GridMismatch, "coefficient rows do not match the time grid");
  Field out = make_field(x_grid, t_grid, meta);
  const Parameters& p = ws.ev->params;
  parallel_for(x_grid.size(), [&](size_t i) {
    double x = x_grid[i];
    if (x < 0.0 || x > p.length) fail(ErrKind::OutOfDomain, "output x outside the strip");
    std::vector<double> sin_x(nm);
    for (size_t n = 0; n < nm; ++n) sin_x[n] = std::sin(ws.ev->modes[n].gamma_n * x);
    // the 2/l analysis factor already lives in the coefficients
    double wx = std::exp(0.5 * p.lambda * x);
    for (size_t j = 0; j < t_grid.size(); ++j)
      out.at(i, j) = wx * kernels::dot2(&rows[j * nm], sin_x.data(), nm);
  });
  return out;
}

TimeRefinement volterra_refinement(const std::vector<double>& t_grid, const QuadratureSpec& q) {
  if (t_grid.size() < 2) fail(ErrKind::GridMismatch, "Volterra grid needs at least 2 times");
  double T = t_grid.back();
  if (std::abs(t_grid.front()) > 1e-12 * std::max(1.0, T))
    fail(ErrKind::GridMismatch, "Volterra time grid must start at 0");
  double dt = T / static_cast<double>(t_grid.size() - 1);
  if (dt <= 0.0) fail(ErrKind::GridMismatch, "time grid must increase");
  for (size_t j = 0; j < t_grid.size(); ++j)
    if (std::abs(t_grid[j] - dt * static_cast<double>(j)) > 1e-9 * std::max(1.0, T))
      fail(ErrKind::GridMismatch, "Volterra convolution needs a uniform time grid");
  TimeRefinement r;
  r.refine = std::max(1, static_cast<int>(std::ceil(dt * q.tau_points - 1e-12)));
  r.dtau = dt / r.refine;
  r.m_points = (t_grid.size() - 1) * static_cast<size_t>(r.refine) + 1;
  return r;
}

// product trapezoid; kern[0] = 0 so only the s = 0 endpoint needs its half
// weight restored
double volterra_value(const double* fhat, const double* kern, size_t jj, double dtau) {
  if (jj == 0) return 0.0;
  double s = kernels::dot2_rev(fhat, kern, jj + 1) - 0.5 * fhat[0] * kern[jj];
  return dtau * s;
}

std::vector<double> volterra_all(const double* fhat, const double* kern, size_t m, double dtau) {
  std::vector<double> out(m);
  parallel_for(m, [&](size_t j) { out[j] = volterra_value(fhat, kern, j, dtau); }, 8);
  return out;
}

Field convolve_initial(const Profile& h, const GreenEvaluator& ev, const QuadratureSpec& q,
                       const std::vector<double>& x_grid, const std::vector<double>& t_grid) {
  require_same_stamp(t_grid);
  check_endpoints(h, ev.params.length);
  if (coefficient_error_estimate(ev, q, h) > quad_check_tol)
    fail(ErrKind::QuadratureUnderResolved, "profile is not resolved by the spatial rule");
  SpectralWorkspace ws = make_workspace(ev, q);
  std::vector<double> c = ws.coefficients_of(h);
  size_t nm = c.size();
  std::vector<double> rows(t_grid.size() * nm);
  for (size_t j = 0; j < t_grid.size(); ++j)
    for (size_t n = 0; n < nm; ++n)
      rows[j * nm + n] = c[n] * mode_kernel(ev.modes[n], t_grid[j]);
  return synthesize(ws, rows, x_grid, t_grid, Provenance::Linear);
}

namespace {

enum class StarRoute { QuadratureCurvature, Spectral };

StarRoute star_route(const Profile& h0, const GreenEvaluator& ev) {
  bool need_d1 = ev.params.lambda != 0.0 && ev.weight_mode == WeightMode::SelfAdjoint;
  if (h0.d2 && (!need_d1 || h0.d1)) return StarRoute::QuadratureCurvature;
  if (h0.regularity >= Regularity::C2) return StarRoute::Spectral;
  fail(ErrKind::ProfileRegularityViolation,
       "star operator needs curvature: provide d2 or declare C2 regularity");
}

} // namespace

std::pair<std::vector<double>, std::vector<double>> star_coefficients(const SpectralWorkspace& ws,
                                                                      const Profile& h0) {
  const GreenEvaluator& ev = *ws.ev;
  std::vector<double> c = ws.coefficients_of(h0);
  size_t nm = c.size();

  // coefficients of the effective curvature: the xi-side weight makes the
  // integrated-by-parts x-operator act as -gamma_n^2 on coefficients, so the
  // two routes agree for data vanishing at the ends
  std::vector<double> c2(nm);
  if (star_route(h0, ev) == StarRoute::QuadratureCurvature) {
    const double lam = ev.params.lambda;
    bool self_adjoint = ev.weight_mode == WeightMode::SelfAdjoint;
    std::vector<double> samples(ws.nodes());
    for (size_t k = 0; k < ws.nodes(); ++k) {
      double xi = ws.grid.nodes[k];
      double v = h0.d2(xi);
      if (self_adjoint && lam != 0.0) v += -lam * h0.d1(xi) + 0.25 * lam * lam * h0.f(xi);
      samples[k] = v;
    }
    c2 = ws.coefficients(samples);
  } else {
    for (size_t n = 0; n < nm; ++n)
      c2[n] = -ev.modes[n].gamma_n * ev.modes[n].gamma_n * c[n];
  }
  return {std::move(c), std::move(c2)};
}

Field star_operator(const Profile& h0, const GreenEvaluator& ev, const QuadratureSpec& q,
                    const std::vector<double>& x_grid, const std::vector<double>& t_grid) {
  require_same_stamp(t_grid);
  check_endpoints(h0, ev.params.length);
  if (coefficient_error_estimate(ev, q, h0) > quad_check_tol)
    fail(ErrKind::QuadratureUnderResolved, "profile is not resolved by the spatial rule");
  SpectralWorkspace ws = make_workspace(ev, q);
  auto [c, c2] = star_coefficients(ws, h0);
  size_t nm = c.size();

  const double alpha = ev.params.alpha;
  const double eps = ev.params.epsilon;
  const double lam4 = 0.25 * ev.params.lambda * ev.params.lambda;
  std::vector<double> rows(t_grid.size() * nm);
  for (size_t j = 0; j < t_grid.size(); ++j)
    for (size_t n = 0; n < nm; ++n) {
      double g = mode_kernel(ev.modes[n], t_grid[j]);
      double gp = mode_kernel_dt(ev.modes[n], t_grid[j], 1);
      rows[j * nm + n] = c[n] * (gp + (alpha + eps * lam4) * g) - eps * c2[n] * g;
    }
  return synthesize(ws, rows, x_grid, t_grid, Provenance::Linear);
}

namespace {

Profile source_slice(const SourceFn& f, double t) {
  Profile p;
  p.f = [&f, t](double x) { return f.f(x, t, 0.0); };
  p.regularity = Regularity::C0;
  p.vanishing_ends = false;
  return p;
}

} // namespace

Field convolve_source(const SourceFn& f, const GreenEvaluator& ev, const QuadratureSpec& q,
                      const std::vector<double>& x_grid, const std::vector<double>& t_grid) {
  if (f.depends_on_u)
    fail(ErrKind::ConfigError, "source depends on u; use the fixed-point solver");
  TimeRefinement tr = volterra_refinement(t_grid, q);
  for (double t : {0.0, 0.5 * t_grid.back(), t_grid.back()}) {
    Profile slice = source_slice(f, t);
    if (coefficient_error_estimate(ev, q, slice) > quad_check_tol)
      fail(ErrKind::QuadratureUnderResolved, "source slice is not resolved by the spatial rule");
  }
  SpectralWorkspace ws = make_workspace(ev, q);
  size_t nm = static_cast<size_t>(ws.n_modes);
  size_t m = tr.m_points;

  // fhat[n][j] over the internal tau grid, n-major for the convolutions
  std::vector<double> fhat(nm * m);
  {
    std::vector<double> samples(ws.nodes());
    for (size_t j = 0; j < m; ++j) {
      double tau = tr.dtau * static_cast<double>(j);
      for (size_t k = 0; k < ws.nodes(); ++k) samples[k] = f.f(ws.grid.nodes[k], tau, 0.0);
      std::vector<double> cj = ws.coefficients(samples);
      for (size_t n = 0; n < nm; ++n) fhat[n * m + j] = cj[n];
    }
  }

  std::vector<double> kern(nm * m);
  for (size_t n = 0; n < nm; ++n)
    for (size_t j = 0; j < m; ++j)
      kern[n * m + j] = mode_kernel(ev.modes[n], tr.dtau * static_cast<double>(j));

  std::vector<double> rows(t_grid.size() * nm);
  parallel_for(nm, [&](size_t n) {
    for (size_t j = 0; j < t_grid.size(); ++j) {
      size_t jj = j * static_cast<size_t>(tr.refine);
      rows[j * nm + n] = -volterra_value(&fhat[n * m], &kern[n * m], jj, tr.dtau);
    }
  }, 1);
  return synthesize(ws, rows, x_grid, t_grid, Provenance::Linear);
}

Field linear_solve(const Profile& h0, const Profile& h1, const SourceFn& f,
                   const GreenEvaluator& ev, const QuadratureSpec& q,
                   const std::vector<double>& x_grid, const std::vector<double>& t_grid) {
  Field u = convolve_initial(h1, ev, q, x_grid, t_grid);
  Field us = star_operator(h0, ev, q, x_grid, t_grid);
  Field uf = convolve_source(f, ev, q, x_grid, t_grid);
  for (size_t i = 0; i < u.v.size(); ++i) u.v[i] += us.v[i] + uf.v[i];
  u.meta = Provenance::Linear;
  validate_field(u);
  return u;
}

Field single_mode_reference(int n, double c_h0, double c_h1, double c_f, const Parameters& p,
                            const std::vector<double>& x_grid, const std::vector<double>& t_grid) {
  require_same_stamp(t_grid);
  ModeData m = mode_params(n, p);
  Field out = make_field(x_grid, t_grid, Provenance::Oracle);
  for (size_t j = 0; j < t_grid.size(); ++j) {
    double t = t_grid[j];
    double amp = c_h1 * mode_kernel(m, t) + c_h0 * star_kernel(m, t) -
                 c_f * mode_kernel_integral(m, t);
    for (size_t i = 0; i < x_grid.size(); ++i)
      out.at(i, j) = amp * std::exp(0.5 * p.lambda * x_grid[i]) * std::sin(m.gamma_n * x_grid[i]);
  }
  return out;
}

} // namespace esjj
