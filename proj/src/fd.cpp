#include "esjj/fd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "esjj/errors.hpp"

namespace esjj {
namespace {

void validate_grid(const FdGrid& g, const Parameters& p) {
  if (g.nx < 3) fail(ErrKind::NonPositive, "fd grid needs at least 3 interior points");
  if (!(g.dt > 0.0) || !std::isfinite(g.dt)) fail(ErrKind::NonPositive, "fd dt must be positive");
  if (!(g.t_end > 0.0) || !std::isfinite(g.t_end))
    fail(ErrKind::NonPositive, "fd t_end must be positive");
  const double dx = p.length / (g.nx + 1);
  if (g.scheme == FdScheme::ExplicitRK4) {
    const double ceiling = fd_c_stab * dx * dx / p.epsilon;
    if (g.dt > ceiling) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "explicit step %.3e exceeds stability ceiling %.3e (= %.2f dx^2/eps)", g.dt,
                    ceiling, fd_c_stab);
      fail(ErrKind::StabilityPrecheckFailed, buf);
    }
  }
}

struct Stepper {
  const Parameters& p;
  const SourceFn& F;
  int nx;
  double dx;
  std::vector<double> xs; // interior abscissae

  // L w = w_xx - lambda w_x, Dirichlet zeros outside
  void lap(const std::vector<double>& w, std::vector<double>& out) const {
    const double id2 = 1.0 / (dx * dx);
    const double ad = p.lambda / (2.0 * dx);
    for (int k = 0; k < nx; ++k) {
      const double wm = k > 0 ? w[k - 1] : 0.0;
      const double wp = k + 1 < nx ? w[k + 1] : 0.0;
      out[k] = (wm - 2.0 * w[k] + wp) * id2 - ad * (wp - wm);
    }
  }

  // v' = L(eps v + u) - alpha v - F(x, t, u)
  void rhs_v(double t, const std::vector<double>& u, const std::vector<double>& v,
             std::vector<double>& scratch, std::vector<double>& out) const {
    for (int k = 0; k < nx; ++k) scratch[k] = p.epsilon * v[k] + u[k];
    lap(scratch, out);
    for (int k = 0; k < nx; ++k) out[k] -= p.alpha * v[k] + F.f(xs[k], t, u[k]);
  }
};

} // namespace

Field fd_solve(const Profile& h0, const Profile& h1, const SourceFn& F, const Parameters& p,
               const FdGrid& g, const std::vector<double>& x_out,
               const std::vector<double>& t_out) {
  validate_params(p);
  validate_grid(g, p);
  check_endpoints(h0, p.length);
  check_endpoints(h1, p.length);
  if (x_out.empty() || t_out.empty()) fail(ErrKind::GridMismatch, "empty output grid");

  const int nx = g.nx;
  const double dx = p.length / (nx + 1);

  // output abscissae must land on solver nodes; time is interpolated instead
  std::vector<int> xi(x_out.size());
  for (std::size_t i = 0; i < x_out.size(); ++i) {
    const long k = std::lround(x_out[i] / dx);
    if (k < 0 || k > nx + 1 || std::abs(x_out[i] - k * dx) > 1e-9 * std::max(1.0, p.length))
      fail(ErrKind::GridMismatch, "output abscissa does not nest into the fd grid");
    xi[i] = static_cast<int>(k);
  }
  for (std::size_t j = 0; j < t_out.size(); ++j) {
    if (j > 0 && !(t_out[j] > t_out[j - 1]))
      fail(ErrKind::GridMismatch, "output times must increase");
    if (t_out[j] < 0.0 || t_out[j] > g.t_end * (1.0 + 1e-12))
      fail(ErrKind::GridMismatch, "output time outside the integration range");
  }

  // shrink the step so it divides t_end exactly; never grows, so the
  // stability precheck stays valid
  const long steps = std::max(1L, static_cast<long>(std::ceil(g.t_end / g.dt - 1e-9)));
  const double dt = g.t_end / steps;

  Stepper st{p, F, nx, dx, {}};
  st.xs.resize(nx);
  for (int k = 0; k < nx; ++k) st.xs[k] = (k + 1) * dx;

  std::vector<double> u(nx), v(nx);
  for (int k = 0; k < nx; ++k) {
    u[k] = h0.f(st.xs[k]);
    v[k] = h1.f(st.xs[k]);
  }
  double base = 1.0;
  for (int k = 0; k < nx; ++k) base = std::max({base, std::abs(u[k]), std::abs(v[k])});

  // semi-implicit factors: (I - dt eps L) v_new = v + dt (L u - alpha v - F)
  std::vector<double> th_a, th_b, th_c, th_cp, th_dp;
  if (g.scheme == FdScheme::SemiImplicit) {
    const double r = dt * p.epsilon / (dx * dx);
    const double s = dt * p.epsilon * p.lambda / (2.0 * dx);
    th_a.assign(nx, -(r + s));
    th_b.assign(nx, 1.0 + 2.0 * r);
    th_c.assign(nx, -(r - s));
    th_cp.resize(nx);
    th_dp.resize(nx);
  }

  std::vector<double> k1u(nx), k2u(nx), k3u(nx), k4u(nx);
  std::vector<double> k1v(nx), k2v(nx), k3v(nx), k4v(nx);
  std::vector<double> ut(nx), vt(nx), scratch(nx), rhs(nx), u_prev(nx);

  Field out;
  out.x = x_out;
  out.t = t_out;
  out.v.assign(x_out.size() * t_out.size(), 0.0);
  out.meta = Provenance::Oracle;
  auto record = [&](std::size_t j, const std::vector<double>& row_prev,
                    const std::vector<double>& row_cur, double theta) {
    for (std::size_t i = 0; i < xi.size(); ++i) {
      const int k = xi[i];
      const double a = (k == 0 || k == nx + 1) ? 0.0 : row_prev[k - 1];
      const double b = (k == 0 || k == nx + 1) ? 0.0 : row_cur[k - 1];
      out.v[i * t_out.size() + j] = a + theta * (b - a);
    }
  };

  std::size_t jo = 0;
  while (jo < t_out.size() && t_out[jo] <= 0.0) {
    record(jo, u, u, 0.0);
    ++jo;
  }

  for (long m = 0; m < steps && jo < t_out.size(); ++m) {
    const double t = m * dt;
    u_prev = u;
    if (g.scheme == FdScheme::ExplicitRK4) {
      st.rhs_v(t, u, v, scratch, k1v);
      k1u = v;
      for (int k = 0; k < nx; ++k) {
        ut[k] = u[k] + 0.5 * dt * k1u[k];
        vt[k] = v[k] + 0.5 * dt * k1v[k];
      }
      st.rhs_v(t + 0.5 * dt, ut, vt, scratch, k2v);
      k2u = vt;
      for (int k = 0; k < nx; ++k) {
        ut[k] = u[k] + 0.5 * dt * k2u[k];
        vt[k] = v[k] + 0.5 * dt * k2v[k];
      }
      st.rhs_v(t + 0.5 * dt, ut, vt, scratch, k3v);
      k3u = vt;
      for (int k = 0; k < nx; ++k) {
        ut[k] = u[k] + dt * k3u[k];
        vt[k] = v[k] + dt * k3v[k];
      }
      st.rhs_v(t + dt, ut, vt, scratch, k4v);
      k4u = vt;
      for (int k = 0; k < nx; ++k) {
        u[k] += dt / 6.0 * (k1u[k] + 2.0 * k2u[k] + 2.0 * k3u[k] + k4u[k]);
        v[k] += dt / 6.0 * (k1v[k] + 2.0 * k2v[k] + 2.0 * k3v[k] + k4v[k]);
      }
    } else {
      st.lap(u, rhs);
      for (int k = 0; k < nx; ++k)
        rhs[k] = v[k] + dt * (rhs[k] - p.alpha * v[k] - F.f(st.xs[k], t, u[k]));
      // Thomas sweep
      th_cp[0] = th_c[0] / th_b[0];
      th_dp[0] = rhs[0] / th_b[0];
      for (int k = 1; k < nx; ++k) {
        const double den = th_b[k] - th_a[k] * th_cp[k - 1];
        th_cp[k] = th_c[k] / den;
        th_dp[k] = (rhs[k] - th_a[k] * th_dp[k - 1]) / den;
      }
      v[nx - 1] = th_dp[nx - 1];
      for (int k = nx - 2; k >= 0; --k) v[k] = th_dp[k] - th_cp[k] * v[k + 1];
      for (int k = 0; k < nx; ++k) u[k] += dt * v[k];
    }

    const double t_next = (m + 1) * dt;
    while (jo < t_out.size() && t_out[jo] <= t_next + 1e-12 * std::max(1.0, g.t_end)) {
      const double theta = std::clamp((t_out[jo] - t) / dt, 0.0, 1.0);
      record(jo, u_prev, u, theta);
      ++jo;
    }

    if (m % 50 == 0 || m + 1 == steps) {
      double mx = 0.0;
      for (int k = 0; k < nx; ++k) mx = std::max(mx, std::abs(u[k]));
      if (!std::isfinite(mx) || mx > 1e6 * base)
        fail(ErrKind::Instability, "fd state grew past a million times its initial size");
    }
  }
  if (jo < t_out.size()) fail(ErrKind::GridMismatch, "integration ended before the last output time");

  validate_field(out, p);
  return out;
}

double discrete_operator_residual(const Field& u, const Parameters& p, const SourceFn& F) {
  const std::size_t nx = u.nx(), nt = u.nt();
  if (nx < 3 || nt < 3) fail(ErrKind::GridMismatch, "need at least 3x3 samples for a residual");
  auto uniform = [](const std::vector<double>& g) {
    const double h = g[1] - g[0];
    for (std::size_t i = 1; i + 1 < g.size(); ++i)
      if (std::abs(g[i + 1] - g[i] - h) > 1e-9 * std::max(1.0, std::abs(h) * g.size()))
        fail(ErrKind::GridMismatch, "residual needs uniform grids");
    return h;
  };
  const double dx = uniform(u.x), dt = uniform(u.t);

  std::vector<double> utj(nx);
  double worst = 0.0;
  for (std::size_t j = 1; j + 1 < nt; ++j) {
    for (std::size_t i = 0; i < nx; ++i) utj[i] = (u.at(i, j + 1) - u.at(i, j - 1)) / (2.0 * dt);
    for (std::size_t i = 1; i + 1 < nx; ++i) {
      const double wl = p.epsilon * utj[i - 1] + u.at(i - 1, j);
      const double wc = p.epsilon * utj[i] + u.at(i, j);
      const double wr = p.epsilon * utj[i + 1] + u.at(i + 1, j);
      const double lw = (wl - 2.0 * wc + wr) / (dx * dx) - p.lambda * (wr - wl) / (2.0 * dx);
      const double utt = (u.at(i, j + 1) - 2.0 * u.at(i, j) + u.at(i, j - 1)) / (dt * dt);
      const double r =
          lw - utt - p.alpha * utj[i] - F.f(u.x[i], u.t[j], u.at(i, j));
      worst = std::max(worst, std::abs(r));
    }
  }
  return worst;
}

} // namespace esjj
