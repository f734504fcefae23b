#include "esjj/field.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <utility>

#include "esjj/params.hpp"

namespace esjj {

static_assert(std::endian::native == std::endian::little,
              "binary field format is little-endian; serializer assumes a little-endian host");

Field make_field(std::vector<double> x, std::vector<double> t, Provenance meta) {
  Field f;
  f.x = std::move(x);
  f.t = std::move(t);
  f.v.assign(f.x.size() * f.t.size(), 0.0);
  f.meta = meta;
  return f;
}

std::vector<double> uniform_grid(double a, double b, size_t n_points) {
  if (n_points < 2) fail(ErrKind::NonPositive, "grid needs at least 2 points");
  std::vector<double> g(n_points);
  for (size_t i = 0; i < n_points; ++i)
    g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n_points - 1);
  g.back() = b;
  return g;
}

namespace {

void check_edge(const Field& f, size_t i) {
  for (size_t j = 0; j < f.nt(); ++j)
    if (std::abs(f.at(i, j)) > bc_tol)
      fail(ErrKind::BoundaryViolation,
           "boundary value " + std::to_string(f.at(i, j)) + " exceeds bc tolerance");
}

} // namespace

void validate_field(const Field& f) {
  if (f.v.size() != f.x.size() * f.t.size())
    fail(ErrKind::GridMismatch, "value matrix does not match grid dimensions");
  for (double u : f.v)
    if (!std::isfinite(u)) fail(ErrKind::NonFinite, "field contains a non-finite value");
  if (f.meta == Provenance::Other || f.nx() == 0) return;
  // only the left edge is recognizable without knowing the strip length
  if (f.x.front() == 0.0) check_edge(f, 0);
}

void validate_field(const Field& f, const Parameters& p) {
  validate_field(f);
  if (f.meta == Provenance::Other || f.nx() == 0) return;
  if (std::abs(f.x.back() - p.length) <= 1e-12 * std::max(1.0, p.length))
    check_edge(f, f.nx() - 1);
}

namespace {

// index of the cell containing s in ordered grid g, clamped to valid cells
size_t cell_index(const std::vector<double>& g, double s) {
  if (g.size() < 2) return 0;
  auto it = std::upper_bound(g.begin(), g.end(), s);
  size_t j = static_cast<size_t>(it - g.begin());
  if (j == 0) return 0;
  if (j >= g.size()) return g.size() - 2;
  return j - 1;
}

double lerp_weight(const std::vector<double>& g, size_t j, double s) {
  if (g.size() < 2) return 0.0;
  double den = g[j + 1] - g[j];
  if (den == 0.0) return 0.0;
  double w = (s - g[j]) / den;
  return std::clamp(w, 0.0, 1.0);
}

} // namespace

static double field_value_at(const Field& f, double x, double t) {
  size_t i = cell_index(f.x, x);
  size_t j = cell_index(f.t, t);
  if (f.nx() == 1 && f.nt() == 1) return f.at(0, 0);
  if (f.nx() == 1) {
    double wt = lerp_weight(f.t, j, t);
    return f.at(0, j) * (1.0 - wt) + f.at(0, j + 1) * wt;
  }
  if (f.nt() == 1) {
    double wx = lerp_weight(f.x, i, x);
    return f.at(i, 0) * (1.0 - wx) + f.at(i + 1, 0) * wx;
  }
  double wx = lerp_weight(f.x, i, x);
  double wt = lerp_weight(f.t, j, t);
  double lo = f.at(i, j) * (1.0 - wt) + f.at(i, j + 1) * wt;
  double hi = f.at(i + 1, j) * (1.0 - wt) + f.at(i + 1, j + 1) * wt;
  return lo * (1.0 - wx) + hi * wx;
}

ErrorReport compare_fields(const Field& a, const Field& b) {
  if (a.nx() == 0 || a.nt() == 0 || b.nx() == 0 || b.nt() == 0)
    fail(ErrKind::GridMismatch, "cannot compare empty fields");
  double slack_x = 1e-12 * (1.0 + std::abs(a.x.back()));
  double slack_t = 1e-12 * (1.0 + std::abs(a.t.back()));
  if (b.x.front() > a.x.front() + slack_x || b.x.back() < a.x.back() - slack_x ||
      b.t.front() > a.t.front() + slack_t || b.t.back() < a.t.back() - slack_t)
    fail(ErrKind::GridMismatch, "second field does not cover the first field's domain");

  ErrorReport r;
  r.per_slice_max.assign(a.nt(), 0.0);
  double sq = 0.0;
  for (size_t j = 0; j < a.nt(); ++j) {
    double wt = 1.0;
    if (a.nt() > 1) {
      double lo = j == 0 ? a.t[0] : a.t[j - 1];
      double hi = j + 1 == a.nt() ? a.t[j] : a.t[j + 1];
      wt = 0.5 * (hi - lo);
    }
    for (size_t i = 0; i < a.nx(); ++i) {
      double wx = 1.0;
      if (a.nx() > 1) {
        double lo = i == 0 ? a.x[0] : a.x[i - 1];
        double hi = i + 1 == a.nx() ? a.x[i] : a.x[i + 1];
        wx = 0.5 * (hi - lo);
      }
      double d = std::abs(a.at(i, j) - field_value_at(b, a.x[i], a.t[j]));
      sq += wx * wt * d * d;
      if (d > r.per_slice_max[j]) r.per_slice_max[j] = d;
      if (d > r.l_inf) {
        r.l_inf = d;
        r.x_at_max = a.x[i];
        r.t_at_max = a.t[j];
      }
    }
  }
  r.l2 = std::sqrt(sq);
  return r;
}

void write_csv(const Field& f, const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) fail(ErrKind::IoError, "cannot open " + path + " for writing");
  std::fputs("x,t,u\n", fp);
  for (size_t i = 0; i < f.nx(); ++i)
    for (size_t j = 0; j < f.nt(); ++j)
      std::fprintf(fp, "%.17g,%.17g,%.17g\n", f.x[i], f.t[j], f.at(i, j));
  if (std::fclose(fp) != 0) fail(ErrKind::IoError, "write failed for " + path);
}

void write_binary(const Field& f, const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) fail(ErrKind::IoError, "cannot open " + path + " for writing");
  const char magic[4] = {'E', 'S', 'J', 'F'};
  uint32_t header[3] = {1u, static_cast<uint32_t>(f.nx()), static_cast<uint32_t>(f.nt())};
  bool ok = std::fwrite(magic, 1, 4, fp) == 4 && std::fwrite(header, 4, 3, fp) == 3 &&
            std::fwrite(f.x.data(), 8, f.nx(), fp) == f.nx() &&
            std::fwrite(f.t.data(), 8, f.nt(), fp) == f.nt() &&
            std::fwrite(f.v.data(), 8, f.v.size(), fp) == f.v.size();
  if (std::fclose(fp) != 0) ok = false;
  if (!ok) fail(ErrKind::IoError, "write failed for " + path);
}

Field read_binary(const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "rb");
  if (!fp) fail(ErrKind::IoError, "cannot open " + path);
  char magic[4];
  uint32_t header[3];
  Field f;
  bool ok = std::fread(magic, 1, 4, fp) == 4 && std::memcmp(magic, "ESJF", 4) == 0 &&
            std::fread(header, 4, 3, fp) == 3 && header[0] == 1u;
  if (ok) {
    f.x.resize(header[1]);
    f.t.resize(header[2]);
    f.v.resize(static_cast<size_t>(header[1]) * header[2]);
    ok = std::fread(f.x.data(), 8, f.x.size(), fp) == f.x.size() &&
         std::fread(f.t.data(), 8, f.t.size(), fp) == f.t.size() &&
         std::fread(f.v.data(), 8, f.v.size(), fp) == f.v.size();
  }
  std::fclose(fp);
  if (!ok) fail(ErrKind::IoError, "malformed field file " + path);
  return f;
}

} // namespace esjj
