#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "esjj/errors.hpp"

namespace esjj {

enum class Provenance { Linear, Picard, Oracle, Other };

// Space-time sample grid u(x_i, t_j), x-major storage.
struct Field {
  std::vector<double> x;
  std::vector<double> t;
  std::vector<double> v;  // size x.size() * t.size(), v[i * nt + j]
  Provenance meta = Provenance::Other;

  size_t nx() const { return x.size(); }
  size_t nt() const { return t.size(); }
  double& at(size_t i, size_t j) { return v[i * t.size() + j]; }
  double at(size_t i, size_t j) const { return v[i * t.size() + j]; }
};

Field make_field(std::vector<double> x, std::vector<double> t, Provenance meta);

std::vector<double> uniform_grid(double a, double b, size_t n_points);

inline constexpr double bc_tol = 1e-7;

// Dimensions match, all entries finite; for solver-produced fields whose grid
// touches the strip edges, boundary columns stay below bc_tol. Without the
// parameters only the x = 0 edge can be recognized; pass them to check x = l.
struct Parameters;
void validate_field(const Field& f);
void validate_field(const Field& f, const Parameters& p);

struct ErrorReport {
  double l_inf = 0.0;
  double l2 = 0.0;                    // grid-weighted RMS-style norm
  std::vector<double> per_slice_max;  // one entry per time slice
  double x_at_max = 0.0;
  double t_at_max = 0.0;
};

// Norms of a - b with b interpolated onto a's grid (linear in x and t).
// Throws GridMismatch when b's domain does not cover a's.
ErrorReport compare_fields(const Field& a, const Field& b);

// Columns x, t, u with 17 significant digits.
void write_csv(const Field& f, const std::string& path);

// 16-byte header: magic "ESJF", version, nx, nt (little-endian u32), then
// x grid, t grid, and x-major values as little-endian 64-bit floats.
void write_binary(const Field& f, const std::string& path);
Field read_binary(const std::string& path);

} // namespace esjj
