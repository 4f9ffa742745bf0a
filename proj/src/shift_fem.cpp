#include "spod/shift_fem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <vector>

namespace spod {

namespace {

inline int wrap(long i, int n) {
  long r = i % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

void check_len(const ShiftGram& a, Eigen::Index len) {
  if (len != a.n) throw DimensionError("gram of size " + std::to_string(a.n) + " applied to vector of length " + std::to_string(len));
}

}  // namespace

ShiftSplit decompose_shift(double p, const SpatialGrid& grid) {
  const double L = grid.length();
  const double h = grid.h();
  const int n = grid.n();
  double pr = std::fmod(p, L);
  if (pr < 0.0) pr += L;
  if (pr >= L) pr = 0.0;  // p slightly below a multiple of L rounds up to L
  long q = static_cast<long>(std::floor(pr / h));
  double frac = pr - q * h;
  if (frac < 0.0) {
    --q;
    frac += h;
  }
  if (frac >= h) {
    ++q;
    frac -= h;
  }
  // snap rounding residue of whole-cell shifts such as -h or 0.3 - 0.1
  const double tiny = 8.0 * std::numeric_limits<double>::epsilon() * std::max(L, std::abs(p));
  if (h - frac <= tiny) {
    ++q;
    frac = 0.0;
  } else if (frac <= tiny) {
    frac = 0.0;
  }
  frac = std::clamp(frac, 0.0, std::nextafter(h, 0.0));
  return {wrap(q, n), frac};
}

ShiftGram gram_F(double p, const SpatialGrid& grid) {
  const auto [q, s] = decompose_shift(p, grid);
  const double h = grid.h();
  const double h2 = h * h;
  const double d = h - s;
  ShiftGram g{q, s, {}, grid.n(), h};
  g.band[0] = s * s * s / (6.0 * h2);
  g.band[1] = (d * d * d / 6.0 - s * s * s / 3.0 + h2 * s) / h2;
  g.band[2] = (2.0 / 3.0 * d * d * d + s * d * d + s * h * d + s * s * s / 6.0) / h2;
  g.band[3] = d * d * d / (6.0 * h2);
  return g;
}

ShiftGram gram_G(double p, const SpatialGrid& grid) {
  const auto [q, s] = decompose_shift(p, grid);
  const double h = grid.h();
  const double h2 = h * h;
  const double d = h - s;
  ShiftGram g{q, s, {}, grid.n(), h};
  g.band[0] = s * s / (2.0 * h2);
  g.band[1] = -(2.0 * s * s - 2.0 * h * s - 0.5 * d * d) / h2;
  g.band[2] = -(2.0 * s * h - 1.5 * s * s) / h2;
  g.band[3] = -d * d / (2.0 * h2);
  return g;
}

ShiftGram gram_M(double p_i, double p_j, const SpatialGrid& grid) { return gram_F(p_i - p_j, grid); }
ShiftGram gram_N(double p_i, double p_j, const SpatialGrid& grid) { return gram_G(p_i - p_j, grid); }

ShiftGram stiffness_gram(const SpatialGrid& grid) {
  const double h = grid.h();
  return ShiftGram{0, 0.0, {0.0, -1.0 / h, 2.0 / h, -1.0 / h}, grid.n(), h};
}

void apply_gram(const ShiftGram& a, const double* v, double* out) {
  const int n = a.n;
  const auto& b = a.band;
  // column of band[0] in row k is k - 2 - offset
  int c = wrap(-2L - a.offset, n);
  for (int k = 0; k < n; ++k) {
    const int c1 = c + 1 == n ? 0 : c + 1;
    const int c2 = c1 + 1 == n ? 0 : c1 + 1;
    const int c3 = c2 + 1 == n ? 0 : c2 + 1;
    out[k] = b[0] * v[c] + b[1] * v[c1] + b[2] * v[c2] + b[3] * v[c3];
    c = c1;
  }
}

void apply_gram_transpose(const ShiftGram& a, const double* v, double* out) {
  const int n = a.n;
  const auto& b = a.band;
  // (A^T v)_l = sum_j b_j v_{l - (j - 2) + offset}
  int r = wrap(2L + a.offset, n);  // row feeding band[0]
  for (int l = 0; l < n; ++l) {
    const int r1 = r == 0 ? n - 1 : r - 1;
    const int r2 = r1 == 0 ? n - 1 : r1 - 1;
    const int r3 = r2 == 0 ? n - 1 : r2 - 1;
    out[l] = b[0] * v[r] + b[1] * v[r1] + b[2] * v[r2] + b[3] * v[r3];
    r = r + 1 == n ? 0 : r + 1;
  }
}

Vector apply_gram(const ShiftGram& a, const Vector& v) {
  check_len(a, v.size());
  Vector out(a.n);
  apply_gram(a, v.data(), out.data());
  return out;
}

Vector apply_gram_transpose(const ShiftGram& a, const Vector& v) {
  check_len(a, v.size());
  Vector out(a.n);
  apply_gram_transpose(a, v.data(), out.data());
  return out;
}

Matrix to_dense(const ShiftGram& a) {
  Matrix m = Matrix::Zero(a.n, a.n);
  for (int k = 0; k < a.n; ++k)
    for (int j = 0; j < 4; ++j) m(k, wrap(static_cast<long>(k) + (j - 2) - a.offset, a.n)) += a.band[j];
  return m;
}

void write_dense_csv(const ShiftGram& a, std::ostream& out) {
  const Matrix m = to_dense(a);
  for (Eigen::Index k = 0; k < m.rows(); ++k) {
    for (Eigen::Index l = 0; l < m.cols(); ++l) {
      if (l) out << ',';
      out << format_double(m(k, l));
    }
    out << '\n';
  }
}

void shift_field(double p, const double* v, double* out, const SpatialGrid& grid) {
  const auto [q, frac] = decompose_shift(p, grid);
  const int n = grid.n();
  const double s = frac / grid.h();
  // x_l - p = (l - q - 1) h + (h - frac): blend of nodes l-q-1 and l-q
  int lo = wrap(-1L - q, n);
  if (s == 0.0) {
    for (int l = 0; l < n; ++l) {
      const int hi = lo + 1 == n ? 0 : lo + 1;
      out[l] = v[hi];
      lo = hi;
    }
    return;
  }
  for (int l = 0; l < n; ++l) {
    const int hi = lo + 1 == n ? 0 : lo + 1;
    out[l] = s * v[lo] + (1.0 - s) * v[hi];
    lo = hi;
  }
}

Vector shift_field(double p, const Vector& v, const SpatialGrid& grid) {
  if (v.size() != grid.n()) throw DimensionError("shift_field: vector length does not match grid");
  Vector out(grid.n());
  shift_field(p, v.data(), out.data(), grid);
  return out;
}

void shift_field_derivative(double p, const double* v, double* out, const SpatialGrid& grid) {
  const auto [q, frac] = decompose_shift(p, grid);
  (void)frac;
  const int n = grid.n();
  const double inv_h = 1.0 / grid.h();
  int lo = wrap(-1L - q, n);
  for (int l = 0; l < n; ++l) {
    const int hi = lo + 1 == n ? 0 : lo + 1;
    out[l] = (v[lo] - v[hi]) * inv_h;
    lo = hi;
  }
}

Vector shift_field_derivative(double p, const Vector& v, const SpatialGrid& grid) {
  if (v.size() != grid.n()) throw DimensionError("shift_field_derivative: vector length does not match grid");
  Vector out(grid.n());
  shift_field_derivative(p, v.data(), out.data(), grid);
  return out;
}

namespace {

// Periodic P1 interpolant and its derivative at arbitrary x, evaluated cell-wise.
struct P1Function {
  const Vector& c;
  double h;
  double L;
  int n;

  std::pair<int, double> locate(double x) const {
    double xr = std::fmod(x, L);
    if (xr < 0) xr += L;
    long cell = static_cast<long>(std::floor(xr / h));
    if (cell >= n) cell = n - 1;
    return {static_cast<int>(cell), xr - cell * h};
  }
  double value(double x) const {
    auto [cell, off] = locate(x);
    const double t = off / h;
    return (1.0 - t) * c[cell] + t * c[(cell + 1) % n];
  }
  double slope(double x) const {
    auto [cell, off] = locate(x);
    (void)off;
    return (c[(cell + 1) % n] - c[cell]) / h;
  }
};

}  // namespace

double quadrature_inner_oracle(const Vector& a, const Vector& b, double p, const SpatialGrid& grid,
                               long panels, bool derivative) {
  const int n = grid.n();
  if (a.size() != n || b.size() != n) throw DimensionError("quadrature_inner_oracle: length mismatch");
  if (panels < 1) throw InvalidArgument("quadrature_inner_oracle: panels must be positive");
  const double L = grid.length();
  const double h = grid.h();
  const P1Function fa{a, h, L, n};
  const P1Function fb{b, h, L, n};

  std::vector<double> cuts;
  cuts.reserve(2 * n + 2);
  double pr = std::fmod(p, L);
  if (pr < 0) pr += L;
  for (int j = 0; j < n; ++j) {
    cuts.push_back(j * h);
    double s = j * h + pr;
    if (s >= L) s -= L;
    cuts.push_back(s);
  }
  cuts.push_back(L);
  std::sort(cuts.begin(), cuts.end());

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double x0 = cuts[i];
    const double x1 = cuts[i + 1];
    const double len = x1 - x0;
    if (len <= 0.0) continue;
    const long k = std::max(1L, static_cast<long>(std::ceil(static_cast<double>(panels) * len / L)));
    const double dx = len / k;
    double part = 0.0;
    for (long j = 0; j < k; ++j) {
      const double x = x0 + (j + 0.5) * dx;
      // T(p) B evaluated at x is B(x - p); d/dp of that is -B'(x - p)
      const double shifted = derivative ? -fb.slope(x - p) : fb.value(x - p);
      part += fa.value(x) * shifted;
    }
    total += part * dx;
  }
  return total;
}

}  // namespace spod
