#include "ifd/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace ifd {

Grid::Grid(double L, std::size_t nx, double T, std::size_t nt)
    : L_(L), T_(T), nx_(nx), nt_(nt) {
  if (!(L > 0.0) || !std::isfinite(L)) throw ValidationError("grid: L must be positive");
  if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("grid: T must be positive");
  if (nx < 8) throw ValidationError("grid: nx must be >= 8");
  if (nt < 8) throw ValidationError("grid: nt must be >= 8");
  h_ = L / static_cast<double>(nx);
  tau_ = T / static_cast<double>(nt);
}

SpaceTimeField::SpaceTimeField(Grid grid, double fill)
    : grid_(grid), values_(grid.nx() * grid.nt(), fill) {}

SpaceTimeField::SpaceTimeField(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.nx() * grid_.nt())
    throw ValidationError("field: value array size does not match grid");
}

std::vector<double> SpaceTimeField::at_time(std::size_t j) const {
  std::vector<double> out(grid_.nx());
  for (std::size_t i = 0; i < grid_.nx(); ++i) out[i] = (*this)(i, j);
  return out;
}

double SpaceTimeField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double SpaceTimeField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double SpaceTimeField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::fabs(v));
  return m;
}

void SpaceTimeField::require_finite(const std::string& name) const {
  for (std::size_t i = 0; i < grid_.nx(); ++i)
    for (std::size_t j = 0; j < grid_.nt(); ++j)
      if (!std::isfinite((*this)(i, j)))
        throw NumericalError("field " + name + ": non-finite value at cell " +
                             std::to_string(i) + ", time node " + std::to_string(j));
}

void SpaceTimeField::require_positive(const std::string& name) const {
  require_finite(name);
  for (std::size_t i = 0; i < grid_.nx(); ++i)
    for (std::size_t j = 0; j < grid_.nt(); ++j)
      if (!((*this)(i, j) > 0.0))
        throw ValidationError("field " + name + ": non-positive value " +
                              std::to_string((*this)(i, j)) + " at x=" +
                              std::to_string(grid_.x(i)) + ", t=" + std::to_string(grid_.t(j)));
}

PeriodicScalar::PeriodicScalar(Grid grid, double fill)
    : grid_(grid), values_(grid.nt(), fill) {}

PeriodicScalar::PeriodicScalar(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.nt())
    throw ValidationError("periodic scalar: value array size does not match grid");
}

double PeriodicScalar::min() const { return *std::min_element(values_.begin(), values_.end()); }
double PeriodicScalar::max() const { return *std::max_element(values_.begin(), values_.end()); }

void PeriodicScalar::require_finite(const std::string& name) const {
  for (std::size_t j = 0; j < values_.size(); ++j)
    if (!std::isfinite(values_[j]))
      throw NumericalError("scalar " + name + ": non-finite value at time node " +
                           std::to_string(j));
}

void TridiagonalOperator::apply(std::span<const double> in, std::span<double> out) const {
  std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    double v = diag[i] * in[i];
    if (i > 0) v += lower[i] * in[i - 1];
    if (i + 1 < n) v += upper[i] * in[i + 1];
    out[i] = v;
  }
}

void TridiagonalOperator::apply_transpose(std::span<const double> in,
                                          std::span<double> out) const {
  std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    double v = diag[i] * in[i];
    if (i > 0) v += upper[i - 1] * in[i - 1];
    if (i + 1 < n) v += lower[i + 1] * in[i + 1];
    out[i] = v;
  }
}

TridiagonalOperator TridiagonalOperator::transpose() const {
  std::size_t n = size();
  TridiagonalOperator t;
  t.lower.assign(n, 0.0);
  t.diag = diag;
  t.upper.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    t.upper[i] = lower[i + 1];
    t.lower[i + 1] = upper[i];
  }
  return t;
}

SpaceTimeField sample(const Expr& e, const Grid& grid) {
  if (!e.free_parameters().empty())
    throw ValidationError("sample: expression has unbound parameters");
  SpaceTimeField f(grid);
  for (std::size_t i = 0; i < grid.nx(); ++i)
    for (std::size_t j = 0; j < grid.nt(); ++j) {
      try {
        f(i, j) = e.eval(grid.x(i), grid.t(j));
      } catch (const EvalError& err) {
        throw NumericalError(std::string(err.what()) + " while sampling at cell " +
                             std::to_string(i) + ", time node " + std::to_string(j));
      }
    }
  return f;
}

PeriodicScalar sample_scalar(const Expr& e, const Grid& grid) {
  if (e.depends_on_x())
    throw ValidationError("sample_scalar: expression depends on x");
  PeriodicScalar p(grid);
  for (std::size_t j = 0; j < grid.nt(); ++j) p[j] = e.eval(0.0, grid.t(j));
  return p;
}

PeriodicScalar space_mean(const SpaceTimeField& f) {
  const Grid& g = f.grid();
  PeriodicScalar out(g);
  for (std::size_t j = 0; j < g.nt(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.nx(); ++i) s += f(i, j);
    out[j] = s / static_cast<double>(g.nx());
  }
  return out;
}

namespace {

// Trigonometric differentiation matrix for N periodic samples on [0, T).
std::vector<double> spectral_diff_matrix(std::size_t N, double T) {
  std::vector<double> D(N * N, 0.0);
  const double c = M_PI / T;
  const bool even = (N % 2 == 0);
  for (std::size_t j = 0; j < N; ++j)
    for (std::size_t k = 0; k < N; ++k) {
      if (j == k) continue;
      auto d = static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(k);
      double ang = M_PI * static_cast<double>(d) / static_cast<double>(N);
      double sgn = (d % 2 == 0) ? 1.0 : -1.0;
      D[j * N + k] = even ? c * sgn / std::tan(ang) : c * sgn / std::sin(ang);
    }
  return D;
}

} // namespace

std::vector<double> time_derivative(const Grid& grid, std::span<const double> series) {
  std::size_t N = grid.nt();
  static thread_local std::vector<double> cached;
  static thread_local std::size_t cached_N = 0;
  static thread_local double cached_T = 0.0;
  if (cached_N != N || cached_T != grid.T()) {
    cached = spectral_diff_matrix(N, grid.T());
    cached_N = N;
    cached_T = grid.T();
  }
  std::vector<double> out(N, 0.0);
  for (std::size_t j = 0; j < N; ++j) {
    double s = 0.0;
    const double* row = cached.data() + j * N;
    for (std::size_t k = 0; k < N; ++k) s += row[k] * series[k];
    out[j] = s;
  }
  return out;
}

SpaceTimeField time_derivative(const SpaceTimeField& f) {
  const Grid& g = f.grid();
  SpaceTimeField out(g);
  for (std::size_t i = 0; i < g.nx(); ++i) {
    auto d = time_derivative(g, f.cell_series(i));
    std::copy(d.begin(), d.end(), out.cell_series(i).begin());
  }
  return out;
}

std::vector<double> fourier_lowpass(std::span<const double> series,
                                    std::size_t max_harmonic) {
  std::size_t N = series.size();
  std::vector<double> out(N, 0.0);
  // Accumulate mean plus retained cosine/sine harmonics directly.
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(N);
  for (double& v : out) v = mean;
  std::size_t kmax = std::min(max_harmonic, N / 2);
  for (std::size_t k = 1; k <= kmax; ++k) {
    double ck = 0.0, sk = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      double ang = 2.0 * M_PI * static_cast<double>(k * j % N) / static_cast<double>(N);
      ck += series[j] * std::cos(ang);
      sk += series[j] * std::sin(ang);
    }
    double scale = (2 * k == N) ? 1.0 : 2.0; // Nyquist harmonic is not doubled
    ck *= scale / static_cast<double>(N);
    sk *= scale / static_cast<double>(N);
    for (std::size_t j = 0; j < N; ++j) {
      double ang = 2.0 * M_PI * static_cast<double>(k * j % N) / static_cast<double>(N);
      out[j] += ck * std::cos(ang) + sk * std::sin(ang);
    }
  }
  return out;
}

double time_integral(const PeriodicScalar& p) {
  double s = 0.0;
  for (double v : p.values()) s += v;
  return s * p.grid().tau();
}

double space_integral(const Grid& grid, std::span<const double> cells) {
  double s = 0.0;
  for (double v : cells) s += v;
  return s * grid.h();
}

std::vector<double> faces_from_cells(std::span<const double> cells) {
  std::size_t n = cells.size();
  std::vector<double> faces(n + 1);
  faces[0] = cells[0];
  for (std::size_t f = 1; f < n; ++f) faces[f] = 0.5 * (cells[f - 1] + cells[f]);
  faces[n] = cells[n - 1];
  return faces;
}

TridiagonalOperator assemble_flux_operator(std::span<const double> mu_face,
                                           std::span<const double> P_face, double h) {
  std::size_t n = mu_face.size() - 1;
  TridiagonalOperator A;
  A.lower.assign(n, 0.0);
  A.diag.assign(n, 0.0);
  A.upper.assign(n, 0.0);
  const double inv_h = 1.0 / h;
  const double inv_h2 = inv_h * inv_h;
  // Interior face f sits between cells f-1 and f:
  //   J_f = mu_f (u_f - u_{f-1}) / h - P_f (u_{f-1} + u_f) / 2.
  // Row i receives (J_{i+1} - J_i) / h; boundary faces carry no flux.
  for (std::size_t f = 1; f < n; ++f) {
    double mu = mu_face[f], P = P_face[f];
    double a_prev = -mu * inv_h2 - 0.5 * P * inv_h; // coefficient of u_{f-1} in J_f / h
    double a_curr = mu * inv_h2 - 0.5 * P * inv_h;  // coefficient of u_f in J_f / h
    // J_f is the right-face term of row f-1 and the left-face term of row f.
    A.diag[f - 1] += a_prev;
    A.upper[f - 1] += a_curr;
    A.lower[f] -= a_prev;
    A.diag[f] -= a_curr;
  }
  return A;
}

TridiagonalOperator divergence_flux_operator(const SpaceTimeField& mu,
                                             const SpaceTimeField& P, std::size_t j) {
  if (!(mu.min() > 0.0)) throw ValidationError("divergence_flux_operator: mu must be positive");
  auto mu_face = faces_from_cells(mu.at_time(j));
  auto P_face = faces_from_cells(P.at_time(j));
  return assemble_flux_operator(mu_face, P_face, mu.grid().h());
}

void write_field_csv(const SpaceTimeField& f, std::ostream& os) {
  const Grid& g = f.grid();
  os << "x,t,value\n";
  char buf[128];
  for (std::size_t i = 0; i < g.nx(); ++i)
    for (std::size_t j = 0; j < g.nt(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", g.x(i), g.t(j), f(i, j));
      os << buf;
    }
}

SpaceTimeField read_field_csv(const Grid& grid, std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "x,t,value")
    throw ValidationError("field csv: missing \"x,t,value\" header");
  SpaceTimeField f(grid);
  for (std::size_t i = 0; i < grid.nx(); ++i)
    for (std::size_t j = 0; j < grid.nt(); ++j) {
      if (!std::getline(is, line))
        throw ValidationError("field csv: truncated at row for cell " + std::to_string(i));
      std::size_t c1 = line.find(','), c2 = line.find(',', c1 + 1);
      if (c1 == std::string::npos || c2 == std::string::npos)
        throw ValidationError("field csv: malformed row \"" + line + "\"");
      f(i, j) = std::strtod(line.c_str() + c2 + 1, nullptr);
    }
  return f;
}

} // namespace ifd
