#ifndef IFD_GRID_HPP
#define IFD_GRID_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ifd/error.hpp"
#include "ifd/expr.hpp"

namespace ifd {

// Uniform cell-centered discretization of the habitat [0, L] and one
// period [0, T]. Cell centers x_i = (i + 1/2) h, time nodes t_j = j tau.
class Grid {
public:
  Grid(double L, std::size_t nx, double T, std::size_t nt);

  double L() const noexcept { return L_; }
  double T() const noexcept { return T_; }
  std::size_t nx() const noexcept { return nx_; }
  std::size_t nt() const noexcept { return nt_; }
  double h() const noexcept { return h_; }
  double tau() const noexcept { return tau_; }

  double x(std::size_t i) const noexcept { return (static_cast<double>(i) + 0.5) * h_; }
  double t(std::size_t j) const noexcept { return static_cast<double>(j) * tau_; }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.L_ == b.L_ && a.T_ == b.T_ && a.nx_ == b.nx_ && a.nt_ == b.nt_;
  }

private:
  double L_, T_;
  std::size_t nx_, nt_;
  double h_, tau_;
};

// A sampled T-periodic scalar field on the space-time grid.
// values(i, j) ~ f(x_i, t_j); storage is time-contiguous per cell.
class SpaceTimeField {
public:
  SpaceTimeField(Grid grid, double fill = 0.0);
  SpaceTimeField(Grid grid, std::vector<double> values);

  const Grid& grid() const noexcept { return grid_; }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    return values_[i * grid_.nt() + j];
  }
  double& operator()(std::size_t i, std::size_t j) noexcept {
    return values_[i * grid_.nt() + j];
  }

  std::span<const double> cell_series(std::size_t i) const noexcept {
    return {values_.data() + i * grid_.nt(), grid_.nt()};
  }
  std::span<double> cell_series(std::size_t i) noexcept {
    return {values_.data() + i * grid_.nt(), grid_.nt()};
  }

  // Spatial slice at time node j (length nx copy).
  std::vector<double> at_time(std::size_t j) const;

  const std::vector<double>& values() const noexcept { return values_; }

  double min() const;
  double max() const;
  double max_abs() const;

  // Verifies every entry is finite; names the offending (i, j) otherwise.
  void require_finite(const std::string& name) const;
  // Verifies min > 0; names the offending (i, j) otherwise.
  void require_positive(const std::string& name) const;

private:
  Grid grid_;
  std::vector<double> values_;
};

// A T-periodic scalar of time only, sampled at the nt time nodes.
class PeriodicScalar {
public:
  PeriodicScalar(Grid grid, double fill = 0.0);
  PeriodicScalar(Grid grid, std::vector<double> values);

  const Grid& grid() const noexcept { return grid_; }
  double operator[](std::size_t j) const noexcept { return values_[j]; }
  double& operator[](std::size_t j) noexcept { return values_[j]; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  double min() const;
  double max() const;
  void require_finite(const std::string& name) const;

private:
  Grid grid_;
  std::vector<double> values_;
};

// Tridiagonal operator on length-nx vectors; rows i couple cells i-1, i, i+1.
struct TridiagonalOperator {
  std::vector<double> lower, diag, upper; // lower[0] and upper[nx-1] unused

  std::size_t size() const noexcept { return diag.size(); }
  void apply(std::span<const double> in, std::span<double> out) const;
  void apply_transpose(std::span<const double> in, std::span<double> out) const;
  TridiagonalOperator transpose() const;
};

// --- operations -----------------------------------------------------------

SpaceTimeField sample(const Expr& e, const Grid& grid);
// Samples a time-only expression at the time nodes (x fixed at 0).
PeriodicScalar sample_scalar(const Expr& e, const Grid& grid);

// f_bar(t_j) = (1/nx) sum_i f(i, j); equals (1/|Omega|) int f dx under the
// midpoint rule.
PeriodicScalar space_mean(const SpaceTimeField& f);

// Spectral (Fourier) differentiation along the periodic time axis.
SpaceTimeField time_derivative(const SpaceTimeField& f);
std::vector<double> time_derivative(const Grid& grid, std::span<const double> series);

// Keeps the mean and the harmonics |k| <= max_harmonic of a periodic
// series, discarding the rest.
std::vector<double> fourier_lowpass(std::span<const double> series,
                                    std::size_t max_harmonic);

// Periodic quadratures: rectangle rule, exact to spectral accuracy for
// smooth periodic data.
double time_integral(const PeriodicScalar& p);
double space_integral(const Grid& grid, std::span<const double> cells);

// Face values of a cell-centered slice by arithmetic averaging; the two
// boundary faces take the adjacent cell value (only used where the flux is
// forced to zero anyway).
std::vector<double> faces_from_cells(std::span<const double> cells);

// Assembles the conservative flux-form operator from interior-face
// coefficients: (A u)_i = (J_{i+1/2} - J_{i-1/2}) / h with
// J = mu_face (u_{i+1} - u_i)/h - P_face (u_i + u_{i+1})/2 and zero flux at
// the two boundary faces. mu_face/P_face have length nx+1; entries 0 and nx
// are ignored.
TridiagonalOperator assemble_flux_operator(std::span<const double> mu_face,
                                           std::span<const double> P_face, double h);

// Spec'd form: coefficients taken from the fields at time node j, faces by
// arithmetic averaging.
TridiagonalOperator divergence_flux_operator(const SpaceTimeField& mu,
                                             const SpaceTimeField& P, std::size_t j);

// --- serialization --------------------------------------------------------

// CSV with header "x,t,value", row-major over (i, j), 17 significant digits.
void write_field_csv(const SpaceTimeField& f, std::ostream& os);
SpaceTimeField read_field_csv(const Grid& grid, std::istream& is);

} // namespace ifd

#endif
