#include "ifd/fitness.hpp"

#include <algorithm>
#include <cmath>

namespace ifd {

FitnessField fitness_field(const Environment& env, const SpaceTimeField& theta) {
  const Grid& grid = env.grid;
  if (!(theta.grid() == grid))
    throw ValidationError("fitness_field: theta sampled on a different grid");
  SpaceTimeField F(grid);
  for (std::size_t i = 0; i < grid.nx(); ++i)
    for (std::size_t j = 0; j < grid.nt(); ++j)
      F(i, j) = env.r(i, j) * (1.0 - theta(i, j) / env.K(i, j));
  F.require_finite("F");

  double flatness = 0.0;
  for (std::size_t j = 0; j < grid.nt(); ++j) {
    double lo = F(0, j), hi = F(0, j);
    for (std::size_t i = 1; i < grid.nx(); ++i) {
      lo = std::min(lo, F(i, j));
      hi = std::max(hi, F(i, j));
    }
    flatness = std::max(flatness, hi - lo);
  }
  return FitnessField{std::move(F), flatness};
}

bool is_ifd(const FitnessField& F, double tol) {
  return F.flatness < tol * (1.0 + F.F.max_abs());
}

double pathwise_fitness(const SpaceTimeField& F, const PeriodicPath& gamma) {
  const Grid& grid = F.grid();
  double sum = 0.0;
  for (std::size_t j = 0; j < grid.nt(); ++j) {
    double xg = gamma.gamma[j];
    // Linear interpolation between cell centers; constant beyond the
    // outermost centers (the path is interior anyway).
    double s = xg / grid.h() - 0.5;
    double v;
    if (s <= 0.0) {
      v = F(0, j);
    } else if (s >= static_cast<double>(grid.nx() - 1)) {
      v = F(grid.nx() - 1, j);
    } else {
      auto i0 = static_cast<std::size_t>(s);
      double w = s - static_cast<double>(i0);
      v = (1.0 - w) * F(i0, j) + w * F(i0 + 1, j);
    }
    sum += v;
  }
  return sum * grid.tau();
}

PathFitnessBounds path_fitness_bounds(const SpaceTimeField& F) {
  const Grid& grid = F.grid();
  double inf = 0.0, sup = 0.0;
  for (std::size_t j = 0; j < grid.nt(); ++j) {
    double lo = F(0, j), hi = F(0, j);
    for (std::size_t i = 1; i < grid.nx(); ++i) {
      lo = std::min(lo, F(i, j));
      hi = std::max(hi, F(i, j));
    }
    inf += lo;
    sup += hi;
  }
  return PathFitnessBounds{inf * grid.tau(), sup * grid.tau()};
}

} // namespace ifd
