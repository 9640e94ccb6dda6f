#ifndef IFD_FITNESS_HPP
#define IFD_FITNESS_HPP

#include "ifd/environment.hpp"
#include "ifd/grid.hpp"
#include "ifd/strategy.hpp"

namespace ifd {

// F(x,t) = r (1 - theta/K) for a supplied density field theta.
struct FitnessField {
  SpaceTimeField F;
  double flatness; // max over t of (max_x F - min_x F)
};

FitnessField fitness_field(const Environment& env, const SpaceTimeField& theta);

// Definition of an IFD at grid level: F is independent of x up to
// tol * (1 + max |F|). Default tolerances: 1e-6 for analytically
// constructed densities, 1e-2 for simulated orbits (discretization-limited).
inline constexpr double kIfdTolAnalytic = 1e-6;
inline constexpr double kIfdTolSimulated = 1e-2;
bool is_ifd(const FitnessField& F, double tol);

// Integral of F along the path by periodic trapezoid quadrature with linear
// interpolation of F in x at gamma(t_j).
double pathwise_fitness(const SpaceTimeField& F, const PeriodicPath& gamma);

// (inf over paths, sup over paths) = (integral of min_x F, integral of max_x F).
struct PathFitnessBounds {
  double inf;
  double sup;
};
PathFitnessBounds path_fitness_bounds(const SpaceTimeField& F);

} // namespace ifd

#endif
