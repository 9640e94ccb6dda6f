#ifndef IFD_ENVIRONMENT_HPP
#define IFD_ENVIRONMENT_HPP

#include "ifd/grid.hpp"

namespace ifd {

// Habitat data: intrinsic growth rate r(x,t) and carrying capacity K(x,t),
// T-periodic with K > 0. r must be nonnegative; r = 0 switches the reaction
// off entirely (used by the pure-dispersal conservation studies), while the
// envelope/feasibility machinery needs r > 0 and reports the division
// failure itself.
struct Environment {
  Grid grid;
  SpaceTimeField r;
  SpaceTimeField K;

  Environment(Grid g, SpaceTimeField r_field, SpaceTimeField K_field)
      : grid(g), r(std::move(r_field)), K(std::move(K_field)) {
    r.require_finite("r");
    if (r.min() < 0.0) throw ValidationError("environment: r must be nonnegative");
    K.require_positive("K");
  }

  static Environment from_expressions(const Grid& g, const Expr& r_expr, const Expr& K_expr) {
    return Environment(g, sample(r_expr, g), sample(K_expr, g));
  }
};

} // namespace ifd

#endif
