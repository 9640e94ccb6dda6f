// Shared environment builders for the unit and acceptance suites.
#ifndef IFD_TESTS_ENV_SUITE_HPP
#define IFD_TESTS_ENV_SUITE_HPP

#include <string>
#include <vector>

#include "ifd/environment.hpp"
#include "ifd/expr.hpp"
#include "ifd/grid.hpp"

namespace env_suite {

struct Spec {
  const char* name;
  const char* r;
  const char* K;
};

inline ifd::Environment make(const Spec& spec, const ifd::Grid& grid) {
  return ifd::Environment::from_expressions(grid, ifd::Expr::parse(spec.r),
                                            ifd::Expr::parse(spec.K));
}

// Ten smooth environments on [0,1] x [0,1] for the envelope residual study.
inline const std::vector<Spec>& smooth_specs() {
  static const std::vector<Spec> specs = {
      {"constant", "2", "3"},
      {"unit-K", "1+0.5*sin(2*pi*t)", "1"},
      {"static-heterogeneous", "2", "1+0.5*cos(2*pi*x)"},
      {"seasonal-r", "2+0.2*sin(2*pi*t)", "1+0.4*cos(2*pi*x)"},
      {"product", "1.5", "1+0.3*sin(2*pi*x)*sin(2*pi*t)+0.2*cos(2*pi*x)"},
      {"coupled", "2+0.3*cos(2*pi*t)*cos(2*pi*x)", "1+0.25*sin(2*pi*x)"},
      {"homogeneous-seasonal", "2", "1.5+0.5*sin(2*pi*t)"},
      {"both-seasonal", "1+0.3*cos(2*pi*t)", "2+0.8*sin(2*pi*t)"},
      {"skewed", "exp(0.3*sin(2*pi*t))", "1+0.5*cos(2*pi*x)^2"},
      {"traveling-peak", "2", "1+0.6*cos(2*pi*x-1.5*sin(2*pi*t))"},
  };
  return specs;
}

// Feasible heterogeneous scenarios (checked feasible by the suites that use
// them) for the ESS, invasion, and sweep studies.
inline const std::vector<Spec>& feasible_specs() {
  static const std::vector<Spec> specs = {
      {"static-heterogeneous", "2", "1+0.5*cos(2*pi*x)"},
      {"seasonal-r", "2+0.2*sin(2*pi*t)", "1+0.4*cos(2*pi*x)"},
      {"traveling-peak", "2", "1+0.6*cos(2*pi*x-1.5*sin(2*pi*t))"},
      {"coupled", "2+0.3*cos(2*pi*t)*cos(2*pi*x)", "1+0.25*sin(2*pi*x)"},
  };
  return specs;
}

} // namespace env_suite

#endif
