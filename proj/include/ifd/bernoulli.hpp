#ifndef IFD_BERNOULLI_HPP
#define IFD_BERNOULLI_HPP

#include <cstddef>

#include "ifd/environment.hpp"
#include "ifd/grid.hpp"

namespace ifd {

// Periodic envelope M(t): the unique positive T-periodic solution of
//   M'/M + b(t) M = a(t),
// with a = Kbar / (K/r)bar and b = 1 / (K/r)bar. The log-derivative M'/M is
// carried as the algebraic identity a - b M, never as a numerical
// derivative of M; `residual` cross-checks it against a spectral derivative
// of log M.
struct BernoulliSolution {
  PeriodicScalar M;
  PeriodicScalar logderiv; // M'/M = a - b M
  PeriodicScalar a;
  PeriodicScalar b;
  double residual; // max_t | d/dt log M + b M - a |, d/dt spectral
};

struct FeasibilityReport {
  double margin;   // min over (x,t) of r(x,t) - M'(t)/M(t)
  bool feasible;   // margin > eps
  double argmin_x;
  double argmin_t;
  double eps;
};

// Closed-form periodic solve of the Bernoulli equation from sampled
// coefficients. `phase_shift` rotates the time origin by that many nodes
// before solving and rotates the answer back; the result must not depend on
// it (uniqueness probe).
BernoulliSolution solve_bernoulli(const PeriodicScalar& a, const PeriodicScalar& b,
                                  std::size_t phase_shift = 0);

BernoulliSolution solve_M(const Environment& env, std::size_t phase_shift = 0);

// Ktilde = K/M - (K/r) M'/M^2. Positivity is reported by the caller's
// inspection, not enforced: infeasible environments legitimately produce
// non-positive values somewhere.
SpaceTimeField compute_Ktilde(const Environment& env, const BernoulliSolution& sol);

FeasibilityReport check_feasibility(const Environment& env, const BernoulliSolution& sol,
                                    double eps = 1e-9);

// Pointwise margin fields of the two equivalent feasibility formulations;
// their signs must agree at every grid point.
SpaceTimeField margin_field_r(const Environment& env, const BernoulliSolution& sol);
SpaceTimeField margin_field_r3(const Environment& env, const BernoulliSolution& sol);

// Builds an environment with r = K on which no IFD exists: starting from a
// positive non-constant rho(t), the envelope of r = K = rho(t) has a
// sign-changing M'/M, and a spatial perturbation concentrated where the
// envelope dips below rho forces min_x r - M'/M to change sign in t.
// amplitude < 0 requests an internal line search.
Environment remark_d_counterexample(const PeriodicScalar& rho, double amplitude = -1.0);

// theta*(x,t) = M(t) Ktilde(x,t); requires Ktilde > 0 everywhere.
SpaceTimeField define_ifd_profile(const BernoulliSolution& sol, const SpaceTimeField& Ktilde);

} // namespace ifd

#endif
