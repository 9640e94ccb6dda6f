#ifndef IFD_FLOQUET_HPP
#define IFD_FLOQUET_HPP

#include <vector>

#include "ifd/dynamics.hpp"
#include "ifd/environment.hpp"
#include "ifd/strategy.hpp"

namespace ifd {

// A linear periodic-parabolic eigenvalue problem
//   phi_t = L phi + potential * phi.
// Divergence form: L phi = d/dx [mu phi_x - P phi], zero total flux at the
// boundary; `drift` is P. Non-divergence form: L phi = mu phi_xx +
// drift * phi_x, Neumann boundary; discretized as the exact transpose of the
// divergence-form operator so the primal/adjoint multipliers agree at the
// semidiscrete level.
struct LinearProblem {
  enum class Form { divergence, nondivergence };
  Form form;
  SpaceTimeField mu;
  SpaceTimeField drift;
  SpaceTimeField potential;
};

struct FloquetResult {
  double rho;                   // principal multiplier of the period map
  double lambda1;               // -ln(rho) / T
  SpaceTimeField eigenfunction; // positive, normalized to max 1
  double residual;              // ||Phi(psi) - rho psi||_inf / rho at convergence
  std::size_t iterations;
  bool invades = false;         // set by invasion_test
};

// Principal Floquet multiplier by power iteration on the positive cone;
// lambda1 = -ln(rho)/T. Errors on sign change in an iterate or
// non-convergence within 10^4 iterations.
FloquetResult principal_eigenvalue(const LinearProblem& p);

// Linearization of the invader's rare-invasion problem around the resident
// orbit: potential F = r (1 - theta/K), divergence form with the invader's
// (mu, P). Verdict `invades` iff lambda1 < -eps_eig.
FloquetResult invasion_test(const Environment& env, const PeriodicOrbit& resident_orbit,
                            const Strategy& invader, double eps_eig = 1e-8);

struct AlphaSweepEntry {
  double alpha;
  double lambda1;
  double rho;
  std::size_t iterations;
};

// Non-divergence sweep phi_t = mu phi_xx + alpha (gamma~(t) - x) phi_x + V phi
// with V and gamma time-reversed relative to the resident fitness field.
// Entries run concurrently over at most `jobs` threads (0 = hardware
// concurrency); `alphas` must be positive and increasing.
std::vector<AlphaSweepEntry> alpha_sweep(const Environment& env,
                                         const PeriodicOrbit& resident_orbit,
                                         const PeriodicPath& gamma, double mu,
                                         const std::vector<double>& alphas,
                                         std::size_t jobs = 0);

// Asymptotic bound from the sweep's limiting inequality:
// -(1/T) * integral of V(gamma~(t), t) dt = -path_integral / T.
double alpha_sweep_bound(const PeriodicPath& gamma);

// Index reflection t_j -> t_{(nt - j) mod nt}; exact on the grid.
SpaceTimeField time_reverse(const SpaceTimeField& f);
std::vector<double> time_reverse(std::vector<double> series);

} // namespace ifd

#endif
