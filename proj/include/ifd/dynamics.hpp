#ifndef IFD_DYNAMICS_HPP
#define IFD_DYNAMICS_HPP

#include <memory>
#include <vector>

#include "ifd/environment.hpp"
#include "ifd/strategy.hpp"

namespace ifd {

using SpeciesState = std::vector<std::vector<double>>; // [species][cell]

struct Trajectory {
  std::size_t species;
  // masses[s][p] = h * sum_i u_s at the end of period p (index 0 = initial).
  std::vector<std::vector<double>> masses;
  SpeciesState final_state;
  std::size_t periods;
};

struct PeriodicOrbit {
  std::size_t species;
  std::vector<SpaceTimeField> states; // one period per species, T-periodic
  double defect;                      // sup-norm of Phi(state) - state
  std::size_t periods;
  std::vector<double> defect_history;
};

// Explicit RK4 method-of-lines stepper for the N-species system
//   du_s/dt = A_s(t) u_s + r u_s (1 - (sum_j u_j)/K),
// with conservative flux-form dispersal per strategy and automatic substep
// selection against the diffusive and advective stability bounds.
// Coefficients are evaluated at the RK stage times by periodic cubic
// interpolation of the nt-grid samples.
class Stepper {
public:
  Stepper(const Environment& env, std::vector<Strategy> strategies,
          std::size_t min_substeps = 0);
  ~Stepper();
  Stepper(Stepper&&) noexcept;

  std::size_t substeps() const noexcept;
  const std::vector<std::string>& warnings() const noexcept;
  std::size_t species() const noexcept;

  // Advances one full period in place. `reaction_mass` (when non-null)
  // receives the RK4-weighted quadrature of the reaction term's mass
  // contribution per species; dispersal contributes exactly zero mass.
  void step_period(SpeciesState& state, std::vector<double>* reaction_mass = nullptr);

  // As above, also recording the state at every time node into the given
  // per-species fields (snapshot at t_j taken before substepping past it).
  void step_period_recording(SpeciesState& state, std::vector<SpaceTimeField>& out);

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// One-shot convenience wrapper around Stepper.
SpeciesState step_period(const Environment& env, const std::vector<Strategy>& strategies,
                         const SpeciesState& state, std::size_t substeps);

// Period-map fixed-point iteration. The target orbits are globally
// asymptotically stable, so plain iteration converges; non-convergence and
// collapse to zero are reported with the defect history.
PeriodicOrbit find_periodic_orbit(const Environment& env,
                                  const std::vector<Strategy>& strategies,
                                  const SpeciesState& initial, double tol = 1e-9,
                                  std::size_t max_periods = 20000);

// Two-species run recording per-period masses. When stop_mass_ratio > 0 the
// run ends early once species 1's mass falls below that fraction of its
// initial mass (competitive exclusion detected).
Trajectory run_competition(const Environment& env, const Strategy& strat_u,
                           const Strategy& strat_v, const std::vector<double>& u0,
                           const std::vector<double>& v0, std::size_t periods,
                           double stop_mass_ratio = 0.0);

} // namespace ifd

#endif
