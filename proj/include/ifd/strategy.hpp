#ifndef IFD_STRATEGY_HPP
#define IFD_STRATEGY_HPP

#include <string>

#include "ifd/bernoulli.hpp"
#include "ifd/environment.hpp"
#include "ifd/grid.hpp"

namespace ifd {

// A dispersal pair (mu, P) with no-flux boundary semantics. P is stored at
// cell centers; the mesh operator interpolates it to faces.
struct Strategy {
  SpaceTimeField mu;
  SpaceTimeField P;
  std::string label;

  Strategy(SpaceTimeField mu_field, SpaceTimeField P_field, std::string lbl)
      : mu(std::move(mu_field)), P(std::move(P_field)), label(std::move(lbl)) {
    mu.require_positive("mu");
    P.require_finite("P");
  }

  static Strategy pure_diffusion(const Grid& grid, double mu_value,
                                 const std::string& label = "diffusion");
};

// A smooth T-periodic curve through the interior of the habitat, sampled at
// the time nodes.
struct PeriodicPath {
  Grid grid;
  std::vector<double> gamma; // length nt, values in (delta_margin, L - delta_margin)
  std::size_t modes;         // retained Fourier harmonics (smoothness proxy)
  double delta_margin;
  double path_integral;      // achieved integral of F along the path
};

struct PoissonResult {
  SpaceTimeField q;       // mean-normalized potential, Neumann boundary
  double compat_defect;   // max over t of |spatial mean of the rhs|
  // Face gradients q_x per time node: qx_faces[j] has length nx+1 with
  // exact zeros at both boundary faces.
  std::vector<std::vector<double>> qx_faces;
};

// Solves q_xx = rhs, q_x = 0 at both boundary faces, spatial mean of q = 0,
// per time slice by cumulative midpoint quadrature of the
// compatibility-corrected right-hand side.
PoissonResult solve_neumann_poisson(const SpaceTimeField& rhs, double compat_tol = 1e-8);

// The IFD advection field P* = (mu dK~/dx - dq/dx) / K~, built at faces and
// averaged back to cell centers; requires a feasible environment.
Strategy construct_ifd_strategy(const Environment& env, const SpaceTimeField& mu);
Strategy construct_ifd_strategy(const Environment& env, double mu_value);

// Argmax path of the fitness field, mollified by Fourier truncation and
// clamped into the interior. When `require_positive_integral` is set (the
// default), a non-positive achieved path integral is an error: it occurs
// exactly when F is independent of x, i.e. the resident is an IFD.
PeriodicPath extract_invasion_path(const SpaceTimeField& F, std::size_t modes,
                                   double delta_margin,
                                   bool require_positive_integral = true);

// Pursuit invader: constant diffusion mu and advection P = alpha (gamma(t) - x).
Strategy construct_pursuit_invader(const PeriodicPath& gamma, double alpha, double mu);

} // namespace ifd

#endif
