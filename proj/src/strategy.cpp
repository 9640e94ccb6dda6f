#include "ifd/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "ifd/fitness.hpp"

namespace ifd {

Strategy Strategy::pure_diffusion(const Grid& grid, double mu_value,
                                  const std::string& label) {
  return Strategy(SpaceTimeField(grid, mu_value), SpaceTimeField(grid, 0.0), label);
}

PoissonResult solve_neumann_poisson(const SpaceTimeField& rhs, double compat_tol) {
  const Grid& grid = rhs.grid();
  const std::size_t nx = grid.nx(), nt = grid.nt();
  rhs.require_finite("poisson rhs");

  PeriodicScalar means = space_mean(rhs);
  double defect = 0.0;
  std::size_t worst = 0;
  for (std::size_t j = 0; j < nt; ++j) {
    double m = std::fabs(means[j]);
    if (m > defect) {
      defect = m;
      worst = j;
    }
  }
  if (defect > compat_tol)
    throw NumericalError("solve_neumann_poisson: compatibility violated, |mean rhs| = " +
                         std::to_string(defect) + " at t = " + std::to_string(grid.t(worst)));

  SpaceTimeField q(grid);
  std::vector<std::vector<double>> qx_faces(nt);
  for (std::size_t j = 0; j < nt; ++j) {
    auto& g = qx_faces[j];
    g.assign(nx + 1, 0.0);
    for (std::size_t f = 1; f < nx; ++f)
      g[f] = g[f - 1] + grid.h() * (rhs(f - 1, j) - means[j]);
    // g[nx] stays exactly 0: the corrected rhs sums to zero.

    std::vector<double> col(nx);
    col[0] = 0.0;
    for (std::size_t i = 1; i < nx; ++i) col[i] = col[i - 1] + grid.h() * g[i];
    double mean_q = 0.0;
    for (double v : col) mean_q += v;
    mean_q /= static_cast<double>(nx);
    for (std::size_t i = 0; i < nx; ++i) q(i, j) = col[i] - mean_q;
  }
  return PoissonResult{std::move(q), defect, std::move(qx_faces)};
}

Strategy construct_ifd_strategy(const Environment& env, const SpaceTimeField& mu) {
  const Grid& grid = env.grid;
  if (!(mu.grid() == grid))
    throw ValidationError("construct_ifd_strategy: mu sampled on a different grid");
  mu.require_positive("mu");

  BernoulliSolution sol = solve_M(env);
  FeasibilityReport feas = check_feasibility(env, sol);
  if (!feas.feasible)
    throw InfeasibleError("construct_ifd_strategy: environment is infeasible "
                          "(margin " + std::to_string(feas.margin) + " at x = " +
                          std::to_string(feas.argmin_x) + ", t = " +
                          std::to_string(feas.argmin_t) + ")");

  SpaceTimeField Ktilde = compute_Ktilde(env, sol);
  Ktilde.require_positive("Ktilde");
  PoissonResult poisson = solve_neumann_poisson(time_derivative(Ktilde));

  const std::size_t nx = grid.nx(), nt = grid.nt();
  SpaceTimeField P(grid);
  for (std::size_t j = 0; j < nt; ++j) {
    auto kt = Ktilde.at_time(j);
    auto mu_face = faces_from_cells(mu.at_time(j));
    auto kt_face = faces_from_cells(kt);
    std::vector<double> P_face(nx + 1, 0.0);
    for (std::size_t f = 1; f < nx; ++f) {
      double dK = (kt[f] - kt[f - 1]) / grid.h();
      P_face[f] = (mu_face[f] * dK - poisson.qx_faces[j][f]) / kt_face[f];
    }
    // The flux operator reads P at faces as averages of the cell-centered
    // values, so solve that averaging relation exactly: with nx unknowns and
    // nx-1 interior faces there is one free alternating mode, fixed by least
    // squares against the smooth face profile (linearly extended at the
    // boundary, where the flux is forced to zero anyway). This keeps theta*
    // an exact semidiscrete equilibrium of the synthesized strategy.
    std::vector<double> Q(nx, 0.0);
    for (std::size_t i = 1; i < nx; ++i) Q[i] = 2.0 * P_face[i] - Q[i - 1];
    P_face[0] = 2.0 * P_face[1] - P_face[2];
    P_face[nx] = 2.0 * P_face[nx - 1] - P_face[nx - 2];
    double t_ls = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
      double smooth = 0.5 * (P_face[i] + P_face[i + 1]);
      t_ls += (i % 2 == 0 ? 1.0 : -1.0) * (smooth - Q[i]);
    }
    t_ls /= static_cast<double>(nx);
    for (std::size_t i = 0; i < nx; ++i)
      P(i, j) = Q[i] + (i % 2 == 0 ? t_ls : -t_ls);
  }
  return Strategy(mu, std::move(P), "ifd");
}

Strategy construct_ifd_strategy(const Environment& env, double mu_value) {
  return construct_ifd_strategy(env, SpaceTimeField(env.grid, mu_value));
}

PeriodicPath extract_invasion_path(const SpaceTimeField& F, std::size_t modes,
                                   double delta_margin, bool require_positive_integral) {
  const Grid& grid = F.grid();
  const std::size_t nx = grid.nx(), nt = grid.nt();
  F.require_finite("F");
  if (!(delta_margin >= 0.0) || delta_margin >= 0.5 * grid.L())
    throw ValidationError("extract_invasion_path: delta_margin must lie in [0, L/2)");

  std::vector<double> raw(nt);
  for (std::size_t j = 0; j < nt; ++j) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < nx; ++i)
      if (F(i, j) > F(best, j)) best = i; // ties break toward smaller x
    raw[j] = grid.x(best);
  }

  std::vector<double> smooth = fourier_lowpass(raw, modes);
  double lo = delta_margin, hi = grid.L() - delta_margin;
  for (double& v : smooth) v = std::clamp(v, lo, hi);

  PeriodicPath path{grid, std::move(smooth), modes, delta_margin, 0.0};
  path.path_integral = pathwise_fitness(F, path);

  if (require_positive_integral && !(path.path_integral > 0.0)) {
    PeriodicPath raw_path{grid, raw, nt, delta_margin, 0.0};
    double raw_integral = pathwise_fitness(F, raw_path);
    throw NumericalError(
        "extract_invasion_path: achieved path integral " +
        std::to_string(path.path_integral) + " is not positive (raw argmax integral " +
        std::to_string(raw_integral) + "); the resident fitness appears independent of x "
        "(IFD); consider more modes if the raw integral is positive");
  }
  return path;
}

Strategy construct_pursuit_invader(const PeriodicPath& gamma, double alpha, double mu) {
  if (!(alpha >= 0.0)) throw ValidationError("construct_pursuit_invader: alpha must be >= 0");
  if (!(mu > 0.0)) throw ValidationError("construct_pursuit_invader: mu must be > 0");
  const Grid& grid = gamma.grid;
  SpaceTimeField P(grid);
  for (std::size_t i = 0; i < grid.nx(); ++i)
    for (std::size_t j = 0; j < grid.nt(); ++j)
      P(i, j) = alpha * (gamma.gamma[j] - grid.x(i));
  char label[64];
  std::snprintf(label, sizeof label, "pursuit(%g)", alpha);
  return Strategy(SpaceTimeField(grid, mu), std::move(P), label);
}

} // namespace ifd
