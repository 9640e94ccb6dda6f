#include "ifd/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "time_interp.hpp"

namespace ifd {

namespace {

constexpr double kDiffusiveCfl = 0.4; // mu dt / h^2
constexpr double kAdvectiveCfl = 0.4; // |P| dt / h
constexpr double kNegativityTol = 1e-12;

} // namespace

struct Stepper::Impl {
  Grid grid;
  std::size_t nx, nt, S;
  double h, dt;
  std::size_t species;
  // Time-major coefficient tables: faces have stride nx+1, cells stride nx.
  std::vector<std::vector<double>> mu_faces, p_faces; // per species
  std::vector<double> r_table, K_table;
  std::vector<std::string> warnings;

  // Scratch
  std::vector<double> r_t, K_t, sum_u, flux;
  std::vector<std::vector<double>> muf, pf;
  SpeciesState k1, k2, k3, k4, stage;
  std::vector<double>* reaction_acc = nullptr;
  double reaction_weight = 0.0;

  Impl(const Environment& env, const std::vector<Strategy>& strategies,
       std::size_t min_substeps)
      : grid(env.grid), nx(grid.nx()), nt(grid.nt()), h(grid.h()),
        species(strategies.size()) {
    if (species == 0) throw ValidationError("stepper: at least one strategy required");

    r_table.resize(nt * nx);
    K_table.resize(nt * nx);
    for (std::size_t j = 0; j < nt; ++j)
      for (std::size_t i = 0; i < nx; ++i) {
        r_table[j * nx + i] = env.r(i, j);
        K_table[j * nx + i] = env.K(i, j);
      }

    double dt_max = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < species; ++s) {
      const Strategy& st = strategies[s];
      if (!(st.mu.grid() == grid) || !(st.P.grid() == grid))
        throw ValidationError("stepper: strategy " + std::to_string(s) +
                              " sampled on a different grid");
      std::vector<double> mf(nt * (nx + 1)), pfv(nt * (nx + 1));
      double peclet = 0.0;
      for (std::size_t j = 0; j < nt; ++j) {
        auto mu_face = faces_from_cells(st.mu.at_time(j));
        auto P_face = faces_from_cells(st.P.at_time(j));
        for (std::size_t f = 0; f <= nx; ++f) {
          mf[j * (nx + 1) + f] = mu_face[f];
          pfv[j * (nx + 1) + f] = P_face[f];
          dt_max = std::min(dt_max, kDiffusiveCfl * h * h / mu_face[f]);
          double p = std::fabs(P_face[f]);
          if (p > 0.0) {
            dt_max = std::min(dt_max, kAdvectiveCfl * h / p);
            peclet = std::max(peclet, p * h / (2.0 * mu_face[f]));
          }
        }
      }
      if (peclet >= 1.0) {
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "strategy \"%s\": cell Peclet number %.3g >= 1; central advection "
                      "may oscillate, refine nx",
                      st.label.c_str(), peclet);
        warnings.emplace_back(buf);
      }
      mu_faces.push_back(std::move(mf));
      p_faces.push_back(std::move(pfv));
    }

    S = static_cast<std::size_t>(std::ceil(grid.T() / dt_max));
    S = std::max<std::size_t>({S, min_substeps, nt});
    S = ((S + nt - 1) / nt) * nt; // align substeps with the time nodes
    dt = grid.T() / static_cast<double>(S);

    r_t.resize(nx);
    K_t.resize(nx);
    sum_u.resize(nx);
    flux.resize(nx + 1);
    muf.assign(species, std::vector<double>(nx + 1));
    pf.assign(species, std::vector<double>(nx + 1));
    auto zeros = SpeciesState(species, std::vector<double>(nx, 0.0));
    k1 = k2 = k3 = k4 = stage = zeros;
  }

  void rhs(double t, const SpeciesState& u, SpeciesState& out) {
    auto st = detail::time_stencil(t, grid.tau(), nt);
    detail::gather_rows(st, r_table.data(), nx, nx, r_t.data());
    detail::gather_rows(st, K_table.data(), nx, nx, K_t.data());

    std::fill(sum_u.begin(), sum_u.end(), 0.0);
    for (std::size_t s = 0; s < species; ++s)
      for (std::size_t i = 0; i < nx; ++i) sum_u[i] += u[s][i];

    for (std::size_t s = 0; s < species; ++s) {
      detail::gather_rows(st, mu_faces[s].data(), nx + 1, nx + 1, muf[s].data());
      detail::gather_rows(st, p_faces[s].data(), nx + 1, nx + 1, pf[s].data());
      const auto& us = u[s];
      flux[0] = flux[nx] = 0.0;
      const double inv_h = 1.0 / h;
      for (std::size_t f = 1; f < nx; ++f)
        flux[f] = muf[s][f] * (us[f] - us[f - 1]) * inv_h -
                  pf[s][f] * 0.5 * (us[f - 1] + us[f]);
      double reaction_mass = 0.0;
      for (std::size_t i = 0; i < nx; ++i) {
        double reaction = r_t[i] * us[i] * (1.0 - sum_u[i] / K_t[i]);
        out[s][i] = (flux[i + 1] - flux[i]) * inv_h + reaction;
        reaction_mass += reaction;
      }
      if (reaction_acc) (*reaction_acc)[s] += reaction_weight * reaction_mass * h;
    }
  }

  void substep(double t, SpeciesState& u) {
    const double half = 0.5 * dt;
    reaction_weight = dt / 6.0;
    rhs(t, u, k1);
    axpy(u, half, k1, stage);
    reaction_weight = dt / 3.0;
    rhs(t + half, stage, k2);
    axpy(u, half, k2, stage);
    rhs(t + half, stage, k3);
    axpy(u, dt, k3, stage);
    reaction_weight = dt / 6.0;
    rhs(t + dt, stage, k4);
    for (std::size_t s = 0; s < species; ++s)
      for (std::size_t i = 0; i < nx; ++i)
        u[s][i] += dt / 6.0 * (k1[s][i] + 2.0 * k2[s][i] + 2.0 * k3[s][i] + k4[s][i]);
    enforce_nonnegativity(u, t);
  }

  void axpy(const SpeciesState& u, double a, const SpeciesState& k, SpeciesState& out) {
    for (std::size_t s = 0; s < species; ++s)
      for (std::size_t i = 0; i < nx; ++i) out[s][i] = u[s][i] + a * k[s][i];
  }

  void enforce_nonnegativity(SpeciesState& u, double t) {
    double umax = 0.0, umin = 0.0;
    for (std::size_t s = 0; s < species; ++s)
      for (double v : u[s]) {
        if (!std::isfinite(v))
          throw NumericalError("stepper: non-finite state (blow-up) near t = " +
                               std::to_string(t));
        umax = std::max(umax, v);
        umin = std::min(umin, v);
      }
    double floor = -kNegativityTol * std::max(1.0, umax);
    if (umin < floor)
      throw NumericalError("stepper: density " + std::to_string(umin) + " below the " +
                           "negativity tolerance near t = " + std::to_string(t) +
                           "; CFL or Peclet violation likely");
    if (umin < 0.0)
      for (std::size_t s = 0; s < species; ++s)
        for (double& v : u[s]) v = std::max(v, 0.0);
  }

  void run_period(SpeciesState& u, std::vector<SpaceTimeField>* record) {
    std::size_t per_node = S / nt;
    for (std::size_t k = 0; k < S; ++k) {
      if (record && k % per_node == 0) {
        std::size_t j = k / per_node;
        for (std::size_t s = 0; s < species; ++s)
          for (std::size_t i = 0; i < nx; ++i) (*record)[s](i, j) = u[s][i];
      }
      substep(static_cast<double>(k) * dt, u);
    }
  }
};

Stepper::Stepper(const Environment& env, std::vector<Strategy> strategies,
                 std::size_t min_substeps)
    : impl_(std::make_unique<Impl>(env, strategies, min_substeps)) {}

Stepper::~Stepper() = default;
Stepper::Stepper(Stepper&&) noexcept = default;

std::size_t Stepper::substeps() const noexcept { return impl_->S; }
const std::vector<std::string>& Stepper::warnings() const noexcept { return impl_->warnings; }
std::size_t Stepper::species() const noexcept { return impl_->species; }

void Stepper::step_period(SpeciesState& state, std::vector<double>* reaction_mass) {
  if (state.size() != impl_->species)
    throw ValidationError("step_period: state species count mismatch");
  if (reaction_mass) reaction_mass->assign(impl_->species, 0.0);
  impl_->reaction_acc = reaction_mass;
  impl_->run_period(state, nullptr);
  impl_->reaction_acc = nullptr;
}

void Stepper::step_period_recording(SpeciesState& state, std::vector<SpaceTimeField>& out) {
  out.assign(impl_->species, SpaceTimeField(impl_->grid));
  impl_->reaction_acc = nullptr;
  impl_->run_period(state, &out);
}

SpeciesState step_period(const Environment& env, const std::vector<Strategy>& strategies,
                         const SpeciesState& state, std::size_t substeps) {
  Stepper stepper(env, strategies, substeps);
  SpeciesState s = state;
  stepper.step_period(s);
  return s;
}

namespace {

double sup_defect(const SpeciesState& a, const SpeciesState& b) {
  double d = 0.0;
  for (std::size_t s = 0; s < a.size(); ++s)
    for (std::size_t i = 0; i < a[s].size(); ++i)
      d = std::max(d, std::fabs(a[s][i] - b[s][i]));
  return d;
}

double sup_norm(const SpeciesState& a) {
  double d = 0.0;
  for (const auto& u : a)
    for (double v : u) d = std::max(d, std::fabs(v));
  return d;
}

} // namespace

PeriodicOrbit find_periodic_orbit(const Environment& env,
                                  const std::vector<Strategy>& strategies,
                                  const SpeciesState& initial, double tol,
                                  std::size_t max_periods) {
  for (const auto& u : initial)
    for (double v : u)
      if (v < 0.0) throw ValidationError("find_periodic_orbit: negative initial data");
  if (sup_norm(initial) == 0.0)
    throw ValidationError("find_periodic_orbit: trivial initial data");

  Stepper stepper(env, strategies);
  SpeciesState state = initial;
  std::vector<double> history;
  double initial_norm = sup_norm(initial);
  double defect = std::numeric_limits<double>::infinity();

  std::size_t p = 0;
  for (; p < max_periods; ++p) {
    SpeciesState prev = state;
    stepper.step_period(state);
    defect = sup_defect(state, prev);
    history.push_back(defect);
    if (sup_norm(state) < 1e-13 * (initial_norm + 1.0))
      throw NumericalError("find_periodic_orbit: collapse to zero (extinction) after " +
                           std::to_string(p + 1) + " periods");
    if (defect < tol) break;
  }
  if (defect >= tol) {
    std::string tail;
    for (std::size_t k = history.size() > 5 ? history.size() - 5 : 0; k < history.size(); ++k)
      tail += " " + std::to_string(history[k]);
    throw NumericalError("find_periodic_orbit: no convergence after " +
                         std::to_string(max_periods) + " periods; last defects:" + tail);
  }

  PeriodicOrbit orbit;
  orbit.species = strategies.size();
  orbit.defect = defect;
  orbit.periods = p + 1;
  orbit.defect_history = std::move(history);
  stepper.step_period_recording(state, orbit.states);
  return orbit;
}

Trajectory run_competition(const Environment& env, const Strategy& strat_u,
                           const Strategy& strat_v, const std::vector<double>& u0,
                           const std::vector<double>& v0, std::size_t periods,
                           double stop_mass_ratio) {
  Stepper stepper(env, {strat_u, strat_v});
  SpeciesState state = {u0, v0};
  const double h = env.grid.h();
  auto mass_of = [h](const std::vector<double>& u) {
    double m = 0.0;
    for (double v : u) m += v;
    return m * h;
  };

  Trajectory traj;
  traj.species = 2;
  traj.masses.assign(2, {});
  traj.masses[0].push_back(mass_of(state[0]));
  traj.masses[1].push_back(mass_of(state[1]));
  double v_initial = traj.masses[1][0];

  std::size_t p = 0;
  for (; p < periods; ++p) {
    stepper.step_period(state);
    traj.masses[0].push_back(mass_of(state[0]));
    traj.masses[1].push_back(mass_of(state[1]));
    if (stop_mass_ratio > 0.0 && v_initial > 0.0 &&
        traj.masses[1].back() < stop_mass_ratio * v_initial)
      break;
  }
  traj.final_state = std::move(state);
  traj.periods = std::min(p + 1, periods);
  return traj;
}

} // namespace ifd
