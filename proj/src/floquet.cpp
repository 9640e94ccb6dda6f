#include "ifd/floquet.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <string>
#include <thread>

#include "ifd/fitness.hpp"
#include "time_interp.hpp"

namespace ifd {

namespace {

constexpr double kDiffusiveCfl = 0.4;
constexpr double kAdvectiveCfl = 0.4;
constexpr std::size_t kMaxIterations = 10000;
constexpr double kRatioTol = 1e-10;
constexpr std::size_t kStableIterations = 10;

// Linear one-period propagator sharing the dynamics module's spatial scheme
// and stage-time coefficient interpolation.
class LinearStepper {
public:
  explicit LinearStepper(const LinearProblem& p)
      : grid_(p.mu.grid()), nx_(grid_.nx()), nt_(grid_.nt()), h_(grid_.h()),
        form_(p.form) {
    p.mu.require_positive("mu");
    p.drift.require_finite("drift");
    p.potential.require_finite("potential");
    if (!(p.drift.grid() == grid_) || !(p.potential.grid() == grid_))
      throw ValidationError("principal_eigenvalue: fields sampled on different grids");

    mu_faces_.resize(nt_ * (nx_ + 1));
    drift_faces_.resize(nt_ * (nx_ + 1));
    pot_.resize(nt_ * nx_);
    double dt_max = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < nt_; ++j) {
      auto mu_face = faces_from_cells(p.mu.at_time(j));
      auto d_face = faces_from_cells(p.drift.at_time(j));
      for (std::size_t f = 0; f <= nx_; ++f) {
        mu_faces_[j * (nx_ + 1) + f] = mu_face[f];
        drift_faces_[j * (nx_ + 1) + f] = d_face[f];
        dt_max = std::min(dt_max, kDiffusiveCfl * h_ * h_ / mu_face[f]);
        double d = std::fabs(d_face[f]);
        if (d > 0.0) dt_max = std::min(dt_max, kAdvectiveCfl * h_ / d);
      }
      for (std::size_t i = 0; i < nx_; ++i) pot_[j * nx_ + i] = p.potential(i, j);
    }
    double vmax = p.potential.max_abs();
    if (vmax > 0.0) dt_max = std::min(dt_max, 0.5 / vmax);

    S_ = std::max<std::size_t>(static_cast<std::size_t>(std::ceil(grid_.T() / dt_max)), nt_);
    S_ = ((S_ + nt_ - 1) / nt_) * nt_;
    dt_ = grid_.T() / static_cast<double>(S_);

    muf_.resize(nx_ + 1);
    df_.resize(nx_ + 1);
    v_.resize(nx_);
    k1_.resize(nx_);
    k2_.resize(nx_);
    k3_.resize(nx_);
    k4_.resize(nx_);
    stage_.resize(nx_);
  }

  const Grid& grid() const noexcept { return grid_; }
  std::size_t substeps() const noexcept { return S_; }

  void run_period(std::vector<double>& phi, SpaceTimeField* record = nullptr) {
    std::size_t per_node = S_ / nt_;
    for (std::size_t k = 0; k < S_; ++k) {
      if (record && k % per_node == 0) {
        std::size_t j = k / per_node;
        for (std::size_t i = 0; i < nx_; ++i) (*record)(i, j) = phi[i];
      }
      substep(static_cast<double>(k) * dt_, phi);
    }
    for (double x : phi)
      if (!std::isfinite(x))
        throw NumericalError("principal_eigenvalue: non-finite propagator state");
  }

private:
  void rhs(double t, const std::vector<double>& u, std::vector<double>& out) {
    auto st = detail::time_stencil(t, grid_.tau(), nt_);
    detail::gather_rows(st, mu_faces_.data(), nx_ + 1, nx_ + 1, muf_.data());
    detail::gather_rows(st, drift_faces_.data(), nx_ + 1, nx_ + 1, df_.data());
    detail::gather_rows(st, pot_.data(), nx_, nx_, v_.data());

    const double inv_h = 1.0 / h_, inv_h2 = inv_h * inv_h;
    if (form_ == LinearProblem::Form::divergence) {
      double flux_prev = 0.0;
      for (std::size_t i = 0; i < nx_; ++i) {
        double flux_next = 0.0;
        if (i + 1 < nx_)
          flux_next = muf_[i + 1] * (u[i + 1] - u[i]) * inv_h -
                      df_[i + 1] * 0.5 * (u[i] + u[i + 1]);
        out[i] = (flux_next - flux_prev) * inv_h + v_[i] * u[i];
        flux_prev = flux_next;
      }
    } else {
      // Exact transpose of the divergence-form tridiagonal: a consistent
      // scheme for mu phi_xx + drift phi_x with Neumann boundary.
      for (std::size_t i = 0; i < nx_; ++i) {
        double acc = v_[i] * u[i];
        if (i + 1 < nx_) {
          double d = u[i + 1] - u[i];
          acc += muf_[i + 1] * d * inv_h2 + df_[i + 1] * 0.5 * d * inv_h;
        }
        if (i > 0) {
          double d = u[i] - u[i - 1];
          acc += -muf_[i] * d * inv_h2 + df_[i] * 0.5 * d * inv_h;
        }
        out[i] = acc;
      }
    }
  }

  void substep(double t, std::vector<double>& u) {
    const double half = 0.5 * dt_;
    rhs(t, u, k1_);
    for (std::size_t i = 0; i < nx_; ++i) stage_[i] = u[i] + half * k1_[i];
    rhs(t + half, stage_, k2_);
    for (std::size_t i = 0; i < nx_; ++i) stage_[i] = u[i] + half * k2_[i];
    rhs(t + half, stage_, k3_);
    for (std::size_t i = 0; i < nx_; ++i) stage_[i] = u[i] + dt_ * k3_[i];
    rhs(t + dt_, stage_, k4_);
    for (std::size_t i = 0; i < nx_; ++i)
      u[i] += dt_ / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
  }

  Grid grid_;
  std::size_t nx_, nt_, S_ = 0;
  double h_, dt_ = 0.0;
  LinearProblem::Form form_;
  std::vector<double> mu_faces_, drift_faces_, pot_;
  std::vector<double> muf_, df_, v_, k1_, k2_, k3_, k4_, stage_;
};

double sup_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

} // namespace

FloquetResult principal_eigenvalue(const LinearProblem& p) {
  LinearStepper stepper(p);
  const Grid& grid = stepper.grid();
  const std::size_t nx = grid.nx();

  std::vector<double> phi(nx, 1.0), next;
  double rho = 1.0, prev_rho = 0.0, residual = 0.0;
  std::size_t stable = 0, iter = 0;
  for (; iter < kMaxIterations; ++iter) {
    next = phi;
    stepper.run_period(next);
    double norm = sup_norm(next);
    if (!(norm > 0.0))
      throw NumericalError("principal_eigenvalue: period map annihilated the iterate");
    for (double x : next)
      if (x <= 0.0)
        throw NumericalError("principal_eigenvalue: sign change in power iterate "
                             "(principal eigenfunction must be positive)");
    prev_rho = rho;
    rho = norm; // phi is sup-normalized, so ||Phi(phi)|| is the Rayleigh ratio
    residual = 0.0;
    for (std::size_t i = 0; i < nx; ++i)
      residual = std::max(residual, std::fabs(next[i] - rho * phi[i]));
    residual /= rho;
    for (std::size_t i = 0; i < nx; ++i) phi[i] = next[i] / norm;

    if (iter > 0 && std::fabs(rho - prev_rho) < kRatioTol * rho) {
      if (++stable >= kStableIterations) break;
    } else {
      stable = 0;
    }
  }
  if (stable < kStableIterations)
    throw NumericalError("principal_eigenvalue: power iteration did not converge in " +
                         std::to_string(kMaxIterations) + " iterations; last ratios " +
                         std::to_string(prev_rho) + ", " + std::to_string(rho));

  double lambda1 = -std::log(rho) / grid.T();

  SpaceTimeField eigenfunction(grid);
  std::vector<double> state = phi;
  stepper.run_period(state, &eigenfunction);
  for (std::size_t j = 0; j < grid.nt(); ++j) {
    double scale = std::exp(lambda1 * grid.t(j));
    for (std::size_t i = 0; i < nx; ++i) eigenfunction(i, j) *= scale;
  }
  double emax = eigenfunction.max();
  if (!(emax > 0.0))
    throw NumericalError("principal_eigenvalue: degenerate eigenfunction");
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < grid.nt(); ++j) eigenfunction(i, j) /= emax;
  eigenfunction.require_positive("eigenfunction");

  return FloquetResult{rho, lambda1, std::move(eigenfunction), residual, iter + 1, false};
}

FloquetResult invasion_test(const Environment& env, const PeriodicOrbit& resident_orbit,
                            const Strategy& invader, double eps_eig) {
  if (resident_orbit.states.empty())
    throw ValidationError("invasion_test: resident orbit carries no recorded state");
  FitnessField F = fitness_field(env, resident_orbit.states.front());
  LinearProblem p{LinearProblem::Form::divergence, invader.mu, invader.P, F.F};
  FloquetResult res = principal_eigenvalue(p);
  res.invades = res.lambda1 < -eps_eig;
  return res;
}

std::vector<double> time_reverse(std::vector<double> series) {
  std::reverse(series.begin() + 1, series.end());
  return series;
}

SpaceTimeField time_reverse(const SpaceTimeField& f) {
  const Grid& grid = f.grid();
  SpaceTimeField out(grid);
  for (std::size_t i = 0; i < grid.nx(); ++i)
    for (std::size_t j = 0; j < grid.nt(); ++j)
      out(i, j) = f(i, (grid.nt() - j) % grid.nt());
  return out;
}

double alpha_sweep_bound(const PeriodicPath& gamma) {
  return -gamma.path_integral / gamma.grid.T();
}

std::vector<AlphaSweepEntry> alpha_sweep(const Environment& env,
                                         const PeriodicOrbit& resident_orbit,
                                         const PeriodicPath& gamma, double mu,
                                         const std::vector<double>& alphas,
                                         std::size_t jobs) {
  if (!(mu > 0.0)) throw ValidationError("alpha_sweep: mu must be > 0");
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    if (!(alphas[k] > 0.0)) throw ValidationError("alpha_sweep: alphas must be positive");
    if (k > 0 && !(alphas[k] > alphas[k - 1]))
      throw ValidationError("alpha_sweep: alphas must be strictly increasing");
  }
  if (resident_orbit.states.empty())
    throw ValidationError("alpha_sweep: resident orbit carries no recorded state");
  const Grid& grid = env.grid;
  if (!(gamma.grid == grid))
    throw ValidationError("alpha_sweep: path sampled on a different grid");

  FitnessField F = fitness_field(env, resident_orbit.states.front());
  SpaceTimeField V = time_reverse(F.F);
  std::vector<double> gamma_rev = time_reverse(gamma.gamma);
  SpaceTimeField mu_field(grid, mu);

  std::vector<AlphaSweepEntry> entries(alphas.size());
  std::atomic<std::size_t> cursor{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;

  auto worker = [&] {
    for (;;) {
      std::size_t k = cursor.fetch_add(1);
      if (k >= alphas.size()) return;
      try {
        SpaceTimeField drift(grid);
        for (std::size_t i = 0; i < grid.nx(); ++i)
          for (std::size_t j = 0; j < grid.nt(); ++j)
            drift(i, j) = alphas[k] * (gamma_rev[j] - grid.x(i));
        LinearProblem p{LinearProblem::Form::nondivergence, mu_field, std::move(drift), V};
        FloquetResult res = principal_eigenvalue(p);
        entries[k] = AlphaSweepEntry{alphas[k], res.lambda1, res.rho, res.iterations};
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  std::size_t nthreads = std::min<std::size_t>(alphas.size(), jobs);
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < nthreads; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return entries;
}

} // namespace ifd
