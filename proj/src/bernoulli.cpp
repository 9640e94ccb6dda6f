#include "ifd/bernoulli.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

namespace ifd {

namespace {

using cplx = std::complex<double>;

struct Mode {
  double freq; // signed harmonic index k~ (frequency = 2 pi k~ / T)
  cplx coeff;
};

// Trigonometric interpolation modes of real periodic samples, with the
// Nyquist coefficient split symmetrically so the interpolant stays real.
std::vector<Mode> dft_modes(const std::vector<double>& f) {
  std::size_t N = f.size();
  std::vector<Mode> modes;
  modes.reserve(N + 1);
  for (std::size_t k = 0; k < N; ++k) {
    cplx c(0.0, 0.0);
    for (std::size_t j = 0; j < N; ++j) {
      double ang = -2.0 * M_PI * static_cast<double>(k * j % N) / static_cast<double>(N);
      c += f[j] * cplx(std::cos(ang), std::sin(ang));
    }
    c /= static_cast<double>(N);
    if (N % 2 == 0 && k == N / 2) {
      double half = static_cast<double>(N) / 2.0;
      modes.push_back({half, c * 0.5});
      modes.push_back({-half, c * 0.5});
    } else if (k <= (N - 1) / 2) {
      modes.push_back({static_cast<double>(k), c});
    } else {
      modes.push_back({static_cast<double>(k) - static_cast<double>(N), c});
    }
  }
  return modes;
}

std::vector<double> rotated(const std::vector<double>& v, std::size_t shift) {
  std::size_t N = v.size();
  std::vector<double> out(N);
  for (std::size_t j = 0; j < N; ++j) out[j] = v[(j + shift) % N];
  return out;
}

} // namespace

BernoulliSolution solve_bernoulli(const PeriodicScalar& a, const PeriodicScalar& b,
                                  std::size_t phase_shift) {
  const Grid& grid = a.grid();
  if (!(b.grid() == grid))
    throw ValidationError("solve_bernoulli: a and b sampled on different grids");
  a.require_finite("a");
  b.require_finite("b");

  const std::size_t N = grid.nt();
  const double T = grid.T();
  const double omega = 2.0 * M_PI / T;
  phase_shift %= N;

  std::vector<double> av = rotated(a.values(), phase_shift);
  std::vector<double> bv = rotated(b.values(), phase_shift);

  double abar = 0.0;
  for (double v : av) abar += v;
  abar /= static_cast<double>(N);
  if (!(abar > 0.0))
    throw NumericalError(
        "solve_bernoulli: exp(-int_0^T a) >= 1 (mean of a is not positive); "
        "internal-consistency error for positive environments");

  // A(t) = int_0^t a, via the exact antiderivative of the trigonometric
  // interpolant: abar*t plus the periodic part integrated mode by mode.
  std::vector<double> fluct(N);
  for (std::size_t j = 0; j < N; ++j) fluct[j] = av[j] - abar;
  auto amodes = dft_modes(fluct);
  std::vector<double> A(N, 0.0);
  for (std::size_t j = 0; j < N; ++j) {
    cplx s(0.0, 0.0);
    double tj = grid.t(j);
    for (const Mode& m : amodes) {
      if (m.freq == 0.0) continue;
      cplx iw(0.0, omega * m.freq);
      s += m.coeff * (std::exp(iw * tj) - 1.0) / iw;
    }
    A[j] = abar * tj + s.real();
  }

  // p(s) = b(s) exp(A(s) - abar*s) is periodic; I(t) = int_0^t e^{abar s} p.
  std::vector<double> p(N);
  for (std::size_t j = 0; j < N; ++j) p[j] = bv[j] * std::exp(A[j] - abar * grid.t(j));
  auto pmodes = dft_modes(p);

  auto cumulative = [&](double t_val) {
    cplx s(0.0, 0.0);
    for (const Mode& m : pmodes) {
      cplx z(abar, omega * m.freq);
      s += m.coeff * (std::exp(z * t_val) - 1.0) / z;
    }
    return s.real();
  };

  std::vector<double> I(N);
  for (std::size_t j = 0; j < N; ++j) I[j] = cumulative(grid.t(j));
  double I_T = cumulative(T);

  double eAT = std::exp(-abar * T);
  double w0 = eAT * I_T / (1.0 - eAT);

  std::vector<double> Mv(N), ld(N);
  for (std::size_t j = 0; j < N; ++j) {
    double w = std::exp(-A[j]) * (w0 + I[j]);
    if (!(w > 0.0) || !std::isfinite(w))
      throw NumericalError("solve_bernoulli: non-positive envelope at time node " +
                           std::to_string(j));
    Mv[j] = 1.0 / w;
  }

  // Undo the phase rotation.
  std::vector<double> Mout(N);
  for (std::size_t j = 0; j < N; ++j) Mout[(j + phase_shift) % N] = Mv[j];

  for (std::size_t j = 0; j < N; ++j) ld[j] = a[j] - b[j] * Mout[j];

  // Residual: spectral derivative of log M against the algebraic identity.
  std::vector<double> logM(N);
  for (std::size_t j = 0; j < N; ++j) logM[j] = std::log(Mout[j]);
  auto dlogM = time_derivative(grid, logM);
  double res = 0.0;
  for (std::size_t j = 0; j < N; ++j)
    res = std::max(res, std::fabs(dlogM[j] + b[j] * Mout[j] - a[j]));

  return BernoulliSolution{PeriodicScalar(grid, std::move(Mout)),
                           PeriodicScalar(grid, std::move(ld)), a, b, res};
}

BernoulliSolution solve_M(const Environment& env, std::size_t phase_shift) {
  const Grid& grid = env.grid;
  SpaceTimeField K_over_r(grid);
  for (std::size_t i = 0; i < grid.nx(); ++i)
    for (std::size_t j = 0; j < grid.nt(); ++j)
      K_over_r(i, j) = env.K(i, j) / env.r(i, j);
  PeriodicScalar Kbar = space_mean(env.K);
  PeriodicScalar Krbar = space_mean(K_over_r);
  PeriodicScalar a(grid), b(grid);
  for (std::size_t j = 0; j < grid.nt(); ++j) {
    a[j] = Kbar[j] / Krbar[j];
    b[j] = 1.0 / Krbar[j];
  }
  return solve_bernoulli(a, b, phase_shift);
}

SpaceTimeField compute_Ktilde(const Environment& env, const BernoulliSolution& sol) {
  const Grid& grid = env.grid;
  SpaceTimeField out(grid);
  for (std::size_t i = 0; i < grid.nx(); ++i)
    for (std::size_t j = 0; j < grid.nt(); ++j) {
      double M = sol.M[j];
      out(i, j) = env.K(i, j) / M - (env.K(i, j) / env.r(i, j)) * sol.logderiv[j] / M;
    }
  out.require_finite("Ktilde");
  return out;
}

FeasibilityReport check_feasibility(const Environment& env, const BernoulliSolution& sol,
                                    double eps) {
  const Grid& grid = env.grid;
  double margin = std::numeric_limits<double>::infinity();
  std::size_t bi = 0, bj = 0;
  for (std::size_t i = 0; i < grid.nx(); ++i)
    for (std::size_t j = 0; j < grid.nt(); ++j) {
      double m = env.r(i, j) - sol.logderiv[j];
      if (m < margin) {
        margin = m;
        bi = i;
        bj = j;
      }
    }
  return FeasibilityReport{margin, margin > eps, grid.x(bi), grid.t(bj), eps};
}

SpaceTimeField margin_field_r(const Environment& env, const BernoulliSolution& sol) {
  const Grid& grid = env.grid;
  SpaceTimeField out(grid);
  for (std::size_t i = 0; i < grid.nx(); ++i)
    for (std::size_t j = 0; j < grid.nt(); ++j)
      out(i, j) = env.K(i, j) - (env.K(i, j) / env.r(i, j)) * sol.logderiv[j];
  return out;
}

SpaceTimeField margin_field_r3(const Environment& env, const BernoulliSolution& sol) {
  const Grid& grid = env.grid;
  SpaceTimeField K_over_r(grid);
  for (std::size_t i = 0; i < grid.nx(); ++i)
    for (std::size_t j = 0; j < grid.nt(); ++j)
      K_over_r(i, j) = env.K(i, j) / env.r(i, j);
  PeriodicScalar Kbar = space_mean(env.K);
  PeriodicScalar Krbar = space_mean(K_over_r);
  SpaceTimeField out(grid);
  for (std::size_t i = 0; i < grid.nx(); ++i)
    for (std::size_t j = 0; j < grid.nt(); ++j) {
      double M = sol.M[j];
      double ratio = K_over_r(i, j) / Krbar[j];
      double lhs = (env.K(i, j) - Kbar[j]) / M;
      double rhs = (Kbar[j] / M) * (ratio - 1.0) - ratio;
      out(i, j) = lhs - rhs;
    }
  return out;
}

Environment remark_d_counterexample(const PeriodicScalar& rho, double amplitude) {
  const Grid& grid = rho.grid();
  const std::size_t nx = grid.nx(), nt = grid.nt();
  rho.require_finite("rho");
  if (!(rho.min() > 0.0))
    throw ValidationError("remark_d: rho must be positive");
  if (rho.max() - rho.min() < 1e-12 * std::max(1.0, std::fabs(rho.max())))
    throw ValidationError(
        "remark_d: rho is constant, so M = rho, M'/M = 0 and no sign change is possible");

  // Envelope of the unperturbed environment r = K = rho(t): a = rho, b = 1.
  PeriodicScalar ones(grid, 1.0);
  BernoulliSolution sol = solve_bernoulli(rho, ones);

  // M dips below rho exactly where M is increasing; concentrate the spatial
  // perturbation there so min_x r - M'/M = M - amplitude*sigma goes negative.
  std::size_t jstar = 0;
  double best_gap = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < nt; ++j) {
    double gap = rho[j] - sol.M[j];
    if (gap > best_gap) {
      best_gap = gap;
      jstar = j;
    }
  }
  if (best_gap <= 0.0)
    throw NumericalError("remark_d: envelope never dips below rho; cannot force sign change");

  const double kappa = 40.0;
  std::vector<double> sigma(nt);
  for (std::size_t j = 0; j < nt; ++j) {
    double phase = 2.0 * M_PI * (grid.t(j) - grid.t(jstar)) / grid.T();
    sigma[j] = std::exp(kappa * (std::cos(phase) - 1.0));
  }

  auto build = [&](double amp) {
    SpaceTimeField r(grid);
    for (std::size_t i = 0; i < nx; ++i) {
      double s = std::cos(2.0 * M_PI * grid.x(i) / grid.L()); // zero spatial mean
      for (std::size_t j = 0; j < nt; ++j) r(i, j) = rho[j] + amp * s * sigma[j];
    }
    return r;
  };

  auto achieved_sign_change = [&](const SpaceTimeField& r) {
    // min_x r(.,t) - M'/M(t): must change sign in t.
    bool neg = false, pos = false;
    for (std::size_t j = 0; j < nt; ++j) {
      double mn = r(0, j);
      for (std::size_t i = 1; i < nx; ++i) mn = std::min(mn, r(i, j));
      double g = mn - sol.logderiv[j];
      (g < 0.0 ? neg : pos) = true;
    }
    return neg && pos;
  };

  std::vector<double> candidates;
  if (amplitude >= 0.0) {
    candidates.push_back(amplitude);
  } else {
    // Line search between the envelope value at the bump (too small) and the
    // local value of rho (positivity bound).
    double lo = sol.M[jstar], hi = rho[jstar];
    for (int k = 1; k <= 8; ++k)
      candidates.push_back(lo + (hi - lo) * static_cast<double>(k) / 9.0);
  }

  for (double amp : candidates) {
    SpaceTimeField r = build(amp);
    if (!(r.min() > 0.0)) continue;
    if (achieved_sign_change(r)) return Environment(grid, r, r);
  }

  // Report the best achievable margin profile for diagnosis.
  double amp = candidates.back();
  SpaceTimeField r = build(amp);
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < nt; ++j) {
    double mn = r(0, j);
    for (std::size_t i = 1; i < nx; ++i) mn = std::min(mn, r(i, j));
    worst = std::min(worst, mn - sol.logderiv[j]);
  }
  throw ValidationError("remark_d: amplitude too small to force the sign change "
                        "(achieved minimum margin " + std::to_string(worst) + ")");
}

SpaceTimeField define_ifd_profile(const BernoulliSolution& sol, const SpaceTimeField& Ktilde) {
  if (!(Ktilde.min() > 0.0))
    throw InfeasibleError("define_ifd_profile: Ktilde is non-positive somewhere "
                          "(infeasible environment, no IFD exists)");
  const Grid& grid = Ktilde.grid();
  SpaceTimeField out(grid);
  for (std::size_t i = 0; i < grid.nx(); ++i)
    for (std::size_t j = 0; j < grid.nt(); ++j) out(i, j) = sol.M[j] * Ktilde(i, j);
  out.require_positive("theta*");
  return out;
}

} // namespace ifd
