#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "env_suite.hpp"
#include "ifd/bernoulli.hpp"
#include "ifd/fitness.hpp"
#include "ifd/strategy.hpp"

using namespace ifd;

namespace {

// Discrete residual of the single-species equation at every time node, with
// a fourth-order centered time difference:
//   R = d theta/dt - A(t) theta - r theta (1 - theta / K).
double orbit_equation_residual(const Environment& env, const Strategy& strat,
                               const SpaceTimeField& theta) {
  const Grid& grid = env.grid;
  SpaceTimeField dtheta(grid);
  const std::size_t nt = grid.nt();
  for (std::size_t i = 0; i < grid.nx(); ++i)
    for (std::size_t j = 0; j < nt; ++j) {
      double m2 = theta(i, (j + nt - 2) % nt), m1 = theta(i, (j + nt - 1) % nt);
      double p1 = theta(i, (j + 1) % nt), p2 = theta(i, (j + 2) % nt);
      dtheta(i, j) = (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * grid.tau());
    }
  double sup = 0.0;
  std::vector<double> out(grid.nx());
  for (std::size_t j = 0; j < grid.nt(); ++j) {
    TridiagonalOperator A = divergence_flux_operator(strat.mu, strat.P, j);
    auto th = theta.at_time(j);
    A.apply(th, out);
    for (std::size_t i = 0; i < grid.nx(); ++i) {
      double reaction = env.r(i, j) * th[i] * (1.0 - th[i] / env.K(i, j));
      sup = std::max(sup, std::fabs(dtheta(i, j) - out[i] - reaction));
    }
  }
  return sup;
}

double ifd_residual(const env_suite::Spec& spec, std::size_t n) {
  Grid grid(1.0, n, 1.0, n);
  Environment env = env_suite::make(spec, grid);
  Strategy strat = construct_ifd_strategy(env, 1.0);
  BernoulliSolution sol = solve_M(env);
  SpaceTimeField theta = define_ifd_profile(sol, compute_Ktilde(env, sol));
  return orbit_equation_residual(env, strat, theta) / theta.max_abs();
}

} // namespace

TEST_CASE("neumann poisson: discrete identities hold exactly") {
  Grid grid(2.0, 32, 1.0, 16);
  SpaceTimeField rhs = sample(Expr::parse("cos(pi*x/2)*(1+0.5*sin(2*pi*t))"), grid);
  PoissonResult res = solve_neumann_poisson(rhs);
  CHECK(res.compat_defect < 1e-12);
  PeriodicScalar mean = space_mean(rhs);
  for (std::size_t j = 0; j < grid.nt(); ++j) {
    const auto& g = res.qx_faces[j];
    REQUIRE(g.size() == grid.nx() + 1);
    CHECK(g.front() == 0.0);
    CHECK(std::fabs(g.back()) < 1e-12);
    double qmean = 0.0;
    for (std::size_t i = 0; i < grid.nx(); ++i) {
      // Gradient consistency: (g[i+1] - g[i]) / h = rhs - mean exactly.
      CHECK(std::fabs((g[i + 1] - g[i]) / grid.h() - (rhs(i, j) - mean[j])) < 1e-11);
      qmean += res.q(i, j);
    }
    CHECK(std::fabs(qmean) < 1e-10); // mean-normalized
    // q reproduces its own face gradients.
    for (std::size_t i = 1; i < grid.nx(); ++i)
      CHECK(std::fabs((res.q(i, j) - res.q(i - 1, j)) / grid.h() - g[i]) < 1e-11);
  }
}

TEST_CASE("neumann poisson: second-order convergence to the analytic solution") {
  auto error_at = [](std::size_t n) {
    Grid grid(1.0, n, 1.0, 8);
    SpaceTimeField rhs = sample(Expr::parse("-(2*pi)^2*cos(2*pi*x)"), grid);
    PoissonResult res = solve_neumann_poisson(rhs);
    double sup = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      sup = std::max(sup, std::fabs(res.q(i, 0) - std::cos(2 * M_PI * grid.x(i))));
    return sup;
  };
  double e64 = error_at(64), e128 = error_at(128);
  CHECK(e64 < 2e-3);
  CHECK(e64 / e128 > 3.0); // order ~2
}

TEST_CASE("neumann poisson rejects incompatible right-hand sides") {
  Grid grid(1.0, 16, 1.0, 8);
  CHECK_THROWS_AS(solve_neumann_poisson(SpaceTimeField(grid, 1.0)), NumericalError);
}

TEST_CASE("IFD strategy: theta* nearly solves the semidiscrete equation") {
  for (const auto& spec : env_suite::feasible_specs()) {
    CAPTURE(spec.name);
    double r64 = ifd_residual(spec, 64);
    double r128 = ifd_residual(spec, 128);
    CHECK(r128 < 1e-3);
    // Static environments sit at the roundoff floor on every grid; otherwise
    // the time discretization dominates and halving tau shows order ~2.
    if (r64 > 1e-10)
      CHECK(r64 / r128 > 3.0);
    else
      CHECK(r128 < 1e-10);
  }
}

TEST_CASE("IFD strategy on an infeasible environment raises InfeasibleError") {
  Grid grid(1.0, 64, 1.0, 64);
  PeriodicScalar rho = sample_scalar(Expr::parse("1+0.8*sin(2*pi*t)"), grid);
  Environment env = remark_d_counterexample(rho);
  CHECK_THROWS_AS(construct_ifd_strategy(env, 1.0), InfeasibleError);
}

TEST_CASE("extracted invasion path follows a moving fitness peak") {
  Grid grid(1.0, 128, 1.0, 64);
  SpaceTimeField F = sample(Expr::parse("1-4*(x-(0.5+0.2*sin(2*pi*t)))^2"), grid);
  PeriodicPath path = extract_invasion_path(F, 3, 0.05);
  CHECK(path.path_integral > 0.9); // peak value 1 along the exact path
  for (std::size_t j = 0; j < grid.nt(); ++j) {
    double target = 0.5 + 0.2 * std::sin(2 * M_PI * grid.t(j));
    CHECK(std::fabs(path.gamma[j] - target) < 3 * grid.h());
    CHECK(path.gamma[j] >= 0.05);
    CHECK(path.gamma[j] <= 0.95);
  }
}

TEST_CASE("flat fitness has no positive path unless explicitly allowed") {
  Grid grid(1.0, 32, 1.0, 32);
  SpaceTimeField F(grid, 0.0);
  CHECK_THROWS_AS(extract_invasion_path(F, 3, 0.05), NumericalError);
  PeriodicPath path = extract_invasion_path(F, 3, 0.05, false);
  CHECK(path.path_integral == doctest::Approx(0.0));
}

TEST_CASE("pursuit invader advects toward the path") {
  Grid grid(1.0, 32, 1.0, 16);
  std::vector<double> gamma(grid.nt(), 0.5);
  PeriodicPath path{grid, gamma, 1, 0.05, 1.0};
  Strategy inv = construct_pursuit_invader(path, 50.0, 2.0);
  CHECK(inv.label == "pursuit(50)");
  for (std::size_t i = 0; i < grid.nx(); ++i)
    for (std::size_t j = 0; j < grid.nt(); j += 5) {
      CHECK(inv.P(i, j) == doctest::Approx(50.0 * (0.5 - grid.x(i))));
      CHECK(inv.mu(i, j) == 2.0);
    }
  CHECK_THROWS_AS(construct_pursuit_invader(path, -1.0, 1.0), ValidationError);
}
