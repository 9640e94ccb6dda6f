#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "env_suite.hpp"
#include "ifd/dynamics.hpp"
#include "ifd/fitness.hpp"
#include "ifd/floquet.hpp"

using namespace ifd;

TEST_CASE("constant potential: lambda1 = -c to 1e-10") {
  Grid grid(1.0, 32, 1.0, 16);
  for (double c : {0.7, -0.4, 0.0}) {
    CAPTURE(c);
    LinearProblem p{LinearProblem::Form::divergence, SpaceTimeField(grid, 1.0),
                    SpaceTimeField(grid, 0.0), SpaceTimeField(grid, c)};
    FloquetResult res = principal_eigenvalue(p);
    CHECK(std::fabs(res.lambda1 + c) < 1e-10);
    CHECK(res.rho > 0.0);
    CHECK(res.eigenfunction.min() > 0.0);
    CHECK(res.eigenfunction.max() == doctest::Approx(1.0));
  }
}

TEST_CASE("potential shift moves lambda1 by exactly the shift") {
  Grid grid(1.0, 32, 1.0, 16);
  SpaceTimeField V = sample(Expr::parse("sin(2*pi*x)*cos(2*pi*t)+0.2*x"), grid);
  SpaceTimeField P = sample(Expr::parse("0.5*sin(2*pi*x)"), grid);
  LinearProblem base{LinearProblem::Form::divergence, SpaceTimeField(grid, 1.0), P, V};
  FloquetResult r0 = principal_eigenvalue(base);

  double delta = 0.37;
  SpaceTimeField Vs = V;
  for (std::size_t i = 0; i < grid.nx(); ++i)
    for (std::size_t j = 0; j < grid.nt(); ++j) Vs(i, j) += delta;
  LinearProblem shifted{LinearProblem::Form::divergence, SpaceTimeField(grid, 1.0), P, Vs};
  FloquetResult r1 = principal_eigenvalue(shifted);
  CHECK(std::fabs((r0.lambda1 - r1.lambda1) - delta) < 1e-9);
}

TEST_CASE("primal and adjoint forms share the principal eigenvalue") {
  Grid grid(1.0, 48, 1.0, 32);
  SpaceTimeField mu(grid, 1.0);
  SpaceTimeField V = sample(Expr::parse("0.5+sin(2*pi*x)*sin(2*pi*t)"), grid);
  SpaceTimeField drift(grid);
  for (std::size_t i = 0; i < grid.nx(); ++i)
    for (std::size_t j = 0; j < grid.nt(); ++j) {
      double gamma = 0.5 + 0.2 * std::sin(2 * M_PI * grid.t(j));
      drift(i, j) = 10.0 * (gamma - grid.x(i));
    }

  LinearProblem primal{LinearProblem::Form::divergence, mu, drift, V};
  LinearProblem adjoint{LinearProblem::Form::nondivergence, mu, time_reverse(drift),
                        time_reverse(V)};
  FloquetResult rp = principal_eigenvalue(primal);
  FloquetResult ra = principal_eigenvalue(adjoint);
  CHECK(std::fabs(rp.lambda1 - ra.lambda1) < 1e-6);
  CHECK(rp.eigenfunction.min() > 0.0);
  CHECK(ra.eigenfunction.min() > 0.0);
}

TEST_CASE("self-invasion is neutral") {
  Grid grid(1.0, 48, 1.0, 32);
  Environment env = env_suite::make({"static-heterogeneous", "2", "1+0.5*cos(2*pi*x)"}, grid);
  Strategy resident = Strategy::pure_diffusion(grid, 1.0);
  PeriodicOrbit orbit = find_periodic_orbit(env, {resident},
                                            {std::vector<double>(grid.nx(), 0.5)}, 1e-11);
  FloquetResult res = invasion_test(env, orbit, resident);
  CHECK(std::fabs(res.lambda1) < 2e-6);
  CHECK_FALSE(res.invades);
}

TEST_CASE("time reversal is an index reflection and an involution") {
  Grid grid(1.0, 8, 1.0, 16);
  SpaceTimeField f = sample(Expr::parse("x+sin(2*pi*t)"), grid);
  SpaceTimeField rev = time_reverse(f);
  CHECK(rev(3, 0) == f(3, 0));
  CHECK(rev(3, 5) == f(3, 11));
  SpaceTimeField back = time_reverse(rev);
  for (std::size_t i = 0; i < grid.nx(); ++i)
    for (std::size_t j = 0; j < grid.nt(); ++j) CHECK(back(i, j) == f(i, j));

  std::vector<double> s = {0, 1, 2, 3, 4, 5, 6, 7};
  auto sr = time_reverse(s);
  CHECK(sr[0] == 0);
  CHECK(sr[1] == 7);
  CHECK(sr[7] == 1);
}

TEST_CASE("non-divergence confinement: lambda1 stays above -c and tightens with alpha") {
  Grid grid(1.0, 48, 1.0, 16);
  const double c = 0.8;
  SpaceTimeField mu(grid, 1.0), V(grid, c);
  double prev = std::numeric_limits<double>::infinity();
  for (double alpha : {1.0, 4.0, 16.0}) {
    CAPTURE(alpha);
    SpaceTimeField drift(grid);
    for (std::size_t i = 0; i < grid.nx(); ++i)
      for (std::size_t j = 0; j < grid.nt(); ++j) drift(i, j) = alpha * (0.5 - grid.x(i));
    LinearProblem p{LinearProblem::Form::nondivergence, mu, drift, V};
    FloquetResult res = principal_eigenvalue(p);
    CHECK(res.lambda1 >= -c - 1e-9);
    CHECK(res.lambda1 <= prev + 1e-12);
    prev = res.lambda1;
  }
}

TEST_CASE("alpha sweep end to end with the Appendix bound") {
  Grid grid(1.0, 48, 1.0, 32);
  Environment env = env_suite::make({"traveling-peak", "2", "1+0.6*cos(2*pi*x-1.5*sin(2*pi*t))"},
                                    grid);
  Strategy resident = Strategy::pure_diffusion(grid, 1.0);
  PeriodicOrbit orbit = find_periodic_orbit(env, {resident},
                                            {std::vector<double>(grid.nx(), 0.5)}, 1e-10);
  FitnessField fit = fitness_field(env, orbit.states.front());
  PeriodicPath path = extract_invasion_path(fit.F, 3, 0.05);
  CHECK(path.path_integral > 0.0);

  auto entries = alpha_sweep(env, orbit, path, 1.0, {1.0, 8.0, 64.0}, 2);
  REQUIRE(entries.size() == 3);
  for (const auto& e : entries) {
    CHECK(e.rho > 0.0);
    CHECK(e.iterations > 0);
  }
  CHECK(entries[2].lambda1 <= entries[0].lambda1 + 1e-9);
  CHECK_THROWS_AS(alpha_sweep(env, orbit, path, 1.0, {4.0, 2.0}), ValidationError);
}

TEST_CASE("sweep bound helper") {
  Grid grid(1.0, 8, 2.0, 8);
  PeriodicPath path{grid, std::vector<double>(8, 0.5), 1, 0.05, 3.0};
  CHECK(alpha_sweep_bound(path) == doctest::Approx(-1.5));
}
