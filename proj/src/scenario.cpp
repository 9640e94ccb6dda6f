#include "ifd/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <vector>

#include <json.hpp>

#include "ifd/bernoulli.hpp"
#include "ifd/dynamics.hpp"
#include "ifd/environment.hpp"
#include "ifd/expr.hpp"
#include "ifd/fitness.hpp"
#include "ifd/floquet.hpp"
#include "ifd/strategy.hpp"

namespace ifd {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

enum class RunKind { feasibility, orbit, competition, invasion, alpha_sweep, remark_d };

const char* run_name(RunKind k) {
  switch (k) {
    case RunKind::feasibility: return "feasibility";
    case RunKind::orbit: return "orbit";
    case RunKind::competition: return "competition";
    case RunKind::invasion: return "invasion";
    case RunKind::alpha_sweep: return "alpha_sweep";
    case RunKind::remark_d: return "remark_d";
  }
  return "?";
}

struct PursuitSpec {
  double alpha = 0.0;
  std::size_t modes = 3;
  double delta_margin = -1.0; // < 0: default L/20
  double mu = 1.0;
};

struct StrategySpec {
  std::string label;
  Expr mu;
  std::optional<Expr> P;
  bool ifd = false;
  std::optional<PursuitSpec> pursuit;
};

struct Tolerances {
  double orbit_tol = 1e-9;
  std::size_t max_periods = 20000;
  double feasibility_eps = 1e-9;
  double eps_eig = 1e-8;
  std::size_t modes = 3;
  double delta_margin = -1.0; // resolved to L/20 after the domain is known
  std::vector<double> alphas = {1, 4, 16, 64, 256};
  double sweep_mu = 1.0;
  double ifd_tol = kIfdTolSimulated;
  std::size_t periods = 20000;
  double stop_mass_ratio = 1e-6;
  double resident_fraction = 0.5;
  double invader_fraction = 0.05;
  double remark_amplitude = -1.0; // < 0: internal line search
};

struct Config {
  double L = 0, T = 0;
  std::size_t nx = 0, nt = 0;
  std::optional<Expr> r, K;   // regular environments
  std::optional<Expr> rho;    // remark_d environments
  RunKind run = RunKind::feasibility;
  std::vector<StrategySpec> strategies;
  Tolerances tol;
  std::string output = ".";
};

// --- validation helpers ----------------------------------------------------

[[noreturn]] void fail(const std::string& pointer, const std::string& message) {
  throw ValidationError(pointer + ": " + message);
}

const json& need_object(const json& j, const std::string& ptr) {
  if (!j.is_object()) fail(ptr, "expected an object");
  return j;
}

const json& need_field(const json& obj, const std::string& ptr, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(ptr + "/" + key, "missing required field");
  return *it;
}

double need_number(const json& obj, const std::string& ptr, const char* key,
                   bool positive) {
  const json& v = need_field(obj, ptr, key);
  if (!v.is_number()) fail(ptr + "/" + key, "expected a number");
  double d = v.get<double>();
  if (positive && !(d > 0.0)) fail(ptr + "/" + key, "must be > 0");
  return d;
}

std::size_t need_count(const json& obj, const std::string& ptr, const char* key,
                       std::size_t min_value) {
  const json& v = need_field(obj, ptr, key);
  if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(min_value))
    fail(ptr + "/" + key, "expected an integer >= " + std::to_string(min_value));
  return v.get<std::size_t>();
}

std::string need_string(const json& obj, const std::string& ptr, const char* key) {
  const json& v = need_field(obj, ptr, key);
  if (!v.is_string()) fail(ptr + "/" + key, "expected a string");
  return v.get<std::string>();
}

Expr parse_expr(const std::string& text, const std::string& ptr) {
  try {
    return Expr::parse(text);
  } catch (const SyntaxError& e) {
    fail(ptr, std::string("invalid expression: ") + e.what());
  }
}

void check_keys(const json& obj, const std::string& ptr,
                const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) fail(ptr + "/" + it.key(), "unknown field");
}

StrategySpec parse_strategy(const json& j, const std::string& ptr, std::size_t index) {
  need_object(j, ptr);
  check_keys(j, ptr, {"mu", "P", "label"});
  StrategySpec spec{.label = "strategy " + std::to_string(index),
                    .mu = parse_expr(need_string(j, ptr, "mu"), ptr + "/mu"),
                    .P = std::nullopt,
                    .ifd = false,
                    .pursuit = std::nullopt};
  if (auto it = j.find("label"); it != j.end() && it->is_string())
    spec.label = it->get<std::string>();
  const json& P = need_field(j, ptr, "P");
  if (P.is_string()) {
    std::string text = P.get<std::string>();
    if (text == "ifd")
      spec.ifd = true;
    else
      spec.P = parse_expr(text, ptr + "/P");
  } else if (P.is_object() && P.contains("pursuit")) {
    const json& p = need_object(P["pursuit"], ptr + "/P/pursuit");
    check_keys(p, ptr + "/P/pursuit", {"alpha", "modes", "delta_margin", "mu"});
    PursuitSpec ps;
    ps.alpha = need_number(p, ptr + "/P/pursuit", "alpha", true);
    if (p.contains("modes")) ps.modes = need_count(p, ptr + "/P/pursuit", "modes", 1);
    if (p.contains("delta_margin"))
      ps.delta_margin = need_number(p, ptr + "/P/pursuit", "delta_margin", true);
    if (p.contains("mu")) ps.mu = need_number(p, ptr + "/P/pursuit", "mu", true);
    spec.pursuit = ps;
  } else {
    fail(ptr + "/P", "expected an expression string, \"ifd\", or {\"pursuit\": {...}}");
  }
  return spec;
}

void parse_tolerances(const json& j, const std::string& ptr, Tolerances& tol) {
  need_object(j, ptr);
  check_keys(j, ptr,
             {"orbit_tol", "max_periods", "feasibility_eps", "eps_eig", "modes",
              "delta_margin", "alphas", "sweep_mu", "ifd_tol", "periods",
              "stop_mass_ratio", "resident_fraction", "invader_fraction",
              "remark_amplitude"});
  if (j.contains("orbit_tol")) tol.orbit_tol = need_number(j, ptr, "orbit_tol", true);
  if (j.contains("max_periods")) tol.max_periods = need_count(j, ptr, "max_periods", 1);
  if (j.contains("feasibility_eps"))
    tol.feasibility_eps = need_number(j, ptr, "feasibility_eps", true);
  if (j.contains("eps_eig")) tol.eps_eig = need_number(j, ptr, "eps_eig", true);
  if (j.contains("modes")) tol.modes = need_count(j, ptr, "modes", 1);
  if (j.contains("delta_margin"))
    tol.delta_margin = need_number(j, ptr, "delta_margin", true);
  if (j.contains("sweep_mu")) tol.sweep_mu = need_number(j, ptr, "sweep_mu", true);
  if (j.contains("ifd_tol")) tol.ifd_tol = need_number(j, ptr, "ifd_tol", true);
  if (j.contains("periods")) tol.periods = need_count(j, ptr, "periods", 1);
  if (j.contains("stop_mass_ratio"))
    tol.stop_mass_ratio = need_number(j, ptr, "stop_mass_ratio", true);
  if (j.contains("resident_fraction"))
    tol.resident_fraction = need_number(j, ptr, "resident_fraction", true);
  if (j.contains("invader_fraction"))
    tol.invader_fraction = need_number(j, ptr, "invader_fraction", true);
  if (j.contains("remark_amplitude"))
    tol.remark_amplitude = need_number(j, ptr, "remark_amplitude", true);
  if (j.contains("alphas")) {
    const json& a = j["alphas"];
    if (!a.is_array() || a.empty()) fail(ptr + "/alphas", "expected a non-empty array");
    tol.alphas.clear();
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (!a[k].is_number())
        fail(ptr + "/alphas/" + std::to_string(k), "expected a number");
      double v = a[k].get<double>();
      if (!(v > 0.0) || (k > 0 && !(v > tol.alphas.back())))
        fail(ptr + "/alphas/" + std::to_string(k), "must be positive and increasing");
      tol.alphas.push_back(v);
    }
  }
}

Config parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("", std::string("not valid JSON: ") + e.what());
  }
  need_object(j, "");
  check_keys(j, "", {"domain", "time", "environment", "strategies", "run",
                     "tolerances", "output"});

  Config cfg;
  const json& domain = need_object(need_field(j, "", "domain"), "/domain");
  check_keys(domain, "/domain", {"L", "nx"});
  cfg.L = need_number(domain, "/domain", "L", true);
  cfg.nx = need_count(domain, "/domain", "nx", 8);
  const json& time = need_object(need_field(j, "", "time"), "/time");
  check_keys(time, "/time", {"T", "nt"});
  cfg.T = need_number(time, "/time", "T", true);
  cfg.nt = need_count(time, "/time", "nt", 8);

  std::string run = need_string(j, "", "run");
  if (run == "feasibility") cfg.run = RunKind::feasibility;
  else if (run == "orbit") cfg.run = RunKind::orbit;
  else if (run == "competition") cfg.run = RunKind::competition;
  else if (run == "invasion") cfg.run = RunKind::invasion;
  else if (run == "alpha_sweep") cfg.run = RunKind::alpha_sweep;
  else if (run == "remark_d") cfg.run = RunKind::remark_d;
  else
    fail("/run", "expected one of feasibility, orbit, competition, invasion, "
                 "alpha_sweep, remark_d");

  const json& env = need_object(need_field(j, "", "environment"), "/environment");
  if (cfg.run == RunKind::remark_d) {
    check_keys(env, "/environment", {"rho"});
    cfg.rho = parse_expr(need_string(env, "/environment", "rho"), "/environment/rho");
    if (cfg.rho->depends_on_x())
      fail("/environment/rho", "must depend on t only");
  } else {
    check_keys(env, "/environment", {"r", "K"});
    cfg.r = parse_expr(need_string(env, "/environment", "r"), "/environment/r");
    cfg.K = parse_expr(need_string(env, "/environment", "K"), "/environment/K");
  }

  if (j.contains("strategies")) {
    const json& s = j["strategies"];
    if (!s.is_array()) fail("/strategies", "expected an array");
    for (std::size_t k = 0; k < s.size(); ++k)
      cfg.strategies.push_back(parse_strategy(s[k], "/strategies/" + std::to_string(k), k));
  }
  std::size_t needed = 0;
  if (cfg.run == RunKind::orbit || cfg.run == RunKind::alpha_sweep) needed = 1;
  if (cfg.run == RunKind::competition || cfg.run == RunKind::invasion) needed = 2;
  if (cfg.strategies.size() < needed)
    fail("/strategies", "run \"" + run + "\" needs at least " + std::to_string(needed) +
                            " strategies");
  for (std::size_t k = 0; k < cfg.strategies.size(); ++k)
    if (cfg.strategies[k].pursuit &&
        !(cfg.run == RunKind::invasion && k == 1))
      fail("/strategies/" + std::to_string(k) + "/P",
           "pursuit strategies are only valid as the invader (index 1) of an "
           "invasion run; the path is extracted from the resident's fitness");

  if (j.contains("tolerances")) parse_tolerances(j["tolerances"], "/tolerances", cfg.tol);
  if (cfg.tol.delta_margin < 0.0) cfg.tol.delta_margin = cfg.L / 20.0;
  if (cfg.tol.delta_margin >= 0.5 * cfg.L)
    fail("/tolerances/delta_margin", "must be < L/2");

  if (j.contains("output")) {
    if (!j["output"].is_string()) fail("/output", "expected a string");
    cfg.output = j["output"].get<std::string>();
  }
  return cfg;
}

json echo_defaults(const Config& cfg) {
  json d;
  d["orbit_tol"] = cfg.tol.orbit_tol;
  d["max_periods"] = cfg.tol.max_periods;
  d["feasibility_eps"] = cfg.tol.feasibility_eps;
  d["eps_eig"] = cfg.tol.eps_eig;
  d["modes"] = cfg.tol.modes;
  d["delta_margin"] = cfg.tol.delta_margin;
  d["alphas"] = cfg.tol.alphas;
  d["sweep_mu"] = cfg.tol.sweep_mu;
  d["ifd_tol"] = cfg.tol.ifd_tol;
  d["periods"] = cfg.tol.periods;
  d["stop_mass_ratio"] = cfg.tol.stop_mass_ratio;
  d["resident_fraction"] = cfg.tol.resident_fraction;
  d["invader_fraction"] = cfg.tol.invader_fraction;
  d["remark_amplitude"] = cfg.tol.remark_amplitude;
  return d;
}

// --- pipeline helpers ------------------------------------------------------

void write_field(const SpaceTimeField& f, const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::Numerical, "cannot open " + path.string());
  write_field_csv(f, os);
}

Strategy resolve_strategy(const Environment& env, const StrategySpec& spec) {
  SpaceTimeField mu = sample(spec.mu, env.grid);
  if (spec.ifd) return construct_ifd_strategy(env, mu);
  if (spec.pursuit)
    throw ValidationError("pursuit strategy cannot be resolved without a path");
  return Strategy(mu, sample(*spec.P, env.grid), spec.label);
}

std::vector<double> initial_density(const Environment& env, double fraction) {
  std::vector<double> u(env.grid.nx());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = fraction * env.K(i, 0);
  return u;
}

json feasibility_json(const FeasibilityReport& feas) {
  json f;
  f["margin"] = feas.margin;
  f["feasible"] = feas.feasible;
  f["argmin_x"] = feas.argmin_x;
  f["argmin_t"] = feas.argmin_t;
  f["eps"] = feas.eps;
  return f;
}

json orbit_json(const PeriodicOrbit& orbit) {
  json o;
  o["defect"] = orbit.defect;
  o["periods"] = orbit.periods;
  return o;
}

// Resident orbit plus fitness; shared by the orbit/invasion/sweep pipelines.
struct ResidentRun {
  Strategy strategy;
  PeriodicOrbit orbit;
  FitnessField fitness;
};

ResidentRun run_resident(const Environment& env, const Config& cfg,
                         std::string& stage) {
  stage = "resident strategy";
  Strategy strat = resolve_strategy(env, cfg.strategies.at(0));
  stage = "resident orbit";
  PeriodicOrbit orbit = find_periodic_orbit(env, {strat},
                                            {initial_density(env, cfg.tol.resident_fraction)},
                                            cfg.tol.orbit_tol, cfg.tol.max_periods);
  stage = "fitness";
  FitnessField fitness = fitness_field(env, orbit.states.front());
  return ResidentRun{std::move(strat), std::move(orbit), std::move(fitness)};
}

// Extracts the invasion path; an IFD resident has no positive-integral path,
// which is a finding, not an error, for the sweep/invasion pipelines.
PeriodicPath resident_path(const FitnessField& fitness, std::size_t modes,
                           double delta_margin, json& results) {
  try {
    PeriodicPath path = extract_invasion_path(fitness.F, modes, delta_margin);
    results["path_integral"] = path.path_integral;
    results["path_positive"] = true;
    return path;
  } catch (const NumericalError&) {
    PeriodicPath path = extract_invasion_path(fitness.F, modes, delta_margin, false);
    results["path_integral"] = path.path_integral;
    results["path_positive"] = false;
    return path;
  }
}

void run_feasibility_pipeline(const Environment& env, const Config& cfg,
                              json& results, const fs::path& out, std::string& stage) {
  stage = "bernoulli";
  BernoulliSolution sol = solve_M(env);
  results["bernoulli_residual"] = sol.residual;
  stage = "feasibility";
  FeasibilityReport feas = check_feasibility(env, sol, cfg.tol.feasibility_eps);
  results["feasibility"] = feasibility_json(feas);
  if (feas.feasible) {
    stage = "ifd profile";
    SpaceTimeField Ktilde = compute_Ktilde(env, sol);
    PeriodicScalar mean = space_mean(Ktilde);
    double mean_err = 0.0;
    for (std::size_t jn = 0; jn < mean.size(); ++jn)
      mean_err = std::max(mean_err, std::fabs(mean[jn] - 1.0));
    results["ktilde_mean_error"] = mean_err;
    SpaceTimeField theta = define_ifd_profile(sol, Ktilde);
    write_field(Ktilde, out / "ktilde.csv");
    write_field(theta, out / "theta_star.csv");
  }
}

void run_orbit_pipeline(const Environment& env, const Config& cfg, json& results,
                        const fs::path& out, std::string& stage) {
  ResidentRun res = run_resident(env, cfg, stage);
  results["strategy"] = res.strategy.label;
  results["orbit"] = orbit_json(res.orbit);
  results["flatness"] = res.fitness.flatness;
  results["is_ifd"] = is_ifd(res.fitness, cfg.tol.ifd_tol);
  PathFitnessBounds bounds = path_fitness_bounds(res.fitness.F);
  results["path_inf"] = bounds.inf;
  results["path_sup"] = bounds.sup;
  write_field(res.orbit.states.front(), out / "orbit.csv");
  write_field(res.fitness.F, out / "fitness.csv");
}

void run_competition_pipeline(const Environment& env, const Config& cfg,
                              json& results, const fs::path& out, std::string& stage) {
  stage = "strategies";
  Strategy resident = resolve_strategy(env, cfg.strategies.at(0));
  Strategy invader = resolve_strategy(env, cfg.strategies.at(1));
  stage = "competition";
  Trajectory traj = run_competition(env, resident, invader,
                                    initial_density(env, cfg.tol.resident_fraction),
                                    initial_density(env, cfg.tol.invader_fraction),
                                    cfg.tol.periods, cfg.tol.stop_mass_ratio);

  std::ofstream os(out / "mass.csv");
  if (!os) throw Error(ErrorKind::Numerical, "cannot open mass.csv");
  os << "period,species,mass\n";
  char buf[64];
  for (std::size_t p = 0; p < traj.masses[0].size(); ++p)
    for (std::size_t s = 0; s < 2; ++s) {
      std::snprintf(buf, sizeof buf, "%.17g", traj.masses[s][p]);
      os << p << ',' << (s == 0 ? resident.label : invader.label) << ',' << buf << '\n';
    }

  results["resident"] = resident.label;
  results["invader"] = invader.label;
  results["periods_run"] = traj.periods;
  results["resident_mass_final"] = traj.masses[0].back();
  results["invader_mass_final"] = traj.masses[1].back();
  double ratio = traj.masses[1].back() / traj.masses[1].front();
  results["invader_mass_ratio"] = ratio;
  results["excluded"] = ratio < cfg.tol.stop_mass_ratio;
}

void run_invasion_pipeline(const Environment& env, const Config& cfg, json& results,
                           const fs::path& out, std::string& stage) {
  ResidentRun res = run_resident(env, cfg, stage);
  results["resident"] = res.strategy.label;
  results["orbit"] = orbit_json(res.orbit);
  results["flatness"] = res.fitness.flatness;
  results["is_ifd"] = is_ifd(res.fitness, cfg.tol.ifd_tol);

  const StrategySpec& inv_spec = cfg.strategies.at(1);
  std::optional<Strategy> invader;
  if (inv_spec.pursuit) {
    stage = "invasion path";
    const PursuitSpec& ps = *inv_spec.pursuit;
    double delta = ps.delta_margin > 0.0 ? ps.delta_margin : cfg.tol.delta_margin;
    PeriodicPath path = resident_path(res.fitness, ps.modes, delta, results);
    invader = construct_pursuit_invader(path, ps.alpha, ps.mu);
  } else {
    stage = "invader strategy";
    invader = resolve_strategy(env, inv_spec);
  }
  results["invader"] = invader->label;

  stage = "invasion";
  FloquetResult fl = invasion_test(env, res.orbit, *invader, cfg.tol.eps_eig);
  results["lambda1"] = fl.lambda1;
  results["rho"] = fl.rho;
  results["iterations"] = fl.iterations;
  results["residual"] = fl.residual;
  results["verdict"] = fl.invades ? "invades" : "no invasion";
  write_field(fl.eigenfunction, out / "eigenfunction.csv");
  write_field(res.orbit.states.front(), out / "orbit.csv");
}

void run_alpha_sweep_pipeline(const Environment& env, const Config& cfg,
                              json& results, const fs::path& out, std::string& stage,
                              std::size_t jobs) {
  ResidentRun res = run_resident(env, cfg, stage);
  results["resident"] = res.strategy.label;
  results["orbit"] = orbit_json(res.orbit);
  results["is_ifd"] = is_ifd(res.fitness, cfg.tol.ifd_tol);

  stage = "invasion path";
  PeriodicPath path =
      resident_path(res.fitness, cfg.tol.modes, cfg.tol.delta_margin, results);
  double bound = alpha_sweep_bound(path);
  results["bound"] = bound;

  stage = "alpha_sweep";
  std::vector<AlphaSweepEntry> entries =
      alpha_sweep(env, res.orbit, path, cfg.tol.sweep_mu, cfg.tol.alphas, jobs);

  std::ofstream os(out / "sweep.csv");
  if (!os) throw Error(ErrorKind::Numerical, "cannot open sweep.csv");
  os << "alpha,lambda1,rho,iters,bound\n";
  char buf[256];
  json rows = json::array();
  double min_lambda = std::numeric_limits<double>::infinity();
  bool monotone = true;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const AlphaSweepEntry& e = entries[k];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%zu,%.17g", e.alpha, e.lambda1,
                  e.rho, e.iterations, bound);
    os << buf << '\n';
    rows.push_back({{"alpha", e.alpha},
                    {"lambda1", e.lambda1},
                    {"rho", e.rho},
                    {"iters", e.iterations}});
    min_lambda = std::min(min_lambda, e.lambda1);
    if (k > 0 && e.lambda1 > entries[k - 1].lambda1 + 1e-9) monotone = false;
  }
  results["entries"] = rows;
  results["min_lambda1"] = min_lambda;
  results["monotone_nonincreasing"] = monotone;
  results["bound_satisfied"] = min_lambda <= bound + 0.1 * std::max(1.0, std::fabs(bound));
}

void run_remark_d_pipeline(const Config& cfg, const Grid& grid, json& results,
                           const fs::path& out, std::string& stage) {
  stage = "remark_d";
  PeriodicScalar rho = sample_scalar(*cfg.rho, grid);
  Environment env = remark_d_counterexample(rho, cfg.tol.remark_amplitude);
  stage = "bernoulli";
  BernoulliSolution sol = solve_M(env);
  stage = "feasibility";
  FeasibilityReport feas = check_feasibility(env, sol, cfg.tol.feasibility_eps);
  results["feasibility"] = feasibility_json(feas);
  write_field(env.r, out / "environment.csv");

  json orbits = json::array();
  for (std::size_t k = 0; k < cfg.strategies.size(); ++k) {
    stage = "strategy " + std::to_string(k);
    Strategy strat = resolve_strategy(env, cfg.strategies[k]);
    stage = "orbit " + std::to_string(k);
    PeriodicOrbit orbit = find_periodic_orbit(
        env, {strat}, {initial_density(env, cfg.tol.resident_fraction)},
        cfg.tol.orbit_tol, cfg.tol.max_periods);
    FitnessField fit = fitness_field(env, orbit.states.front());
    PathFitnessBounds bounds = path_fitness_bounds(fit.F);
    json o = orbit_json(orbit);
    o["strategy"] = strat.label;
    o["flatness"] = fit.flatness;
    o["is_ifd"] = is_ifd(fit, cfg.tol.ifd_tol);
    o["path_inf"] = bounds.inf;
    o["path_sup"] = bounds.sup;
    o["path_gap"] = bounds.sup - bounds.inf;
    orbits.push_back(std::move(o));
  }
  if (!orbits.empty()) results["orbits"] = std::move(orbits);
}

} // namespace

RunOutcome run_scenario(const std::string& config_text, const ScenarioOverrides& ov) {
  json report;
  RunOutcome outcome;
  std::string stage = "parse";
  std::optional<fs::path> outdir;
  auto t0 = std::chrono::steady_clock::now();

  try {
    Config cfg = parse_config(config_text);
    if (ov.nx) cfg.nx = *ov.nx;
    if (ov.nt) cfg.nt = *ov.nt;
    if (ov.output_dir) cfg.output = *ov.output_dir;

    Grid grid(cfg.L, cfg.nx, cfg.T, cfg.nt);
    outdir = fs::path(cfg.output);
    fs::create_directories(*outdir);

    report["run"] = run_name(cfg.run);
    report["grid"] = {{"L", cfg.L}, {"nx", cfg.nx}, {"T", cfg.T}, {"nt", cfg.nt}};
    report["defaults"] = echo_defaults(cfg);
    json& results = report["results"] = json::object();

    if (cfg.run == RunKind::remark_d) {
      run_remark_d_pipeline(cfg, grid, results, *outdir, stage);
    } else {
      stage = "environment";
      Environment env = Environment::from_expressions(grid, *cfg.r, *cfg.K);
      switch (cfg.run) {
        case RunKind::feasibility:
          run_feasibility_pipeline(env, cfg, results, *outdir, stage);
          break;
        case RunKind::orbit:
          run_orbit_pipeline(env, cfg, results, *outdir, stage);
          break;
        case RunKind::competition:
          run_competition_pipeline(env, cfg, results, *outdir, stage);
          break;
        case RunKind::invasion:
          run_invasion_pipeline(env, cfg, results, *outdir, stage);
          break;
        case RunKind::alpha_sweep:
          run_alpha_sweep_pipeline(env, cfg, results, *outdir, stage, ov.jobs);
          break;
        case RunKind::remark_d:
          break;
      }
    }
    report["error"] = nullptr;
    outcome.status = 0;
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::Validation: outcome.status = 2; break;
      case ErrorKind::Numerical: outcome.status = 3; break;
      case ErrorKind::Infeasible: outcome.status = 4; break;
    }
    report["error"] = {{"stage", stage},
                       {"message", e.what()},
                       {"diagnostics", error_kind_name(e.kind())}};
  } catch (const std::exception& e) {
    outcome.status = 3;
    report["error"] = {{"stage", stage}, {"message", e.what()}, {"diagnostics", "internal"}};
  }

  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report["timing"] = {{"wall_seconds", wall}};

  outcome.report_json = report.dump(2) + "\n";
  if (outdir) {
    std::ofstream os(*outdir / "report.json");
    if (os) os << outcome.report_json;
  }
  return outcome;
}

int validate_scenario(const std::string& config_text, std::string& message) {
  try {
    parse_config(config_text);
    message.clear();
    return 0;
  } catch (const Error& e) {
    message = e.what();
    return 2;
  }
}

const std::string& scenario_schema() {
  static const std::string schema = R"schema({
  "domain":      {"L": "habitat length > 0", "nx": "spatial cells, integer >= 8"},
  "time":        {"T": "period > 0", "nt": "time nodes, integer >= 8"},
  "environment": {"r": "expression in x, t (> 0)", "K": "expression in x, t (> 0)"},
                 "// for run = remark_d instead": {"rho": "expression in t only (> 0)"},
  "strategies":  [{"mu": "expression > 0",
                   "P": "expression | \"ifd\" | {\"pursuit\": {\"alpha\": ">0", \"modes\": "int>=1", \"delta_margin\": ">0", \"mu\": ">0"}}",
                   "label": "optional string"}],
  "run":         "feasibility | orbit | competition | invasion | alpha_sweep | remark_d",
  "tolerances":  {"orbit_tol": 1e-9, "max_periods": 20000, "feasibility_eps": 1e-9,
                  "eps_eig": 1e-8, "modes": 3, "delta_margin": "L/20",
                  "alphas": [1, 4, 16, 64, 256], "sweep_mu": 1.0, "ifd_tol": 0.01,
                  "periods": 20000, "stop_mass_ratio": 1e-6,
                  "resident_fraction": 0.5, "invader_fraction": 0.05,
                  "remark_amplitude": "line search"},
  "output":      "directory for report.json and CSV artifacts (default .)"
}

Strategy roles by run: orbit/alpha_sweep use strategies[0]; competition and
invasion use strategies[0] (resident) vs strategies[1] (invader); pursuit
invaders are valid only at index 1 of an invasion run. remark_d ignores r/K
and builds the counterexample environment from rho; its strategies (optional)
are each run to a single-species orbit and scored for IFD-ness.

Exit codes: 0 success, 2 invalid configuration, 3 numerical failure,
4 infeasible environment where feasibility was required.
)schema";
  return schema;
}

} // namespace ifd
