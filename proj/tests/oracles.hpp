// Independent reference solvers used to cross-check the library: an adaptive
// Dormand-Prince 5(4) scalar ODE integrator, and shooting-method periodic
// orbits of u' = u (alpha(t) - beta(t) u), which covers both the envelope
// equation (alpha = a, beta = b) and the homogeneous logistic equation
// (alpha = r, beta = r/K).
#ifndef IFD_TESTS_ORACLES_HPP
#define IFD_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

using Rhs = std::function<double(double t, double y)>;

struct Dp45 {
  double rtol = 1e-12;
  double atol = 1e-14;

  // One adaptive step from (t, y); updates t, y, h. Returns the 5th-order
  // value once a step is accepted.
  void step(const Rhs& f, double& t, double& y, double& h, double t_end) const {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695,
                            e4 = 393.0 / 640, e5 = -92097.0 / 339200,
                            e6 = 187.0 / 2100, e7 = 1.0 / 40;

    for (int attempt = 0; attempt < 50; ++attempt) {
      if (t + h > t_end) h = t_end - t;
      double k1 = f(t, y);
      double k2 = f(t + h / 5, y + h * a21 * k1);
      double k3 = f(t + 3 * h / 10, y + h * (a31 * k1 + a32 * k2));
      double k4 = f(t + 4 * h / 5, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
      double k5 = f(t + 8 * h / 9, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      double k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      double y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      double k7 = f(t + h, y5);
      double y4 = y + h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      double sc = atol + rtol * std::max(std::fabs(y), std::fabs(y5));
      double err = std::fabs(y5 - y4) / sc;
      if (err <= 1.0 || h <= 1e-14 * std::fabs(t_end)) {
        t += h;
        y = y5;
        h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-10), -0.2)));
        return;
      }
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
    }
    throw std::runtime_error("oracle: step size underflow");
  }

  double integrate(const Rhs& f, double t0, double t1, double y0) const {
    double t = t0, y = y0, h = (t1 - t0) / 100.0;
    while (t < t1 - 1e-14 * (t1 - t0)) step(f, t, y, h, t1);
    return y;
  }

  // Integrates from t0 with y(t0) = y0, sampling y at the given increasing
  // times (all >= t0).
  std::vector<double> sample(const Rhs& f, double t0, double y0,
                             const std::vector<double>& times) const {
    std::vector<double> out;
    out.reserve(times.size());
    double t = t0, y = y0;
    for (double target : times) {
      if (target < t - 1e-14) throw std::runtime_error("oracle: times not increasing");
      double h = std::max((target - t) / 100.0, 1e-12);
      while (t < target - 1e-14 * std::max(1.0, target)) step(f, t, y, h, target);
      out.push_back(y);
    }
    return out;
  }
};

// Periodic orbit of u' = u (alpha(t) - beta(t) u) by shooting: secant
// iteration on g(u0) = Phi_T(u0) - u0. The positive orbit is a globally
// attracting fixed point of the period map, so the iteration is benign.
inline double periodic_initial_value(const std::function<double(double)>& alpha,
                                     const std::function<double(double)>& beta,
                                     double T, double guess) {
  Dp45 ode;
  Rhs f = [&](double t, double u) { return u * (alpha(t) - beta(t) * u); };
  auto g = [&](double u0) { return ode.integrate(f, 0.0, T, u0) - u0; };
  double u0 = guess, u1 = guess * 1.05;
  double g0 = g(u0), g1 = g(u1);
  for (int iter = 0; iter < 200; ++iter) {
    if (std::fabs(g1) < 1e-13 * std::max(1.0, u1)) return u1;
    double denom = g1 - g0;
    double next = (std::fabs(denom) > 1e-300) ? u1 - g1 * (u1 - u0) / denom
                                              : 0.5 * (u0 + u1);
    if (!(next > 0.0)) next = 0.5 * u1;
    u0 = u1;
    g0 = g1;
    u1 = next;
    g1 = g(u1);
  }
  throw std::runtime_error("oracle: shooting did not converge");
}

inline std::vector<double> periodic_orbit_samples(
    const std::function<double(double)>& alpha,
    const std::function<double(double)>& beta, double T,
    const std::vector<double>& times, double guess) {
  double u0 = periodic_initial_value(alpha, beta, T, guess);
  Dp45 ode;
  Rhs f = [&](double t, double u) { return u * (alpha(t) - beta(t) * u); };
  return ode.sample(f, 0.0, u0, times);
}

} // namespace oracle

#endif
