#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's numerical routines.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

inline double trapezoid(const std::function<double(double)>& f, double a, double b,
                        long n = 1000000) {
  double h = (b - a) / static_cast<double>(n);
  double acc = 0.5 * (f(a) + f(b));
  for (long i = 1; i < n; ++i) acc += f(a + h * static_cast<double>(i));
  return acc * h;
}

// Linear example: 0.00075 N1^2 - 3.01 N1 + 1260 = 0, smaller root.
inline double linear_example_n1() {
  double A = 0.00075, B = -3.01, C = 1260.0;
  return (-B - std::sqrt(B * B - 4.0 * A * C)) / (2.0 * A);
}
inline double linear_example_tau_s() { return -linear_example_n1() / 300.0; }
inline double linear_example_c_star() {
  double ts = linear_example_tau_s();
  return 0.225 * ts * ts - 0.01 * ts;
}

// Linear example queue from the early/late parabolas.
inline double linear_example_queue(double t) {
  double ts = linear_example_tau_s(), te = ts + 2.0;
  if (t <= ts || t >= te) return 0.0;
  double u = t - ts;
  if (t <= 0.0) return 0.01 * u + 0.225 * u * u;
  double c = linear_example_c_star();
  double n1 = linear_example_n1(), n = n1 + 300.0 * t;
  // C* - (1/s) * int_{N1}^{n} (3 - 0.003 m) dm
  return c - (3.0 * (n - n1) - 0.0015 * (n * n - n1 * n1)) / 300.0;
}

inline double sigma(double beta, double gamma, double t) {
  return t < 0.0 ? -beta * t : gamma * t;
}

inline double central_difference(const std::function<double(double)>& f, double x,
                                 double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// max over travelers of C_n(t(n)) - min over grid of C_n(u).
inline double brute_force_violation(const std::function<double(double)>& queue,
                                    const std::function<double(double)>& beta,
                                    const std::function<double(double)>& gamma,
                                    const std::function<double(double)>& arrival, double n_total,
                                    double horizon, int n_grid, int t_grid) {
  double worst = -1e300;
  for (int i = 0; i < n_grid; ++i) {
    double n = n_total * i / (n_grid - 1);
    double b = beta(n), g = gamma(n), tn = arrival(n);
    double own = queue(tn) + sigma(b, g, tn), best = own;
    for (int j = 0; j < t_grid; ++j) {
      double u = -horizon + 2.0 * horizon * j / (t_grid - 1);
      best = std::min(best, queue(u) + sigma(b, g, u));
    }
    worst = std::max(worst, own - best);
  }
  return worst;
}

}  // namespace oracle
