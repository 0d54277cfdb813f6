#include "bneck/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bneck/errors.hpp"

namespace bneck {

EquilibriumSolution::EquilibriumSolution(InstanceSpec spec, double n1)
    : spec_(std::move(spec)), n1_(n1) {
  tau_s_ = -n1_ / spec_.capacity;
  tau_e_ = tau_s_ + spec_.n_total / spec_.capacity;
  q0_ = spec_.penalties.beta.integral(0.0, n1_) / spec_.capacity;
}

double EquilibriumSolution::queue_at(double t) const {
  if (!(t > tau_s_ && t < tau_e_)) return 0.0;
  double n = std::clamp(n_of(t), 0.0, spec_.n_total);
  double q;
  if (t <= 0.0)
    q = spec_.penalties.beta.integral(0.0, n) / spec_.capacity;
  else
    q = q0_ - spec_.penalties.gamma.integral(n1_, n) / spec_.capacity;
  return std::max(q, 0.0);
}

double EquilibriumSolution::queue_slope(double t, Side side) const {
  if (t < tau_s_ || t > tau_e_) return 0.0;
  double n = std::clamp(n_of(t), 0.0, spec_.n_total);
  double early = spec_.penalties.beta(n);
  double late = -spec_.penalties.gamma(n);
  if (t < 0.0) return early;
  if (t > 0.0) return late;
  switch (side) {
    case Side::left: return early;
    case Side::right: return late;
    case Side::two_sided: break;
  }
  return 0.5 * (early + late);
}

double EquilibriumSolution::max_queue_slope(double lo, double hi) const {
  // beta increases on the early side; -gamma increases on the late side.
  if (lo >= 0.0) return queue_slope(hi, Side::right);
  return queue_slope(std::min(hi, 0.0), Side::left);
}

double delta(const InstanceSpec& spec, double n1) {
  if (!(n1 >= 0.0 && n1 <= spec.n_total)) {
    std::ostringstream os;
    os << "split " << n1 << " outside [0, " << spec.n_total << "]";
    throw DomainError(os.str());
  }
  return (spec.penalties.beta.integral(0.0, n1) -
          spec.penalties.gamma.integral(n1, spec.n_total)) /
         spec.capacity;
}

EquilibriumSolution solve_split(const InstanceSpec& spec, const SolverOptions& options) {
  require_valid(spec, ValidationOptions{options.strict_monotonicity});
  if (!(options.tol > 0.0)) throw DomainError("solver tolerance must be positive");

  double lo = 0.0, hi = spec.n_total;
  double dlo = delta(spec, lo), dhi = delta(spec, hi);
  if (!(dlo < 0.0 && dhi > 0.0)) throw SolverError("split function does not change sign");
  // Bisect to adjacent doubles; the tolerance only bounds the accepted residual.
  for (int it = 0; it < 2000; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    double d = delta(spec, mid);
    if (d == 0.0) {
      lo = hi = mid;
      break;
    }
    (d < 0.0 ? lo : hi) = mid;
  }
  double n1 = std::abs(delta(spec, lo)) <= std::abs(delta(spec, hi)) ? lo : hi;
  if (std::abs(delta(spec, n1)) > options.tol)
    throw SolverError("bisection did not reach the requested tolerance");
  return EquilibriumSolution(spec, n1);
}

double equilibrium_queue_at(const EquilibriumSolution& sol, double t) { return sol.queue_at(t); }

double arrival_time_of(const EquilibriumSolution& sol, double n) {
  if (!(n >= 0.0 && n <= sol.instance().n_total))
    throw DomainError("traveler index outside [0, N]");
  return sol.t_of(n);
}

double traveler_at(const EquilibriumSolution& sol, double t) {
  if (!(t >= sol.start_time() && t <= sol.end_time()))
    throw DomainError("time outside [tau_s, tau_e]");
  return std::clamp(sol.n_of(t), 0.0, sol.instance().n_total);
}

namespace {

double sigma(double b, double g, double t) { return b * std::max(-t, 0.0) + g * std::max(t, 0.0); }

}  // namespace

VerificationReport verify_equilibrium(const EquilibriumSolution& sol, std::size_t n_grid,
                                      std::size_t t_grid) {
  return verify_equilibrium(
      sol, [&sol](double t) { return sol.queue_at(t); }, n_grid, t_grid);
}

VerificationReport verify_equilibrium(const EquilibriumSolution& sol, const QueueFn& queue,
                                      std::size_t n_grid, std::size_t t_grid) {
  if (n_grid < 2 || t_grid < 2) throw DomainError("verification grids need >= 2 points");
  const auto& spec = sol.instance();
  double h = spec.horizon();
  std::vector<double> u(t_grid), qu(t_grid);
  for (std::size_t j = 0; j < t_grid; ++j) {
    u[j] = -h + 2.0 * h * static_cast<double>(j) / static_cast<double>(t_grid - 1);
    qu[j] = queue(u[j]);
  }
  VerificationReport r;
  r.travelers = n_grid;
  r.candidates = t_grid + 1;
  r.max_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_grid; ++i) {
    double n = spec.n_total * static_cast<double>(i) / static_cast<double>(n_grid - 1);
    double b = spec.penalties.beta(n), g = spec.penalties.gamma(n);
    double tn = sol.t_of(n);
    double own = queue(tn) + sigma(b, g, tn);
    double best = own, best_t = tn;
    for (std::size_t j = 0; j < t_grid; ++j) {
      double c = qu[j] + sigma(b, g, u[j]);
      if (c < best) {
        best = c;
        best_t = u[j];
      }
    }
    if (own - best > r.max_violation) {
      r.max_violation = own - best;
      r.worst_traveler = n;
      r.worst_time = best_t;
    }
  }
  return r;
}

double max_choice_violation(const QueueFn& queue, const std::vector<TravelerChoice>& choices,
                            double t_lo, double t_hi, std::size_t t_grid) {
  if (t_grid < 2) throw DomainError("verification grid needs >= 2 points");
  std::vector<double> u(t_grid), qu(t_grid);
  for (std::size_t j = 0; j < t_grid; ++j) {
    u[j] = t_lo + (t_hi - t_lo) * static_cast<double>(j) / static_cast<double>(t_grid - 1);
    qu[j] = queue(u[j]);
  }
  double worst = 0.0;
  for (const auto& c : choices) {
    double own = queue(c.arrival) + sigma(c.beta, c.gamma, c.arrival);
    double best = own;
    for (std::size_t j = 0; j < t_grid; ++j) best = std::min(best, qu[j] + sigma(c.beta, c.gamma, u[j]));
    worst = std::max(worst, own - best);
  }
  return worst;
}

}  // namespace bneck
