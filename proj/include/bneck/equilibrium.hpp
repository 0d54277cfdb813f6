#pragma once

#include <functional>
#include <vector>

#include "bneck/instance.hpp"

namespace bneck {

enum class Side { left, right, two_sided };

struct SolverOptions {
  double tol = 1e-9;  // time units
  bool strict_monotonicity = true;
};

// Unique equilibrium of the ordered bottleneck: split N1, support [tau_s, tau_e]
// and the semi-analytic queue Q^(t).
class EquilibriumSolution {
 public:
  EquilibriumSolution(InstanceSpec spec, double n1);

  const InstanceSpec& instance() const noexcept { return spec_; }
  double split() const noexcept { return n1_; }
  double start_time() const noexcept { return tau_s_; }
  double end_time() const noexcept { return tau_e_; }

  // Q^(t); zero outside [tau_s, tau_e].
  double queue_at(double t) const;
  // dQ^/dt. The slope jumps at t = 0 from beta(N1) to -gamma(N1).
  double queue_slope(double t, Side side = Side::two_sided) const;
  // Largest Q^' on [lo, hi], using monotonicity of the penalties.
  double max_queue_slope(double lo, double hi) const;

  // t(n) = (n - N1)/s and its inverse n(t) = N1 + ts, without range checks.
  double t_of(double n) const { return (n - n1_) / spec_.capacity; }
  double n_of(double t) const { return n1_ + t * spec_.capacity; }

 private:
  InstanceSpec spec_;
  double n1_;
  double tau_s_;
  double tau_e_;
  double q0_;  // Q^(0)
};

// Delta(n1)/s: the late-end queue value implied by split n1.
double delta(const InstanceSpec& spec, double n1);

EquilibriumSolution solve_split(const InstanceSpec& spec, const SolverOptions& options = {});

double equilibrium_queue_at(const EquilibriumSolution& sol, double t);
double arrival_time_of(const EquilibriumSolution& sol, double n);
double traveler_at(const EquilibriumSolution& sol, double t);

struct VerificationReport {
  double max_violation = 0.0;
  double worst_traveler = 0.0;
  double worst_time = 0.0;  // best deviation for the worst traveler
  std::size_t travelers = 0;
  std::size_t candidates = 0;
};

using QueueFn = std::function<double(double)>;

// Max over n of C_n(t(n)) - min_u C_n(u), u on a uniform grid of [-N/s, N/s]
// plus t(n) itself.
VerificationReport verify_equilibrium(const EquilibriumSolution& sol, std::size_t n_grid,
                                      std::size_t t_grid);
VerificationReport verify_equilibrium(const EquilibriumSolution& sol, const QueueFn& queue,
                                      std::size_t n_grid, std::size_t t_grid);

// A traveler described directly by its penalties and chosen arrival time.
struct TravelerChoice {
  double beta;
  double gamma;
  double arrival;
};

// Same check for an arbitrary population (e.g. off the monotone support line).
double max_choice_violation(const QueueFn& queue, const std::vector<TravelerChoice>& choices,
                            double t_lo, double t_hi, std::size_t t_grid);

}  // namespace bneck
