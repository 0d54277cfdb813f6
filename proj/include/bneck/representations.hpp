#pragma once

#include <functional>

#include "bneck/queue_profile.hpp"

namespace bneck {

// Traveler choice given by the arrival map t(n) (fixed by the ordered
// equilibrium) and a queue profile. Everything else is derived on demand.
class ChoiceState {
 public:
  explicit ChoiceState(QueueProfile queue) : queue_(std::move(queue)) {}

  const QueueProfile& queue() const noexcept { return queue_; }
  const EquilibriumSolution& base() const noexcept { return queue_.base(); }

  double arrival_time(double n) const;     // t(n)
  double traveler_at(double t) const;      // n(t), clamped to [0, N]
  double departure_time_of(double n) const;  // tau(n) = t(n) - Q(t(n))
  double cumulative_arrivals(double t) const;
  double cumulative_departures(double tau) const;
  double permutation(double n) const;          // phi(n) = nu_A(t(n))
  double departure_of_arrival(double t) const;  // D(t) = t - Q(t)
  // Arrival time whose departure time is tau (inverse of D by bisection).
  double arrival_of_departure(double tau) const;

 private:
  QueueProfile queue_;
};

// Q(t) = t - tau(n(t)) from an arbitrary departure map over the fixed arrival order.
double queue_from_departures(const EquilibriumSolution& sol,
                             const std::function<double(double)>& departure_time, double t);

// inf over t' <= t of nu_D(t') + s (t - t'), scanned on a grid of t' values
// that always contains tau_s and t.
double newell_arrivals(const ChoiceState& state, double t, std::size_t grid = 2000);

// psi(tau) = nu_D before - nu_D after.
double flux(const QueueProfile& before, const QueueProfile& after, double tau);

}  // namespace bneck
