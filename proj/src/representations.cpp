#include "bneck/representations.hpp"

#include <algorithm>
#include <cmath>

#include "bneck/errors.hpp"

namespace bneck {

double ChoiceState::arrival_time(double n) const { return arrival_time_of(base(), n); }

double ChoiceState::traveler_at(double t) const {
  return std::clamp(base().n_of(t), 0.0, base().instance().n_total);
}

double ChoiceState::departure_time_of(double n) const {
  double t = arrival_time(n);
  return t - queue_.at(t);
}

double ChoiceState::cumulative_arrivals(double t) const { return traveler_at(t); }

double ChoiceState::arrival_of_departure(double tau) const {
  double lo = base().start_time(), hi = base().end_time();
  if (tau <= lo) return lo;
  if (tau >= hi) return hi;
  // D(t) = t - Q(t) is strictly increasing under FIFO.
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (mid - queue_.at(mid) < tau ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double ChoiceState::cumulative_departures(double tau) const {
  if (tau <= base().start_time()) return 0.0;
  if (tau >= base().end_time()) return base().instance().n_total;
  return cumulative_arrivals(arrival_of_departure(tau));
}

double ChoiceState::permutation(double n) const { return cumulative_arrivals(arrival_time(n)); }

double ChoiceState::departure_of_arrival(double t) const {
  if (!(t >= base().start_time() && t <= base().end_time()))
    throw DomainError("arrival time outside [tau_s, tau_e]");
  return t - queue_.at(t);
}

double queue_from_departures(const EquilibriumSolution& sol,
                             const std::function<double(double)>& departure_time, double t) {
  if (!(t > sol.start_time() && t < sol.end_time())) return 0.0;
  double n = std::clamp(sol.n_of(t), 0.0, sol.instance().n_total);
  return t - departure_time(n);
}

double newell_arrivals(const ChoiceState& state, double t, std::size_t grid) {
  const auto& sol = state.base();
  double s = sol.instance().capacity;
  double lo = sol.start_time();
  if (t <= lo) return 0.0;
  double best = state.cumulative_departures(t);
  grid = std::max<std::size_t>(grid, 2);
  for (std::size_t i = 0; i < grid; ++i) {
    double tp = lo + (t - lo) * static_cast<double>(i) / static_cast<double>(grid - 1);
    best = std::min(best, state.cumulative_departures(tp) + s * (t - tp));
  }
  return best;
}

double flux(const QueueProfile& before, const QueueProfile& after, double tau) {
  return ChoiceState(before).cumulative_departures(tau) -
         ChoiceState(after).cumulative_departures(tau);
}

}  // namespace bneck
