#include "bneck/cost.hpp"

#include <algorithm>
#include <cmath>

#include "bneck/errors.hpp"

namespace bneck {

const char* to_string(Pressure p) {
  switch (p) {
    case Pressure::backward: return "backward";
    case Pressure::forward: return "forward";
    case Pressure::none: return "none";
  }
  return "none";
}

double schedule_cost(const InstanceSpec& spec, double n, double t) {
  if (t < 0.0) return beta_at(spec, n) * -t;
  if (t > 0.0) return gamma_at(spec, n) * t;
  beta_at(spec, n);  // domain check
  return 0.0;
}

CostSample generalized_cost(const InstanceSpec& spec, double queue_value, double n, double t) {
  CostSample c;
  c.traveler = n;
  c.arrival = t;
  c.queue_component = queue_value;
  c.schedule_component = schedule_cost(spec, n, t);
  c.total = c.queue_component + c.schedule_component;
  return c;
}

CostSample generalized_cost(const InstanceSpec& spec, const QueueProfile& q, double n, double t) {
  return generalized_cost(spec, q.at(t), n, t);
}

double schedule_gap(const InstanceSpec& spec, double n, double t1, double t2) {
  return schedule_cost(spec, n, t1) - schedule_cost(spec, n, t2);
}

double cost_derivative(const InstanceSpec& spec, const QueueProfile& q, double n, double t) {
  if (t == 0.0 || q.is_knot(t) || t == q.base().start_time() || t == q.base().end_time())
    throw NonDifferentiablePoint("cost derivative undefined at a kink; use a one-sided variant");
  return cost_derivative(spec, q, n, t, Side::two_sided);
}

double cost_derivative(const InstanceSpec& spec, const QueueProfile& q, double n, double t,
                       Side side) {
  double b = beta_at(spec, n), g = gamma_at(spec, n);
  // Base part first so the ordered traveler's equilibrium terms cancel exactly.
  double base = q.base().queue_slope(t, side);
  double e = q.perturbation_slope(t, side);
  if (t < 0.0) return (base - b) + e;
  if (t > 0.0) return (base + g) + e;
  switch (side) {
    case Side::left: return (base - b) + e;
    case Side::right: return (base + g) + e;
    case Side::two_sided: break;
  }
  return 0.5 * ((q.base().queue_slope(t, Side::left) - b) + (q.base().queue_slope(t, Side::right) + g)) + e;
}

Pressure local_pressure(const QueueProfile& q, double t, Side side, double deadband) {
  const auto& sol = q.base();
  if (!(t > sol.start_time() && t < sol.end_time())) return Pressure::none;
  double n = sol.n_of(t);
  double c = cost_derivative(sol.instance(), q, n, t, side);
  if (c > deadband) return Pressure::backward;
  if (c < -deadband) return Pressure::forward;
  return Pressure::none;
}

}  // namespace bneck
