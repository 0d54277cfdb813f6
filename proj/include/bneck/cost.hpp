#pragma once

#include "bneck/instance.hpp"
#include "bneck/queue_profile.hpp"

namespace bneck {

struct CostSample {
  double traveler = 0.0;
  double arrival = 0.0;
  double queue_component = 0.0;
  double schedule_component = 0.0;
  double total = 0.0;
};

enum class Pressure { backward, forward, none };

const char* to_string(Pressure p);

// sigma_n(t) = beta(n)[-t]+ + gamma(n)[t]+
double schedule_cost(const InstanceSpec& spec, double n, double t);

CostSample generalized_cost(const InstanceSpec& spec, double queue_value, double n, double t);
CostSample generalized_cost(const InstanceSpec& spec, const QueueProfile& q, double n, double t);

// delta_{t1,t2}(n) = sigma_n(t1) - sigma_n(t2)
double schedule_gap(const InstanceSpec& spec, double n, double t1, double t2);

// C'_n(t | Q). Throws NonDifferentiablePoint at t = 0 or a knot of q.
double cost_derivative(const InstanceSpec& spec, const QueueProfile& q, double n, double t);
// One-sided (or averaged) derivative, defined everywhere inside the support.
double cost_derivative(const InstanceSpec& spec, const QueueProfile& q, double n, double t,
                       Side side);

// Sign of C' for the ordered traveler n(t).
Pressure local_pressure(const QueueProfile& q, double t, Side side = Side::two_sided,
                        double deadband = 1e-12);

}  // namespace bneck
