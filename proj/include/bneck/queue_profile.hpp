#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bneck/equilibrium.hpp"

namespace bneck {

// Q(t) = Q^(t) + e(t) with e piecewise linear over explicit knots and zero
// outside the knot span.
class QueueProfile {
 public:
  QueueProfile(std::shared_ptr<const EquilibriumSolution> base, std::vector<double> knots = {},
               std::vector<double> values = {});

  // The unperturbed equilibrium profile.
  static QueueProfile equilibrium(std::shared_ptr<const EquilibriumSolution> base);

  const EquilibriumSolution& base() const noexcept { return *base_; }
  const std::shared_ptr<const EquilibriumSolution>& base_ptr() const noexcept { return base_; }
  const std::vector<double>& knots() const noexcept { return knots_; }
  const std::vector<double>& values() const noexcept { return values_; }

  double at(double t) const;
  double perturbation_at(double t) const;
  // Slope of e on each knot segment (size knots - 1).
  std::vector<double> slopes() const;
  // One-sided slope of e; the two-sided value is the mean at a knot.
  double perturbation_slope(double t, Side side = Side::two_sided) const;
  // Q'(t) = Q^'(t) + e'(t).
  double slope(double t, Side side = Side::two_sided) const;
  bool is_knot(double t) const;
  // Non-differentiable points: knots plus tau_s, 0, tau_e.
  std::vector<double> breakpoints() const;

 private:
  std::shared_ptr<const EquilibriumSolution> base_;
  std::vector<double> knots_;
  std::vector<double> values_;
};

struct AdmissibilityReport {
  std::vector<std::string> violations;
  double min_interior_queue = 0.0;
  double max_slope = 0.0;  // upper bound of Q' over all segments

  bool ok() const noexcept { return violations.empty(); }
};

// Support, positivity on an interior grid plus all knots, and the FIFO slope bound.
AdmissibilityReport audit_admissibility(const QueueProfile& q, std::size_t grid = 1000);

// Non-negative sin^2 bump on [t1, t2] sampled at `knots` points (3 gives a
// triangle), scaled to min{epsilon, slope headroom}.
QueueProfile make_bump_perturbation(std::shared_ptr<const EquilibriumSolution> sol, double t1,
                                    double t2, double epsilon, std::size_t knots = 3);

// L-infinity distance; exact because the difference is piecewise linear in e.
double distance(const QueueProfile& q1, const QueueProfile& q2);
// d(Q, Q^).
double distance_to_equilibrium(const QueueProfile& q);

// Earliest knot attaining max |e|, with the signed deviation there.
std::pair<double, double> first_max_deviation(const QueueProfile& q);

nlohmann::json profile_to_json(const QueueProfile& q);
QueueProfile profile_from_json(std::shared_ptr<const EquilibriumSolution> base,
                               const nlohmann::json& j);

}  // namespace bneck
