#pragma once

#include <memory>

#include "bneck/equilibrium.hpp"
#include "bneck/instance.hpp"

namespace fixtures {

inline bneck::InstanceSpec piecewise(double n_total, double capacity, std::vector<double> beta,
                                     std::vector<double> gamma) {
  std::vector<double> k;
  for (int i = 0; i < 5; ++i) k.push_back(n_total * i / 4.0);
  bneck::InstanceSpec s{n_total, capacity, {}};
  s.penalties.kind = bneck::PenaltyKind::piecewise_linear;
  s.penalties.beta = bneck::PenaltyFunction::piecewise_linear(k, std::move(beta));
  s.penalties.gamma = bneck::PenaltyFunction::piecewise_linear(k, std::move(gamma));
  return s;
}

// Same values as data/piecewise_a.json and data/piecewise_b.json.
inline bneck::InstanceSpec piecewise_a() {
  return piecewise(600, 300, {0.05, 0.1, 0.3, 0.6, 0.9}, {4.0, 2.5, 1.8, 1.4, 1.2});
}
inline bneck::InstanceSpec piecewise_b() {
  return piecewise(1000, 400, {0.02, 0.2, 0.35, 0.45, 0.8}, {2.0, 1.6, 1.0, 0.7, 0.5});
}

inline std::shared_ptr<const bneck::EquilibriumSolution> linear_solution() {
  static auto sol =
      std::make_shared<const bneck::EquilibriumSolution>(bneck::solve_split(bneck::linear_example()));
  return sol;
}

}  // namespace fixtures
