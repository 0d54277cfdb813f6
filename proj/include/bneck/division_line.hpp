#pragma once

#include <memory>
#include <vector>

#include "bneck/equilibrium.hpp"

namespace bneck {

enum class LineSection { A, B, C, endpoint };
const char* to_string(LineSection s);

struct DivisionPoint {
  double beta0 = 0.0;
  double gamma0 = 0.0;
  LineSection section = LineSection::A;
  double early_at = 0.0;
  double late_at = 0.0;
};

// Indifference curve of a negligible traveler (beta0, gamma0) under the fixed
// equilibrium queue. Requires linear penalties: the ordered cost field is then
// C* - k_e t^2 before 0 and C* - k_l t^2 after.
class DivisionLine {
 public:
  explicit DivisionLine(std::shared_ptr<const EquilibriumSolution> sol);

  DivisionPoint point(double beta0) const;
  std::vector<DivisionPoint> sample(std::size_t count) const;

  double on_time_cost() const noexcept { return c_star_; }  // C* = Q^(0)
  double early_curvature() const noexcept { return k_early_; }
  double late_curvature() const noexcept { return k_late_; }
  double junction_time() const noexcept { return t_bc_; }  // B/C boundary, early side
  double junction_beta() const noexcept { return beta_bc_; }
  double end_beta() const noexcept { return beta_end_; }

 private:
  std::shared_ptr<const EquilibriumSolution> sol_;
  double c_star_, k_early_, k_late_, t_bc_, beta_bc_, beta_end_;
};

DivisionPoint division_line_point(std::shared_ptr<const EquilibriumSolution> sol, double beta0);

enum class PreferenceCase { early, late, on_time, indifferent };
const char* to_string(PreferenceCase c);

struct Classification {
  std::vector<double> times;  // one preferred arrival time, or two on the line
  PreferenceCase which = PreferenceCase::on_time;
  double early_at = 0.0;
  double early_cost = 0.0;
  double late_at = 0.0;
  double late_cost = 0.0;
  double grid_argmin = 0.0;
  double grid_min_cost = 0.0;
  bool agrees = false;
};

// Best early and best late arrival for (beta0, gamma0) under Q^, cross-checked
// with a brute-force argmin over a uniform grid of the horizon.
Classification classify_traveler(const EquilibriumSolution& sol, double beta0, double gamma0,
                                 std::size_t grid = 20001, double tie_tol = 1e-9);

}  // namespace bneck
