#include "bneck/division_line.hpp"

#include <algorithm>
#include <cmath>

#include "bneck/errors.hpp"

namespace bneck {

const char* to_string(LineSection s) {
  switch (s) {
    case LineSection::A: return "A";
    case LineSection::B: return "B";
    case LineSection::C: return "C";
    case LineSection::endpoint: return "endpoint";
  }
  return "?";
}

const char* to_string(PreferenceCase c) {
  switch (c) {
    case PreferenceCase::early: return "early";
    case PreferenceCase::late: return "late";
    case PreferenceCase::on_time: return "on_time";
    case PreferenceCase::indifferent: return "indifferent";
  }
  return "?";
}

DivisionLine::DivisionLine(std::shared_ptr<const EquilibriumSolution> sol) : sol_(std::move(sol)) {
  if (!sol_) throw DomainError("missing equilibrium");
  const auto& spec = sol_->instance();
  const auto& p = spec.penalties;
  if (!p.beta.is_linear() || !p.gamma.is_linear())
    throw DomainError("division line is only available for linear penalties");
  double s = spec.capacity;
  c_star_ = sol_->queue_at(0.0);
  k_early_ = 0.5 * p.beta.slope() * s;
  k_late_ = -0.5 * p.gamma.slope() * s;
  double ts = sol_->start_time(), te = sol_->end_time();
  t_bc_ = -std::sqrt(k_late_ / k_early_) * te;
  if (!(t_bc_ > ts)) throw DomainError("instance outside the three-section line geometry");
  if (-p.beta(0.0) * ts / te > p.gamma(spec.n_total))
    throw DomainError("instance outside the three-section line geometry");
  beta_bc_ = p.beta(sol_->n_of(t_bc_));
  beta_end_ = p.beta(sol_->split());
}

DivisionPoint DivisionLine::point(double beta0) const {
  const auto& p = sol_->instance().penalties;
  double ts = sol_->start_time(), te = sol_->end_time();
  if (!(beta0 >= 0.0 && beta0 <= beta_end_))
    throw DomainError("beta0 outside [0, beta(N1)]");

  DivisionPoint d;
  d.beta0 = beta0;
  if (beta0 <= p.beta(0.0)) {
    d.section = LineSection::A;
    d.early_at = ts;
    d.late_at = te;
    d.gamma0 = -beta0 * ts / te;
    return d;
  }
  if (beta0 == beta_end_) {
    d.section = LineSection::endpoint;
    d.early_at = d.late_at = 0.0;
    d.gamma0 = p.gamma(sol_->split());
    return d;
  }
  double n = (beta0 - p.beta.intercept()) / p.beta.slope();
  double t = sol_->t_of(n);
  d.early_at = t;
  if (t <= t_bc_) {
    d.section = LineSection::B;
    d.late_at = te;
    d.gamma0 = (c_star_ - k_early_ * t * t) / te;
  } else {
    d.section = LineSection::C;
    d.late_at = -std::sqrt(k_early_ / k_late_) * t;
    d.gamma0 = p.gamma(sol_->n_of(d.late_at));
  }
  return d;
}

std::vector<DivisionPoint> DivisionLine::sample(std::size_t count) const {
  std::vector<DivisionPoint> out;
  for (std::size_t i = 0; i < count; ++i) {
    double b = count == 1 ? 0.0 : beta_end_ * static_cast<double>(i) / static_cast<double>(count - 1);
    out.push_back(point(i + 1 == count ? beta_end_ : b));
  }
  return out;
}

DivisionPoint division_line_point(std::shared_ptr<const EquilibriumSolution> sol, double beta0) {
  return DivisionLine(std::move(sol)).point(beta0);
}

namespace {

// Smallest n in [0, N] with f(n) >= y for increasing f (bisection).
double invert_increasing(const PenaltyFunction& f, double y, double n_total) {
  double lo = 0.0, hi = n_total;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) < y ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Classification classify_traveler(const EquilibriumSolution& sol, double beta0, double gamma0,
                                 std::size_t grid, double tie_tol) {
  const auto& spec = sol.instance();
  const auto& p = spec.penalties;
  double N = spec.n_total, n1 = sol.split();
  double ts = sol.start_time(), te = sol.end_time();
  auto cost = [&](double t) {
    return sol.queue_at(t) + beta0 * std::max(-t, 0.0) + gamma0 * std::max(t, 0.0);
  };

  Classification c;
  // Early optimum: Q^'(t) = beta(n(t)) crosses beta0.
  if (beta0 <= p.beta(0.0))
    c.early_at = ts;
  else if (beta0 >= p.beta(n1))
    c.early_at = 0.0;
  else
    c.early_at = std::min(sol.t_of(invert_increasing(p.beta, beta0, N)), 0.0);
  // Late optimum: -Q^'(t) = gamma(n(t)) crosses gamma0.
  if (gamma0 <= p.gamma(N))
    c.late_at = te;
  else if (gamma0 >= p.gamma(n1))
    c.late_at = 0.0;
  else {
    PenaltyFunction neg = PenaltyFunction::custom([&p](double n) { return -p.gamma(n); });
    c.late_at = std::max(sol.t_of(invert_increasing(neg, -gamma0, N)), 0.0);
  }
  c.early_cost = cost(c.early_at);
  c.late_cost = cost(c.late_at);

  if (c.early_at == c.late_at) {
    c.which = PreferenceCase::on_time;
    c.times = {c.early_at};
  } else if (std::abs(c.early_cost - c.late_cost) <= tie_tol) {
    c.which = PreferenceCase::indifferent;
    c.times = {c.early_at, c.late_at};
  } else if (c.early_cost < c.late_cost) {
    c.which = c.early_at == 0.0 ? PreferenceCase::on_time : PreferenceCase::early;
    c.times = {c.early_at};
  } else {
    c.which = c.late_at == 0.0 ? PreferenceCase::on_time : PreferenceCase::late;
    c.times = {c.late_at};
  }

  // Brute force over the horizon.
  double h = spec.horizon();
  grid = std::max<std::size_t>(grid, 3);
  double step = 2.0 * h / static_cast<double>(grid - 1);
  c.grid_min_cost = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid; ++i) {
    double t = -h + step * static_cast<double>(i);
    double v = cost(t);
    if (v < c.grid_min_cost) {
      c.grid_min_cost = v;
      c.grid_argmin = t;
    }
  }
  // Agreement: the grid minimizer sits within one step of a predicted time
  // whose cost is minimal up to the grid's cost resolution.
  double best = std::min(c.early_cost, c.late_cost);
  double cost_tol = step * (1.0 + beta0 + gamma0) + tie_tol;
  c.agrees = c.grid_min_cost >= best - cost_tol;
  bool near = false;
  for (double t : {c.early_at, c.late_at})
    if (cost(t) <= best + std::max(cost_tol, c.grid_min_cost - best + cost_tol) &&
        std::abs(c.grid_argmin - t) <= step)
      near = true;
  c.agrees = c.agrees && near;
  return c;
}

}  // namespace bneck
