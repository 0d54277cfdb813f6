#include "bneck/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "bneck/cost.hpp"
#include "bneck/errors.hpp"

namespace bneck {

void OlpParams::validate() const {
  std::vector<std::string> v;
  if (!(step_scale > 0.0)) v.emplace_back("a must be positive");
  if (!(floor_fraction > 0.0 && floor_fraction < 1.0)) v.emplace_back("b must lie in (0,1)");
  if (!(smoothing > 0.0)) v.emplace_back("alpha must be positive");
  if (grid_resolution < 16) v.emplace_back("grid resolution must be >= 16");
  if (!v.empty()) throw ValidationError("invalid dynamics parameters", v);
}

double knot_distance(const QueueProfile& q, double t) {
  auto b = q.breakpoints();
  auto it = std::lower_bound(b.begin(), b.end(), t);
  double d = std::numeric_limits<double>::infinity();
  if (it != b.end()) d = *it - t;
  if (it != b.begin()) d = std::min(d, t - *std::prev(it));
  return d;
}

std::vector<double> evaluation_grid(const QueueProfile& q, std::size_t resolution) {
  const auto& sol = q.base();
  double ts = sol.start_time(), te = sol.end_time();
  std::vector<double> g;
  g.reserve(resolution + q.knots().size() + 1);
  for (std::size_t i = 0; i < resolution; ++i)
    g.push_back(ts + (te - ts) * static_cast<double>(i) / static_cast<double>(resolution - 1));
  g.back() = te;
  g.push_back(0.0);
  g.insert(g.end(), q.knots().begin(), q.knots().end());
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

namespace {

// Shared driver: `increment(t)` is the unscaled raw change at a grid node and
// `scale` is halved until every segment keeps Q' < 1.
QueueProfile controlled_step(const QueueProfile& q, const std::vector<double>& grid,
                             const std::vector<double>& increment, double scale, double b,
                             StepDiagnostics* diag) {
  const auto& sol = q.base();
  std::size_t m = grid.size();
  std::vector<double> e(m), floor(m), seg_max(m - 1);
  for (std::size_t i = 0; i < m; ++i) {
    e[i] = q.perturbation_at(grid[i]);
    // b Q - Q^, expressed as a perturbation.
    floor[i] = b * e[i] - (1.0 - b) * sol.queue_at(grid[i]);
  }
  for (std::size_t j = 0; j + 1 < m; ++j) seg_max[j] = sol.max_queue_slope(grid[j], grid[j + 1]);

  std::vector<double> out(m);
  for (int halvings = 0; halvings <= 40; ++halvings) {
    std::size_t clamped = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (increment[i] == 0.0) {
        out[i] = e[i];
        continue;
      }
      double raw = e[i] + scale * increment[i];
      if (raw < floor[i]) ++clamped;
      out[i] = std::max(raw, floor[i]);
    }
    bool fifo = true;
    for (std::size_t j = 0; j + 1 < m && fifo; ++j)
      fifo = (out[j + 1] - out[j]) / (grid[j + 1] - grid[j]) + seg_max[j] < 1.0;
    if (fifo) {
      if (diag) {
        diag->halvings = halvings;
        diag->effective_scale = scale;
        diag->clamped_points = clamped;
      }
      out.front() = out.back() = 0.0;
      return QueueProfile(q.base_ptr(), grid, std::move(out));
    }
    scale *= 0.5;
  }
  throw StepInfeasible("step infeasible: FIFO bound violated after 40 halvings");
}

}  // namespace

QueueProfile olp_step(const QueueProfile& q, const OlpParams& params,
                      StepDiagnostics* diagnostics) {
  params.validate();
  const auto& sol = q.base();
  const auto& spec = sol.instance();
  auto grid = evaluation_grid(q, params.grid_resolution);
  auto kinks = q.breakpoints();

  StepDiagnostics diag;
  std::vector<double> inc(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double t = grid[i];
    if (std::binary_search(kinks.begin(), kinks.end(), t)) continue;  // Y(Q)(t) = Q(t)
    double c = cost_derivative(spec, q, sol.n_of(t), t);
    double atten = 1.0 - std::exp(-params.smoothing * knot_distance(q, t));
    inc[i] = atten * c;
    diag.max_pressure = std::max(diag.max_pressure, std::abs(c));
    ++diag.updated_points;
  }
  auto out = controlled_step(q, grid, inc, params.step_scale, params.floor_fraction, &diag);
  if (diagnostics) *diagnostics = diag;
  return out;
}

PressureReport check_pressure_condition(const QueueProfile& q_before, const QueueProfile& q_after,
                                        double deadband) {
  const auto& sol = q_before.base();
  const auto& spec = sol.instance();
  auto kinks = q_before.breakpoints();
  std::vector<double> pts = q_after.knots();
  for (std::size_t i = 0; i + 1 < q_after.knots().size(); ++i)
    pts.push_back(0.5 * (q_after.knots()[i] + q_after.knots()[i + 1]));
  if (pts.empty()) {
    for (std::size_t i = 0; i + 1 < kinks.size(); ++i) pts.push_back(0.5 * (kinks[i] + kinks[i + 1]));
  }
  std::sort(pts.begin(), pts.end());

  PressureReport r;
  for (double t : pts) {
    if (!(t > sol.start_time() && t < sol.end_time())) continue;
    if (std::binary_search(kinks.begin(), kinks.end(), t)) continue;
    ++r.checked;
    double change = q_after.at(t) - q_before.at(t);
    double c = cost_derivative(spec, q_before, sol.n_of(t), t);
    if (std::abs(change) <= deadband || std::abs(c) <= deadband) continue;
    if (change * c < 0.0) r.violations.push_back({t, change, c});
  }
  return r;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::diverging: return "diverging";
    case Verdict::non_decreasing: return "non_decreasing";
    case Verdict::distance_decreased: return "distance_decreased";
    case Verdict::violated_pressure_condition: return "violated_pressure_condition";
  }
  return "unknown";
}

double DynamicsTrace::min_distance() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& d : days) m = std::min(m, d.distance);
  return m;
}

double max_pressure(const QueueProfile& q) {
  const auto& sol = q.base();
  auto b = q.breakpoints();
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    double t = 0.5 * (b[i] + b[i + 1]);
    m = std::max(m, std::abs(cost_derivative(sol.instance(), q, sol.n_of(t), t)));
  }
  return m;
}

namespace {

DayRecord record_for(std::size_t day, const QueueProfile& q) {
  DayRecord r;
  r.day = day;
  r.distance = distance_to_equilibrium(q);
  r.max_pressure = max_pressure(q);
  auto audit = audit_admissibility(q);
  r.min_queue = audit.min_interior_queue;
  r.max_slope = audit.max_slope;
  return r;
}

}  // namespace

DynamicsTrace iterate(const QueueProfile& q0, const OlpParams& params, std::size_t days,
                      std::size_t snapshot_every) {
  params.validate();
  if (days < 1) throw DomainError("iterate needs at least one day");
  DynamicsTrace trace;
  trace.params = params;
  trace.days.push_back(record_for(0, q0));
  if (snapshot_every > 0) trace.snapshots.emplace_back(0, q0);

  bool violated = false, decreased = false;
  QueueProfile q = q0;
  for (std::size_t k = 1; k <= days; ++k) {
    StepDiagnostics diag;
    QueueProfile next = olp_step(q, params, &diag);
    auto audit = check_pressure_condition(q, next);
    auto rec = record_for(k, next);
    rec.halvings = diag.halvings;
    rec.pressure_violations = audit.violations.size();
    if (!audit.ok()) violated = true;
    if (rec.distance < trace.days.back().distance - 1e-12) decreased = true;
    trace.days.push_back(rec);
    q = std::move(next);
    if (snapshot_every > 0 && k % snapshot_every == 0 && k != days) trace.snapshots.emplace_back(k, q);
  }
  trace.snapshots.emplace_back(days, q);

  if (violated)
    trace.verdict = Verdict::violated_pressure_condition;
  else if (decreased)
    trace.verdict = Verdict::distance_decreased;
  else if (trace.days.back().distance > trace.days.front().distance + 1e-12)
    trace.verdict = Verdict::diverging;
  else
    trace.verdict = Verdict::non_decreasing;
  return trace;
}

QueueProfile continuous_day_step(const QueueProfile& q, const std::function<double(double)>& rate,
                                 double dtau, const OlpParams& params,
                                 StepDiagnostics* diagnostics) {
  params.validate();
  if (!(dtau > 0.0)) throw DomainError("day increment must be positive");
  const auto& sol = q.base();
  const auto& spec = sol.instance();
  auto grid = evaluation_grid(q, params.grid_resolution);

  StepDiagnostics diag;
  std::vector<double> inc(grid.size(), 0.0);
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    double t = grid[i];
    double w = rate(t);
    if (w < 0.0) throw DomainError("rate field must be non-negative");
    double c = cost_derivative(spec, q, sol.n_of(t), t, Side::two_sided);
    inc[i] = w * c;
    diag.max_pressure = std::max(diag.max_pressure, std::abs(c));
    ++diag.updated_points;
  }
  auto out = controlled_step(q, grid, inc, dtau, params.floor_fraction, &diag);
  if (diagnostics) *diagnostics = diag;
  return out;
}

}  // namespace bneck
