#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bneck/queue_profile.hpp"

namespace bneck {

struct OlpParams {
  double step_scale = 0.5;      // a
  double floor_fraction = 0.5;  // b
  double smoothing = 100.0;     // alpha
  std::size_t grid_resolution = 512;

  // Throws ValidationError listing every out-of-range parameter.
  void validate() const;
};

struct StepDiagnostics {
  int halvings = 0;
  double effective_scale = 0.0;
  double max_pressure = 0.0;  // max |C'| over updated grid points
  std::size_t updated_points = 0;
  std::size_t clamped_points = 0;
};

// Distance from t to the nearest non-differentiable point of q.
double knot_distance(const QueueProfile& q, double t);

// Uniform grid on [tau_s, tau_e] merged with 0 and the knots of q.
std::vector<double> evaluation_grid(const QueueProfile& q, std::size_t resolution);

// One day of the smoothed OLP map. The result's knots are the evaluation grid.
QueueProfile olp_step(const QueueProfile& q, const OlpParams& params,
                      StepDiagnostics* diagnostics = nullptr);

struct PressureViolation {
  double t;
  double change;      // Q_after(t) - Q_before(t)
  double derivative;  // C'_{n(t)}(t | Q_before)
};

struct PressureReport {
  std::size_t checked = 0;
  std::vector<PressureViolation> violations;

  bool ok() const noexcept { return violations.empty(); }
};

// Sign audit of [Q_B - Q_A] C'(Q_A) >= 0 at every point where q_before is
// differentiable among q_after's knots and segment midpoints.
PressureReport check_pressure_condition(const QueueProfile& q_before, const QueueProfile& q_after,
                                        double deadband = 1e-12);

enum class Verdict { diverging, non_decreasing, distance_decreased, violated_pressure_condition };

const char* to_string(Verdict v);

struct DayRecord {
  std::size_t day = 0;
  double distance = 0.0;
  double max_pressure = 0.0;
  double min_queue = 0.0;
  double max_slope = 0.0;
  int halvings = 0;
  std::size_t pressure_violations = 0;
};

struct DynamicsTrace {
  OlpParams params;
  std::vector<DayRecord> days;
  std::vector<std::pair<std::size_t, QueueProfile>> snapshots;
  Verdict verdict = Verdict::non_decreasing;

  double min_distance() const;
  const QueueProfile& final_profile() const { return snapshots.back().second; }
};

// Max |C'_{n(t)}| over segment midpoints of q's breakpoints.
double max_pressure(const QueueProfile& q);

// Applies olp_step `days` times. Snapshots are kept every `snapshot_every`
// days (0 keeps none), and the final profile is always kept last.
DynamicsTrace iterate(const QueueProfile& q0, const OlpParams& params, std::size_t days,
                      std::size_t snapshot_every = 0);

// Explicit Euler step Q <- Q + dtau a(t) C'_{n(t)}(t | Q) with the same floor
// and FIFO step control as olp_step. Kinks use the symmetric derivative.
QueueProfile continuous_day_step(const QueueProfile& q, const std::function<double(double)>& rate,
                                 double dtau, const OlpParams& params,
                                 StepDiagnostics* diagnostics = nullptr);

}  // namespace bneck
