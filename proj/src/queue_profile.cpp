#include "bneck/queue_profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bneck/errors.hpp"

namespace bneck {

QueueProfile::QueueProfile(std::shared_ptr<const EquilibriumSolution> base,
                           std::vector<double> knots, std::vector<double> values)
    : base_(std::move(base)), knots_(std::move(knots)), values_(std::move(values)) {
  if (!base_) throw DomainError("queue profile needs an equilibrium base");
  if (knots_.size() != values_.size()) throw DomainError("knots and values differ in length");
  if (knots_.size() == 1) throw DomainError("a perturbation needs zero or >= 2 knots");
  for (std::size_t i = 1; i < knots_.size(); ++i)
    if (!(knots_[i] > knots_[i - 1])) throw DomainError("knots must be strictly increasing");
  if (!knots_.empty()) {
    if (knots_.front() < base_->start_time() || knots_.back() > base_->end_time())
      throw DomainError("knots outside [tau_s, tau_e]");
    if (values_.front() != 0.0 || values_.back() != 0.0)
      throw DomainError("perturbation must vanish at its end knots");
  }
}

QueueProfile QueueProfile::equilibrium(std::shared_ptr<const EquilibriumSolution> base) {
  return QueueProfile(std::move(base));
}

double QueueProfile::perturbation_at(double t) const {
  if (knots_.empty() || t <= knots_.front() || t >= knots_.back()) return 0.0;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  std::size_t i = static_cast<std::size_t>(it - knots_.begin()) - 1;
  double w = (t - knots_[i]) / (knots_[i + 1] - knots_[i]);
  return values_[i] + w * (values_[i + 1] - values_[i]);
}

double QueueProfile::at(double t) const {
  if (!(t > base_->start_time() && t < base_->end_time())) return 0.0;
  return base_->queue_at(t) + perturbation_at(t);
}

std::vector<double> QueueProfile::slopes() const {
  std::vector<double> s;
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i)
    s.push_back((values_[i + 1] - values_[i]) / (knots_[i + 1] - knots_[i]));
  return s;
}

double QueueProfile::perturbation_slope(double t, Side side) const {
  if (knots_.empty() || t < knots_.front() || t > knots_.back()) return 0.0;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  std::size_t i = static_cast<std::size_t>(it - knots_.begin()) - 1;  // knots_[i] <= t
  auto seg = [&](std::size_t j) {
    if (j + 1 >= knots_.size()) return 0.0;
    return (values_[j + 1] - values_[j]) / (knots_[j + 1] - knots_[j]);
  };
  if (t != knots_[i]) return seg(i);
  double right = seg(i);
  double left = i == 0 ? 0.0 : seg(i - 1);
  switch (side) {
    case Side::left: return left;
    case Side::right: return right;
    case Side::two_sided: break;
  }
  return 0.5 * (left + right);
}

double QueueProfile::slope(double t, Side side) const {
  return base_->queue_slope(t, side) + perturbation_slope(t, side);
}

bool QueueProfile::is_knot(double t) const {
  return std::binary_search(knots_.begin(), knots_.end(), t);
}

std::vector<double> QueueProfile::breakpoints() const {
  std::vector<double> b = knots_;
  b.push_back(base_->start_time());
  b.push_back(0.0);
  b.push_back(base_->end_time());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

AdmissibilityReport audit_admissibility(const QueueProfile& q, std::size_t grid) {
  AdmissibilityReport r;
  const auto& sol = q.base();
  double ts = sol.start_time(), te = sol.end_time();
  if (q.at(ts) != 0.0 || q.at(te) != 0.0) r.violations.emplace_back("queue not empty at support ends");

  std::vector<double> pts;
  for (std::size_t i = 1; i < grid; ++i)
    pts.push_back(ts + (te - ts) * static_cast<double>(i) / static_cast<double>(grid));
  for (double k : q.knots())
    if (k > ts && k < te) pts.push_back(k);
  r.min_interior_queue = std::numeric_limits<double>::infinity();
  for (double t : pts) r.min_interior_queue = std::min(r.min_interior_queue, q.at(t));
  if (!(r.min_interior_queue > 0.0)) r.violations.emplace_back("queue not positive on the interior");

  auto b = q.breakpoints();
  r.max_slope = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    double mid = 0.5 * (b[i] + b[i + 1]);
    double s = q.perturbation_slope(mid) + sol.max_queue_slope(b[i], b[i + 1]);
    r.max_slope = std::max(r.max_slope, s);
  }
  if (!(r.max_slope < 1.0)) r.violations.emplace_back("FIFO slope bound violated");
  return r;
}

QueueProfile make_bump_perturbation(std::shared_ptr<const EquilibriumSolution> sol, double t1,
                                    double t2, double epsilon, std::size_t knots) {
  if (!sol) throw DomainError("missing equilibrium");
  if (!(sol->start_time() < t1 && t1 < t2 && t2 < 0.0))
    throw DomainError("bump interval must lie inside (tau_s, 0)");
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (knots < 3) throw DomainError("a bump needs >= 3 knots");

  std::vector<double> ts(knots), shape(knots);
  for (std::size_t i = 0; i < knots; ++i) {
    double x = static_cast<double>(i) / static_cast<double>(knots - 1);
    ts[i] = t1 + (t2 - t1) * x;
    double s = std::sin(std::numbers::pi * x);
    shape[i] = s * s;
  }
  ts.back() = t2;
  shape.front() = shape.back() = 0.0;
  double peak = *std::max_element(shape.begin(), shape.end());
  double d_shape = 0.0;
  for (std::size_t i = 0; i < knots; ++i) {
    shape[i] /= peak;
    if (i > 0) d_shape = std::max(d_shape, std::abs(shape[i] - shape[i - 1]) / (ts[i] - ts[i - 1]));
  }

  double d_hat = sol->max_queue_slope(t1, t2);
  if (!(d_hat < 1.0)) throw InfeasibleError("equilibrium has no FIFO headroom on the interval");
  double height = std::min(epsilon, 0.99 * (1.0 - d_hat) / d_shape);
  for (double& v : shape) v *= height;
  return QueueProfile(std::move(sol), std::move(ts), std::move(shape));
}

double distance(const QueueProfile& q1, const QueueProfile& q2) {
  const auto& a = q1.base();
  const auto& b = q2.base();
  if (&a != &b && (a.split() != b.split() || a.start_time() != b.start_time() ||
                   a.end_time() != b.end_time()))
    throw DomainError("profiles have different equilibrium bases");
  std::vector<double> pts = q1.knots();
  pts.insert(pts.end(), q2.knots().begin(), q2.knots().end());
  double d = 0.0;
  for (double t : pts) d = std::max(d, std::abs(q1.perturbation_at(t) - q2.perturbation_at(t)));
  return d;
}

double distance_to_equilibrium(const QueueProfile& q) {
  double d = 0.0;
  for (double v : q.values()) d = std::max(d, std::abs(v));
  return d;
}

std::pair<double, double> first_max_deviation(const QueueProfile& q) {
  double m = distance_to_equilibrium(q);
  if (m == 0.0) throw DomainError("first maximal deviation undefined for the equilibrium");
  const auto& v = q.values();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) >= m * (1.0 - 1e-12)) return {q.knots()[i], v[i]};
  return {q.knots().front(), v.front()};  // unreachable
}

nlohmann::json profile_to_json(const QueueProfile& q) {
  return {{"knots", q.knots()}, {"values", q.values()}};
}

QueueProfile profile_from_json(std::shared_ptr<const EquilibriumSolution> base,
                               const nlohmann::json& j) {
  return QueueProfile(std::move(base), j.at("knots").get<std::vector<double>>(),
                      j.at("values").get<std::vector<double>>());
}

}  // namespace bneck
