#include "bneck/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bneck/errors.hpp"

namespace bneck {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Index of the segment [knots[i], knots[i+1]] holding x (clamped to the ends).
std::size_t segment_of(const std::vector<double>& knots, double x) {
  auto it = std::upper_bound(knots.begin(), knots.end(), x);
  std::size_t i = it == knots.begin() ? 0 : static_cast<std::size_t>(it - knots.begin()) - 1;
  return std::min(i, knots.size() - 2);
}

double pl_eval(const std::vector<double>& k, const std::vector<double>& v, double x) {
  std::size_t i = segment_of(k, x);
  double w = (x - k[i]) / (k[i + 1] - k[i]);
  return v[i] + w * (v[i + 1] - v[i]);
}

// Integral of the interpolant from k.front() to x (exact trapezoids).
double pl_primitive(const std::vector<double>& k, const std::vector<double>& v, double x) {
  double acc = 0.0;
  std::size_t i = 0;
  for (; i + 1 < k.size() && k[i + 1] <= x; ++i) acc += 0.5 * (v[i] + v[i + 1]) * (k[i + 1] - k[i]);
  if (i + 1 < k.size() && x > k[i]) acc += 0.5 * (v[i] + pl_eval(k, v, x)) * (x - k[i]);
  return acc;
}

}  // namespace

std::string to_string(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::linear: return "linear";
    case PenaltyKind::piecewise_linear: return "piecewise_linear";
    case PenaltyKind::tabulated: return "tabulated";
    case PenaltyKind::custom: return "custom";
  }
  return "unknown";
}

PenaltyFunction PenaltyFunction::linear(double intercept, double slope) {
  return PenaltyFunction(Linear{intercept, slope});
}

PenaltyFunction PenaltyFunction::piecewise_linear(std::vector<double> knots,
                                                  std::vector<double> values) {
  if (knots.size() < 2 || knots.size() != values.size())
    throw DomainError("piecewise-linear penalty needs >= 2 knots with matching values");
  for (std::size_t i = 1; i < knots.size(); ++i)
    if (!(knots[i] > knots[i - 1])) throw DomainError("penalty knots must be strictly increasing");
  return PenaltyFunction(Piecewise{std::move(knots), std::move(values)});
}

PenaltyFunction PenaltyFunction::custom(std::function<double(double)> fn,
                                        std::vector<double> breakpoints) {
  std::sort(breakpoints.begin(), breakpoints.end());
  return PenaltyFunction(Custom{std::move(fn), std::move(breakpoints)});
}

double PenaltyFunction::operator()(double n) const {
  return std::visit(overloaded{
                        [n](const Linear& l) { return l.intercept + l.slope * n; },
                        [n](const Piecewise& p) { return pl_eval(p.knots, p.values, n); },
                        [n](const Custom& c) { return c.fn(n); },
                    },
                    rep_);
}

double PenaltyFunction::integral(double lo, double hi) const {
  if (lo == hi) return 0.0;
  if (lo > hi) return -integral(hi, lo);
  return std::visit(
      overloaded{
          [&](const Linear& l) {
            return l.intercept * (hi - lo) + 0.5 * l.slope * (hi * hi - lo * lo);
          },
          [&](const Piecewise& p) {
            return pl_primitive(p.knots, p.values, hi) - pl_primitive(p.knots, p.values, lo);
          },
          [&](const Custom& c) {
            // Split at declared kinks so each piece is smooth.
            double acc = 0.0, a = lo;
            for (double b : c.breakpoints) {
              if (b <= a || b >= hi) continue;
              acc += adaptive_integral(c.fn, a, b);
              a = b;
            }
            return acc + adaptive_integral(c.fn, a, hi);
          },
      },
      rep_);
}

bool PenaltyFunction::has_closed_form() const noexcept {
  return !std::holds_alternative<Custom>(rep_);
}

bool PenaltyFunction::is_linear() const noexcept { return std::holds_alternative<Linear>(rep_); }

double PenaltyFunction::intercept() const {
  if (auto* l = std::get_if<Linear>(&rep_)) return l->intercept;
  throw DomainError("penalty is not linear");
}

double PenaltyFunction::slope() const {
  if (auto* l = std::get_if<Linear>(&rep_)) return l->slope;
  throw DomainError("penalty is not linear");
}

std::span<const double> PenaltyFunction::knots() const noexcept {
  if (auto* p = std::get_if<Piecewise>(&rep_)) return p->knots;
  if (auto* c = std::get_if<Custom>(&rep_)) return c->breakpoints;
  return {};
}

std::span<const double> PenaltyFunction::knot_values() const noexcept {
  if (auto* p = std::get_if<Piecewise>(&rep_)) return p->values;
  return {};
}

double adaptive_integral(const std::function<double(double)>& f, double lo, double hi,
                         double rel_tol) {
  if (lo == hi) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 30, rel_tol);
}

PenaltyProfile PenaltyProfile::linear(double beta_intercept, double beta_slope,
                                      double gamma_intercept, double gamma_slope) {
  return PenaltyProfile{PenaltyKind::linear, PenaltyFunction::linear(beta_intercept, beta_slope),
                        PenaltyFunction::linear(gamma_intercept, gamma_slope)};
}

InstanceSpec linear_example() {
  return InstanceSpec{600.0, 300.0, PenaltyProfile::linear(0.01, 0.0015, 3.0, -0.003)};
}

static void check_index(const InstanceSpec& spec, double n) {
  if (!(n >= 0.0 && n <= spec.n_total)) {
    std::ostringstream os;
    os << "traveler index " << n << " outside [0, " << spec.n_total << "]";
    throw DomainError(os.str());
  }
}

static void check_bounds(const InstanceSpec& spec, double lo, double hi) {
  check_index(spec, lo);
  check_index(spec, hi);
  if (lo > hi) throw DomainError("integration bounds inverted");
}

double beta_at(const InstanceSpec& spec, double n) {
  check_index(spec, n);
  return spec.penalties.beta(n);
}

double gamma_at(const InstanceSpec& spec, double n) {
  check_index(spec, n);
  return spec.penalties.gamma(n);
}

double integrate_beta(const InstanceSpec& spec, double n_lo, double n_hi) {
  check_bounds(spec, n_lo, n_hi);
  return spec.penalties.beta.integral(n_lo, n_hi);
}

double integrate_gamma(const InstanceSpec& spec, double n_lo, double n_hi) {
  check_bounds(spec, n_lo, n_hi);
  return spec.penalties.gamma.integral(n_lo, n_hi);
}

ValidationReport validate_instance(const InstanceSpec& spec, const ValidationOptions& options) {
  ValidationReport r;
  if (!(spec.n_total > 0.0)) r.violations.emplace_back("n_total must be positive");
  if (!(spec.capacity > 0.0)) r.violations.emplace_back("capacity must be positive");
  if (!r.ok()) return r;

  std::vector<double> pts;
  std::size_t m = std::max<std::size_t>(options.samples, 2);
  for (std::size_t i = 0; i < m; ++i)
    pts.push_back(spec.n_total * static_cast<double>(i) / static_cast<double>(m - 1));
  for (const auto* f : {&spec.penalties.beta, &spec.penalties.gamma})
    for (double k : f->knots())
      if (k >= 0.0 && k <= spec.n_total) pts.push_back(k);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  bool beta_range = true, gamma_pos = true, beta_mono = true, gamma_mono = true, finite = true;
  double pb = 0.0, pg = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double b = spec.penalties.beta(pts[i]);
    double g = spec.penalties.gamma(pts[i]);
    if (!std::isfinite(b) || !std::isfinite(g)) finite = false;
    if (!(b > 0.0 && b < 1.0)) beta_range = false;
    if (!(g > 0.0)) gamma_pos = false;
    if (i > 0) {
      if (options.strict_monotonicity ? !(b > pb) : (b < pb)) beta_mono = false;
      if (options.strict_monotonicity ? !(g < pg) : (g > pg)) gamma_mono = false;
    }
    pb = b;
    pg = g;
  }
  if (!finite) r.violations.emplace_back("penalty not finite");
  if (!beta_range) r.violations.emplace_back("beta range not within (0,1)");
  if (!gamma_pos) r.violations.emplace_back("gamma not positive");
  if (!beta_mono)
    r.violations.emplace_back(options.strict_monotonicity ? "beta not strictly increasing"
                                                          : "beta not increasing");
  if (!gamma_mono)
    r.violations.emplace_back(options.strict_monotonicity ? "gamma not strictly decreasing"
                                                          : "gamma not decreasing");
  return r;
}

void require_valid(const InstanceSpec& spec, const ValidationOptions& options) {
  auto r = validate_instance(spec, options);
  if (r.ok()) return;
  std::string msg = "invalid instance:";
  for (const auto& v : r.violations) msg += " " + v + ";";
  throw ValidationError(msg, r.violations);
}

namespace {

using nlohmann::json;

PenaltyFunction penalty_from_json(const json& j, PenaltyKind kind, double n_total) {
  switch (kind) {
    case PenaltyKind::linear:
      return PenaltyFunction::linear(j.at("intercept").get<double>(), j.at("slope").get<double>());
    case PenaltyKind::piecewise_linear:
      return PenaltyFunction::piecewise_linear(j.at("knots").get<std::vector<double>>(),
                                               j.at("values").get<std::vector<double>>());
    case PenaltyKind::tabulated: {
      // Inverse-CDF table: probability levels p in [0,1] mapped to n = pN.
      auto p = j.at("probabilities").get<std::vector<double>>();
      for (double& x : p) x *= n_total;
      return PenaltyFunction::piecewise_linear(std::move(p),
                                               j.at("values").get<std::vector<double>>());
    }
    case PenaltyKind::custom: break;
  }
  throw ValidationError("custom penalties cannot be read from JSON", {"unsupported kind"});
}

json penalty_to_json(const PenaltyFunction& f, PenaltyKind kind, double n_total) {
  switch (kind) {
    case PenaltyKind::linear: return {{"intercept", f.intercept()}, {"slope", f.slope()}};
    case PenaltyKind::piecewise_linear:
      return {{"knots", std::vector<double>(f.knots().begin(), f.knots().end())},
              {"values", std::vector<double>(f.knot_values().begin(), f.knot_values().end())}};
    case PenaltyKind::tabulated: {
      std::vector<double> p(f.knots().begin(), f.knots().end());
      for (double& x : p) x /= n_total;
      return {{"probabilities", p},
              {"values", std::vector<double>(f.knot_values().begin(), f.knot_values().end())}};
    }
    case PenaltyKind::custom: break;
  }
  throw ValidationError("custom penalties cannot be written to JSON", {"unsupported kind"});
}

}  // namespace

InstanceSpec instance_from_json(const json& j) {
  try {
    InstanceSpec spec;
    spec.n_total = j.at("n_total").get<double>();
    spec.capacity = j.at("capacity").get<double>();
    const auto& p = j.at("penalties");
    auto kind_s = p.at("kind").get<std::string>();
    PenaltyKind kind;
    if (kind_s == "linear")
      kind = PenaltyKind::linear;
    else if (kind_s == "piecewise_linear")
      kind = PenaltyKind::piecewise_linear;
    else if (kind_s == "tabulated")
      kind = PenaltyKind::tabulated;
    else
      throw ValidationError("unknown penalty kind '" + kind_s + "'", {"unknown penalty kind"});
    spec.penalties.kind = kind;
    spec.penalties.beta = penalty_from_json(p.at("beta"), kind, spec.n_total);
    spec.penalties.gamma = penalty_from_json(p.at("gamma"), kind, spec.n_total);
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed instance: ") + e.what(), {"malformed instance"});
  } catch (const DomainError& e) {
    throw ValidationError(std::string("malformed instance: ") + e.what(), {e.what()});
  }
}

json instance_to_json(const InstanceSpec& spec) {
  const auto& p = spec.penalties;
  return {{"n_total", spec.n_total},
          {"capacity", spec.capacity},
          {"penalties",
           {{"kind", to_string(p.kind)},
            {"beta", penalty_to_json(p.beta, p.kind, spec.n_total)},
            {"gamma", penalty_to_json(p.gamma, p.kind, spec.n_total)}}}};
}

InstanceSpec load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open instance file " + path, {"unreadable file"});
  json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed instance: ") + e.what(), {"malformed instance"});
  }
  return instance_from_json(j);
}

}  // namespace bneck
