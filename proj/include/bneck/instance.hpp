#pragma once

#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace bneck {

enum class PenaltyKind { linear, piecewise_linear, tabulated, custom };

std::string to_string(PenaltyKind kind);

// A continuous penalty ratio as a function of the traveler index n.
//
// Linear and piecewise-linear representations integrate in closed form.
// Custom callables fall back to adaptive Gauss-Kronrod quadrature.
class PenaltyFunction {
 public:
  static PenaltyFunction linear(double intercept, double slope);
  static PenaltyFunction piecewise_linear(std::vector<double> knots, std::vector<double> values);
  static PenaltyFunction custom(std::function<double(double)> fn,
                                std::vector<double> breakpoints = {});

  double operator()(double n) const;

  // Integral over [lo, hi]; lo > hi yields the negated integral.
  double integral(double lo, double hi) const;

  bool has_closed_form() const noexcept;
  bool is_linear() const noexcept;

  // Linear coefficients; throws DomainError for other representations.
  double intercept() const;
  double slope() const;

  // Knot abscissae (piecewise-linear) or declared breakpoints (custom).
  std::span<const double> knots() const noexcept;
  std::span<const double> knot_values() const noexcept;

 private:
  struct Linear {
    double intercept;
    double slope;
  };
  struct Piecewise {
    std::vector<double> knots;
    std::vector<double> values;
  };
  struct Custom {
    std::function<double(double)> fn;
    std::vector<double> breakpoints;
  };

  explicit PenaltyFunction(std::variant<Linear, Piecewise, Custom> rep) : rep_(std::move(rep)) {}

  std::variant<Linear, Piecewise, Custom> rep_;
};

// Adaptive quadrature with relative tolerance `rel_tol`.
double adaptive_integral(const std::function<double(double)>& f, double lo, double hi,
                         double rel_tol = 1e-10);

// Early penalty beta(n) (increasing) and late penalty gamma(n) (decreasing).
struct PenaltyProfile {
  PenaltyKind kind = PenaltyKind::linear;
  PenaltyFunction beta = PenaltyFunction::linear(0.5, 0.0);
  PenaltyFunction gamma = PenaltyFunction::linear(2.0, 0.0);

  static PenaltyProfile linear(double beta_intercept, double beta_slope, double gamma_intercept,
                               double gamma_slope);
};

struct InstanceSpec {
  double n_total = 0.0;   // traveler mass N
  double capacity = 0.0;  // discharge rate s
  PenaltyProfile penalties;

  // Half-width N/s of the horizon [-N/s, N/s].
  double horizon() const { return n_total / capacity; }
};

// The worked example: N = 600, s = 300, beta = 0.01 + 0.0015 n, gamma = 3 - 0.003 n.
InstanceSpec linear_example();

double beta_at(const InstanceSpec& spec, double n);
double gamma_at(const InstanceSpec& spec, double n);
double integrate_beta(const InstanceSpec& spec, double n_lo, double n_hi);
double integrate_gamma(const InstanceSpec& spec, double n_lo, double n_hi);

struct ValidationOptions {
  // The homogeneous (Vickrey) limit has constant penalties; tests relax this.
  bool strict_monotonicity = true;
  std::size_t samples = 1000;
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const noexcept { return violations.empty(); }
};

ValidationReport validate_instance(const InstanceSpec& spec, const ValidationOptions& options = {});

// Throws ValidationError carrying every violation.
void require_valid(const InstanceSpec& spec, const ValidationOptions& options = {});

InstanceSpec instance_from_json(const nlohmann::json& j);
nlohmann::json instance_to_json(const InstanceSpec& spec);
InstanceSpec load_instance(const std::string& path);

}  // namespace bneck
