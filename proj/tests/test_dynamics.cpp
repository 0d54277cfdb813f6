#include <doctest.h>

#include <random>

#include "bneck/dynamics.hpp"
#include "bneck/errors.hpp"
#include "bneck/representations.hpp"
#include "instances.hpp"
#include "oracles.hpp"

using namespace bneck;

TEST_CASE("knot distance") {
  auto sol = fixtures::linear_solution();
  QueueProfile q(sol, {-1.2, -1.0, -0.8}, {0, 0.01, 0});
  CHECK(knot_distance(q, -1.0) == 0.0);
  CHECK(knot_distance(q, 0.0) == 0.0);
  CHECK(knot_distance(q, sol->start_time()) == 0.0);
  CHECK(knot_distance(q, -1.1) == doctest::Approx(0.1));
  CHECK(knot_distance(q, -1.05) == doctest::Approx(0.05));
  CHECK(knot_distance(q, -0.4) == doctest::Approx(0.4));
}

TEST_CASE("parameter validation") {
  OlpParams p;
  CHECK_NOTHROW(p.validate());
  p.floor_fraction = 1.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = {};
  p.grid_resolution = 8;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = {};
  p.step_scale = 0;
  p.smoothing = -1;
  try {
    p.validate();
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.violations().size() == 2);
  }
}

TEST_CASE("equilibrium is a fixed point") {
  auto sol = fixtures::linear_solution();
  auto eq = QueueProfile::equilibrium(sol);
  auto next = olp_step(eq, {});
  CHECK(distance(next, eq) <= 1e-12);
  CHECK(check_pressure_condition(eq, eq).ok());
  auto tr = iterate(eq, {}, 5);
  for (const auto& d : tr.days) CHECK(d.distance == 0.0);
  CHECK(tr.verdict == Verdict::non_decreasing);
}

TEST_CASE("one step matches an independent evaluation of the smoothed map") {
  auto sol = fixtures::linear_solution();
  OlpParams p;
  for (double eps : {1e-3, 1e-2}) {
    auto q = make_bump_perturbation(sol, -1.2, -0.8, eps, 3);
    StepDiagnostics diag;
    auto next = olp_step(q, p, &diag);
    double scale = p.step_scale * std::pow(0.5, diag.halvings);
    double ts = oracle::linear_example_tau_s(), te = ts + 2.0;
    double kinks[] = {ts, -1.2, -1.0, -0.8, 0.0, te};
    for (double t : next.knots()) {
      double D = 1e300;
      for (double k : kinks) D = std::min(D, std::abs(t - k));
      double e = t > -1.2 && t < -0.8 ? eps * (1 - std::abs(t + 1.0) / 0.2) : 0.0;
      double de = t > -1.2 && t < -1.0 ? eps / 0.2 : (t > -1.0 && t < -0.8 ? -eps / 0.2 : 0.0);
      double Q = oracle::linear_example_queue(t) + e;
      double raw = Q + (1 - std::exp(-p.smoothing * D)) * scale * de;
      double expect = std::max(p.floor_fraction * Q, raw);
      CHECK(next.at(t) == doctest::Approx(expect).epsilon(1e-9));
    }
    CHECK(next.at(-1.1) > q.at(-1.1));
    CHECK(next.at(-0.9) < q.at(-0.9));
    CHECK(next.at(-0.9) >= p.floor_fraction * q.at(-0.9));
    CHECK(next.at(-1.0) == q.at(-1.0));
    CHECK(audit_admissibility(next).ok());
    CHECK(check_pressure_condition(q, next).ok());
    CHECK(next.knots().size() >= p.grid_resolution);
  }
}

TEST_CASE("floor binds for aggressive steps and FIFO halving engages") {
  auto sol = fixtures::linear_solution();
  auto q = make_bump_perturbation(sol, -1.2, -0.8, 0.05, 3);
  OlpParams p;
  p.step_scale = 200.0;
  StepDiagnostics diag;
  auto next = olp_step(q, p, &diag);
  CHECK(diag.halvings > 0);
  CHECK(audit_admissibility(next).ok());
  CHECK(check_pressure_condition(q, next).ok());
  for (double t : next.knots()) CHECK(next.at(t) >= p.floor_fraction * q.at(t) - 1e-15);
}

TEST_CASE("inadmissible input cannot be repaired") {
  auto sol = fixtures::linear_solution();
  QueueProfile cliff(sol, {-1.0, -0.99, -0.5}, {0.0, 0.02, 0.0});
  CHECK_THROWS_AS(olp_step(cliff, {}), StepInfeasible);
}

TEST_CASE("pressure audit flags anti-pressure moves") {
  auto sol = fixtures::linear_solution();
  auto q = make_bump_perturbation(sol, -1.2, -0.8, 0.01, 3);
  // lower the queue on the rising flank, where C' > 0
  QueueProfile wrong(sol, {-1.2, -1.1, -1.0, -0.8}, {0.0, 0.001, 0.01, 0.0});
  auto r = check_pressure_condition(q, wrong);
  CHECK_FALSE(r.ok());
  for (const auto& v : r.violations) {
    CHECK(v.change < 0.0);
    CHECK(v.derivative > 0.0);
  }
}

TEST_CASE("distance never shrinks for admissible inputs") {
  auto sol = fixtures::linear_solution();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ut(-1.5, -0.05), uv(-0.02, 0.02);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<double> k;
    for (int i = 0; i < 8; ++i) k.push_back(ut(rng));
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
    std::vector<double> v(k.size());
    for (std::size_t i = 1; i + 1 < v.size(); ++i) v[i] = uv(rng);
    QueueProfile q(sol, k, v);
    if (!audit_admissibility(q).ok()) continue;
    auto tr = iterate(q, {}, 3);
    for (std::size_t d = 1; d < tr.days.size(); ++d)
      CHECK(tr.days[d].distance >= tr.days[d - 1].distance - 1e-12);
    CHECK(tr.verdict != Verdict::violated_pressure_condition);
  }
}

TEST_CASE("iterate keeps the bump away from equilibrium") {
  auto sol = fixtures::linear_solution();
  auto q0 = make_bump_perturbation(sol, -1.2, -0.8, 0.01, 3);
  auto tr = iterate(q0, {}, 200, 50);
  REQUIRE(tr.days.size() == 201);
  CHECK(tr.min_distance() >= 0.01 * (1 - 1e-9));
  for (std::size_t k = 1; k < tr.days.size(); ++k) {
    CHECK(tr.days[k].distance >= tr.days[k - 1].distance - 1e-12);
    CHECK(tr.days[k].pressure_violations == 0);
    CHECK(tr.days[k].max_slope < 1.0);
    CHECK(tr.days[k].min_queue > 0.0);
  }
  // snapshots at 0, 50, 100, 150, 200; distances recomputed from the profiles
  REQUIRE(tr.snapshots.size() == 5);
  for (const auto& [day, q] : tr.snapshots) {
    double brute = 0.0;
    for (double v : q.values()) brute = std::max(brute, std::abs(v));
    CHECK(brute == tr.days[day].distance);
    CHECK(distance(q, QueueProfile::equilibrium(sol)) == doctest::Approx(brute).epsilon(1e-14));
  }
  CHECK(tr.verdict == Verdict::diverging);

  auto one = iterate(q0, {}, 1);
  CHECK(one.days[1].distance >= one.days[0].distance);
  CHECK(one.snapshots.size() == 1);
}

TEST_CASE("grid refinement barely changes the long-run distance") {
  auto sol = fixtures::linear_solution();
  auto q0 = make_bump_perturbation(sol, -1.2, -0.8, 0.01, 3);
  OlpParams coarse, fine;
  fine.grid_resolution = 1024;
  double a = iterate(q0, coarse, 200).days.back().distance;
  double b = iterate(q0, fine, 200).days.back().distance;
  CHECK(std::abs(a - b) / a < 0.05);
}

TEST_CASE("iteration is deterministic") {
  auto sol = fixtures::linear_solution();
  auto q0 = make_bump_perturbation(sol, -1.2, -0.8, 0.01, 3);
  auto x = iterate(q0, {}, 20), y = iterate(q0, {}, 20);
  for (std::size_t k = 0; k < x.days.size(); ++k) {
    CHECK(x.days[k].distance == y.days[k].distance);
    CHECK(x.days[k].max_pressure == y.days[k].max_pressure);
  }
  CHECK(x.final_profile().values() == y.final_profile().values());
}

TEST_CASE("continuous-day Euler step") {
  auto sol = fixtures::linear_solution();
  auto eq = QueueProfile::equilibrium(sol);
  auto uniform = [](double) { return 1.0; };
  CHECK(distance(continuous_day_step(eq, uniform, 0.01, {}), eq) <= 1e-12);

  auto q = make_bump_perturbation(sol, -1.2, -0.8, 0.01, 3);
  double dtau = 0.002;
  auto next = continuous_day_step(q, uniform, dtau, {});
  double slope = 0.01 / 0.2;
  CHECK(next.at(-1.1) - q.at(-1.1) == doctest::Approx(dtau * slope).epsilon(1e-9));
  CHECK(next.at(-0.9) - q.at(-0.9) == doctest::Approx(-dtau * slope).epsilon(1e-9));
  CHECK(check_pressure_condition(q, next).ok());
  CHECK_THROWS_AS(continuous_day_step(q, uniform, 0.0, {}), DomainError);

  // Near the first maximal deviation the update is bounded by e' there, which
  // vanishes as the bump's knots refine.
  double prev = 1e300;
  for (std::size_t knots : {11u, 41u, 161u}) {
    auto smooth = make_bump_perturbation(sol, -1.2, -0.8, 0.01, knots);
    auto [tstar, estar] = first_max_deviation(smooth);
    CHECK(estar == doctest::Approx(0.01));
    OlpParams p;
    p.grid_resolution = 1024;
    auto s2 = continuous_day_step(smooth, uniform, dtau, p);
    CHECK(s2.at(tstar) == smooth.at(tstar));
    double move = 0.0;
    for (double t : s2.knots())
      if (std::abs(t - tstar) <= 0.002) move = std::max(move, std::abs(s2.at(t) - smooth.at(t)));
    auto e = [&](double t) { return smooth.perturbation_at(t); };
    double h = 1e-9;
    double fd = std::max(std::abs(e(tstar) - e(tstar - h)), std::abs(e(tstar + h) - e(tstar))) / h;
    CHECK(move <= dtau * fd * (1 + 1e-5) + 1e-15);
    CHECK(move < prev);
    prev = move;
  }
  CHECK(prev < 1e-5);

  // With the smoothing weight as rate field, the raw update matches olp_step.
  OlpParams p;
  auto rate = [&](double t) { return p.step_scale * (1 - std::exp(-p.smoothing * knot_distance(q, t))); };
  auto via_rate = continuous_day_step(q, rate, 1.0, p);
  auto via_olp = olp_step(q, p);
  CHECK(distance(via_rate, via_olp) <= 1e-12);
}

TEST_CASE("flux after a step") {
  auto sol = fixtures::linear_solution();
  auto q = make_bump_perturbation(sol, -1.2, -0.8, 0.01, 3);
  auto next = olp_step(q, {});
  CHECK(flux(q, q, -1.3) == 0.0);
  CHECK(flux(q, next, sol->start_time() - 0.5) == 0.0);
  double t = -1.1;
  double tau = t - q.at(t);
  double direct = ChoiceState(q).cumulative_departures(tau) - ChoiceState(next).cumulative_departures(tau);
  CHECK(flux(q, next, tau) == direct);
  CHECK(flux(q, next, tau) < 0.0);
}
