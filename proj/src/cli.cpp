#include "bneck/cli.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "bneck/csv.hpp"
#include "bneck/division_line.hpp"
#include "bneck/dynamics.hpp"
#include "bneck/errors.hpp"
#include "bneck/representations.hpp"

namespace bneck {

namespace {

using nlohmann::json;

struct Resolved {
  InstanceSpec spec;
  json run_defaults = json::object();
  double tol = 1e-9;
  std::size_t grid = 512;
  std::size_t days = 200;
  double epsilon = 0.01;
  double t1 = -1.2;
  double t2 = -0.8;
  std::size_t knots = 3;
  OlpParams olp;
  std::size_t snapshot_every = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> header;
};

template <class T, class U>
T pick(const std::optional<U>& flag, const json& defaults, const char* key, T fallback) {
  if (flag) return static_cast<T>(*flag);
  if (defaults.contains(key)) return defaults.at(key).get<T>();
  return fallback;
}

std::size_t count_of(long long v, const char* name) {
  if (v < 0) throw ValidationError(std::string(name) + " must be non-negative", {name});
  return static_cast<std::size_t>(v);
}

Resolved resolve(const RunConfig& c) {
  Resolved r;
  if (c.instance_path.empty()) {
    r.spec = linear_example();
  } else {
    std::ifstream in(c.instance_path);
    if (!in) throw ValidationError("cannot open instance file " + c.instance_path, {"unreadable file"});
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ValidationError(std::string("malformed instance: ") + e.what(), {"malformed instance"});
    }
    r.spec = instance_from_json(j);
    if (j.contains("run")) r.run_defaults = j.at("run");
  }
  const json& d = r.run_defaults;
  try {
    r.tol = pick<double>(c.tol, d, "tol", 1e-9);
    r.grid = count_of(pick<long long>(c.grid, d, "grid", 512LL), "grid");
    r.days = count_of(pick<long long>(c.days, d, "days", 200LL), "days");
    r.epsilon = pick<double>(c.epsilon, d, "epsilon", 0.01);
    r.t1 = pick<double>(c.t1, d, "t1", -1.2);
    r.t2 = pick<double>(c.t2, d, "t2", -0.8);
    r.knots = count_of(pick<long long>(c.knots, d, "knots", 3LL), "knots");
    r.olp.step_scale = pick<double>(c.a, d, "a", 0.5);
    r.olp.floor_fraction = pick<double>(c.b, d, "b", 0.5);
    r.olp.smoothing = pick<double>(c.alpha, d, "alpha", 100.0);
    r.olp.grid_resolution = r.grid;
    r.snapshot_every = count_of(pick<long long>(c.snapshot_every, d, "snapshot_every", 0LL),
                                "snapshot-every");
    r.seed = pick<std::uint64_t>(c.seed, d, "seed", std::uint64_t{0});
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed run defaults: ") + e.what(), {"malformed run block"});
  }
  r.olp.validate();
  if (!(r.tol > 0.0)) throw ValidationError("tol must be positive", {"tol"});

  std::ostringstream params;
  params << "params tol=" << format_double(r.tol) << " grid=" << r.grid << " days=" << r.days
         << " epsilon=" << format_double(r.epsilon) << " t1=" << format_double(r.t1)
         << " t2=" << format_double(r.t2) << " knots=" << r.knots
         << " a=" << format_double(r.olp.step_scale) << " b=" << format_double(r.olp.floor_fraction)
         << " alpha=" << format_double(r.olp.smoothing) << " snapshot_every=" << r.snapshot_every
         << " seed=" << r.seed;
  r.header = {"bneck " + c.command,
              "instance_fnv1a64=" + hex64(fnv1a64(instance_to_json(r.spec).dump())),
              params.str()};
  return r;
}

std::string path_in(const RunConfig& c, const std::string& name) {
  return (std::filesystem::path(c.output_dir) / name).string();
}

void write_json(const std::string& path, const std::vector<std::string>& header, json body) {
  body["header"] = header;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << body.dump(2) << '\n';
}

std::shared_ptr<const EquilibriumSolution> solve(const Resolved& r) {
  SolverOptions opt;
  opt.tol = r.tol;
  return std::make_shared<const EquilibriumSolution>(solve_split(r.spec, opt));
}

json solution_json(const EquilibriumSolution& sol) {
  return {{"n1", sol.split()},
          {"tau_s", sol.start_time()},
          {"tau_e", sol.end_time()},
          {"c_star", sol.queue_at(0.0)}};
}

void sample_profile_csv(const std::string& path, const Resolved& r, const QueueProfile& q) {
  CsvWriter w(path, r.header, {"t", "Q", "e", "n"});
  const auto& sol = q.base();
  for (double t : evaluation_grid(q, r.grid)) {
    w.cell(t).cell(q.at(t)).cell(q.perturbation_at(t)).cell(traveler_at(sol, t));
    w.end_row();
  }
}

int cmd_solve(const RunConfig& c, const Resolved& r, std::ostream& out) {
  auto sol = solve(r);
  auto ver = verify_equilibrium(*sol, 200, 2000);
  json j = solution_json(*sol);
  j["max_violation"] = ver.max_violation;
  write_json(path_in(c, "solution.json"), r.header, j);

  CsvWriter w(path_in(c, "equilibrium.csv"), r.header, {"t", "Q", "n"});
  double ts = sol->start_time(), te = sol->end_time();
  for (std::size_t i = 0; i < r.grid; ++i) {
    double t = i + 1 == r.grid ? te : ts + (te - ts) * static_cast<double>(i) / static_cast<double>(r.grid - 1);
    w.cell(t).cell(sol->queue_at(t)).cell(traveler_at(*sol, t));
    w.end_row();
  }
  out << j.dump() << '\n';
  return ExitCode::ok;
}

int cmd_verify(const RunConfig& c, const Resolved& r, std::ostream& out) {
  auto sol = solve(r);
  auto ver = verify_equilibrium(*sol, 200, 2000);
  json j = solution_json(*sol);
  j["max_violation"] = ver.max_violation;
  j["worst_traveler"] = ver.worst_traveler;
  j["worst_time"] = ver.worst_time;
  j["travelers"] = ver.travelers;
  j["candidates"] = ver.candidates;
  j["passed"] = ver.max_violation <= 1e-6;
  write_json(path_in(c, "verify.json"), r.header, j);
  out << j.dump() << '\n';
  return ExitCode::ok;
}

int cmd_perturb(const RunConfig& c, const Resolved& r, std::ostream& out) {
  auto sol = solve(r);
  auto q = make_bump_perturbation(sol, r.t1, r.t2, r.epsilon, r.knots);
  auto audit = audit_admissibility(q);
  json j = profile_to_json(q);
  j["solution"] = solution_json(*sol);
  j["distance"] = distance_to_equilibrium(q);
  j["admissible"] = audit.ok();
  write_json(path_in(c, "profile.json"), r.header, j);
  sample_profile_csv(path_in(c, "profile.csv"), r, q);
  out << json{{"distance", j["distance"]}, {"admissible", audit.ok()}, {"knots", q.knots().size()}}.dump()
      << '\n';
  return ExitCode::ok;
}

int cmd_simulate(const RunConfig& c, const Resolved& r, std::ostream& out) {
  auto sol = solve(r);
  auto q0 = make_bump_perturbation(sol, r.t1, r.t2, r.epsilon, r.knots);
  auto trace = iterate(q0, r.olp, r.days, r.snapshot_every);

  CsvWriter w(path_in(c, "trace.csv"), r.header,
              {"day", "distance", "max_pressure", "min_queue", "max_slope"});
  for (const auto& d : trace.days) {
    w.cell(d.day).cell(d.distance).cell(d.max_pressure).cell(d.min_queue).cell(d.max_slope);
    w.end_row();
  }
  if (r.snapshot_every > 0) {
    for (const auto& [day, q] : trace.snapshots) {
      char name[64];
      std::snprintf(name, sizeof name, "snapshot_%06zu.json", day);
      json j = profile_to_json(q);
      j["day"] = day;
      write_json(path_in(c, name), r.header, j);
    }
  }
  std::size_t violations = 0;
  int halvings = 0;
  for (const auto& d : trace.days) {
    violations += d.pressure_violations;
    halvings = std::max(halvings, d.halvings);
  }
  json s = {{"verdict", to_string(trace.verdict)},
            {"initial_distance", trace.days.front().distance},
            {"final_distance", trace.days.back().distance},
            {"min_distance", trace.min_distance()},
            {"days", r.days},
            {"pressure_violations", violations},
            {"max_halvings", halvings}};
  write_json(path_in(c, "simulate.json"), r.header, s);
  out << s.dump() << '\n';
  return ExitCode::ok;
}

int cmd_export(const RunConfig& c, const Resolved& r, std::ostream& out) {
  auto sol = solve(r);
  QueueProfile q = (c.epsilon || r.run_defaults.contains("epsilon"))
                       ? make_bump_perturbation(sol, r.t1, r.t2, r.epsilon, r.knots)
                       : QueueProfile::equilibrium(sol);
  ChoiceState st(q);
  {
    CsvWriter w(path_in(c, "arrivals.csv"), r.header, {"t", "Q", "n", "nu_A", "nu_D", "D"});
    for (double t : evaluation_grid(q, r.grid)) {
      w.cell(t).cell(q.at(t)).cell(st.traveler_at(t)).cell(st.cumulative_arrivals(t));
      w.cell(st.cumulative_departures(t)).cell(st.departure_of_arrival(t));
      w.end_row();
    }
  }
  {
    CsvWriter w(path_in(c, "travelers.csv"), r.header, {"n", "t", "tau", "beta", "gamma"});
    double N = r.spec.n_total;
    for (std::size_t i = 0; i < r.grid; ++i) {
      double n = i + 1 == r.grid ? N : N * static_cast<double>(i) / static_cast<double>(r.grid - 1);
      w.cell(n).cell(st.arrival_time(n)).cell(st.departure_time_of(n));
      w.cell(beta_at(r.spec, n)).cell(gamma_at(r.spec, n));
      w.end_row();
    }
  }
  out << json{{"rows", r.grid}, {"perturbed", distance_to_equilibrium(q) > 0.0}}.dump() << '\n';
  return ExitCode::ok;
}

int cmd_division_line(const RunConfig& c, const Resolved& r, std::ostream& out) {
  auto sol = solve(r);
  DivisionLine line(sol);
  {
    CsvWriter w(path_in(c, "division_line.csv"), r.header,
                {"beta0", "gamma0", "section", "early_at", "late_at"});
    for (const auto& p : line.sample(r.grid)) {
      w.cell(p.beta0).cell(p.gamma0).cell(to_string(p.section)).cell(p.early_at).cell(p.late_at);
      w.end_row();
    }
  }
  std::mt19937_64 rng(r.seed);
  std::uniform_real_distribution<double> ub(1e-3, 0.999), ug(1e-3, 4.0);
  std::size_t disagreements = 0, samples = 500;
  CsvWriter w(path_in(c, "classification.csv"), r.header,
              {"beta0", "gamma0", "case", "early_at", "late_at", "grid_argmin", "agrees"});
  for (std::size_t i = 0; i < samples; ++i) {
    double b0 = ub(rng), g0 = ug(rng);
    auto cl = classify_traveler(*sol, b0, g0);
    if (!cl.agrees) ++disagreements;
    w.cell(b0).cell(g0).cell(to_string(cl.which)).cell(cl.early_at).cell(cl.late_at);
    w.cell(cl.grid_argmin).cell(cl.agrees ? "1" : "0");
    w.end_row();
  }
  json s = {{"junction_beta", line.junction_beta()},
            {"junction_time", line.junction_time()},
            {"end_beta", line.end_beta()},
            {"c_star", line.on_time_cost()},
            {"samples", samples},
            {"disagreements", disagreements}};
  out << s.dump() << '\n';
  return ExitCode::ok;
}

void report(std::ostream& err, const char* kind, const std::string& message,
            const std::vector<std::string>& details = {}) {
  json j = {{"error", kind}, {"message", message}};
  if (!details.empty()) j["violations"] = details;
  err << j.dump() << '\n';
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    Resolved r = resolve(config);
    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec) throw ValidationError("cannot create output directory " + config.output_dir, {"output_dir"});

    const std::string& cmd = config.command;
    if (cmd == "solve") return cmd_solve(config, r, out);
    if (cmd == "verify") return cmd_verify(config, r, out);
    if (cmd == "perturb") return cmd_perturb(config, r, out);
    if (cmd == "simulate") return cmd_simulate(config, r, out);
    if (cmd == "export") return cmd_export(config, r, out);
    if (cmd == "division-line") return cmd_division_line(config, r, out);
    throw ValidationError("unknown command '" + cmd + "'", {"command"});
  } catch (const ValidationError& e) {
    report(err, "validation", e.what(), e.violations());
    return ExitCode::validation_failure;
  } catch (const DomainError& e) {
    report(err, "validation", e.what());
    return ExitCode::validation_failure;
  } catch (const SolverError& e) {
    report(err, "solver", e.what());
    return ExitCode::solver_failure;
  } catch (const InfeasibleError& e) {
    report(err, "infeasible", e.what());
    return ExitCode::dynamics_infeasible;
  } catch (const StepInfeasible& e) {
    report(err, "infeasible", e.what());
    return ExitCode::dynamics_infeasible;
  } catch (const std::exception& e) {
    report(err, "io", e.what());
    return ExitCode::validation_failure;
  }
}

}  // namespace bneck
