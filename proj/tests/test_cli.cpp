#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bneck/cli.hpp"

using namespace bneck;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("bneck_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

struct Result {
  int code;
  std::string out, err;
};

Result go(RunConfig c) {
  std::ostringstream o, e;
  int code = run(c, o, e);
  return {code, o.str(), e.str()};
}

}  // namespace

TEST_CASE("solve writes solution json and samples") {
  auto dir = scratch("solve");
  RunConfig c;
  c.command = "solve";
  c.output_dir = dir.string();
  auto r = go(c);
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(slurp(dir / "solution.json"));
  CHECK(j["tau_s"].get<double>() == doctest::Approx(-1.5827).epsilon(1e-3));
  CHECK(j["n1"].get<double>() == doctest::Approx(474.8).epsilon(1e-3));
  CHECK(j["max_violation"].get<double>() <= 1e-6);
  CHECK(j["header"].size() == 3);
  auto rows = csv_rows(dir / "equilibrium.csv");
  CHECK(rows[0] == std::vector<std::string>{"t", "Q", "n"});
  CHECK(rows.size() == 513);
  auto text = slurp(dir / "equilibrium.csv");
  CHECK(text.rfind("# bneck solve\n# instance_fnv1a64=", 0) == 0);
  CHECK(text.find('\r') == std::string::npos);
}

TEST_CASE("verify reports the equilibrium violation") {
  auto dir = scratch("verify");
  RunConfig c;
  c.command = "verify";
  c.output_dir = dir.string();
  REQUIRE(go(c).code == 0);
  auto j = nlohmann::json::parse(slurp(dir / "verify.json"));
  CHECK(j["max_violation"].get<double>() <= 1e-6);
  CHECK(j["passed"] == true);
}

TEST_CASE("simulate trace keeps its distance") {
  auto dir = scratch("simulate");
  RunConfig c;
  c.command = "simulate";
  c.output_dir = dir.string();
  c.epsilon = 0.01;
  c.days = 200;
  c.snapshot_every = 100;
  REQUIRE(go(c).code == 0);
  auto rows = csv_rows(dir / "trace.csv");
  REQUIRE(rows.size() == 202);
  CHECK(rows[0] == std::vector<std::string>{"day", "distance", "max_pressure", "min_queue", "max_slope"});
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][1]) >= 0.01 * (1 - 1e-9));
  CHECK(fs::exists(dir / "snapshot_000000.json"));
  CHECK(fs::exists(dir / "snapshot_000100.json"));
  CHECK(fs::exists(dir / "snapshot_000200.json"));
  auto snap = nlohmann::json::parse(slurp(dir / "snapshot_000200.json"));
  CHECK(snap.contains("knots"));
  CHECK(snap["day"] == 200);
}

TEST_CASE("perturb, export and division-line emit their tables") {
  auto dir = scratch("misc");
  RunConfig c;
  c.output_dir = dir.string();
  c.grid = 64;
  for (const char* cmd : {"perturb", "export", "division-line"}) {
    c.command = cmd;
    auto r = go(c);
    CHECK_MESSAGE(r.code == 0, cmd << ": " << r.err);
  }
  CHECK(csv_rows(dir / "profile.csv")[0] == std::vector<std::string>{"t", "Q", "e", "n"});
  CHECK(csv_rows(dir / "arrivals.csv")[0] ==
        std::vector<std::string>{"t", "Q", "n", "nu_A", "nu_D", "D"});
  CHECK(csv_rows(dir / "travelers.csv")[0] ==
        std::vector<std::string>{"n", "t", "tau", "beta", "gamma"});
  auto line = csv_rows(dir / "division_line.csv");
  CHECK(line[0] == std::vector<std::string>{"beta0", "gamma0", "section", "early_at", "late_at"});
  CHECK(line.size() == 65);
  auto cls = csv_rows(dir / "classification.csv");
  CHECK(cls.size() == 501);
  for (std::size_t i = 1; i < cls.size(); ++i) CHECK(cls[i].back() == "1");
}

TEST_CASE("flags override instance defaults") {
  auto dir = scratch("precedence");
  std::ofstream(dir / "inst.json") << R"({"n_total":600,"capacity":300,
    "penalties":{"kind":"linear","beta":{"intercept":0.01,"slope":0.0015},
                 "gamma":{"intercept":3,"slope":-0.003}},
    "run":{"days":3,"epsilon":0.002,"grid":32}})";
  RunConfig c;
  c.command = "simulate";
  c.instance_path = (dir / "inst.json").string();
  c.output_dir = dir.string();
  c.days = 5;
  REQUIRE(go(c).code == 0);
  auto rows = csv_rows(dir / "trace.csv");
  CHECK(rows.size() == 7);  // header + days 0..5
  CHECK(std::stod(rows[1][1]) == doctest::Approx(0.002));
  auto text = slurp(dir / "trace.csv");
  CHECK(text.find("grid=32 days=5 epsilon=0.002") != std::string::npos);
}

TEST_CASE("exit codes and error json") {
  auto dir = scratch("errors");
  RunConfig c;
  c.output_dir = dir.string();
  c.command = "solve";

  std::ofstream(dir / "bad.json") << R"({"n_total":600,"capacity":300,
    "penalties":{"kind":"linear","beta":{"intercept":1.5,"slope":0},
                 "gamma":{"intercept":3,"slope":-0.003}}})";
  c.instance_path = (dir / "bad.json").string();
  auto r = go(c);
  CHECK(r.code == ExitCode::validation_failure);
  auto e = nlohmann::json::parse(r.err);
  CHECK(e["error"] == "validation");
  CHECK(e["violations"][0] == "beta range not within (0,1)");

  c.instance_path = (dir / "missing.json").string();
  CHECK(go(c).code == ExitCode::validation_failure);

  c.instance_path.clear();
  c.b = 1.5;
  CHECK(go(c).code == ExitCode::validation_failure);
  c.b.reset();

  c.command = "frobnicate";
  CHECK(go(c).code == ExitCode::validation_failure);

  c.command = "solve";
  c.tol = 1e-300;
  r = go(c);
  CHECK(r.code == ExitCode::solver_failure);
  CHECK(nlohmann::json::parse(r.err)["error"] == "solver");
  c.tol.reset();

  c.command = "simulate";
  c.a = 1e30;
  c.days = 2;
  r = go(c);
  CHECK(r.code == ExitCode::dynamics_infeasible);
  CHECK(nlohmann::json::parse(r.err)["error"] == "infeasible");
}

TEST_CASE("reruns are byte identical") {
  for (const char* cmd : {"solve", "simulate", "division-line", "export"}) {
    auto d1 = scratch(std::string("det1_") + cmd), d2 = scratch(std::string("det2_") + cmd);
    RunConfig c;
    c.command = cmd;
    c.days = 20;
    c.seed = 42;
    c.output_dir = d1.string();
    REQUIRE(go(c).code == 0);
    c.output_dir = d2.string();
    REQUIRE(go(c).code == 0);
    for (auto& f : fs::directory_iterator(d1))
      if (f.path().extension() == ".csv") CHECK(slurp(f.path()) == slurp(d2 / f.path().filename()));
  }
}
