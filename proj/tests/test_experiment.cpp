#include "catch_amalgamated.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "lossynet/errors.hpp"
#include "lossynet/experiment.hpp"
#include "lossynet/replication.hpp"

using namespace lossynet;

namespace {

ExperimentConfig reliable() {
  return ExperimentConfig::parse(R"(seed = 11
[graph]
model = er
n = 20
p = 0.3
[objectives]
kind = quadratic
[dynamics]
max_iters = 100000
dispersion_tol = 1e-12
)");
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("reliable quadratic config reaches the oracle", "[experiment]") {
  const auto r = run_experiment(reliable());
  REQUIRE(r.summary.step_bound.has_value());
  CHECK(r.summary.eta == 0.9 * *r.summary.step_bound);
  CHECK(r.summary.oracle_gap <= 1e-6);
  CHECK(r.summary.max_feasibility_violation <= 1e-9 * 100.0);
  CHECK(r.summary.feasibility_failures == 0);
}

TEST_CASE("seed streams are independent", "[experiment]") {
  auto c = reliable();
  const auto a = prepare_run(c);
  c.graph_seed = 123;
  const auto b = prepare_run(c);
  CHECK_FALSE(a.run.graph == b.run.graph);
  CHECK(a.run.objectives == b.run.objectives);
}

TEST_CASE("explicit eta and quantized maps without a sector bound", "[experiment]") {
  auto c = reliable();
  c.g_l = NonlinearMap::uniform_quantizer(0.1);
  CHECK_THROWS_AS(prepare_run(c), ConfigError);
  c.eta = 0.001;
  c.max_iters = 50;
  const auto p = prepare_run(c);
  CHECK_FALSE(p.step_bound.has_value());
  CHECK(p.run.eta == 0.001);
}

TEST_CASE("start box must admit the demand", "[experiment]") {
  auto c = reliable();
  c.init_box = Box{0.0, 1.0};
  CHECK_THROWS_AS(prepare_run(c), ConfigError);
}

TEST_CASE("summary text carries the config echo", "[experiment]") {
  auto c = reliable();
  c.max_iters = 10;
  c.dispersion_tol = 0.0;
  const auto r = run_experiment(c);
  const auto text = summary_text(r.summary, c);
  const auto pos = text.find("[config]\n");
  REQUIRE(pos != std::string::npos);
  CHECK(ExperimentConfig::parse(text.substr(pos + 9)) == c);
  CHECK(text.find("termination=max_iters") != std::string::npos);
  CHECK(text.find("iterations=10") != std::string::npos);
}

TEST_CASE("outputs are written and byte-stable", "[experiment]") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "lossynet_experiment_test";
  fs::remove_all(dir);
  auto c = reliable();
  c.max_iters = 50;
  c.dispersion_tol = 0.0;
  c.states_file = "states.csv";
  c.audit_window = 2;
  c.drop_mode = DropMode::homogeneous;
  c.p_d = 0.2;
  const auto files = write_outputs(run_experiment(c), c, (dir / "a").string());
  CHECK(files.size() == 4);
  write_outputs(run_experiment(c), c, (dir / "b").string());
  for (const auto* name : {"trace.csv", "trace.csv.meta", "summary.txt", "states.csv"}) {
    const auto a = slurp(dir / "a" / name);
    CHECK_FALSE(a.empty());
    CHECK(a == slurp(dir / "b" / name));
  }
  CHECK(lines(slurp(dir / "a" / "trace.csv")).size() == 52);
  fs::remove_all(dir);
}

TEST_CASE("sweep axis parsing", "[experiment]") {
  const auto a = parse_sweep_axis("dynamics.eta=0.1,0.2");
  CHECK(a.key == "dynamics.eta");
  CHECK(a.values == std::vector<std::string>{"0.1", "0.2"});
  CHECK(parse_sweep_axis("seed=").values.empty());
  CHECK_THROWS_AS(parse_sweep_axis("dynamics.eta"), ConfigError);
}

TEST_CASE("sweep over seeds gives one row each in order", "[experiment]") {
  auto c = reliable();
  c.max_iters = 100;
  c.dispersion_tol = 0.0;
  std::vector<SweepAxis> axes{{"seed", {}}};
  for (int s = 1; s <= 10; ++s) axes[0].values.push_back(std::to_string(s));
  const auto csv = run_sweep(c, axes, 4);
  const auto rows = lines(csv);
  REQUIRE(rows.size() == 11);
  CHECK(rows[0].rfind("seed,eta,step_bound,termination", 0) == 0);
  std::set<std::string> distinct;
  for (int s = 1; s <= 10; ++s) {
    CHECK(rows[s].rfind(std::to_string(s) + ",", 0) == 0);
    distinct.insert(rows[s].substr(rows[s].find(',')));
  }
  CHECK(distinct.size() == 10);
  CHECK(run_sweep(c, axes, 1) == csv);
}

TEST_CASE("sweep over the step size around the bound", "[experiment]") {
  auto c = reliable();
  c.max_iters = 300;
  c.dispersion_tol = 0.0;
  const std::vector<SweepAxis> axes{{"dynamics.eta_scale", {"0.5", "1", "2"}}};
  const auto rows = lines(run_sweep(c, axes, 2));
  REQUIRE(rows.size() == 4);
  auto residual = [](const std::string& row) {
    std::vector<std::string> f;
    std::stringstream s(row);
    for (std::string x; std::getline(s, x, ',');) f.push_back(x);
    return std::stod(f[6]);
  };
  CHECK(residual(rows[2]) <= residual(rows[1]));
}

TEST_CASE("sweep edge cases", "[experiment]") {
  const auto c = reliable();
  const std::vector<SweepAxis> empty{{"seed", {}}};
  CHECK(lines(run_sweep(c, empty, 2)).size() == 1);
  const std::vector<SweepAxis> bad{{"dynamics.speed", {"1"}}};
  try {
    run_sweep(c, bad, 1);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("valid keys") != std::string::npos);
  }
  const std::vector<SweepAxis> invalid{{"dynamics.max_iters", {"10", "0"}}};
  CHECK_THROWS_AS(run_sweep(c, invalid, 2), ConfigError);
}

TEST_CASE("replication recipe", "[experiment]") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "lossynet_replication_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto rep = run_replication(dir.string());
  CHECK(rep.mean_degree == 5.6);
  CHECK(is_connected(rep.result.prepared.run.graph));
  for (const auto& e : rep.result.prepared.run.graph.edges()) {
    CHECK(e.weight > 0.0);
    CHECK(e.weight <= 10.0);
  }
  for (const auto& r : rep.result.trace.records) CHECK(std::abs(r.sum_x - 100.0) <= 1e-7);
  for (double x : rep.result.trace.final_state) {
    CHECK(x >= 2.0 - 0.5);
    CHECK(x <= 7.0 + 0.5);
  }
  const auto& recs = rep.result.trace.records;
  CHECK(recs.back().residual < 1e-3 * recs.front().residual);

  REQUIRE(rep.table.size() == 5);
  std::vector<std::uint64_t> measured, rounded_pc, rounded_pl;
  for (const auto& row : rep.table) {
    measured.push_back(row.b_measured);
    rounded_pc.push_back(row.b_rounded_pc);
    rounded_pl.push_back(row.b_rounded_pl);
  }
  CHECK(rounded_pl == std::vector<std::uint64_t>{3, 5, 7, 11, 23});
  CHECK(rounded_pc == std::vector<std::uint64_t>{3, 5, 7, 11, 22});
  CHECK(measured == std::vector<std::uint64_t>{3, 4, 7, 11, 22});

  for (const auto* name : {"bstar.csv", "spectrum.csv", "graph.txt", "trace.csv", "states.csv",
                           "summary.txt", "replication.txt"}) {
    CHECK(fs::exists(dir / name));
  }
  REQUIRE(rep.result.summary.audit.has_value());
  const auto& a = *rep.result.summary.audit;
  CHECK(a.disjoint_connected >= 0.99 * static_cast<double>(a.disjoint_total));
  fs::remove_all(dir);
}
