#include "catch_amalgamated.hpp"

#include "lossynet/config.hpp"
#include "lossynet/errors.hpp"
#include "lossynet/replication.hpp"

using namespace lossynet;

namespace {

std::string error_of(std::string_view text) {
  try {
    ExperimentConfig::parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("defaults round-trip through echo", "[config]") {
  const ExperimentConfig c;
  CHECK(ExperimentConfig::parse(c.echo()) == c);
  CHECK(ExperimentConfig::parse("") == c);
}

TEST_CASE("replication recipe round-trips", "[config]") {
  const auto c = replication_config();
  const auto again = ExperimentConfig::parse(c.echo());
  CHECK(again == c);
  CHECK(again.echo() == c.echo());
}

TEST_CASE("parsing a typical file", "[config]") {
  const auto c = ExperimentConfig::parse(R"(# comment
seed = 42

[graph]
model = sw   # trailing comment
n = 30
m = 2
theta = 0.1
seed = auto

[objectives]
kind = quad-logexp
a = 0.1 0.2
box = none

[maps]
node = signum-power
node_v1 = 0.5
node_v2 = 2
link = log-quantizer
link_rho = 0.01

[dynamics]
eta = 0.01
init_box = 1 9

[drops]
mode = scheduled
rates = 0.1 0.2 0.3
period = 10

[audit]
window = 5
)");
  CHECK(c.seed == 42);
  CHECK(c.graph.kind == GraphModel::small_world);
  CHECK(c.graph.ring_neighbors == 2);
  CHECK_FALSE(c.graph_seed.has_value());
  CHECK(c.objective_kind == ObjectiveKind::quad_logexp);
  CHECK(c.ranges.a == Interval{0.1, 0.2});
  CHECK_FALSE(c.box.has_value());
  CHECK(c.g_n == NonlinearMap::signum_power(0.5, 2.0));
  CHECK(c.g_l == NonlinearMap::log_quantizer(0.01));
  CHECK(c.eta == 0.01);
  CHECK(c.init_box == Box{1, 9});
  CHECK(c.drop_mode == DropMode::scheduled);
  CHECK(c.rates == std::vector<double>{0.1, 0.2, 0.3});
  CHECK(c.period == 10);
  CHECK(c.audit_window == 5);
  CHECK(ExperimentConfig::parse(c.echo()) == c);
}

TEST_CASE("errors name the section and key", "[config]") {
  auto e = error_of("[graph]\nbogus = 1\n");
  CHECK(e.find("[graph]") != std::string::npos);
  CHECK(e.find("bogus") != std::string::npos);

  e = error_of("[nothing]\n");
  CHECK(e.find("nothing") != std::string::npos);

  e = error_of("[dynamics]\neta = fast\n");
  CHECK(e.find("[dynamics] eta") != std::string::npos);

  e = error_of("[graph]\nn = 3\nn = 4\n");
  CHECK(e.find("duplicate") != std::string::npos);

  e = error_of("[drops]\nmode = scheduled\n");
  CHECK(e.find("rates") != std::string::npos);

  e = error_of("[graph]\nmodel\n");
  CHECK_FALSE(e.empty());

  e = error_of("[dynamics]\nmax_iters = 0\n");
  CHECK(e.find("max_iters") != std::string::npos);

  e = error_of("[weights]\nlow = -1\n");
  CHECK(e.find("[weights]") != std::string::npos);
}

TEST_CASE("set addresses keys by section.key", "[config]") {
  ExperimentConfig c;
  c.set("dynamics.eta", "0.25");
  CHECK(c.eta == 0.25);
  c.set("dynamics.eta", "auto");
  CHECK_FALSE(c.eta.has_value());
  c.set("seed", "77");
  CHECK(c.seed == 77);
  c.set("objectives.c", "1 3");
  CHECK(c.ranges.c == Interval{1, 3});
  try {
    c.set("dynamics.speed", "1");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("[dynamics] speed") != std::string::npos);
    CHECK(what.find("dynamics.eta") != std::string::npos);
  }
  const auto keys = ExperimentConfig::keys();
  CHECK(keys.front() == "seed");
  CHECK(std::find(keys.begin(), keys.end(), "audit.window") != keys.end());
}

TEST_CASE("load reports missing files as IO errors", "[config]") {
  CHECK_THROWS_AS(ExperimentConfig::load("/nonexistent/lossynet.ini"), IoError);
}
