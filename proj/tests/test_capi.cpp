#include "catch_amalgamated.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lossynet/lossynet.h"

namespace fs = std::filesystem;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::string data_path(const char* name) {
  const char* dir = std::getenv("LOSSYNET_TEST_DATA");
  return std::string(dir ? dir : "tests/data") + "/" + name;
}

fs::path scratch_dir(const char* name) {
  const auto dir = fs::temp_directory_path() / "lossynet_capi" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string take(lossynet_text* t) {
  std::string s(lossynet_text_data(t), lossynet_text_size(t));
  lossynet_text_free(t);
  return s;
}

std::string echo(const lossynet_config* c) {
  size_t needed = 0;
  REQUIRE(lossynet_config_echo(c, nullptr, 0, &needed) == LOSSYNET_OK);
  std::string buf(needed + 1, '\0');
  REQUIRE(lossynet_config_echo(c, buf.data(), buf.size(), &needed) == LOSSYNET_OK);
  buf.resize(needed);
  return buf;
}

lossynet_config* small_config() {
  lossynet_config* c = nullptr;
  REQUIRE(lossynet_config_parse("seed = 3\n[graph]\nmodel = er\nn = 8\np = 0.6\n"
                                "[dynamics]\nmax_iters = 400\n",
                                &c) == LOSSYNET_OK);
  return c;
}

}  // namespace

TEST_CASE("status names and last error", "[capi]") {
  CHECK(std::string(lossynet_status_name(LOSSYNET_OK)) == "ok");
  CHECK(std::string(lossynet_status_name(LOSSYNET_CONFIG)) == "config");
  CHECK(std::string(lossynet_status_name(LOSSYNET_CONTRACT)) == "contract");
  CHECK(std::string(lossynet_status_name(static_cast<lossynet_status>(42))) == "unknown");
  CHECK(std::string(lossynet_version()).size() > 0);

  double p_l = 0;
  CHECK(lossynet_drop_to_removal_rate(1.5, &p_l) == LOSSYNET_DOMAIN);
  CHECK(std::string(lossynet_last_error()).find("1.5") != std::string::npos);
  CHECK(lossynet_drop_to_removal_rate(0.4, nullptr) == LOSSYNET_USAGE);
  REQUIRE(lossynet_drop_to_removal_rate(0.4, &p_l) == LOSSYNET_OK);
  CHECK_THAT(p_l, WithinAbs(0.64, 1e-15));
}

TEST_CASE("null handles are usage errors", "[capi]") {
  lossynet_graph_info info{};
  CHECK(lossynet_graph_info_get(nullptr, &info) == LOSSYNET_USAGE);
  CHECK(lossynet_graph_generate(nullptr, nullptr) == LOSSYNET_USAGE);
  CHECK(lossynet_run_execute(nullptr, nullptr) == LOSSYNET_USAGE);
  lossynet_config* c = nullptr;
  CHECK(lossynet_config_parse(nullptr, &c) == LOSSYNET_USAGE);
  CHECK(c == nullptr);
  // freeing null is a no-op
  lossynet_graph_free(nullptr);
  lossynet_config_free(nullptr);
  lossynet_run_free(nullptr);
  lossynet_text_free(nullptr);
}

TEST_CASE("model names", "[capi]") {
  lossynet_model m{};
  REQUIRE(lossynet_model_parse("grid", &m) == LOSSYNET_OK);
  CHECK(m == LOSSYNET_MODEL_SQUARE_GRID);
  REQUIRE(lossynet_model_parse("sw", &m) == LOSSYNET_OK);
  CHECK(m == LOSSYNET_MODEL_SMALL_WORLD);
  CHECK(lossynet_model_parse("lattice3d", &m) == LOSSYNET_USAGE);
}

TEST_CASE("graph generation, save and load", "[capi]") {
  lossynet_model_params p;
  lossynet_model_params_init(&p);
  p.model = LOSSYNET_MODEL_SQUARE_GRID;
  p.rows = 3;
  p.cols = 4;
  lossynet_graph* g = nullptr;
  REQUIRE(lossynet_graph_generate(&p, &g) == LOSSYNET_OK);
  lossynet_graph_info info{};
  REQUIRE(lossynet_graph_info_get(g, &info) == LOSSYNET_OK);
  CHECK(info.nodes == 12);
  CHECK(info.edges == 17);
  CHECK(info.connected == 1);
  CHECK(info.components == 1);

  const auto dir = scratch_dir("graph");
  const auto file = (dir / "grid.txt").string();
  REQUIRE(lossynet_graph_assign_weights(g, 1.0, 3.0, 9) == LOSSYNET_OK);
  REQUIRE(lossynet_graph_save(g, file.c_str()) == LOSSYNET_OK);
  lossynet_graph* back = nullptr;
  REQUIRE(lossynet_graph_load(file.c_str(), &back) == LOSSYNET_OK);
  const auto again = (dir / "again.txt").string();
  REQUIRE(lossynet_graph_save(back, again.c_str()) == LOSSYNET_OK);
  CHECK(slurp(file) == slurp(again));

  size_t needed = 0;
  REQUIRE(lossynet_graph_eigenvalues(g, nullptr, 0, &needed) == LOSSYNET_OK);
  CHECK(needed == 12);
  std::vector<double> ev(needed), ev2(needed);
  REQUIRE(lossynet_graph_eigenvalues(g, ev.data(), ev.size(), &needed) == LOSSYNET_OK);
  REQUIRE(lossynet_graph_eigenvalues(back, ev2.data(), ev2.size(), &needed) == LOSSYNET_OK);
  CHECK_THAT(ev.front(), WithinAbs(0.0, 1e-9));
  for (std::size_t i = 0; i < ev.size(); ++i) CHECK_THAT(ev[i], WithinAbs(ev2[i], 1e-9));
  CHECK(lossynet_graph_eigenvalues(g, ev.data(), 3, &needed) == LOSSYNET_USAGE);

  double l2 = 0, ln = 0, ratio = 0;
  REQUIRE(lossynet_graph_spectral_bounds(g, &l2, &ln, &ratio) == LOSSYNET_OK);
  CHECK_THAT(l2, WithinAbs(ev[1], 1e-9));
  CHECK_THAT(ln, WithinAbs(ev.back(), 1e-9));
  CHECK_THAT(ratio, WithinRel(l2 / (ln * ln), 1e-12));

  lossynet_graph_free(back);
  lossynet_graph_free(g);

  CHECK(lossynet_graph_load((dir / "missing.txt").string().c_str(), &back) == LOSSYNET_IO);
  CHECK(lossynet_graph_load(data_path("bad_graph.txt").c_str(), &back) != LOSSYNET_OK);
}

TEST_CASE("loaded fixture graph", "[capi]") {
  lossynet_graph* g = nullptr;
  REQUIRE(lossynet_graph_load(data_path("triangle.txt").c_str(), &g) == LOSSYNET_OK);
  std::vector<double> ev(3);
  size_t needed = 0;
  REQUIRE(lossynet_graph_eigenvalues(g, ev.data(), ev.size(), &needed) == LOSSYNET_OK);
  // L = [[1.5,-1,-0.5],[-1,3,-2],[-0.5,-2,2.5]]: trace 7, eigenvalues 0 and 3.5 +- sqrt(1.75)
  CHECK_THAT(ev[0], WithinAbs(0.0, 1e-12));
  CHECK_THAT(ev[1], WithinAbs(3.5 - std::sqrt(1.75), 1e-12));
  CHECK_THAT(ev[2], WithinAbs(3.5 + std::sqrt(1.75), 1e-12));
  lossynet_graph_free(g);
}

TEST_CASE("disconnected graphs have no spectral bounds", "[capi]") {
  lossynet_model_params p;
  lossynet_model_params_init(&p);
  p.model = LOSSYNET_MODEL_SMALL_WORLD;
  p.nodes = 10;
  p.ring_neighbors = 1;
  p.shortcut_probability = 0.0;
  lossynet_graph* g = nullptr;
  REQUIRE(lossynet_graph_generate(&p, &g) == LOSSYNET_OK);
  lossynet_graph_info info{};
  REQUIRE(lossynet_graph_info_get(g, &info) == LOSSYNET_OK);
  CHECK(info.edges == 10);
  double l2 = 0, ln = 0, ratio = 0;
  CHECK(lossynet_graph_spectral_bounds(g, &l2, &ln, &ratio) == LOSSYNET_OK);
  lossynet_graph_free(g);

  p.model = LOSSYNET_MODEL_ERDOS_RENYI;
  p.link_probability = 0.0;
  REQUIRE(lossynet_graph_generate(&p, &g) == LOSSYNET_OK);
  CHECK(lossynet_graph_spectral_bounds(g, &l2, &ln, &ratio) == LOSSYNET_DOMAIN);
  lossynet_graph_free(g);

  p.link_probability = 2.0;
  CHECK(lossynet_graph_generate(&p, &g) == LOSSYNET_DOMAIN);
}

TEST_CASE("threshold rows and the text protocol", "[capi]") {
  lossynet_model_params p;
  lossynet_model_params_init(&p);
  p.model = LOSSYNET_MODEL_SQUARE_GRID;
  p.rows = 10;
  p.cols = 10;
  lossynet_threshold t{};
  size_t needed = 0;
  REQUIRE(lossynet_percolation_analytic(&p, &t, nullptr, 0, &needed) == LOSSYNET_OK);
  CHECK(t.p_c == 0.5);
  CHECK(t.monte_carlo == 0);
  std::string row(needed + 1, '\0');
  REQUIRE(lossynet_percolation_analytic(&p, &t, row.data(), row.size(), &needed) ==
          LOSSYNET_OK);
  row.resize(needed);
  CHECK(row.find(",0.5,") != std::string::npos);
  std::string tiny(4, '\0');
  CHECK(lossynet_percolation_analytic(&p, &t, tiny.data(), tiny.size(), &needed) ==
        LOSSYNET_USAGE);

  const std::string header = lossynet_percolation_csv_header();
  CHECK(std::count(header.begin(), header.end(), ',') == std::count(row.begin(), row.end(), ','));

  REQUIRE(lossynet_percolation_mean_degree(5.6, &t, nullptr, 0, &needed) == LOSSYNET_OK);
  CHECK_THAT(t.p_c, WithinAbs(1.0 / 5.6, 1e-15));

  p.model = LOSSYNET_MODEL_SCALE_FREE;
  p.nodes = 200;
  p.degree_exponent = 3.0;
  p.min_degree = 2;
  t = {};
  CHECK(lossynet_percolation_analytic(&p, &t, nullptr, 0, &needed) == LOSSYNET_NUMERIC);
  CHECK(t.divergent == 1);
  CHECK(t.p_c == 0.0);
  CHECK(needed > 0);
}

TEST_CASE("Monte-Carlo threshold on a grid", "[capi]") {
  lossynet_model_params p;
  lossynet_model_params_init(&p);
  p.model = LOSSYNET_MODEL_SQUARE_GRID;
  p.rows = 20;
  p.cols = 20;
  lossynet_mc_options o;
  lossynet_mc_options_init(&o);
  o.trials = 60;
  o.grid_step = 0.02;
  o.seed = 4;
  lossynet_threshold t{};
  lossynet_text* curve = nullptr;
  size_t needed = 0;
  REQUIRE(lossynet_percolation_mc(&p, &o, &t, nullptr, 0, &needed, &curve) == LOSSYNET_OK);
  CHECK(t.monte_carlo == 1);
  CHECK(t.p_c > 0.35);
  CHECK(t.p_c < 0.65);
  CHECK_THAT(t.uncertainty, WithinAbs(0.98 / std::sqrt(60.0), 1e-12));
  const auto text = take(curve);
  CHECK(text.rfind("removal_probability,connected_fraction\n", 0) == 0);

  lossynet_threshold again{};
  REQUIRE(lossynet_percolation_mc(&p, &o, &again, nullptr, 0, &needed, nullptr) == LOSSYNET_OK);
  CHECK(again.p_c == t.p_c);

  o.trials = 0;
  CHECK(lossynet_percolation_mc(&p, &o, &t, nullptr, 0, &needed, nullptr) == LOSSYNET_DOMAIN);
}

TEST_CASE("windows through the C interface", "[capi]") {
  uint64_t b = 0;
  REQUIRE(lossynet_min_window(0.4, 0.177, &b) == LOSSYNET_OK);
  CHECK(b == 3);
  REQUIRE(lossynet_min_window(0.05, 0.177, &b) == LOSSYNET_OK);
  CHECK(b == 0);
  REQUIRE(lossynet_min_window_for_removal(0.93, 0.177, &b) == LOSSYNET_OK);
  CHECK(b == 23);
  CHECK(lossynet_min_window(1.0, 0.177, &b) == LOSSYNET_NUMERIC);
  CHECK(lossynet_min_window(0.4, 0.0, &b) == LOSSYNET_DOMAIN);

  double lower = 0, upper = 0;
  REQUIRE(lossynet_admissible_drop_range(0.75, &lower, &upper) == LOSSYNET_OK);
  CHECK_THAT(lower, WithinAbs(0.5, 1e-15));
  CHECK(upper == 1.0);

  double max_rate = 0;
  REQUIRE(lossynet_conservative_window_file(data_path("rates.txt").c_str(), 0.177, &b,
                                            &max_rate) == LOSSYNET_OK);
  CHECK(max_rate == 0.73);
  CHECK(b == 22);
  CHECK(lossynet_conservative_window_file("/nonexistent/rates.txt", 0.177, &b, nullptr) ==
        LOSSYNET_IO);
}

TEST_CASE("config parse, set and echo", "[capi]") {
  lossynet_config* c = nullptr;
  REQUIRE(lossynet_config_default(&c) == LOSSYNET_OK);
  const auto text = echo(c);
  lossynet_config* d = nullptr;
  REQUIRE(lossynet_config_parse(text.c_str(), &d) == LOSSYNET_OK);
  CHECK(echo(d) == text);

  REQUIRE(lossynet_config_set(d, "graph.n", "12") == LOSSYNET_OK);
  CHECK(echo(d).find("n = 12") != std::string::npos);
  CHECK(lossynet_config_set(d, "graph.n", "many") == LOSSYNET_CONFIG);
  CHECK(std::string(lossynet_last_error()).find("[graph] n") != std::string::npos);
  // a rejected value leaves the config untouched
  CHECK(echo(d).find("n = 12") != std::string::npos);
  CHECK(lossynet_config_set(d, "dynamics.speed", "1") == LOSSYNET_CONFIG);

  REQUIRE(lossynet_config_set(d, "output.dir", "results/x") == LOSSYNET_OK);
  size_t needed = 0;
  std::string dir(64, '\0');
  REQUIRE(lossynet_config_output_dir(d, dir.data(), dir.size(), &needed) == LOSSYNET_OK);
  dir.resize(needed);
  CHECK(dir == "results/x");

  lossynet_config* bad = nullptr;
  CHECK(lossynet_config_parse("[graph]\nbogus = 1\n", &bad) == LOSSYNET_CONFIG);
  CHECK(bad == nullptr);
  CHECK(std::string(lossynet_last_error()).find("bogus") != std::string::npos);
  CHECK(lossynet_config_load("/nonexistent/x.ini", &bad) == LOSSYNET_IO);

  lossynet_config* rep = nullptr;
  REQUIRE(lossynet_config_replication(&rep) == LOSSYNET_OK);
  CHECK(echo(rep).find("log-quantizer") != std::string::npos);
  lossynet_config_free(rep);
  lossynet_config_free(d);
  lossynet_config_free(c);
}

TEST_CASE("run summary and outputs", "[capi]") {
  lossynet_config* c = small_config();
  lossynet_run* r = nullptr;
  REQUIRE(lossynet_run_execute(c, &r) == LOSSYNET_OK);
  lossynet_run_summary s{};
  REQUIRE(lossynet_run_summary_get(r, &s) == LOSSYNET_OK);
  CHECK(s.iterations > 0);
  CHECK(s.iterations <= 400);
  CHECK(s.feasibility_failures == 0);
  CHECK(s.max_feasibility_violation <= 1e-9 * 100.0);
  CHECK(std::isfinite(s.step_bound));
  CHECK(s.eta > 0.0);
  CHECK(s.eta < s.step_bound);

  lossynet_text* t = nullptr;
  REQUIRE(lossynet_run_summary_text(r, &t) == LOSSYNET_OK);
  const auto summary = take(t);
  CHECK(summary.find("iterations=") != std::string::npos);
  REQUIRE(lossynet_run_trace_csv(r, &t) == LOSSYNET_OK);
  const auto trace = take(t);
  CHECK(trace.rfind("k,F,residual,sum_x", 0) == 0);

  const auto dir = scratch_dir("run");
  REQUIRE(lossynet_run_write(r, dir.string().c_str()) == LOSSYNET_OK);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir)) files += e.is_regular_file();
  CHECK(files >= 3);

  // same config, same result
  lossynet_run* r2 = nullptr;
  REQUIRE(lossynet_run_execute(c, &r2) == LOSSYNET_OK);
  REQUIRE(lossynet_run_trace_csv(r2, &t) == LOSSYNET_OK);
  CHECK(take(t) == trace);

  lossynet_run_free(r2);
  lossynet_run_free(r);
  lossynet_config_free(c);
}

TEST_CASE("sweep", "[capi]") {
  lossynet_config* c = small_config();
  const char* vary[] = {"dynamics.eta_scale=0.5,0.9", "seed=1,2,3"};
  lossynet_text* csv = nullptr;
  REQUIRE(lossynet_sweep(c, vary, 2, 2, &csv) == LOSSYNET_OK);
  const auto text = take(csv);
  CHECK(std::count(text.begin(), text.end(), '\n') == 7);
  CHECK(text.rfind("dynamics.eta_scale,seed,", 0) == 0);

  // no values: header only
  REQUIRE(lossynet_sweep(c, vary, 0, 1, &csv) == LOSSYNET_OK);
  CHECK(std::count(lossynet_text_data(csv), lossynet_text_data(csv) + lossynet_text_size(csv),
                   '\n') == 1);
  lossynet_text_free(csv);
  const char* empty[] = {"seed="};
  REQUIRE(lossynet_sweep(c, empty, 1, 1, &csv) == LOSSYNET_OK);
  CHECK(take(csv) == "seed,eta,step_bound,termination,iterations,final_residual,oracle_gap,"
                     "max_feasibility_violation\n");

  const char* unknown[] = {"dynamics.speed=1,2"};
  CHECK(lossynet_sweep(c, unknown, 1, 1, &csv) == LOSSYNET_CONFIG);
  const char* malformed[] = {"dynamics.eta_scale"};
  CHECK(lossynet_sweep(c, malformed, 1, 1, &csv) != LOSSYNET_OK);
  lossynet_config_free(c);
}
