// lossynet command-line harness. Links only the C API.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lossynet/lossynet.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

// Thrown to unwind with a status from the library.
struct Failure {
  lossynet_status status;
  std::string message;
};

int exit_code(lossynet_status s) {
  switch (s) {
    case LOSSYNET_OK: return 0;
    case LOSSYNET_CONFIG: return kExitConfig;
    case LOSSYNET_NUMERIC:
    case LOSSYNET_CONTRACT:
    case LOSSYNET_INTERNAL: return kExitNumeric;
    default: return kExitUsage;
  }
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

void check(lossynet_status s) {
  if (s != LOSSYNET_OK) throw Failure{s, lossynet_last_error()};
}

std::string take_text(lossynet_text* t) {
  std::string s(lossynet_text_data(t), lossynet_text_size(t));
  lossynet_text_free(t);
  return s;
}

// Calls a (buf, cap, needed) function twice: once to size, once to copy.
template <typename F>
std::string fetch_string(F&& f) {
  size_t needed = 0;
  check(f(nullptr, 0, &needed));
  std::string s(needed + 1, '\0');
  check(f(s.data(), s.size(), &needed));
  s.resize(needed);
  return s;
}

std::string default_output_dir() {
  const char* env = std::getenv("LOSSYNET_OUTPUT_DIR");
  return env && *env ? std::string(env) : std::string(".");
}

void write_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Failure{LOSSYNET_IO, "cannot write " + path};
}

template <typename T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p); }
};

using GraphHandle = Handle<lossynet_graph, lossynet_graph_free>;
using ConfigHandle = Handle<lossynet_config, lossynet_config_free>;
using RunHandle = Handle<lossynet_run, lossynet_run_free>;

struct ModelFlags {
  std::string model = "er";
  size_t n = 20;
  double p = 0.3;
  size_t m = 1;
  double theta = 0.0;
  double sigma = 3.5;
  size_t min_degree = 2;
  size_t rows = 10;
  size_t cols = 10;
  uint64_t seed = 0;

  void add(CLI::App* app) {
    app->add_option("--model", model, "er | sw | sf | grid")->capture_default_str();
    app->add_option("--n", n, "node count (er, sw, sf)")->capture_default_str();
    app->add_option("--p", p, "link probability (er)")->capture_default_str();
    app->add_option("--m", m, "ring neighbors per side (sw)")->capture_default_str();
    app->add_option("--theta", theta, "shortcut probability (sw)")->capture_default_str();
    app->add_option("--sigma", sigma, "degree exponent (sf)")->capture_default_str();
    app->add_option("--min-degree", min_degree, "minimum degree (sf)")->capture_default_str();
    app->add_option("--rows", rows, "grid rows")->capture_default_str();
    app->add_option("--cols", cols, "grid columns")->capture_default_str();
    app->add_option("--seed", seed, "RNG seed")->capture_default_str();
  }

  lossynet_model_params params() const {
    lossynet_model_params out;
    lossynet_model_params_init(&out);
    check(lossynet_model_parse(model.c_str(), &out.model));
    out.nodes = n;
    out.link_probability = p;
    out.ring_neighbors = m;
    out.shortcut_probability = theta;
    out.degree_exponent = sigma;
    out.min_degree = min_degree;
    out.rows = rows;
    out.cols = cols;
    out.seed = seed;
    return out;
  }
};

void print_info(const lossynet_graph* g) {
  lossynet_graph_info info;
  check(lossynet_graph_info_get(g, &info));
  std::cout << "nodes=" << info.nodes << "\nedges=" << info.edges
            << "\nconnected=" << (info.connected ? "true" : "false")
            << "\ncomponents=" << info.components << "\nmean_degree=" << info.mean_degree
            << '\n';
}

// shortest text that reads back to the same double
std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed resource allocation over lossy networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(lossynet_version()));

  // generate
  ModelFlags gen;
  std::string gen_out;
  double w_low = 1.0, w_high = 1.0;
  uint64_t w_seed = 0;
  auto* cmd_gen = app.add_subcommand("generate", "Draw a random graph and write its edge list");
  gen.add(cmd_gen);
  cmd_gen->add_option("--out", gen_out, "edge-list path (default <output dir>/graph.txt)");
  cmd_gen->add_option("--weight-low", w_low, "weights drawn from (low, high]")
      ->capture_default_str();
  cmd_gen->add_option("--weight-high", w_high)->capture_default_str();
  cmd_gen->add_option("--weight-seed", w_seed)->capture_default_str();

  // spectrum
  ModelFlags spec_model;
  std::string spec_graph;
  bool spec_all = false;
  auto* cmd_spec = app.add_subcommand("spectrum", "Laplacian spectral summary of a graph");
  spec_model.add(cmd_spec);
  cmd_spec->add_option("--graph", spec_graph, "edge-list file (instead of model flags)");
  cmd_spec->add_flag("--eigenvalues", spec_all, "also print every eigenvalue");

  // percolation
  ModelFlags perc;
  std::optional<double> perc_mean;
  bool perc_mc = false, perc_full = false;
  size_t perc_trials = 200;
  double perc_step = 0.02;
  unsigned perc_threads = 1;
  std::string perc_curve;
  auto* cmd_perc = app.add_subcommand("percolation", "Bond-percolation threshold as CSV");
  perc.add(cmd_perc);
  cmd_perc->add_option("--mean-degree", perc_mean, "Erdos-Renyi threshold from <N>");
  cmd_perc->add_flag("--mc", perc_mc, "Monte-Carlo estimate instead of the table value");
  cmd_perc->add_option("--trials", perc_trials)->capture_default_str();
  cmd_perc->add_option("--step", perc_step, "removal-probability grid step")
      ->capture_default_str();
  cmd_perc->add_option("--threads", perc_threads)->capture_default_str();
  cmd_perc->add_flag("--full", perc_full, "require full connectivity, not a giant component");
  cmd_perc->add_option("--curve", perc_curve, "write the MC curve CSV here");

  // bstar
  std::vector<double> b_pd, b_pl;
  std::optional<double> b_pc;
  std::string b_rates;
  auto* cmd_b = app.add_subcommand("bstar", "Minimal window B* for a drop rate");
  auto* opt_pd = cmd_b->add_option("--pd", b_pd, "packet drop rate(s)");
  auto* opt_pl = cmd_b->add_option("--pl", b_pl, "link removal rate(s)");
  auto* opt_rates = cmd_b->add_option("--rates-file", b_rates, "per-link rates, `i j p` lines");
  cmd_b->add_option("--pc", b_pc, "percolation threshold")->required();
  opt_pd->excludes(opt_pl)->excludes(opt_rates);
  opt_pl->excludes(opt_rates);

  // run
  std::string run_config, run_out;
  std::vector<std::string> run_set;
  auto* cmd_run = app.add_subcommand("run", "Run one experiment from a config file");
  cmd_run->add_option("--config", run_config)->required();
  cmd_run->add_option("--out", run_out, "output directory");
  cmd_run->add_option("--set", run_set, "override, section.key=value (repeatable)");

  // sweep
  std::string sw_config, sw_out;
  std::vector<std::string> sw_vary;
  unsigned sw_threads = 1;
  auto* cmd_sweep = app.add_subcommand("sweep", "Cartesian parameter sweep, one CSV row each");
  cmd_sweep->add_option("--config", sw_config)->required();
  cmd_sweep->add_option("--vary", sw_vary, "section.key=v1,v2,... (repeatable)")->required();
  cmd_sweep->add_option("--threads", sw_threads)->capture_default_str();
  cmd_sweep->add_option("--out", sw_out, "CSV path (default stdout)");

  // replicate-paper
  std::string rep_out;
  uint64_t rep_iters = 0;
  auto* cmd_rep =
      app.add_subcommand("replicate-paper", "Run the 20-node lossy replication recipe");
  cmd_rep->add_option("--out", rep_out, "artifact directory (default <output dir>/replication)");
  cmd_rep->add_option("--max-iters", rep_iters, "override the recipe's iteration count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << one_line(e.what()) << '\n';
    return kExitUsage;
  }

  try {
    if (*cmd_gen) {
      GraphHandle g;
      const auto params = gen.params();
      check(lossynet_graph_generate(&params, &g.p));
      if (w_low != 1.0 || w_high != 1.0) {
        check(lossynet_graph_assign_weights(g.p, w_low, w_high, w_seed));
      }
      const std::string path =
          gen_out.empty() ? (std::filesystem::path(default_output_dir()) / "graph.txt").string()
                          : gen_out;
      std::error_code ec;
      const std::filesystem::path parent = std::filesystem::path(path).parent_path();
      if (!parent.empty()) std::filesystem::create_directories(parent, ec);
      check(lossynet_graph_save(g.p, path.c_str()));
      print_info(g.p);
      std::cout << "file=" << path << '\n';
    } else if (*cmd_spec) {
      GraphHandle g;
      if (!spec_graph.empty()) {
        check(lossynet_graph_load(spec_graph.c_str(), &g.p));
      } else {
        const auto params = spec_model.params();
        check(lossynet_graph_generate(&params, &g.p));
      }
      print_info(g.p);
      double l2 = 0, ln = 0, ratio = 0;
      check(lossynet_graph_spectral_bounds(g.p, &l2, &ln, &ratio));
      std::cout << "lambda2=" << fmt(l2) << "\nlambda_n=" << fmt(ln)
                << "\nratio=" << fmt(ratio) << '\n';
      if (spec_all) {
        size_t count = 0;
        check(lossynet_graph_eigenvalues(g.p, nullptr, 0, &count));
        std::vector<double> ev(count);
        check(lossynet_graph_eigenvalues(g.p, ev.data(), ev.size(), &count));
        std::cout << "eigenvalues=";
        for (size_t i = 0; i < ev.size(); ++i) std::cout << (i ? " " : "") << fmt(ev[i]);
        std::cout << '\n';
      }
    } else if (*cmd_perc) {
      lossynet_threshold t{};
      std::string row;
      if (perc_mean) {
        if (perc_mc) throw Failure{LOSSYNET_USAGE, "--mean-degree cannot be combined with --mc"};
        row = fetch_string([&](char* b, size_t c, size_t* n) {
          return lossynet_percolation_mean_degree(*perc_mean, &t, b, c, n);
        });
      } else if (perc_mc) {
        const auto params = perc.params();
        lossynet_mc_options o;
        lossynet_mc_options_init(&o);
        o.trials = perc_trials;
        o.grid_step = perc_step;
        o.seed = perc.seed;
        o.threads = perc_threads;
        o.full_connectivity = perc_full;
        lossynet_text* curve = nullptr;
        size_t needed = 0;
        std::string buf(256, '\0');
        lossynet_status s = lossynet_percolation_mc(&params, &o, &t, buf.data(), buf.size(),
                                                    &needed, perc_curve.empty() ? nullptr : &curve);
        if (s == LOSSYNET_USAGE && needed >= buf.size()) {
          // Row did not fit; the curve was already produced.
          lossynet_text_free(curve);
          curve = nullptr;
          buf.assign(needed + 1, '\0');
          s = lossynet_percolation_mc(&params, &o, &t, buf.data(), buf.size(), &needed,
                                      perc_curve.empty() ? nullptr : &curve);
        }
        check(s);
        buf.resize(needed);
        row = buf;
        if (curve) write_file(perc_curve, take_text(curve));
      } else {
        const auto params = perc.params();
        size_t needed = 0;
        std::string buf(256, '\0');
        lossynet_status s =
            lossynet_percolation_analytic(&params, &t, buf.data(), buf.size(), &needed);
        if (s == LOSSYNET_USAGE && needed >= buf.size()) {
          buf.assign(needed + 1, '\0');
          s = lossynet_percolation_analytic(&params, &t, buf.data(), buf.size(), &needed);
        }
        if (s == LOSSYNET_NUMERIC && t.divergent) {
          // Row is valid; report it before failing.
          buf.resize(needed);
          std::cout << lossynet_percolation_csv_header() << '\n' << buf << '\n';
        }
        check(s);
        buf.resize(needed);
        row = buf;
      }
      std::cout << lossynet_percolation_csv_header() << '\n' << row << '\n';
    } else if (*cmd_b) {
      if (b_pd.empty() && b_pl.empty() && b_rates.empty()) {
        throw Failure{LOSSYNET_USAGE, "one of --pd, --pl or --rates-file is required"};
      }
      for (double pd : b_pd) {
        uint64_t b = 0;
        check(lossynet_min_window(pd, *b_pc, &b));
        std::cout << b << '\n';
      }
      for (double pl : b_pl) {
        uint64_t b = 0;
        check(lossynet_min_window_for_removal(pl, *b_pc, &b));
        std::cout << b << '\n';
      }
      if (!b_rates.empty()) {
        uint64_t b = 0;
        double max_rate = 0;
        check(lossynet_conservative_window_file(b_rates.c_str(), *b_pc, &b, &max_rate));
        std::cout << b << '\n';
        std::cerr << "max_rate=" << fmt(max_rate) << '\n';
      }
    } else if (*cmd_run) {
      ConfigHandle cfg;
      check(lossynet_config_load(run_config.c_str(), &cfg.p));
      for (const auto& kv : run_set) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
          throw Failure{LOSSYNET_USAGE, "--set expects section.key=value, got '" + kv + "'"};
        }
        check(lossynet_config_set(cfg.p, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
      }
      std::string dir = run_out;
      if (dir.empty()) {
        dir = fetch_string([&](char* b, size_t c, size_t* n) {
          return lossynet_config_output_dir(cfg.p, b, c, n);
        });
      }
      if (dir.empty()) dir = default_output_dir();
      RunHandle run;
      check(lossynet_run_execute(cfg.p, &run.p));
      check(lossynet_run_write(run.p, dir.c_str()));
      lossynet_text* summary = nullptr;
      check(lossynet_run_summary_text(run.p, &summary));
      std::cout << take_text(summary);
    } else if (*cmd_sweep) {
      ConfigHandle cfg;
      check(lossynet_config_load(sw_config.c_str(), &cfg.p));
      std::vector<const char*> vary;
      for (const auto& v : sw_vary) vary.push_back(v.c_str());
      lossynet_text* csv = nullptr;
      check(lossynet_sweep(cfg.p, vary.data(), vary.size(), sw_threads, &csv));
      const std::string text = take_text(csv);
      if (sw_out.empty()) {
        std::cout << text;
      } else {
        write_file(sw_out, text);
      }
    } else if (*cmd_rep) {
      const std::string dir =
          rep_out.empty() ? (std::filesystem::path(default_output_dir()) / "replication").string()
                          : rep_out;
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      if (ec) throw Failure{LOSSYNET_IO, "cannot create " + dir + ": " + ec.message()};
      lossynet_text* report = nullptr;
      check(lossynet_replicate(dir.c_str(), rep_iters, &report));
      std::cout << take_text(report);
    }
  } catch (const Failure& f) {
    std::cout.flush();
    std::cerr << "error: " << lossynet_status_name(f.status) << ": " << one_line(f.message)
              << '\n';
    return exit_code(f.status);
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << one_line(e.what()) << '\n';
    return kExitNumeric;
  }
  return 0;
}
