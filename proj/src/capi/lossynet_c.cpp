#include "lossynet/lossynet.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "lossynet/config.hpp"
#include "lossynet/edge_list.hpp"
#include "lossynet/errors.hpp"
#include "lossynet/experiment.hpp"
#include "lossynet/format.hpp"
#include "lossynet/generators.hpp"
#include "lossynet/percolation.hpp"
#include "lossynet/replication.hpp"
#include "lossynet/spectral.hpp"

struct lossynet_graph {
  lossynet::WeightedGraph graph;
};

struct lossynet_config {
  lossynet::ExperimentConfig config;
};

struct lossynet_run {
  lossynet::ExperimentConfig config;
  lossynet::ExperimentResult result;
};

struct lossynet_text {
  std::string text;
};

namespace {

thread_local std::string g_last_error;

lossynet_status fail(lossynet_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename T>
void require(const T* p, const char* what) {
  if (p == nullptr) throw UsageError(std::string(what) + " must not be null");
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
lossynet_status guarded(F&& body) {
  try {
    return body();
  } catch (const UsageError& e) {
    return fail(LOSSYNET_USAGE, e.what());
  } catch (const lossynet::ConfigError& e) {
    return fail(LOSSYNET_CONFIG, e.what());
  } catch (const lossynet::DomainError& e) {
    return fail(LOSSYNET_DOMAIN, e.what());
  } catch (const lossynet::NumericError& e) {
    return fail(LOSSYNET_NUMERIC, e.what());
  } catch (const lossynet::IoError& e) {
    return fail(LOSSYNET_IO, e.what());
  } catch (const lossynet::ContractViolation& e) {
    return fail(LOSSYNET_CONTRACT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(LOSSYNET_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LOSSYNET_INTERNAL, e.what());
  } catch (...) {
    return fail(LOSSYNET_INTERNAL, "unknown error");
  }
}

lossynet_status copy_text(const std::string& text, char* buf, size_t cap, size_t* needed) {
  if (needed) *needed = text.size();
  if (buf == nullptr || cap == 0) {
    if (buf == nullptr && cap == 0) return LOSSYNET_OK;
    return fail(LOSSYNET_USAGE, "buffer is null or has zero capacity");
  }
  if (cap <= text.size()) {
    return fail(LOSSYNET_USAGE, "buffer too small: need " + std::to_string(text.size() + 1) +
                                    " bytes");
  }
  std::memcpy(buf, text.data(), text.size());
  buf[text.size()] = '\0';
  return LOSSYNET_OK;
}

lossynet::GraphModelSpec to_spec(const lossynet_model_params& p) {
  lossynet::GraphModelSpec s;
  switch (p.model) {
    case LOSSYNET_MODEL_ERDOS_RENYI: s.kind = lossynet::GraphModel::erdos_renyi; break;
    case LOSSYNET_MODEL_SMALL_WORLD: s.kind = lossynet::GraphModel::small_world; break;
    case LOSSYNET_MODEL_SCALE_FREE: s.kind = lossynet::GraphModel::scale_free; break;
    case LOSSYNET_MODEL_SQUARE_GRID: s.kind = lossynet::GraphModel::square_grid; break;
    default: throw UsageError("unknown graph model");
  }
  s.nodes = p.nodes;
  s.link_probability = p.link_probability;
  s.ring_neighbors = p.ring_neighbors;
  s.shortcut_probability = p.shortcut_probability;
  s.degree_exponent = p.degree_exponent;
  s.min_degree = p.min_degree;
  s.rows = p.rows;
  s.cols = p.cols;
  s.seed = p.seed;
  return s;
}

void fill_threshold(const lossynet::PercolationResult& r, lossynet_threshold* out) {
  if (!out) return;
  out->p_c = r.p_c;
  out->uncertainty = r.uncertainty;
  out->monte_carlo = r.method == lossynet::ThresholdMethod::monte_carlo;
  out->clamped = r.clamped;
  out->divergent = r.divergent;
}

lossynet_text* make_text(std::string s) { return new lossynet_text{std::move(s)}; }

}  // namespace

extern "C" {

const char* lossynet_version(void) { return "0.1.0"; }

const char* lossynet_last_error(void) { return g_last_error.c_str(); }

const char* lossynet_status_name(lossynet_status status) {
  switch (status) {
    case LOSSYNET_OK: return "ok";
    case LOSSYNET_USAGE: return "usage";
    case LOSSYNET_CONFIG: return "config";
    case LOSSYNET_NUMERIC: return "numeric";
    case LOSSYNET_DOMAIN: return "domain";
    case LOSSYNET_IO: return "io";
    case LOSSYNET_CONTRACT: return "contract";
    case LOSSYNET_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* lossynet_text_data(const lossynet_text* text) {
  return text ? text->text.c_str() : "";
}

size_t lossynet_text_size(const lossynet_text* text) { return text ? text->text.size() : 0; }

void lossynet_text_free(lossynet_text* text) { delete text; }

void lossynet_model_params_init(lossynet_model_params* params) {
  if (!params) return;
  *params = lossynet_model_params{};
  params->model = LOSSYNET_MODEL_ERDOS_RENYI;
  params->ring_neighbors = 1;
  params->degree_exponent = 3.0;
  params->min_degree = 1;
}

lossynet_status lossynet_model_parse(const char* name, lossynet_model* out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    const auto m = lossynet::parse_graph_model(name);
    if (!m) throw UsageError(std::string("unknown graph model '") + name + "'");
    *out = static_cast<lossynet_model>(static_cast<int>(*m));
    return LOSSYNET_OK;
  });
}

lossynet_status lossynet_graph_generate(const lossynet_model_params* params,
                                        lossynet_graph** out) {
  return guarded([&] {
    require(params, "params");
    require(out, "out");
    *out = new lossynet_graph{lossynet::generate(to_spec(*params))};
    return LOSSYNET_OK;
  });
}

lossynet_status lossynet_graph_load(const char* path, lossynet_graph** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new lossynet_graph{lossynet::load_edge_list(path)};
    return LOSSYNET_OK;
  });
}

lossynet_status lossynet_graph_save(const lossynet_graph* graph, const char* path) {
  return guarded([&] {
    require(graph, "graph");
    require(path, "path");
    lossynet::save_edge_list(path, graph->graph);
    return LOSSYNET_OK;
  });
}

lossynet_status lossynet_graph_assign_weights(lossynet_graph* graph, double low, double high,
                                              uint64_t seed) {
  return guarded([&] {
    require(graph, "graph");
    graph->graph = lossynet::assign_weights(graph->graph, low, high, seed);
    return LOSSYNET_OK;
  });
}

lossynet_status lossynet_graph_info_get(const lossynet_graph* graph, lossynet_graph_info* out) {
  return guarded([&] {
    require(graph, "graph");
    require(out, "out");
    const auto& g = graph->graph;
    out->nodes = g.node_count();
    out->edges = g.edge_count();
    out->components = lossynet::component_count(g);
    out->connected = lossynet::is_connected(g);
    out->mean_degree = g.node_count() ? lossynet::mean_degree(g) : 0.0;
    return LOSSYNET_OK;
  });
}

lossynet_status lossynet_graph_eigenvalues(const lossynet_graph* graph, double* values,
                                           size_t cap, size_t* needed) {
  return guarded([&] {
    require(graph, "graph");
    const auto ev = lossynet::laplacian_spectrum(graph->graph);
    if (needed) *needed = ev.size();
    if (values == nullptr) return LOSSYNET_OK;
    if (cap < ev.size()) {
      throw UsageError("eigenvalue buffer too small: need " + std::to_string(ev.size()));
    }
    std::copy(ev.begin(), ev.end(), values);
    return LOSSYNET_OK;
  });
}

lossynet_status lossynet_graph_spectral_bounds(const lossynet_graph* graph, double* lambda2,
                                               double* lambda_n, double* ratio) {
  return guarded([&] {
    require(graph, "graph");
    const auto s = lossynet::spectral_bounds(graph->graph);
    if (lambda2) *lambda2 = s.lambda2;
    if (lambda_n) *lambda_n = s.lambda_n;
    if (ratio) *ratio = s.ratio;
    return LOSSYNET_OK;
  });
}

void lossynet_graph_free(lossynet_graph* graph) { delete graph; }

void lossynet_mc_options_init(lossynet_mc_options* options) {
  if (!options) return;
  const lossynet::McOptions d;
  options->trials = d.trials;
  options->grid_step = d.grid_step;
  options->seed = d.seed;
  options->threads = d.threads;
  options->full_connectivity = 0;
}

const char* lossynet_percolation_csv_header(void) {
  static const std::string header = lossynet::percolation_csv_header();
  return header.c_str();
}

lossynet_status lossynet_percolation_analytic(const lossynet_model_params* params,
                                              lossynet_threshold* out, char* csv, size_t cap,
                                              size_t* needed) {
  return guarded([&] {
    require(params, "params");
    const auto r = lossynet::bond_threshold(to_spec(*params));
    fill_threshold(r, out);
    const lossynet_status st = copy_text(lossynet::to_csv_row(r), csv, cap, needed);
    if (st != LOSSYNET_OK) return st;
    if (r.divergent) return fail(LOSSYNET_NUMERIC, r.note);
    return LOSSYNET_OK;
  });
}

lossynet_status lossynet_percolation_mean_degree(double mean_degree, lossynet_threshold* out,
                                                 char* csv, size_t cap, size_t* needed) {
  return guarded([&] {
    const auto r = lossynet::er_threshold_from_mean_degree(mean_degree);
    fill_threshold(r, out);
    return copy_text(lossynet::to_csv_row(r), csv, cap, needed);
  });
}

lossynet_status lossynet_percolation_mc(const lossynet_model_params* params,
                                        const lossynet_mc_options* options,
                                        lossynet_threshold* out, char* csv, size_t cap,
                                        size_t* needed, lossynet_text** curve) {
  return guarded([&] {
    require(params, "params");
    require(options, "options");
    lossynet::McOptions o;
    o.trials = options->trials;
    o.grid_step = options->grid_step;
    o.seed = options->seed;
    o.threads = options->threads;
    o.criterion = options->full_connectivity ? lossynet::ConnectivityCriterion::full
                                             : lossynet::ConnectivityCriterion::giant_component;
    const auto est = lossynet::estimate_threshold_mc(to_spec(*params), o);
    fill_threshold(est.result, out);
    if (curve) {
      std::ostringstream text;
      text << "removal_probability,connected_fraction\n";
      for (const auto& pt : est.curve) {
        text << lossynet::format_double(pt.removal_probability) << ','
             << lossynet::format_double(pt.connected_fraction) << '\n';
      }
      *curve = make_text(text.str());
    }
    return copy_text(lossynet::to_csv_row(est.result), csv, cap, needed);
  });
}

lossynet_status lossynet_drop_to_removal_rate(double p_d, double* p_l) {
  return guarded([&] {
    require(p_l, "p_l");
    *p_l = lossynet::drop_to_removal_rate(p_d);
    return LOSSYNET_OK;
  });
}

lossynet_status lossynet_admissible_drop_range(double p_c, double* lower, double* upper) {
  return guarded([&] {
    const auto r = lossynet::admissible_drop_range(p_c);
    if (lower) *lower = r.lower;
    if (upper) *upper = r.upper;
    return LOSSYNET_OK;
  });
}

lossynet_status lossynet_min_window(double p_d, double p_c, uint64_t* out) {
  return guarded([&] {
    require(out, "out");
    *out = lossynet::min_window(p_d, p_c);
    return LOSSYNET_OK;
  });
}

lossynet_status lossynet_min_window_for_removal(double p_l, double p_c, uint64_t* out) {
  return guarded([&] {
    require(out, "out");
    *out = lossynet::min_window_for_removal(p_l, p_c);
    return LOSSYNET_OK;
  });
}

lossynet_status lossynet_conservative_window_file(const char* path, double p_c, uint64_t* out,
                                                  double* max_rate) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    lossynet::DropRateSpec spec;
    spec.per_link = lossynet::load_rates_file(path);
    *out = lossynet::conservative_window(spec, p_c);
    if (max_rate) *max_rate = spec.max_rate();
    return LOSSYNET_OK;
  });
}

lossynet_status lossynet_config_default(lossynet_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new lossynet_config{};
    return LOSSYNET_OK;
  });
}

lossynet_status lossynet_config_parse(const char* text, lossynet_config** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new lossynet_config{lossynet::ExperimentConfig::parse(text)};
    return LOSSYNET_OK;
  });
}

lossynet_status lossynet_config_load(const char* path, lossynet_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new lossynet_config{lossynet::ExperimentConfig::load(path)};
    return LOSSYNET_OK;
  });
}

lossynet_status lossynet_config_replication(lossynet_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new lossynet_config{lossynet::replication_config()};
    return LOSSYNET_OK;
  });
}

lossynet_status lossynet_config_set(lossynet_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(value, "value");
    lossynet::ExperimentConfig next = config->config;
    next.set(key, value);
    next.validate();
    config->config = std::move(next);
    return LOSSYNET_OK;
  });
}

lossynet_status lossynet_config_echo(const lossynet_config* config, char* buf, size_t cap,
                                     size_t* needed) {
  return guarded([&] {
    require(config, "config");
    return copy_text(config->config.echo(), buf, cap, needed);
  });
}

lossynet_status lossynet_config_output_dir(const lossynet_config* config, char* buf, size_t cap,
                                           size_t* needed) {
  return guarded([&] {
    require(config, "config");
    return copy_text(config->config.output_dir, buf, cap, needed);
  });
}

void lossynet_config_free(lossynet_config* config) { delete config; }

lossynet_status lossynet_run_execute(const lossynet_config* config, lossynet_run** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    auto run = std::make_unique<lossynet_run>();
    run->config = config->config;
    run->result = lossynet::run_experiment(run->config);
    *out = run.release();
    return LOSSYNET_OK;
  });
}

lossynet_status lossynet_run_summary_get(const lossynet_run* run, lossynet_run_summary* out) {
  return guarded([&] {
    require(run, "run");
    require(out, "out");
    const auto& s = run->result.summary;
    *out = lossynet_run_summary{};
    out->iterations = s.iterations;
    out->termination = static_cast<int>(s.termination);
    out->eta = s.eta;
    out->step_bound = s.step_bound.value_or(std::numeric_limits<double>::quiet_NaN());
    out->final_residual = s.final_residual;
    out->oracle_gap = s.oracle_gap;
    out->max_feasibility_violation = s.max_feasibility_violation;
    out->feasibility_failures = s.feasibility_failures;
    if (s.audit) {
      out->audited = 1;
      out->sliding_connected = s.audit->sliding_connected;
      out->sliding_total = s.audit->sliding_total;
      out->disjoint_connected = s.audit->disjoint_connected;
      out->disjoint_total = s.audit->disjoint_total;
    }
    return LOSSYNET_OK;
  });
}

lossynet_status lossynet_run_summary_text(const lossynet_run* run, lossynet_text** out) {
  return guarded([&] {
    require(run, "run");
    require(out, "out");
    *out = make_text(lossynet::summary_text(run->result.summary, run->config));
    return LOSSYNET_OK;
  });
}

lossynet_status lossynet_run_trace_csv(const lossynet_run* run, lossynet_text** out) {
  return guarded([&] {
    require(run, "run");
    require(out, "out");
    std::ostringstream text;
    lossynet::write_trace_csv(text, run->result.trace);
    *out = make_text(text.str());
    return LOSSYNET_OK;
  });
}

lossynet_status lossynet_run_write(const lossynet_run* run, const char* dir) {
  return guarded([&] {
    require(run, "run");
    require(dir, "dir");
    lossynet::write_outputs(run->result, run->config, dir);
    return LOSSYNET_OK;
  });
}

void lossynet_run_free(lossynet_run* run) { delete run; }

lossynet_status lossynet_sweep(const lossynet_config* config, const char* const* vary,
                               size_t vary_count, unsigned threads, lossynet_text** csv) {
  return guarded([&] {
    require(config, "config");
    require(csv, "csv");
    if (vary_count > 0) require(vary, "vary");
    std::vector<lossynet::SweepAxis> axes;
    for (size_t i = 0; i < vary_count; ++i) {
      require(vary[i], "vary entry");
      axes.push_back(lossynet::parse_sweep_axis(vary[i]));
    }
    *csv = make_text(lossynet::run_sweep(config->config, axes, threads));
    return LOSSYNET_OK;
  });
}

lossynet_status lossynet_replicate(const char* dir, uint64_t max_iters, lossynet_text** report) {
  return guarded([&] {
    require(dir, "dir");
    const auto rep = lossynet::run_replication(
        dir, max_iters ? std::optional<std::uint64_t>(max_iters) : std::nullopt);
    if (report) {
      std::ostringstream text;
      const auto& s = rep.result.summary;
      text << "mean_degree=" << lossynet::format_double(rep.mean_degree) << '\n'
           << "p_c=" << lossynet::format_double(rep.p_c) << '\n'
           << "eta=" << lossynet::format_double(s.eta) << '\n'
           << "eta_bar=" << lossynet::format_double(rep.eta_bar) << '\n'
           << "final_residual=" << lossynet::format_double(s.final_residual) << '\n'
           << "max_feasibility_violation="
           << lossynet::format_double(s.max_feasibility_violation) << '\n';
      if (s.audit) {
        text << "audit_disjoint_connected=" << s.audit->disjoint_connected << '/'
             << s.audit->disjoint_total << '\n';
      }
      text << "bstar_table:\n" << lossynet::bstar_table_csv(rep.table);
      for (const auto& f : rep.files) text << "wrote " << f << '\n';
      *report = make_text(text.str());
    }
    return LOSSYNET_OK;
  });
}

}  // extern "C"
