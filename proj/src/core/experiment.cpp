#include "lossynet/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "lossynet/edge_list.hpp"
#include "lossynet/errors.hpp"
#include "lossynet/format.hpp"
#include "lossynet/generators.hpp"
#include "lossynet/kkt_oracle.hpp"
#include "lossynet/percolation.hpp"
#include "lossynet/rng.hpp"

namespace lossynet {

namespace {

// Counters for derive_seed(config.seed, .).
enum SeedStream : std::uint64_t {
  kGraphSeed = 1,
  kWeightSeed = 2,
  kObjectiveSeed = 3,
  kStartSeed = 4,
  kDropSeed = 5,
};

WeightedGraph build_graph(const ExperimentConfig& c) {
  if (!c.graph_file.empty()) {
    try {
      return load_edge_list(c.graph_file);
    } catch (const Error& e) {
      throw ConfigError("graph", "file", e.what());
    }
  }
  GraphModelSpec spec = c.graph;
  spec.seed = c.graph_seed.value_or(derive_seed(c.seed, kGraphSeed));
  const WeightedGraph g = generate(spec);
  return assign_weights(g, c.weight_low, c.weight_high, derive_seed(c.seed, kWeightSeed));
}

DropSchedule build_drops(const ExperimentConfig& c, const WeightedGraph& g) {
  const std::uint64_t seed = derive_seed(c.seed, kDropSeed);
  switch (c.drop_mode) {
    case DropMode::homogeneous:
      return DropSchedule::homogeneous(c.p_d, seed);
    case DropMode::scheduled:
      return DropSchedule::scheduled(c.rates, c.period, seed);
    case DropMode::heterogeneous:
      break;
  }
  try {
    DropRateSpec spec;
    spec.homogeneous = c.p_d;
    spec.per_link = load_rates_file(c.rates_file);
    return DropSchedule::from_rate_spec(g, spec, seed);
  } catch (const Error& e) {
    throw ConfigError("drops", "rates_file", e.what());
  }
}

double max_abs_gradient(std::span<const LocalObjective> objs, const Interval& dom) {
  double m = 0.0;
  for (const auto& f : objs) {
    m = std::max({m, std::abs(f.gradient(dom.lower)), std::abs(f.gradient(dom.upper))});
  }
  return m;
}

std::string optional_text(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

}  // namespace

PreparedRun prepare_run(const ExperimentConfig& config) {
  config.validate();
  PreparedRun p;
  RunConfig& r = p.run;
  r.graph = build_graph(config);
  const std::size_t n = r.graph.node_count();
  if (n == 0) throw ConfigError("graph", "n", "graph has no nodes");

  r.objectives = random_objectives(n, config.objective_kind, config.ranges, config.box,
                                   config.gamma, derive_seed(config.seed, kObjectiveSeed));
  r.g_n = config.g_n;
  r.g_l = config.g_l;
  r.demand = config.demand;
  r.max_iters = config.max_iters;
  r.dispersion_tol = config.dispersion_tol;
  r.feasibility_tol = config.feasibility_tol;
  r.audit_window = config.audit_window;
  r.record_states = !config.states_file.empty();
  r.seed = derive_seed(config.seed, kStartSeed);
  r.drops = build_drops(config, r.graph);

  const double share = config.demand / static_cast<double>(n);
  p.init_box = config.init_box ? *config.init_box
                               : config.box.value_or(Box{share, share});
  const double count = static_cast<double>(n);
  if (count * p.init_box.lower > config.demand || count * p.init_box.upper < config.demand) {
    throw ConfigError("dynamics", "init_box", "no start in the box sums to the demand");
  }
  r.init_boxes.assign(n, p.init_box);

  if (config.domain) {
    p.domain = *config.domain;
  } else {
    // Hull of the start box and the optimum, which a descending run stays near.
    const KktSolution opt = kkt_oracle(r.objectives, config.demand);
    const auto [lo, hi] = std::minmax_element(opt.x_star.begin(), opt.x_star.end());
    p.domain = {std::min(p.init_box.lower, *lo), std::max(p.init_box.upper, *hi)};
    if (!(p.domain.lower < p.domain.upper)) {
      p.domain = {p.domain.lower - 1.0, p.domain.upper + 1.0};
    }
  }

  const double grad_max = std::max(max_abs_gradient(r.objectives, p.domain), 1e-12);
  StepBoundInputs& in = p.bound_inputs;
  in.u = curvature_bound(r.objectives, p.domain.lower, p.domain.upper);
  in.window = config.audit_window.value_or(0);
  std::optional<std::string> no_bound;
  try {
    const SectorBounds link = sector_bounds(r.g_l, grad_max);
    const double message_max = std::max(std::abs(r.g_l(grad_max)), std::abs(r.g_l(-grad_max)));
    const SectorBounds node = sector_bounds(r.g_n, std::max(2.0 * message_max, 1e-12));
    in.kappa_n = node.kappa;
    in.upper_n = node.upper;
    in.kappa_l = link.kappa;
    in.upper_l = link.upper;
  } catch (const DomainError& e) {
    // A map without a sector bound (e.g. the uniform quantizer) just has no
    // step bound; an explicit eta still runs.
    no_bound = e.what();
  }
  if (is_connected(r.graph) && n >= 2) {
    p.spectrum = spectral_bounds(r.graph);
    in.lambda2 = p.spectrum->lambda2;
    in.lambda_n = p.spectrum->lambda_n;
    if (!no_bound && in.kappa_n > 0.0 && in.kappa_l > 0.0) p.step_bound = step_bound(in);
  } else {
    no_bound = "auto step size needs a connected graph";
  }

  if (config.eta) {
    r.eta = *config.eta;
  } else {
    if (!p.step_bound || !(*p.step_bound > 0.0)) {
      throw ConfigError("dynamics", "eta",
                        no_bound.value_or("auto step size needs positive, finite sector bounds"));
    }
    r.eta = config.eta_scale * *p.step_bound;
  }
  return p;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  ExperimentResult out;
  out.prepared = prepare_run(config);
  out.trace = run(out.prepared.run);
  const RunTrace& t = out.trace;
  RunSummary& s = out.summary;
  const TraceRecord& last = t.records.back();
  s.termination = t.termination;
  s.iterations = last.k;
  s.eta = out.prepared.run.eta;
  s.step_bound = out.prepared.step_bound;
  s.spectrum = out.prepared.spectrum;
  s.final_cost = last.cost;
  s.final_residual = last.residual;
  s.optimal_cost = t.optimal_cost;
  s.phi_star = t.oracle.phi_star;
  for (std::size_t i = 0; i < t.final_state.size(); ++i) {
    const double gap = std::abs(t.final_state[i] - t.oracle.x_star[i]);
    if (std::isnan(gap) || gap > s.oracle_gap) s.oracle_gap = gap;
  }
  s.max_feasibility_violation = t.max_feasibility_violation;
  s.feasibility_failures = t.feasibility_failures;
  if (config.audit_window && t.masks.size() >= *config.audit_window + 1) {
    s.audit = window_connectivity_audit(t, *config.audit_window);
  }
  return out;
}

std::string summary_text(const RunSummary& s, const ExperimentConfig& config) {
  std::ostringstream out;
  out << "termination=" << to_string(s.termination) << '\n'
      << "iterations=" << s.iterations << '\n'
      << "eta=" << format_double(s.eta) << '\n'
      << "step_bound=" << optional_text(s.step_bound) << '\n'
      << "lambda2=" << (s.spectrum ? format_double(s.spectrum->lambda2) : "") << '\n'
      << "lambda_n=" << (s.spectrum ? format_double(s.spectrum->lambda_n) : "") << '\n'
      << "final_cost=" << format_double(s.final_cost) << '\n'
      << "optimal_cost=" << format_double(s.optimal_cost) << '\n'
      << "final_residual=" << format_double(s.final_residual) << '\n'
      << "phi_star=" << format_double(s.phi_star) << '\n'
      << "oracle_gap=" << format_double(s.oracle_gap) << '\n'
      << "max_feasibility_violation=" << format_double(s.max_feasibility_violation) << '\n'
      << "feasibility_failures=" << s.feasibility_failures << '\n';
  if (s.audit) {
    const WindowAudit& a = *s.audit;
    out << "audit_window=" << a.window << '\n'
        << "audit_sliding_connected=" << a.sliding_connected << '/' << a.sliding_total << '\n'
        << "audit_disjoint_connected=" << a.disjoint_connected << '/' << a.disjoint_total << '\n'
        << "audit_minimal_window="
        << (a.minimal_window ? std::to_string(*a.minimal_window) : std::string()) << '\n';
  }
  out << "[config]\n" << config.echo();
  return out.str();
}

std::vector<std::string> write_outputs(const ExperimentResult& result,
                                       const ExperimentConfig& config, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir.empty() ? "." : dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
  const fs::path base = dir.empty() ? fs::path(".") : fs::path(dir);
  std::vector<std::string> written;
  auto open = [&](const std::string& name) {
    const std::string path = (base / name).string();
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    written.push_back(path);
    return out;
  };
  {
    auto out = open(config.trace_file);
    write_trace_csv(out, result.trace);
  }
  {
    auto out = open(config.trace_file + ".meta");
    write_trace_meta(out, result.trace, config.echo());
  }
  {
    auto out = open(config.summary_file);
    out << summary_text(result.summary, config);
  }
  if (!config.states_file.empty()) {
    auto out = open(config.states_file);
    write_states_csv(out, result.trace);
  }
  return written;
}

SweepAxis parse_sweep_axis(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("", std::string(text), "expected key=v1,v2,...");
  }
  SweepAxis axis;
  axis.key = std::string(trim(text.substr(0, eq)));
  const auto list = trim(text.substr(eq + 1));
  std::size_t pos = 0;
  while (!list.empty() && pos <= list.size()) {
    const std::size_t end = std::min(list.find(',', pos), list.size());
    const auto item = trim(list.substr(pos, end - pos));
    if (item.empty()) throw ConfigError("", axis.key, "empty value in sweep list");
    axis.values.emplace_back(item);
    pos = end + 1;
  }
  return axis;
}

std::string run_sweep(const ExperimentConfig& base, std::span<const SweepAxis> axes,
                      unsigned threads) {
  const auto valid = ExperimentConfig::keys();
  for (const auto& axis : axes) {
    if (std::find(valid.begin(), valid.end(), axis.key) == valid.end()) {
      std::string list;
      for (const auto& k : valid) list += (list.empty() ? "" : ", ") + k;
      throw ConfigError("", axis.key, "unknown sweep key; valid keys: " + list);
    }
  }
  std::size_t total = axes.empty() ? 0 : 1;
  for (const auto& axis : axes) total *= axis.values.size();

  // Build every combination first so config errors surface before any run.
  std::vector<ExperimentConfig> configs;
  std::vector<std::vector<std::string>> labels;
  configs.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    ExperimentConfig c = base;
    std::vector<std::string> row;
    std::size_t rest = idx;
    std::vector<std::size_t> digits(axes.size());
    for (std::size_t a = axes.size(); a-- > 0;) {
      digits[a] = rest % axes[a].values.size();
      rest /= axes[a].values.size();
    }
    for (std::size_t a = 0; a < axes.size(); ++a) {
      c.set(axes[a].key, axes[a].values[digits[a]]);
      row.push_back(axes[a].values[digits[a]]);
    }
    c.validate();
    configs.push_back(std::move(c));
    labels.push_back(std::move(row));
  }

  std::vector<std::string> rows(total);
  std::vector<std::exception_ptr> errors(total);
  auto work = [&](std::size_t idx) {
    try {
      const ExperimentResult r = run_experiment(configs[idx]);
      const RunSummary& s = r.summary;
      std::ostringstream line;
      line << format_double(s.eta) << ',' << optional_text(s.step_bound) << ','
           << to_string(s.termination) << ',' << s.iterations << ','
           << format_double(s.final_residual) << ',' << format_double(s.oracle_gap) << ','
           << format_double(s.max_feasibility_violation);
      rows[idx] = line.str();
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  };
  const unsigned workers = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(total)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < total; ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < total; i += workers) work(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  // Report the first failing row in product order, whatever finished first.
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::ostringstream out;
  for (const auto& axis : axes) out << axis.key << ',';
  out << "eta,step_bound,termination,iterations,final_residual,oracle_gap,"
         "max_feasibility_violation\n";
  for (std::size_t i = 0; i < total; ++i) {
    for (const auto& v : labels[i]) out << v << ',';
    out << rows[i] << '\n';
  }
  return out.str();
}

}  // namespace lossynet
