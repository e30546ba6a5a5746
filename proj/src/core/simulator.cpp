#include "lossynet/simulator.hpp"

#include <cmath>
#include <ostream>

#include "lossynet/dynamics.hpp"
#include "lossynet/errors.hpp"
#include "lossynet/format.hpp"

namespace lossynet {

namespace {

// Union of a sliding run of masks, kept as per-edge presence counts.
class SlidingUnion {
 public:
  explicit SlidingUnion(const WeightedGraph& base) : base_(base), counts_(base.edge_count(), 0) {}

  void add(const EdgeMask& m) { bump(m, +1); }
  void remove(const EdgeMask& m) { bump(m, -1); }

  bool connected() const {
    const std::size_t n = base_.node_count();
    if (n == 0) return false;
    DisjointSets sets(n);
    const auto edges = base_.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (counts_[e] > 0) sets.unite(edges[e].u, edges[e].v);
    }
    return sets.components() == 1;
  }

 private:
  void bump(const EdgeMask& m, int delta) {
    for (std::size_t e = 0; e < counts_.size(); ++e) {
      if (m.test(e)) counts_[e] += delta;
    }
  }

  const WeightedGraph& base_;
  std::vector<int> counts_;
};

bool all_windows_connected(const WeightedGraph& base, const std::vector<EdgeMask>& masks,
                           std::uint64_t window) {
  const std::size_t len = window + 1;
  SlidingUnion u(base);
  for (std::size_t k = 0; k < masks.size(); ++k) {
    u.add(masks[k]);
    if (k >= len) u.remove(masks[k - len]);
    if (k + 1 >= len && !u.connected()) return false;
  }
  return true;
}

double sum_of(const std::vector<double>& x) {
  double s = 0.0;
  for (const double v : x) s += v;
  return s;
}

bool all_finite(const std::vector<double>& x) {
  for (const double v : x) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::max_iters: return "max_iters";
    case Termination::dispersion: return "dispersion";
    case Termination::diverged: return "diverged";
  }
  return "max_iters";
}

void RunConfig::validate() const {
  const std::size_t n = graph.node_count();
  if (n == 0) throw DomainError("run needs a non-empty graph");
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw DomainError("step size eta must be positive, got " + format_double(eta));
  }
  if (max_iters < 1) throw DomainError("max_iters must be at least 1");
  if (objectives.size() != n) {
    throw DomainError("expected " + std::to_string(n) + " objectives, got " +
                      std::to_string(objectives.size()));
  }
  for (const auto& f : objectives) f.validate();
  g_n.validate();
  g_l.validate();
  drops.validate(graph.edge_count());
  if (!(feasibility_tol >= 0.0)) throw DomainError("feasibility tolerance must be non-negative");
  if (!(dispersion_tol >= 0.0)) throw DomainError("dispersion tolerance must be non-negative");
  if (initial_state) {
    if (initial_state->size() != n) throw DomainError("initial state has the wrong size");
    const double gap = std::abs(sum_of(*initial_state) - demand);
    if (gap > feasibility_tol * std::max(1.0, std::abs(demand))) {
      throw DomainError("initial state does not sum to the demand");
    }
  } else if (init_boxes.size() != n) {
    throw DomainError("expected " + std::to_string(n) + " initialization boxes, got " +
                      std::to_string(init_boxes.size()));
  }
}

RunTrace run(const RunConfig& config) {
  config.validate();
  const std::size_t n = config.graph.node_count();
  RunTrace trace;
  trace.demand = config.demand;
  trace.audit_window = config.audit_window;
  trace.base_graph = config.graph;
  trace.oracle = kkt_oracle(config.objectives, config.demand);
  trace.optimal_cost = total_cost(config.objectives, trace.oracle.x_star);

  std::vector<double> x = config.initial_state
                              ? *config.initial_state
                              : feasible_init(n, config.demand, config.init_boxes, config.seed);
  Rng drop_rng(config.drops.seed);
  std::vector<double> scratch;
  const double feas_limit = config.feasibility_tol * std::max(1.0, std::abs(config.demand));
  const bool auditing = config.audit_window.has_value();
  const std::uint64_t window = config.audit_window.value_or(0);
  SlidingUnion window_union(config.graph);

  auto record = [&](std::uint64_t k) {
    TraceRecord r;
    r.k = k;
    r.cost = total_cost(config.objectives, x);
    r.residual = r.cost - trace.optimal_cost;
    r.sum_x = sum_of(x);
    const double violation = std::abs(r.sum_x - config.demand);
    if (!(violation <= feas_limit)) ++trace.feasibility_failures;
    if (std::isnan(violation) || violation > trace.max_feasibility_violation) {
      trace.max_feasibility_violation = violation;
    }
    if (config.record_states) trace.states.push_back(x);
    trace.records.push_back(r);
  };

  for (std::uint64_t k = 0;; ++k) {
    record(k);
    if (!all_finite(x)) {
      trace.termination = Termination::diverged;
      break;
    }
    if (config.dispersion_tol > 0.0 &&
        dispersion(gradients(config.objectives, x)) < config.dispersion_tol) {
      trace.termination = Termination::dispersion;
      break;
    }
    if (k == config.max_iters) {
      trace.termination = Termination::max_iters;
      break;
    }
    EdgeMask mask = sample_active_mask(config.graph, config.drops, k, drop_rng);
    TraceRecord& current = trace.records.back();
    current.active_edges = mask.count();
    if (auditing) {
      window_union.add(mask);
      if (k > window) window_union.remove(trace.masks[k - window - 1]);
      if (k >= window) current.window_connected = window_union.connected();
    }
    try {
      apply_update(x, config.graph, mask, config.objectives, config.g_n, config.g_l, config.eta,
                   scratch);
    } catch (const ContractViolation& e) {
      throw ContractViolation("iteration " + std::to_string(k) + ": " + e.what());
    }
    if (auditing) trace.masks.push_back(std::move(mask));
  }
  trace.final_state = std::move(x);
  return trace;
}

WindowAudit window_connectivity_audit(const WeightedGraph& base,
                                      const std::vector<EdgeMask>& masks, std::uint64_t window) {
  if (masks.empty()) {
    throw DomainError("trace has no active-link sets; enable auditing to record them");
  }
  if (window + 1 > masks.size()) {
    throw DomainError("window B=" + std::to_string(window) + " needs " +
                      std::to_string(window + 1) + " steps but the trace has " +
                      std::to_string(masks.size()));
  }
  for (const auto& m : masks) {
    if (m.size() != base.edge_count()) throw DomainError("edge mask does not match graph");
  }
  WindowAudit audit;
  audit.window = window;
  const std::size_t len = window + 1;

  SlidingUnion sliding(base);
  for (std::size_t k = 0; k < masks.size(); ++k) {
    sliding.add(masks[k]);
    if (k >= len) sliding.remove(masks[k - len]);
    if (k + 1 >= len) {
      ++audit.sliding_total;
      if (sliding.connected()) ++audit.sliding_connected;
    }
  }
  for (std::size_t start = 0; start + len <= masks.size(); start += len) {
    SlidingUnion block(base);
    for (std::size_t k = start; k < start + len; ++k) block.add(masks[k]);
    ++audit.disjoint_total;
    if (block.connected()) ++audit.disjoint_connected;
  }

  // "All sliding windows connected" is monotone in B, so bisect.
  const std::uint64_t longest = masks.size() - 1;
  if (all_windows_connected(base, masks, longest)) {
    std::uint64_t lo = 0;
    std::uint64_t hi = longest;
    while (lo < hi) {
      const std::uint64_t mid = lo + (hi - lo) / 2;
      if (all_windows_connected(base, masks, mid)) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    audit.minimal_window = lo;
  }
  return audit;
}

WindowAudit window_connectivity_audit(const RunTrace& trace, std::uint64_t window) {
  return window_connectivity_audit(trace.base_graph, trace.masks, window);
}

void write_trace_csv(std::ostream& out, const RunTrace& trace) {
  out << "k,F,residual,sum_x,active_edges,window_connected\n";
  for (const auto& r : trace.records) {
    out << r.k << ',' << format_double(r.cost) << ',' << format_double(r.residual) << ','
        << format_double(r.sum_x) << ',';
    if (r.active_edges) out << *r.active_edges;
    out << ',';
    if (r.window_connected) out << (*r.window_connected ? 1 : 0);
    out << '\n';
  }
}

void write_states_csv(std::ostream& out, const RunTrace& trace) {
  if (trace.states.size() != trace.records.size()) {
    throw DomainError("trace has no recorded states; enable record_states");
  }
  const std::size_t n = trace.final_state.size();
  out << 'k';
  for (std::size_t i = 0; i < n; ++i) out << ",x" << (i + 1);
  out << '\n';
  for (std::size_t r = 0; r < trace.records.size(); ++r) {
    out << trace.records[r].k;
    for (const double v : trace.states[r]) out << ',' << format_double(v);
    out << '\n';
  }
}

void write_trace_meta(std::ostream& out, const RunTrace& trace, std::string_view config_echo) {
  const auto& last = trace.records.back();
  out << "termination=" << to_string(trace.termination) << '\n'
      << "iterations=" << last.k << '\n'
      << "demand=" << format_double(trace.demand) << '\n'
      << "final_cost=" << format_double(last.cost) << '\n'
      << "final_residual=" << format_double(last.residual) << '\n'
      << "optimal_cost=" << format_double(trace.optimal_cost) << '\n'
      << "phi_star=" << format_double(trace.oracle.phi_star) << '\n'
      << "max_feasibility_violation=" << format_double(trace.max_feasibility_violation) << '\n'
      << "feasibility_failures=" << trace.feasibility_failures << '\n';
  if (trace.audit_window) out << "audit_window=" << *trace.audit_window << '\n';
  out << "[config]\n" << config_echo;
  if (!config_echo.empty() && config_echo.back() != '\n') out << '\n';
}

}  // namespace lossynet
