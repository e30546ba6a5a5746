#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lossynet/drop_model.hpp"
#include "lossynet/graph.hpp"
#include "lossynet/kkt_oracle.hpp"
#include "lossynet/nonlinear_map.hpp"
#include "lossynet/objective.hpp"

namespace lossynet {

struct RunConfig {
  WeightedGraph graph;
  std::vector<LocalObjective> objectives;
  NonlinearMap g_n;
  NonlinearMap g_l;
  double eta = 0.0;
  double demand = 0.0;
  /// Boxes for the random feasible start, one per node.
  std::vector<Box> init_boxes;
  /// Explicit start; must sum to `demand`. Overrides init_boxes.
  std::optional<std::vector<double>> initial_state;
  DropSchedule drops;
  std::uint64_t max_iters = 1000;
  /// Stop early once the gradient dispersion falls below this. 0 disables.
  double dispersion_tol = 0.0;
  /// Records with |sum x - b| above feasibility_tol max(1, |b|) are counted
  /// as feasibility violations in the trace.
  double feasibility_tol = 1e-9;
  /// When set, active-link masks are kept and every record from k = B on
  /// carries the connectivity of the union over iterations k-B..k.
  std::optional<std::uint64_t> audit_window;
  bool record_states = false;
  /// Seeds the feasible start. Drop sampling uses drops.seed.
  std::uint64_t seed = 0;

  /// Throws DomainError on inconsistent input.
  void validate() const;
};

struct TraceRecord {
  std::uint64_t k = 0;
  double cost = 0.0;
  /// F(x(k)) - F(x*).
  double residual = 0.0;
  double sum_x = 0.0;
  /// Links active during the step k -> k+1; absent on the last record.
  std::optional<std::size_t> active_edges;
  /// Union of the active sets of steps k-B..k is connected; absent for k < B
  /// and on the last record.
  std::optional<bool> window_connected;
};

enum class Termination { max_iters, dispersion, diverged };

std::string_view to_string(Termination t);

struct RunTrace {
  std::vector<TraceRecord> records;
  std::vector<double> final_state;
  Termination termination = Termination::max_iters;
  KktSolution oracle;
  double optimal_cost = 0.0;
  /// max_k |sum x(k) - b|.
  double max_feasibility_violation = 0.0;
  /// Records whose violation exceeds the configured tolerance.
  std::size_t feasibility_failures = 0;
  double demand = 0.0;
  std::optional<std::uint64_t> audit_window;
  /// Active-link mask of every step, when auditing.
  std::vector<EdgeMask> masks;
  /// x(k) for every record, when record_states is set.
  std::vector<std::vector<double>> states;
  WeightedGraph base_graph;
};

/// Random feasible start, then per iteration: sample active links, apply the
/// update, record. Deterministic given the config. A ContractViolation from
/// the update is rethrown with the iteration index.
RunTrace run(const RunConfig& config);

struct WindowAudit {
  std::uint64_t window = 0;
  std::size_t sliding_total = 0;
  std::size_t sliding_connected = 0;
  std::size_t disjoint_total = 0;
  std::size_t disjoint_connected = 0;
  /// Smallest B for which every sliding window of the trace is connected;
  /// absent when even the whole trace is not.
  std::optional<std::uint64_t> minimal_window;

  bool all_sliding_connected() const { return sliding_connected == sliding_total; }
  bool all_disjoint_connected() const { return disjoint_connected == disjoint_total; }
};

/// Windows are runs of B+1 consecutive steps: sliding windows start at every
/// step, disjoint ones at multiples of B+1 (only complete windows count).
/// Throws DomainError when the trace has no masks or fewer than B+1 steps.
WindowAudit window_connectivity_audit(const RunTrace& trace, std::uint64_t window);
/// Same on a bare mask sequence over `base`.
WindowAudit window_connectivity_audit(const WeightedGraph& base,
                                      const std::vector<EdgeMask>& masks, std::uint64_t window);

/// k,F,residual,sum_x,active_edges,window_connected
void write_trace_csv(std::ostream& out, const RunTrace& trace);
/// k,x1,...,xn (requires recorded states).
void write_states_csv(std::ostream& out, const RunTrace& trace);
/// key=value lines: termination, demand, oracle values, feasibility, and
/// the given config echo after a "[config]" marker.
void write_trace_meta(std::ostream& out, const RunTrace& trace, std::string_view config_echo);

}  // namespace lossynet
