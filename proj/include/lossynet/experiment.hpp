#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lossynet/config.hpp"
#include "lossynet/dynamics.hpp"
#include "lossynet/simulator.hpp"
#include "lossynet/spectral.hpp"

namespace lossynet {

/// Everything derived from a config before the first iteration.
struct PreparedRun {
  RunConfig run;
  /// Start box actually used.
  Box init_box;
  /// State range behind the curvature and sector constants.
  Interval domain;
  /// Absent when the base graph is disconnected.
  std::optional<SpectralSummary> spectrum;
  StepBoundInputs bound_inputs;
  /// Absent when the spectrum is.
  std::optional<double> step_bound;
};

/// Builds graph, weights, objectives, maps, drops and step size. Generated
/// graphs get weights from [weights]; an edge-list file keeps its own.
/// Seeds for the graph, weights, objectives, start and drops are split from
/// the top-level seed. Throws ConfigError.
PreparedRun prepare_run(const ExperimentConfig& config);

struct RunSummary {
  Termination termination = Termination::max_iters;
  std::uint64_t iterations = 0;
  double eta = 0.0;
  std::optional<double> step_bound;
  std::optional<SpectralSummary> spectrum;
  double final_cost = 0.0;
  double final_residual = 0.0;
  double optimal_cost = 0.0;
  double phi_star = 0.0;
  /// max_i |x_i - x_i*| at the last record.
  double oracle_gap = 0.0;
  double max_feasibility_violation = 0.0;
  std::size_t feasibility_failures = 0;
  std::optional<WindowAudit> audit;
};

struct ExperimentResult {
  PreparedRun prepared;
  RunTrace trace;
  RunSummary summary;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

/// key=value lines followed by "[config]" and the config echo.
std::string summary_text(const RunSummary& summary, const ExperimentConfig& config);

/// Writes the trace CSV (+ ".meta" sidecar), the summary and, when
/// configured, the state CSV into `dir`. Returns the paths written.
std::vector<std::string> write_outputs(const ExperimentResult& result,
                                       const ExperimentConfig& config, const std::string& dir);

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

/// "section.key=v1,v2,...". An empty list is allowed.
SweepAxis parse_sweep_axis(std::string_view text);

/// Runs the Cartesian product of the axes (first axis outermost) on up to
/// `threads` workers and returns CSV with one row per combination, in
/// product order. Unknown keys raise ConfigError listing the valid ones.
std::string run_sweep(const ExperimentConfig& base, std::span<const SweepAxis> axes,
                      unsigned threads);

}  // namespace lossynet
