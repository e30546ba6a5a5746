#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lossynet/drop_model.hpp"
#include "lossynet/generators.hpp"
#include "lossynet/nonlinear_map.hpp"
#include "lossynet/objective.hpp"

namespace lossynet {

// Experiment file format. Line oriented; '#' starts a comment.
//
//   seed = 1
//
//   [graph]
//   model = er              er | sw | sf | grid
//   n = 20
//   p = 0.3
//   file = net.txt          edge list; replaces the generator when set
//
//   [objectives]
//   kind = quad-logexp
//   a = 0.5 1.5             ranges are "low high"
//   box = 2 7               or "none"
//
//   [drops]
//   mode = scheduled
//   rates = 0.4 0.46 0.54   lists are whitespace separated
//
// Every key has a default; `echo()` lists them all. Sweeps address keys as
// "section.key", and the top-level seed as "seed".

struct ExperimentConfig {
  std::uint64_t seed = 1;

  // [graph]
  GraphModelSpec graph = GraphModelSpec::erdos_renyi(20, 0.3);
  /// Generator seed; derived from `seed` when absent.
  std::optional<std::uint64_t> graph_seed;
  std::string graph_file;

  // [weights]
  double weight_low = 1.0;
  double weight_high = 1.0;

  // [objectives]
  ObjectiveKind objective_kind = ObjectiveKind::quadratic;
  ObjectiveRanges ranges;
  std::optional<Box> box;
  double gamma = 1.0;

  // [maps]
  NonlinearMap g_n;
  NonlinearMap g_l;

  // [dynamics]
  /// Absent means "auto": eta_scale times the step bound of the base graph
  /// for the audit window.
  std::optional<double> eta;
  double eta_scale = 0.9;
  std::uint64_t max_iters = 1000;
  double dispersion_tol = 0.0;
  double feasibility_tol = 1e-9;
  double demand = 100.0;
  /// Box for the random start; defaults to the objective box, and to the
  /// even split b/n when neither is set.
  std::optional<Box> init_box;
  /// State range used for the curvature bound and sector constants; defaults
  /// to the start box.
  std::optional<Interval> domain;

  // [drops]
  DropMode drop_mode = DropMode::homogeneous;
  double p_d = 0.0;
  std::vector<double> rates;
  std::uint64_t period = 40;
  std::string rates_file;

  // [audit]
  std::optional<std::uint64_t> audit_window;

  // [output]
  std::string output_dir;
  std::string trace_file = "trace.csv";
  std::string summary_file = "summary.txt";
  /// Empty disables the per-iteration state dump.
  std::string states_file;

  /// Throws ConfigError naming the section and key of the first problem.
  static ExperimentConfig parse(std::string_view text);
  static ExperimentConfig load(const std::string& path);

  /// Canonical text listing every key; parse(echo()) == *this.
  std::string echo() const;
  /// Sets one key ("section.key" or "seed") from its text form.
  void set(std::string_view key, std::string_view value);
  /// All keys accepted by set(), in echo order.
  static std::vector<std::string> keys();
  /// Cross-field checks; throws ConfigError.
  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

}  // namespace lossynet
