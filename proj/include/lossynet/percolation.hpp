#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lossynet/generators.hpp"
#include "lossynet/graph.hpp"

namespace lossynet {

enum class ThresholdMethod { analytic, monte_carlo };

std::string_view to_string(ThresholdMethod method);

/// Bond-percolation threshold of a network family.
struct PercolationResult {
  double p_c = 0.0;
  ThresholdMethod method = ThresholdMethod::analytic;
  GraphModel model = GraphModel::square_grid;
  std::string param_summary;
  /// Half-width for Monte-Carlo estimates; zero for analytic values.
  double uncertainty = 0.0;
  /// Raw scale-free formula exceeded 1 and was clamped.
  bool clamped = false;
  /// Scale-free with sigma <= 3: the denominator diverges and p_c is 0.
  bool divergent = false;
  std::string note;
};

/// CSV header and row: model,param_summary,p_c,method,uncertainty
std::string percolation_csv_header();
std::string to_csv_row(const PercolationResult& r);

/// Probability that an undirected link is unusable when each direction drops
/// independently with p_d and a link is discarded if either message is lost:
/// 1 - (1 - p_d)^2 = 2 p_d - p_d^2.
double drop_to_removal_rate(double p_d);
/// Inverse of drop_to_removal_rate on [0, 1].
double removal_to_drop_rate(double p_l);

/// Hurwitz zeta sum_{k>=0} (k + a)^-s for s > 1, a > 0, by direct summation
/// of the leading terms plus an Euler-Maclaurin tail. Absolute accuracy
/// better than 1e-10 on the tested range.
double hurwitz_zeta(double s, double a);

/// Table-based thresholds:
///   square grid   0.5
///   Erdos-Renyi   1 / <N>, <N> = p (n - 1)
///   small-world   (-2t - 1 + sqrt(4t^2 + 12t + 1)) / (4t) for m = 1
///   scale-free    zeta(s-1, Nm) / (zeta(s-2, Nm) - zeta(s-1, Nm))
PercolationResult bond_threshold(const GraphModelSpec& model);
/// Erdos-Renyi threshold from a mean degree, e.g. measured on a concrete graph.
PercolationResult er_threshold_from_mean_degree(double mean_degree);

/// Smallest B >= 0 with (2 p_d - p_d^2)^(B+1) < p_c.
/// Throws DomainError for p_d outside [0,1] or p_c outside (0,1], and
/// NumericError for p_d = 1 where no finite window exists.
std::uint64_t min_window(double p_d, double p_c);
/// Same inequality stated on the link removal rate: smallest B with p_l^(B+1) < p_c.
std::uint64_t min_window_for_removal(double p_l, double p_c);

struct DropRange {
  double lower = 0.0;
  double upper = 1.0;
};

/// (1 - sqrt(1 - p_c), 1). Below `lower` every single iteration is connected
/// with probability 1; inside the range a window B* is needed.
DropRange admissible_drop_range(double p_c);

struct LinkDropRate {
  std::size_t u = 0;
  std::size_t v = 0;
  double p_d = 0.0;
};

/// Packet-drop rates: one homogeneous value and/or per-link values.
struct DropRateSpec {
  std::optional<double> homogeneous;
  std::vector<LinkDropRate> per_link;

  bool empty() const { return !homogeneous && per_link.empty(); }
  /// Largest stored rate. Throws DomainError when empty.
  double max_rate() const;
  void validate() const;
};

/// min_window evaluated at the largest stored rate.
std::uint64_t conservative_window(const DropRateSpec& rates, double p_c);

/// Per-link rates file: one `i j p` line per link (1-based), '#' comments.
std::vector<LinkDropRate> load_rates_file(const std::string& path);

enum class ConnectivityCriterion {
  /// Largest component holds at least half of the nodes.
  giant_component,
  /// Every node reachable from every other.
  full,
};

struct McOptions {
  std::size_t trials = 200;
  double grid_step = 0.02;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  ConnectivityCriterion criterion = ConnectivityCriterion::giant_component;
};

struct McCurvePoint {
  double removal_probability = 0.0;
  double connected_fraction = 0.0;
};

struct McThresholdEstimate {
  PercolationResult result;
  std::vector<McCurvePoint> curve;
};

/// Sweeps the link-removal probability over {0, step, 2 step, ..., <= 1}. At
/// each point `trials` fresh graphs are drawn, every link is removed
/// independently, and the connectivity criterion is evaluated. The reported
/// p_c is the smallest grid point whose connected fraction is below 0.5 (1 if
/// the curve never crosses). `uncertainty` is the worst-case 95% binomial
/// half-width of one curve point, 0.98 / sqrt(trials).
///
/// Every (point, trial) pair uses its own RNG stream derived from `seed`, so
/// results are bit-identical for any thread count.
McThresholdEstimate estimate_threshold_mc(const GraphModelSpec& model, const McOptions& options);

}  // namespace lossynet
