#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "lossynet/graph.hpp"
#include "lossynet/percolation.hpp"
#include "lossynet/rng.hpp"

namespace lossynet {

enum class DropMode { homogeneous, heterogeneous, scheduled };

std::string_view to_string(DropMode mode);
std::optional<DropMode> parse_drop_mode(std::string_view text);

/// Per-direction packet-drop probabilities over time.
///
/// - homogeneous: every link, every iteration, p_d.
/// - heterogeneous: link e (base-graph edge index) uses per_link[e].
/// - scheduled: time is cut into cycles of rates.size() periods of `period`
///   iterations. At the start of each cycle the rates are put in a random
///   order (Fisher-Yates seeded from `seed` and the cycle index) and each is
///   held for one period.
struct DropSchedule {
  DropMode mode = DropMode::homogeneous;
  double p_d = 0.0;
  std::vector<double> per_link;
  std::vector<double> rates;
  std::uint64_t period = 40;
  std::uint64_t seed = 0;

  static DropSchedule homogeneous(double p_d, std::uint64_t seed = 0);
  static DropSchedule heterogeneous(std::vector<double> per_link, std::uint64_t seed = 0);
  static DropSchedule scheduled(std::vector<double> rates, std::uint64_t period,
                                std::uint64_t seed = 0);
  /// Per-link rates for `base`: links listed in `spec` get their own rate,
  /// the rest the homogeneous value (0 when absent). Throws DomainError for a
  /// listed link that is not in the base graph.
  static DropSchedule from_rate_spec(const WeightedGraph& base, const DropRateSpec& spec,
                                     std::uint64_t seed = 0);

  /// Throws DomainError on a probability outside [0,1], an empty rate list,
  /// a zero period, or a per-link vector whose size is not `edge_count`.
  void validate(std::size_t edge_count) const;
  /// Largest rate the schedule can ever use.
  double max_rate() const;
  /// Rate shared by all links at iteration k. Not defined for heterogeneous.
  double rate_at(std::uint64_t k) const;
  /// Order of `rates` used during cycle c.
  std::vector<double> cycle_order(std::uint64_t cycle) const;
};

/// Active links at iteration k: both directions of every base link are lost
/// independently with the link's current p_d, and the link is dropped if
/// either message is lost. Draws two uniforms per link in edge order.
EdgeMask sample_active_mask(const WeightedGraph& base, const DropSchedule& schedule,
                            std::uint64_t k, Rng& rng);
/// Same draw, returned as a graph carrying the base weights.
WeightedGraph sample_active_links(const WeightedGraph& base, const DropSchedule& schedule,
                                  std::uint64_t k, Rng& rng);

}  // namespace lossynet
