#include "lossynet/drop_model.hpp"

#include <algorithm>
#include <span>

#include "lossynet/errors.hpp"
#include "lossynet/format.hpp"

namespace lossynet {

namespace {

void require_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("drop probability must lie in [0,1], got " + format_double(p));
  }
}

}  // namespace

std::string_view to_string(DropMode mode) {
  switch (mode) {
    case DropMode::homogeneous: return "homogeneous";
    case DropMode::heterogeneous: return "heterogeneous";
    case DropMode::scheduled: return "scheduled";
  }
  return "homogeneous";
}

std::optional<DropMode> parse_drop_mode(std::string_view text) {
  if (text == "homogeneous") return DropMode::homogeneous;
  if (text == "heterogeneous") return DropMode::heterogeneous;
  if (text == "scheduled") return DropMode::scheduled;
  return std::nullopt;
}

DropSchedule DropSchedule::homogeneous(double p_d, std::uint64_t seed) {
  DropSchedule s;
  s.mode = DropMode::homogeneous;
  s.p_d = p_d;
  s.seed = seed;
  return s;
}

DropSchedule DropSchedule::heterogeneous(std::vector<double> per_link, std::uint64_t seed) {
  DropSchedule s;
  s.mode = DropMode::heterogeneous;
  s.per_link = std::move(per_link);
  s.seed = seed;
  return s;
}

DropSchedule DropSchedule::scheduled(std::vector<double> rates, std::uint64_t period,
                                     std::uint64_t seed) {
  DropSchedule s;
  s.mode = DropMode::scheduled;
  s.rates = std::move(rates);
  s.period = period;
  s.seed = seed;
  return s;
}

DropSchedule DropSchedule::from_rate_spec(const WeightedGraph& base, const DropRateSpec& spec,
                                          std::uint64_t seed) {
  spec.validate();
  std::vector<double> per_link(base.edge_count(), spec.homogeneous.value_or(0.0));
  for (const auto& r : spec.per_link) {
    const auto idx = base.edge_index(r.u, r.v);
    if (!idx) {
      throw DomainError("drop rate given for link (" + std::to_string(r.u + 1) + "," +
                        std::to_string(r.v + 1) + ") which is not in the graph");
    }
    per_link[*idx] = r.p_d;
  }
  return heterogeneous(std::move(per_link), seed);
}

void DropSchedule::validate(std::size_t edge_count) const {
  switch (mode) {
    case DropMode::homogeneous:
      require_probability(p_d);
      break;
    case DropMode::heterogeneous:
      if (per_link.size() != edge_count) {
        throw DomainError("per-link drop rates: expected " + std::to_string(edge_count) +
                          " values, got " + std::to_string(per_link.size()));
      }
      for (const double p : per_link) require_probability(p);
      break;
    case DropMode::scheduled:
      if (rates.empty()) throw DomainError("scheduled drop rates: empty rate list");
      if (period == 0) throw DomainError("scheduled drop rates: period must be positive");
      for (const double p : rates) require_probability(p);
      break;
  }
}

double DropSchedule::max_rate() const {
  switch (mode) {
    case DropMode::homogeneous:
      return p_d;
    case DropMode::heterogeneous:
      return per_link.empty() ? 0.0 : *std::max_element(per_link.begin(), per_link.end());
    case DropMode::scheduled:
      return rates.empty() ? 0.0 : *std::max_element(rates.begin(), rates.end());
  }
  return p_d;
}

std::vector<double> DropSchedule::cycle_order(std::uint64_t cycle) const {
  std::vector<double> order = rates;
  Rng rng(derive_seed(seed, cycle));
  rng.shuffle(std::span<double>(order));
  return order;
}

double DropSchedule::rate_at(std::uint64_t k) const {
  switch (mode) {
    case DropMode::homogeneous:
      return p_d;
    case DropMode::scheduled: {
      const std::uint64_t slot = k / period;
      const std::uint64_t cycle = slot / rates.size();
      return cycle_order(cycle)[slot % rates.size()];
    }
    case DropMode::heterogeneous:
      break;
  }
  throw DomainError("heterogeneous schedules have no single rate per iteration");
}

EdgeMask sample_active_mask(const WeightedGraph& base, const DropSchedule& schedule,
                            std::uint64_t k, Rng& rng) {
  const std::size_t m = base.edge_count();
  EdgeMask mask(m);
  const bool per_link = schedule.mode == DropMode::heterogeneous;
  const double shared = per_link ? 0.0 : schedule.rate_at(k);
  for (std::size_t e = 0; e < m; ++e) {
    const double p = per_link ? schedule.per_link[e] : shared;
    // Draw both directions unconditionally so the stream position does not
    // depend on the outcome.
    const bool lost_uv = rng.uniform() < p;
    const bool lost_vu = rng.uniform() < p;
    if (!lost_uv && !lost_vu) mask.set(e);
  }
  return mask;
}

WeightedGraph sample_active_links(const WeightedGraph& base, const DropSchedule& schedule,
                                  std::uint64_t k, Rng& rng) {
  return base.subgraph(sample_active_mask(base, schedule, k, rng));
}

}  // namespace lossynet
