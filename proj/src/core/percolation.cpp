#include "lossynet/percolation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "lossynet/errors.hpp"
#include "lossynet/format.hpp"
#include "lossynet/rng.hpp"

namespace lossynet {

namespace {

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError(std::string(what) + " must lie in [0,1], got " + format_double(p));
  }
}

void require_threshold(double p_c) {
  if (!(p_c > 0.0 && p_c <= 1.0)) {
    throw DomainError("percolation threshold must lie in (0,1], got " + format_double(p_c));
  }
}

// B_{2j} / (2j)! for j = 1..10.
constexpr std::array<double, 10> kBernoulliOverFactorial = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
    -3617.0 / 510.0 / 20922789888000.0,
    43867.0 / 798.0 / 6402373705728000.0,
    -174611.0 / 330.0 / 2432902008176640000.0,
};

}  // namespace

std::string_view to_string(ThresholdMethod method) {
  return method == ThresholdMethod::analytic ? "analytic" : "monte-carlo";
}

std::string percolation_csv_header() { return "model,param_summary,p_c,method,uncertainty"; }

std::string to_csv_row(const PercolationResult& r) {
  std::ostringstream out;
  out << to_string(r.model) << ',' << r.param_summary << ',' << format_double(r.p_c) << ','
      << to_string(r.method) << ',' << format_double(r.uncertainty);
  return out.str();
}

double drop_to_removal_rate(double p_d) {
  require_probability(p_d, "packet drop rate");
  return 2.0 * p_d - p_d * p_d;
}

double removal_to_drop_rate(double p_l) {
  require_probability(p_l, "link removal rate");
  return 1.0 - std::sqrt(1.0 - p_l);
}

double hurwitz_zeta(double s, double a) {
  if (!(s > 1.0)) throw DomainError("hurwitz_zeta: s must exceed 1 (series diverges)");
  if (!(a > 0.0)) throw DomainError("hurwitz_zeta: a must be positive");
  // Sum enough leading terms that the Euler-Maclaurin remainder, which scales
  // like (s)_{2M} / (2 pi (N + a))^{2M}, is far below 1e-10.
  const auto leading = static_cast<std::size_t>(std::max(20.0, std::ceil(s)));
  double sum = 0.0;
  for (std::size_t k = 0; k < leading; ++k) sum += std::pow(static_cast<double>(k) + a, -s);
  const double x = static_cast<double>(leading) + a;
  double tail = std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);
  // Rising factorial s (s+1) ... (s+2j-2) times x^{-s-2j+1}.
  double factor = s * std::pow(x, -s - 1.0);
  for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
    const double term = kBernoulliOverFactorial[j] * factor;
    tail += term;
    if (std::abs(term) < 1e-18 * std::abs(sum + tail)) break;
    const double m = 2.0 * static_cast<double>(j + 1);
    factor *= (s + m - 1.0) * (s + m) / (x * x);
  }
  return sum + tail;
}

PercolationResult er_threshold_from_mean_degree(double mean_degree) {
  if (!(mean_degree >= 0.0) || !std::isfinite(mean_degree)) {
    throw DomainError("mean degree must be finite and non-negative");
  }
  PercolationResult r;
  r.model = GraphModel::erdos_renyi;
  r.param_summary = "mean_degree=" + format_double(mean_degree);
  if (mean_degree <= 1.0) {
    r.p_c = 1.0;
    r.clamped = true;
    r.note = "1/<N> >= 1, clamped to 1";
  } else {
    r.p_c = 1.0 / mean_degree;
  }
  return r;
}

PercolationResult bond_threshold(const GraphModelSpec& model) {
  model.validate();
  PercolationResult r;
  switch (model.kind) {
    case GraphModel::square_grid:
      r.p_c = 0.5;
      break;
    case GraphModel::erdos_renyi: {
      r = er_threshold_from_mean_degree(model.link_probability *
                                        static_cast<double>(model.nodes - 1));
      break;
    }
    case GraphModel::small_world: {
      if (model.ring_neighbors != 1) {
        throw DomainError("small-world threshold is only tabulated for m = 1");
      }
      const double t = model.shortcut_probability;
      // Rationalized form of (-2t - 1 + sqrt(4t^2 + 12t + 1)) / (4t); equals 1 at t = 0.
      r.p_c = 2.0 / (1.0 + 2.0 * t + std::sqrt(4.0 * t * t + 12.0 * t + 1.0));
      break;
    }
    case GraphModel::scale_free: {
      const double sigma = model.degree_exponent;
      if (sigma <= 3.0) {
        r.p_c = 0.0;
        r.divergent = true;
        r.note = "divergent denominator, threshold is 0";
        break;
      }
      const auto nm = static_cast<double>(model.min_degree);
      const double z1 = hurwitz_zeta(sigma - 1.0, nm);
      const double z2 = hurwitz_zeta(sigma - 2.0, nm);
      const double raw = z1 / (z2 - z1);
      if (raw > 1.0) {
        r.p_c = 1.0;
        r.clamped = true;
        r.note = "raw formula value " + format_double(raw) + " exceeds 1, clamped";
      } else {
        r.p_c = raw;
      }
      break;
    }
  }
  r.method = ThresholdMethod::analytic;
  r.model = model.kind;
  r.uncertainty = 0.0;
  if (model.kind != GraphModel::erdos_renyi) r.param_summary = model.summary();
  if (model.kind == GraphModel::erdos_renyi) {
    r.param_summary = model.summary() + ";mean_degree=" +
                      format_double(model.link_probability * static_cast<double>(model.nodes - 1));
  }
  return r;
}

std::uint64_t min_window_for_removal(double p_l, double p_c) {
  require_probability(p_l, "link removal rate");
  require_threshold(p_c);
  if (p_l >= 1.0) throw NumericError("no finite window: every link is always removed");
  if (p_l < p_c) return 0;
  // Start from the logarithmic estimate, then settle on the exact minimal B
  // under the same pow evaluation the invariant uses.
  const double estimate = std::ceil(std::log(p_c) / std::log(p_l)) - 1.0;
  auto b = static_cast<std::uint64_t>(std::max(0.0, estimate));
  auto power = [p_l](std::uint64_t e) { return std::pow(p_l, static_cast<double>(e)); };
  while (!(power(b + 1) < p_c)) ++b;
  while (b > 0 && power(b) < p_c) --b;
  return b;
}

std::uint64_t min_window(double p_d, double p_c) {
  require_probability(p_d, "packet drop rate");
  require_threshold(p_c);
  if (p_d >= 1.0) throw NumericError("no finite window exists for packet drop rate 1");
  return min_window_for_removal(drop_to_removal_rate(p_d), p_c);
}

DropRange admissible_drop_range(double p_c) {
  require_threshold(p_c);
  return {1.0 - std::sqrt(1.0 - p_c), 1.0};
}

double DropRateSpec::max_rate() const {
  if (empty()) throw DomainError("drop-rate map is empty");
  double m = homogeneous.value_or(0.0);
  for (const auto& r : per_link) m = std::max(m, r.p_d);
  return m;
}

void DropRateSpec::validate() const {
  if (homogeneous) require_probability(*homogeneous, "packet drop rate");
  for (const auto& r : per_link) require_probability(r.p_d, "per-link packet drop rate");
}

std::uint64_t conservative_window(const DropRateSpec& rates, double p_c) {
  rates.validate();
  return min_window(rates.max_rate(), p_c);
}

std::vector<LinkDropRate> load_rates_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::vector<LinkDropRate> rates;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::istringstream fields{std::string(t)};
    std::string a, b, c, extra;
    fields >> a >> b >> c >> extra;
    if (c.empty() || !extra.empty()) {
      throw DomainError(path + ":" + std::to_string(line_no) + ": expected 'i j p'");
    }
    const auto i = parse_unsigned(a, "node index");
    const auto j = parse_unsigned(b, "node index");
    if (i < 1 || j < 1) throw DomainError(path + ":" + std::to_string(line_no) + ": 1-based indices");
    LinkDropRate r{static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1),
                   parse_double(c, "drop rate")};
    require_probability(r.p_d, "per-link packet drop rate");
    rates.push_back(r);
  }
  return rates;
}

McThresholdEstimate estimate_threshold_mc(const GraphModelSpec& model, const McOptions& options) {
  model.validate();
  if (options.trials < 1) throw DomainError("Monte-Carlo estimator needs at least one trial");
  if (!(options.grid_step > 0.0 && options.grid_step < 1.0)) {
    throw DomainError("grid step must lie in (0,1)");
  }
  std::vector<double> grid;
  for (std::size_t k = 0;; ++k) {
    const double p = static_cast<double>(k) * options.grid_step;
    if (p > 1.0 + 1e-12) break;
    grid.push_back(std::min(p, 1.0));
  }
  const std::size_t trials = options.trials;
  const std::size_t work = grid.size() * trials;
  std::vector<std::uint8_t> connected(work, 0);

  const bool fixed_topology = model.kind == GraphModel::square_grid;
  const WeightedGraph fixed = fixed_topology ? generate(model) : WeightedGraph{};

  auto evaluate = [&](std::size_t item) {
    const std::size_t point = item / trials;
    const double p = grid[point];
    GraphModelSpec spec = model;
    spec.seed = derive_seed(options.seed, 2 * item);
    const WeightedGraph g = fixed_topology ? fixed : generate(spec);
    Rng removal(derive_seed(options.seed, 2 * item + 1));
    DisjointSets sets(g.node_count());
    for (const auto& e : g.edges()) {
      if (!removal.bernoulli(p)) sets.unite(e.u, e.v);
    }
    const bool ok = options.criterion == ConnectivityCriterion::full
                        ? sets.components() == 1
                        : 2 * sets.largest() >= g.node_count();
    connected[item] = ok ? 1 : 0;
  };

  const unsigned threads = std::max(1U, options.threads);
  if (threads == 1) {
    for (std::size_t item = 0; item < work; ++item) evaluate(item);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t item = t; item < work; item += threads) evaluate(item);
      });
    }
    for (auto& th : pool) th.join();
  }

  McThresholdEstimate out;
  out.result.p_c = 1.0;
  bool crossed = false;
  for (std::size_t point = 0; point < grid.size(); ++point) {
    std::size_t hits = 0;
    for (std::size_t t = 0; t < trials; ++t) hits += connected[point * trials + t];
    const double fraction = static_cast<double>(hits) / static_cast<double>(trials);
    out.curve.push_back({grid[point], fraction});
    if (!crossed && fraction < 0.5) {
      out.result.p_c = grid[point];
      crossed = true;
    }
  }
  out.result.method = ThresholdMethod::monte_carlo;
  out.result.model = model.kind;
  std::ostringstream summary;
  summary << model.summary() << ";trials=" << trials << ";step=" << format_double(options.grid_step)
          << ";criterion=" << (options.criterion == ConnectivityCriterion::full ? "full" : "giant");
  out.result.param_summary = summary.str();
  out.result.uncertainty = 0.98 / std::sqrt(static_cast<double>(trials));
  if (!crossed) out.result.note = "connected fraction never fell below 0.5";
  return out;
}

}  // namespace lossynet
