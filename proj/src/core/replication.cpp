#include "lossynet/replication.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lossynet/edge_list.hpp"
#include "lossynet/errors.hpp"
#include "lossynet/format.hpp"
#include "lossynet/percolation.hpp"

namespace lossynet {

namespace {

constexpr std::uint64_t kRecipeSeed = 2020;
// First graph seed (scanning upward from 0) whose ER(20, 0.3) instance is
// connected with 56 links, i.e. mean degree 5.6.
constexpr std::uint64_t kGraphSeed = 2;
constexpr std::uint64_t kRecipeIters = 4000;
constexpr double kRoundedThreshold = 0.177;

}  // namespace

std::vector<double> replication_drop_rates() { return {0.4, 0.46, 0.54, 0.62, 0.73}; }

std::vector<double> replication_rounded_removal_rates() {
  return {0.64, 0.71, 0.79, 0.86, 0.93};
}

ExperimentConfig replication_config() {
  ExperimentConfig c;
  c.seed = kRecipeSeed;
  c.graph = GraphModelSpec::erdos_renyi(20, 0.3);
  c.graph_seed = kGraphSeed;
  c.weight_low = 0.0;
  c.weight_high = 10.0;
  c.objective_kind = ObjectiveKind::quad_logexp;
  c.ranges.a = {0.02, 0.08};
  c.ranges.c = {2.0, 7.0};
  c.ranges.l = {0.0, 0.2};
  c.ranges.d = {2.0, 7.0};
  c.box = Box{2.0, 7.0};
  c.gamma = 0.05;
  c.g_n = NonlinearMap::cubic_plus_linear();
  c.g_l = NonlinearMap::log_quantizer(1.0 / 256.0);
  c.eta = 0.05;
  c.max_iters = kRecipeIters;
  c.demand = 100.0;
  c.drop_mode = DropMode::scheduled;
  c.rates = replication_drop_rates();
  c.period = 40;
  c.audit_window = 23;
  c.states_file = "states.csv";
  return c;
}

std::vector<BStarRow> bstar_table(double mean_degree) {
  const double p_c = er_threshold_from_mean_degree(mean_degree).p_c;
  const auto rates = replication_drop_rates();
  const auto rounded = replication_rounded_removal_rates();
  std::vector<BStarRow> rows;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    BStarRow r;
    r.p_d = rates[i];
    r.p_l = drop_to_removal_rate(rates[i]);
    r.p_l_rounded = rounded[i];
    r.b_measured = min_window(rates[i], p_c);
    r.b_rounded_pc = min_window(rates[i], kRoundedThreshold);
    r.b_rounded_pl = min_window_for_removal(rounded[i], p_c);
    rows.push_back(r);
  }
  return rows;
}

std::string bstar_table_csv(const std::vector<BStarRow>& rows) {
  std::ostringstream out;
  out << "p_d,p_l,p_l_rounded,bstar_measured_pc,bstar_pc_0.177,bstar_rounded_pl\n";
  for (const auto& r : rows) {
    out << format_double(r.p_d) << ',' << format_double(r.p_l) << ','
        << format_double(r.p_l_rounded) << ',' << r.b_measured << ',' << r.b_rounded_pc << ','
        << r.b_rounded_pl << '\n';
  }
  return out.str();
}

ReplicationReport run_replication(const std::string& output_dir,
                                  std::optional<std::uint64_t> max_iters) {
  namespace fs = std::filesystem;
  ReplicationReport rep;
  rep.config = replication_config();
  if (max_iters) rep.config.max_iters = *max_iters;
  rep.config.output_dir = output_dir;
  rep.result = run_experiment(rep.config);

  const PreparedRun& prep = rep.result.prepared;
  const WeightedGraph& g = prep.run.graph;
  rep.mean_degree = mean_degree(g);
  rep.p_c = er_threshold_from_mean_degree(rep.mean_degree).p_c;
  rep.table = bstar_table(rep.mean_degree);
  rep.base_spectrum = spectral_bounds(g);

  EdgeMask seen(g.edge_count());
  for (const auto& m : rep.result.trace.masks) seen |= m;
  const WeightedGraph union_g = g.subgraph(seen);
  rep.union_spectrum = spectral_bounds(union_g);

  StepBoundInputs in = prep.bound_inputs;
  in.lambda2 = rep.union_spectrum.lambda2;
  in.lambda_n = rep.union_spectrum.lambda_n;
  in.window = 0;
  rep.eta_bar = step_bound(in);
  in.window = rep.config.audit_window.value_or(0);
  rep.eta_bound_audited = step_bound(in);

  rep.files = write_outputs(rep.result, rep.config, output_dir);
  const fs::path base = output_dir.empty() ? fs::path(".") : fs::path(output_dir);
  auto open = [&](const std::string& name) {
    const std::string path = (base / name).string();
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    rep.files.push_back(path);
    return out;
  };
  {
    auto out = open("bstar.csv");
    out << bstar_table_csv(rep.table);
  }
  {
    auto out = open("spectrum.csv");
    out << "graph,edges,lambda2,lambda_n,ratio\n";
    out << "base," << g.edge_count() << ',' << format_double(rep.base_spectrum.lambda2) << ','
        << format_double(rep.base_spectrum.lambda_n) << ','
        << format_double(rep.base_spectrum.ratio) << '\n';
    out << "union," << union_g.edge_count() << ',' << format_double(rep.union_spectrum.lambda2)
        << ',' << format_double(rep.union_spectrum.lambda_n) << ','
        << format_double(rep.union_spectrum.ratio) << '\n';
  }
  {
    auto out = open("graph.txt");
    write_edge_list(out, g);
  }
  {
    const StepBoundInputs& b = prep.bound_inputs;
    auto out = open("replication.txt");
    out << "mean_degree=" << format_double(rep.mean_degree) << '\n'
        << "p_c=" << format_double(rep.p_c) << '\n'
        << "kappa_n=" << format_double(b.kappa_n) << '\n'
        << "upper_n=" << format_double(b.upper_n) << '\n'
        << "kappa_l=" << format_double(b.kappa_l) << '\n'
        << "upper_l=" << format_double(b.upper_l) << '\n'
        << "u=" << format_double(b.u) << '\n'
        << "eta=" << format_double(prep.run.eta) << '\n'
        << "eta_bar=" << format_double(rep.eta_bar) << '\n'
        << "eta_bound_audited=" << format_double(rep.eta_bound_audited) << '\n';
  }
  return rep;
}

}  // namespace lossynet
