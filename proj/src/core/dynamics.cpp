#include "lossynet/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lossynet/errors.hpp"
#include "lossynet/format.hpp"
#include "lossynet/rng.hpp"

namespace lossynet {

namespace {

void check_step_inputs(std::size_t n, std::size_t objs, std::size_t graph_n, double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw DomainError("step size eta must be positive, got " + format_double(eta));
  }
  if (objs != n) throw DomainError("objective count does not match state size");
  if (graph_n != n) throw DomainError("graph node count does not match state size");
}

// h_i = g_l(f_i'(x_i)).
void link_messages(std::span<const double> x, std::span<const LocalObjective> objs,
                   const NonlinearMap& g_l, std::vector<double>& h) {
  h.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) h[i] = g_l(objs[i].gradient(x[i]));
}

}  // namespace

void apply_update(std::span<double> x, const WeightedGraph& active,
                  std::span<const LocalObjective> objs, const NonlinearMap& g_n,
                  const NonlinearMap& g_l, double eta, std::vector<double>& scratch) {
  check_step_inputs(x.size(), objs.size(), active.node_count(), eta);
  link_messages(x, objs, g_l, scratch);
  std::vector<double>& h = scratch;
  // Messages are read from h (computed from the old state) so the order in
  // which edges are applied does not matter.
  for (const auto& e : active.edges()) {
    const double flow = eta * e.weight * g_n(h[e.u] - h[e.v]);
    x[e.u] -= flow;
    x[e.v] += flow;
  }
}

void apply_update(std::span<double> x, const WeightedGraph& base, const EdgeMask& active,
                  std::span<const LocalObjective> objs, const NonlinearMap& g_n,
                  const NonlinearMap& g_l, double eta, std::vector<double>& scratch) {
  check_step_inputs(x.size(), objs.size(), base.node_count(), eta);
  if (active.size() != base.edge_count()) throw DomainError("edge mask does not match graph");
  link_messages(x, objs, g_l, scratch);
  const std::vector<double>& h = scratch;
  const auto edges = base.edges();
  for (std::size_t idx = 0; idx < edges.size(); ++idx) {
    if (!active.test(idx)) continue;
    const auto& e = edges[idx];
    const double flow = eta * e.weight * g_n(h[e.u] - h[e.v]);
    x[e.u] -= flow;
    x[e.v] += flow;
  }
}

AllocationState update_step(const AllocationState& state, const WeightedGraph& active,
                            std::span<const LocalObjective> objs, const NonlinearMap& g_n,
                            const NonlinearMap& g_l, double eta) {
  AllocationState next = state;
  std::vector<double> scratch;
  apply_update(next.x, active, objs, g_n, g_l, eta, scratch);
  ++next.k;
  return next;
}

AllocationState update_step(const AllocationState& state, const DenseMatrix& weights,
                            std::span<const LocalObjective> objs, const NonlinearMap& g_n,
                            const NonlinearMap& g_l, double eta) {
  const std::size_t n = state.x.size();
  check_step_inputs(n, objs.size(), weights.size(), eta);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (weights(i, j) != weights(j, i)) {
        throw ContractViolation("active weights are not symmetric at (" +
                                std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                "); the update would not conserve the sum");
      }
    }
  }
  std::vector<double> h;
  link_messages(state.x, objs, g_l, h);
  AllocationState next = state;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double w = weights(i, j);
      if (w == 0.0) continue;
      const double flow = eta * w * g_n(h[i] - h[j]);
      next.x[i] -= flow;
      next.x[j] += flow;
    }
  }
  ++next.k;
  return next;
}

double step_bound(const StepBoundInputs& in) {
  const double values[] = {in.kappa_n, in.kappa_l, in.upper_n, in.upper_l,
                           in.u,       in.lambda2, in.lambda_n};
  for (const double v : values) {
    if (!(v > 0.0)) throw DomainError("step bound inputs must be positive, got " + format_double(v));
  }
  if (std::isinf(in.upper_n) || std::isinf(in.upper_l)) return 0.0;
  const double eta_bar = in.kappa_n * in.kappa_l * in.lambda2 /
                         (in.u * in.lambda_n * in.lambda_n * in.upper_n * in.upper_n *
                          in.upper_l * in.upper_l);
  return eta_bar / (static_cast<double>(in.window) + 1.0);
}

std::vector<double> feasible_init(std::size_t n, double b, std::span<const Box> boxes,
                                  std::uint64_t seed) {
  if (n == 0) throw DomainError("feasible_init needs at least one node");
  if (boxes.size() != n) throw DomainError("need one box per node");
  double lo_sum = 0.0;
  double hi_sum = 0.0;
  for (const auto& box : boxes) {
    if (!(box.lower <= box.upper)) throw DomainError("box lower bound exceeds upper bound");
    lo_sum += box.lower;
    hi_sum += box.upper;
  }
  if (lo_sum > b || hi_sum < b) {
    throw DomainError("infeasible boxes: need sum(m)=" + format_double(lo_sum) +
                      " <= b=" + format_double(b) + " <= sum(M)=" + format_double(hi_sum));
  }
  Rng rng(seed);
  std::vector<double> x(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = rng.uniform(boxes[i].lower, boxes[i].upper);
    sum += x[i];
  }
  // Contract every component toward the bound on the side b lies; the
  // combination stays inside each box and hits b exactly in real arithmetic.
  if (sum > b) {
    const double t = (b - lo_sum) / (sum - lo_sum);
    for (std::size_t i = 0; i < n; ++i) x[i] = boxes[i].lower + (x[i] - boxes[i].lower) * t;
  } else if (sum < b) {
    const double t = (hi_sum - b) / (hi_sum - sum);
    for (std::size_t i = 0; i < n; ++i) x[i] = boxes[i].upper - (boxes[i].upper - x[i]) * t;
  }
  double head = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) head += x[i];
  x[n - 1] = std::clamp(b - head, boxes[n - 1].lower, boxes[n - 1].upper);
  return x;
}

double dispersion(std::span<const double> gradients) {
  if (gradients.empty()) throw DomainError("dispersion of an empty vector");
  const double mean = std::accumulate(gradients.begin(), gradients.end(), 0.0) /
                      static_cast<double>(gradients.size());
  double ss = 0.0;
  for (const double g : gradients) ss += (g - mean) * (g - mean);
  return std::sqrt(ss);
}

IdentitySides laplacian_identity_check(const DenseMatrix& weights, std::span<const double> z,
                                       const NonlinearMap& g_n, const NonlinearMap& g_l) {
  const std::size_t n = z.size();
  if (weights.size() != n) throw DomainError("weight matrix size does not match vector");
  IdentitySides out;
  for (std::size_t i = 0; i < n; ++i) {
    double inner = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double w = weights(i, j);
      if (w == 0.0) continue;
      const double m = g_n(g_l(z[j]) - g_l(z[i]));
      inner += w * m;
      out.rhs += w * (z[j] - z[i]) * m;
    }
    out.lhs += z[i] * inner;
  }
  out.rhs *= -0.5;
  return out;
}

double quantized_gap_tolerance(double rho, double phi_star, double min_curvature) {
  if (!(rho > 0.0)) throw DomainError("quantizer step rho must be positive");
  if (!(min_curvature > 0.0)) throw DomainError("minimum curvature must be positive");
  return 2.0 * std::expm1(rho) * std::max(1.0, std::abs(phi_star)) / min_curvature;
}

}  // namespace lossynet
