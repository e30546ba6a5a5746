#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lossynet/graph.hpp"
#include "lossynet/nonlinear_map.hpp"
#include "lossynet/objective.hpp"

namespace lossynet {

struct AllocationState {
  std::vector<double> x;
  std::uint64_t k = 0;
  /// Target of sum(x).
  double demand = 0.0;
};

/// One synchronous iteration over the active links:
///
///   x_i <- x_i - eta sum_j W_ij g_n(g_l(f_i'(x_i)) - g_l(f_j'(x_j)))
///
/// Every link's flow is computed once and applied with opposite signs to its
/// two endpoints, so sum(x) changes only by rounding. Nodes without active
/// links hold their value. Throws DomainError for eta <= 0 or size mismatch.
AllocationState update_step(const AllocationState& state, const WeightedGraph& active,
                            std::span<const LocalObjective> objs, const NonlinearMap& g_n,
                            const NonlinearMap& g_l, double eta);

/// Dense-weight variant. Throws ContractViolation when W is not exactly
/// symmetric, since an asymmetric exchange does not conserve the sum.
AllocationState update_step(const AllocationState& state, const DenseMatrix& weights,
                            std::span<const LocalObjective> objs, const NonlinearMap& g_n,
                            const NonlinearMap& g_l, double eta);

/// In-place form of the graph update used by the simulator. `scratch` is
/// resized as needed and avoids a per-step allocation.
void apply_update(std::span<double> x, const WeightedGraph& active,
                  std::span<const LocalObjective> objs, const NonlinearMap& g_n,
                  const NonlinearMap& g_l, double eta, std::vector<double>& scratch);
/// Same, restricted to the base links whose bit is set in `active`.
void apply_update(std::span<double> x, const WeightedGraph& base, const EdgeMask& active,
                  std::span<const LocalObjective> objs, const NonlinearMap& g_n,
                  const NonlinearMap& g_l, double eta, std::vector<double>& scratch);

struct StepBoundInputs {
  double kappa_n = 1.0;
  double kappa_l = 1.0;
  double upper_n = 1.0;
  double upper_l = 1.0;
  /// Curvature bound: f_i'' < 2u.
  double u = 1.0;
  double lambda2 = 1.0;
  double lambda_n = 1.0;
  std::uint64_t window = 0;
};

/// kappa_n kappa_l lambda2 / (u lambda_n^2 K_n^2 K_l^2) / (B + 1).
/// Throws DomainError for non-positive or NaN inputs. Infinite sector upper
/// bounds give 0.
double step_bound(const StepBoundInputs& in);

/// Random start with m_i <= x_i <= M_i and sum(x) = b; the last component
/// absorbs the rounding. Throws DomainError when sum(m) > b or sum(M) < b.
std::vector<double> feasible_init(std::size_t n, double b, std::span<const Box> boxes,
                                  std::uint64_t seed);

/// || v - mean(v) 1 ||_2. Throws DomainError on an empty vector.
double dispersion(std::span<const double> gradients);

struct IdentitySides {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Both sides of
///   sum_i z_i sum_j W_ij g_n(g_l(z_j) - g_l(z_i))
///     = -1/2 sum_ij W_ij (z_j - z_i) g_n(g_l(z_j) - g_l(z_i)),
/// valid for symmetric W and odd g_n. Throws DomainError on size mismatch.
IdentitySides laplacian_identity_check(const DenseMatrix& weights, std::span<const double> z,
                                       const NonlinearMap& g_n, const NonlinearMap& g_l);

/// Neighborhood radius for a run whose link map is a log-quantizer of step
/// rho: 2 (e^rho - 1) max(1, |phi*|) / min_curvature. At a quantized fixed
/// point all gradients share one quantizer cell of relative width e^rho - 1.
double quantized_gap_tolerance(double rho, double phi_star, double min_curvature);

}  // namespace lossynet
