#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lossynet/objective.hpp"

namespace lossynet {

/// Centralized optimum of sum f_i(x_i) subject to sum x_i = b.
struct KktSolution {
  std::vector<double> x_star;
  /// Common marginal cost f_i'(x_i*).
  double phi_star = 0.0;
  /// max_i |f_i'(x_i*) - phi_star|.
  double residual = 0.0;
};

struct KktOptions {
  /// Target for |sum x - b| relative to max(1, |b|).
  double tol = 1e-12;
  /// Marginal-cost bracket. By default [min_i f_i'(b/n), max_i f_i'(b/n)],
  /// which always contains phi*.
  std::optional<Interval> phi_range;
};

/// Nested bisection: for a trial phi every node solves f_i'(x_i) = phi, and
/// the outer loop moves phi until sum x_i(phi) = b. Throws NumericError with
/// the bracket and the sums at its ends when `phi_range` does not contain the
/// solution.
KktSolution kkt_oracle(std::span<const LocalObjective> objs, double b,
                       const KktOptions& options = {});

/// Unique x with f'(x) = phi, to the last representable bit.
double invert_gradient(const LocalObjective& f, double phi);

}  // namespace lossynet
