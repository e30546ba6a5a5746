#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace lossynet {

/// Closed interval [lower, upper] a node's resource should stay in.
struct Box {
  double lower = 0.0;
  double upper = 0.0;

  bool operator==(const Box&) const = default;
};

enum class ObjectiveKind { quadratic, quad_logexp };

std::string_view to_string(ObjectiveKind kind);
std::optional<ObjectiveKind> parse_objective_kind(std::string_view text);

/// Local cost of one node:
///
///   f(x) = a/2 (x - c)^2 [+ log(1 + exp(l (x - d)))]
///          + gamma (max(x - M, 0)^2 + max(m - x, 0)^2)   if a box [m, M] is set
///
/// The penalty is soft, so states may leave the box slightly.
struct LocalObjective {
  ObjectiveKind kind = ObjectiveKind::quadratic;
  double a = 1.0;
  double c = 0.0;
  double l = 0.0;
  double d = 0.0;
  std::optional<Box> box;
  double penalty_weight = 1.0;

  static LocalObjective quadratic(double a, double c);
  static LocalObjective quad_logexp(double a, double c, double l, double d);
  LocalObjective with_box(Box b, double gamma) const;

  double value(double x) const;
  double gradient(double x) const;
  /// Second derivative; one-sided (outer) value at the box corners.
  double curvature(double x) const;
  /// Exact supremum and infimum of curvature() over [lo, hi].
  double curvature_sup(double lo, double hi) const;
  double curvature_inf(double lo, double hi) const;

  /// Throws DomainError unless a > 0, gamma >= 0, parameters finite and the
  /// box ordered.
  void validate() const;

  bool operator==(const LocalObjective&) const = default;
};

/// log(1 + exp(t)) without overflow.
double softplus(double t);
/// 1 / (1 + exp(-t)) without overflow.
double logistic(double t);

double total_cost(std::span<const LocalObjective> objs, std::span<const double> x);
std::vector<double> gradients(std::span<const LocalObjective> objs, std::span<const double> x);

/// Smallest u (up to a 1e-12 relative inflation) with f_i'' < 2u on [lo, hi]
/// for every objective.
double curvature_bound(std::span<const LocalObjective> objs, double lo, double hi);
/// min_i inf f_i'' on [lo, hi].
double min_curvature(std::span<const LocalObjective> objs, double lo, double hi);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  bool operator==(const Interval&) const = default;
};

/// Ranges the random cost parameters are drawn from, uniformly.
struct ObjectiveRanges {
  Interval a{0.5, 1.5};
  Interval c{2.0, 7.0};
  Interval l{0.0, 0.5};
  Interval d{2.0, 7.0};

  bool operator==(const ObjectiveRanges&) const = default;
};

/// n objectives with parameters drawn from `ranges`; every node gets `box`
/// and `gamma` when a box is given. Deterministic given seed.
std::vector<LocalObjective> random_objectives(std::size_t n, ObjectiveKind kind,
                                              const ObjectiveRanges& ranges,
                                              std::optional<Box> box, double gamma,
                                              std::uint64_t seed);

}  // namespace lossynet
