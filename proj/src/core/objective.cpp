#include "lossynet/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lossynet/errors.hpp"
#include "lossynet/format.hpp"
#include "lossynet/rng.hpp"

namespace lossynet {

namespace {

// sigma'(t) = sigma(t) (1 - sigma(t)), evaluated without cancellation.
double logistic_slope(double t) {
  const double e = std::exp(-std::abs(t));
  return e / ((1.0 + e) * (1.0 + e));
}

void require_interval(const Interval& iv, const char* what) {
  if (!std::isfinite(iv.lower) || !std::isfinite(iv.upper) || iv.lower > iv.upper) {
    throw DomainError(std::string("invalid range for ") + what);
  }
}

}  // namespace

std::string_view to_string(ObjectiveKind kind) {
  return kind == ObjectiveKind::quadratic ? "quadratic" : "quad-logexp";
}

std::optional<ObjectiveKind> parse_objective_kind(std::string_view text) {
  if (text == "quadratic") return ObjectiveKind::quadratic;
  if (text == "quad-logexp" || text == "quad_logexp") return ObjectiveKind::quad_logexp;
  return std::nullopt;
}

double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))); }

double logistic(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

LocalObjective LocalObjective::quadratic(double a, double c) {
  LocalObjective f;
  f.kind = ObjectiveKind::quadratic;
  f.a = a;
  f.c = c;
  return f;
}

LocalObjective LocalObjective::quad_logexp(double a, double c, double l, double d) {
  LocalObjective f;
  f.kind = ObjectiveKind::quad_logexp;
  f.a = a;
  f.c = c;
  f.l = l;
  f.d = d;
  return f;
}

LocalObjective LocalObjective::with_box(Box b, double gamma) const {
  LocalObjective f = *this;
  f.box = b;
  f.penalty_weight = gamma;
  return f;
}

double LocalObjective::value(double x) const {
  const double dx = x - c;
  double v = 0.5 * a * dx * dx;
  if (kind == ObjectiveKind::quad_logexp) v += softplus(l * (x - d));
  if (box) {
    const double over = std::max(x - box->upper, 0.0);
    const double under = std::max(box->lower - x, 0.0);
    v += penalty_weight * (over * over + under * under);
  }
  return v;
}

double LocalObjective::gradient(double x) const {
  double g = a * (x - c);
  if (kind == ObjectiveKind::quad_logexp) g += l * logistic(l * (x - d));
  if (box) {
    g += 2.0 * penalty_weight * (std::max(x - box->upper, 0.0) - std::max(box->lower - x, 0.0));
  }
  return g;
}

double LocalObjective::curvature(double x) const {
  double h = a;
  if (kind == ObjectiveKind::quad_logexp) h += l * l * logistic_slope(l * (x - d));
  if (box && (x >= box->upper || x <= box->lower)) h += 2.0 * penalty_weight;
  return h;
}

namespace {

// Pieces of [lo, hi] on which the penalty curvature is constant. Box corners
// count as outside, matching curvature().
struct CurvatureSegment {
  double lo;
  double hi;
  bool outside;
};

std::vector<CurvatureSegment> curvature_segments(const LocalObjective& f, double lo, double hi) {
  if (lo > hi) throw DomainError("curvature range is empty");
  if (!f.box) return {{lo, hi, false}};
  const double m = f.box->lower;
  const double M = f.box->upper;
  std::vector<CurvatureSegment> out;
  if (lo <= m) out.push_back({lo, std::min(hi, m), true});
  if (hi > m && lo < M) out.push_back({std::max(lo, m), std::min(hi, M), false});
  if (hi >= M) out.push_back({std::max(lo, M), hi, true});
  return out;
}

}  // namespace

double LocalObjective::curvature_sup(double lo, double hi) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& s : curvature_segments(*this, lo, hi)) {
    double h = a;
    // The logistic slope peaks where l (x - d) is closest to zero.
    if (kind == ObjectiveKind::quad_logexp) {
      h += l * l * logistic_slope(l * (std::clamp(d, s.lo, s.hi) - d));
    }
    if (s.outside) h += 2.0 * penalty_weight;
    best = std::max(best, h);
  }
  return best;
}

double LocalObjective::curvature_inf(double lo, double hi) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : curvature_segments(*this, lo, hi)) {
    double h = a;
    if (kind == ObjectiveKind::quad_logexp) {
      h += l * l * std::min(logistic_slope(l * (s.lo - d)), logistic_slope(l * (s.hi - d)));
    }
    if (s.outside) h += 2.0 * penalty_weight;
    best = std::min(best, h);
  }
  return best;
}

void LocalObjective::validate() const {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw DomainError("objective curvature a must be positive, got " + format_double(a));
  }
  if (!std::isfinite(c) || !std::isfinite(l) || !std::isfinite(d)) {
    throw DomainError("objective parameters must be finite");
  }
  if (box) {
    if (!std::isfinite(box->lower) || !std::isfinite(box->upper) || box->lower > box->upper) {
      throw DomainError("box lower bound exceeds upper bound");
    }
    if (!(penalty_weight >= 0.0) || !std::isfinite(penalty_weight)) {
      throw DomainError("penalty weight must be non-negative");
    }
  }
}

double total_cost(std::span<const LocalObjective> objs, std::span<const double> x) {
  if (objs.size() != x.size()) throw DomainError("objective count does not match state size");
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) total += objs[i].value(x[i]);
  return total;
}

std::vector<double> gradients(std::span<const LocalObjective> objs, std::span<const double> x) {
  if (objs.size() != x.size()) throw DomainError("objective count does not match state size");
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = objs[i].gradient(x[i]);
  return g;
}

double curvature_bound(std::span<const LocalObjective> objs, double lo, double hi) {
  double sup = 0.0;
  for (const auto& f : objs) sup = std::max(sup, f.curvature_sup(lo, hi));
  return 0.5 * sup * (1.0 + 1e-12);
}

double min_curvature(std::span<const LocalObjective> objs, double lo, double hi) {
  double inf = std::numeric_limits<double>::infinity();
  for (const auto& f : objs) inf = std::min(inf, f.curvature_inf(lo, hi));
  return inf;
}

std::vector<LocalObjective> random_objectives(std::size_t n, ObjectiveKind kind,
                                              const ObjectiveRanges& ranges,
                                              std::optional<Box> box, double gamma,
                                              std::uint64_t seed) {
  require_interval(ranges.a, "a");
  require_interval(ranges.c, "c");
  require_interval(ranges.l, "l");
  require_interval(ranges.d, "d");
  if (!(ranges.a.lower > 0.0)) throw DomainError("range for a must be positive");
  Rng rng(seed);
  auto draw = [&rng](const Interval& iv) { return rng.uniform(iv.lower, iv.upper); };
  std::vector<LocalObjective> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Draw all four parameters for every kind so the quadratic and
    // quad-logexp families share a, c under one seed.
    const double a = draw(ranges.a);
    const double c = draw(ranges.c);
    const double l = draw(ranges.l);
    const double d = draw(ranges.d);
    LocalObjective f = kind == ObjectiveKind::quadratic ? LocalObjective::quadratic(a, c)
                                                        : LocalObjective::quad_logexp(a, c, l, d);
    if (box) f = f.with_box(*box, gamma);
    f.validate();
    out.push_back(f);
  }
  return out;
}

}  // namespace lossynet
