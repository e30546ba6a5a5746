#include "catch_amalgamated.hpp"

#include <cmath>

#include "lossynet/errors.hpp"
#include "lossynet/objective.hpp"
#include "lossynet/rng.hpp"

using namespace lossynet;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("quadratic value and gradient", "[objective]") {
  const auto f = LocalObjective::quadratic(1.0, 0.0);
  CHECK(f.value(2.0) == 2.0);
  CHECK(f.gradient(2.0) == 2.0);
  CHECK(f.curvature(5.0) == 1.0);
}

TEST_CASE("quad-logexp with l = 0 adds the constant ln 2", "[objective]") {
  const auto f = LocalObjective::quad_logexp(1.0, 0.0, 0.0, 0.0);
  CHECK_THAT(f.value(3.0), WithinAbs(4.5 + std::log(2.0), 1e-15));
  CHECK_THAT(f.gradient(3.0), WithinAbs(3.0, 1e-15));
}

TEST_CASE("box penalty adds gamma times the squared excess", "[objective]") {
  const auto f = LocalObjective::quadratic(1.0, 0.0).with_box({0.0, 1.0}, 1.0);
  CHECK_THAT(f.value(2.0), WithinAbs(3.0, 1e-15));
  CHECK_THAT(f.gradient(2.0), WithinAbs(4.0, 1e-15));
  CHECK_THAT(f.value(-1.0), WithinAbs(0.5 + 1.0, 1e-15));
  CHECK_THAT(f.gradient(-1.0), WithinAbs(-1.0 - 2.0, 1e-15));
  CHECK(f.value(0.5) == 0.125);
}

TEST_CASE("softplus and logistic are stable for large arguments", "[objective]") {
  CHECK(std::isfinite(softplus(1000.0)));
  CHECK_THAT(softplus(1000.0), WithinRel(1000.0, 1e-15));
  CHECK(softplus(-1000.0) >= 0.0);
  CHECK(softplus(-1000.0) < 1e-300);
  CHECK_THAT(softplus(0.0), WithinAbs(std::log(2.0), 1e-16));
  CHECK(logistic(1000.0) == 1.0);
  CHECK(logistic(-1000.0) == 0.0);
  CHECK(logistic(0.0) == 0.5);
  const auto f = LocalObjective::quad_logexp(1.0, 0.0, 50.0, 0.0);
  CHECK(std::isfinite(f.value(100.0)));
  CHECK(std::isfinite(f.gradient(100.0)));
}

TEST_CASE("gradients match central finite differences", "[objective]") {
  Rng rng(17);
  const ObjectiveRanges ranges;
  for (auto kind : {ObjectiveKind::quadratic, ObjectiveKind::quad_logexp}) {
    const auto objs = random_objectives(10, kind, ranges, Box{2.0, 7.0}, 1.0, 5);
    for (const auto& f : objs) {
      for (int i = 0; i < 100; ++i) {
        const double x = rng.uniform(-2.0, 11.0);
        const double h = 1e-6;
        const double fd = (f.value(x + h) - f.value(x - h)) / (2 * h);
        CHECK_THAT(f.gradient(x), WithinAbs(fd, 1e-5 * std::max(1.0, std::abs(fd))));
      }
    }
  }
}

TEST_CASE("curvature supremum and infimum bound sampled curvature", "[objective]") {
  const auto objs = random_objectives(8, ObjectiveKind::quad_logexp, ObjectiveRanges{},
                                      Box{2.0, 7.0}, 0.7, 11);
  for (const auto& f : objs) {
    const double sup = f.curvature_sup(0.0, 9.0);
    const double inf = f.curvature_inf(0.0, 9.0);
    double seen_max = 0.0;
    double seen_min = INFINITY;
    for (int i = 0; i <= 9000; ++i) {
      const double x = i * 1e-3;
      const double c = f.curvature(x);
      seen_max = std::max(seen_max, c);
      seen_min = std::min(seen_min, c);
      CHECK(c <= sup * (1 + 1e-12));
      CHECK(c >= inf * (1 - 1e-12));
    }
    CHECK_THAT(sup, WithinRel(seen_max, 1e-4));
    CHECK_THAT(inf, WithinRel(seen_min, 1e-4));
  }
  const double u = curvature_bound(objs, 0.0, 9.0);
  for (const auto& f : objs) {
    for (double x = 0.0; x <= 9.0; x += 0.01) CHECK(f.curvature(x) < 2 * u);
  }
  CHECK(min_curvature(objs, 0.0, 9.0) > 0.0);
}

TEST_CASE("total cost and gradient vector", "[objective]") {
  const std::vector<LocalObjective> objs{LocalObjective::quadratic(1.0, 0.0),
                                         LocalObjective::quadratic(2.0, 1.0)};
  const std::vector<double> x{2.0, 3.0};
  CHECK(total_cost(objs, x) == 2.0 + 4.0);
  CHECK(gradients(objs, x) == std::vector<double>{2.0, 4.0});
}

TEST_CASE("random objectives are seeded and respect ranges", "[objective]") {
  ObjectiveRanges r;
  r.a = {0.02, 0.08};
  const auto objs = random_objectives(50, ObjectiveKind::quad_logexp, r, Box{2, 7}, 0.05, 3);
  REQUIRE(objs.size() == 50);
  for (const auto& f : objs) {
    CHECK(f.a >= 0.02);
    CHECK(f.a <= 0.08);
    CHECK(f.c >= 2.0);
    CHECK(f.c <= 7.0);
    CHECK(f.l >= 0.0);
    CHECK(f.l <= 0.5);
    CHECK(f.box == Box{2, 7});
    CHECK(f.penalty_weight == 0.05);
  }
  CHECK(random_objectives(50, ObjectiveKind::quad_logexp, r, Box{2, 7}, 0.05, 3) == objs);
  CHECK_FALSE(random_objectives(50, ObjectiveKind::quad_logexp, r, Box{2, 7}, 0.05, 4) == objs);
}

TEST_CASE("objective validation", "[objective]") {
  CHECK_THROWS_AS(LocalObjective::quadratic(0.0, 1.0).validate(), DomainError);
  CHECK_THROWS_AS(LocalObjective::quadratic(1.0, 1.0).with_box({3, 2}, 1.0).validate(),
                  DomainError);
  CHECK_THROWS_AS(LocalObjective::quadratic(1.0, 1.0).with_box({0, 2}, -1.0).validate(),
                  DomainError);
  CHECK_NOTHROW(LocalObjective::quad_logexp(1.0, 1.0, 0.2, 3.0).validate());
  CHECK(parse_objective_kind("quad-logexp") == ObjectiveKind::quad_logexp);
  CHECK(to_string(ObjectiveKind::quadratic) == "quadratic");
}
