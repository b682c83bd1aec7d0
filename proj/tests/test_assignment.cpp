#include "oracles.hpp"

#include "swarmplan/assignment.hpp"
#include "swarmplan/random.hpp"

#include <doctest.h>

using namespace swarmplan;

TEST_SUITE("assignment") {
  TEST_CASE("two by two") {
    CostMatrix c(2, 2);
    c << 1, 2, 2, 1;
    const Assignment a = solve_assignment(c);
    CHECK(a.goal_of == std::vector<int>{0, 1});
    CHECK(a.total_cost == 2.0);
  }

  TEST_CASE("all ties") {
    const CostMatrix c = CostMatrix::Constant(5, 5, 3.0);
    const Assignment a = solve_assignment(c);
    CHECK(a.is_permutation());
    CHECK(a.total_cost == 15.0);
  }

  TEST_CASE("random six by six matches brute force") {
    Rng rng(1);
    const CostMatrix c = CostMatrix::NullaryExpr(6, 6, [&] { return rng.uniform(0, 10); });
    const Assignment a = solve_assignment(c);
    CHECK(a.is_permutation());
    CHECK(a.total_cost == oracle::brute_force_assignment(c));
  }

  TEST_CASE("random instances up to seven agents match brute force exactly") {
    Rng rng(2);
    for (int trial = 0; trial < 300; ++trial) {
      const int n = 1 + static_cast<int>(rng.below(7));
      CostMatrix c = CostMatrix::NullaryExpr(n, n, [&] { return rng.uniform(0, 100); });
      if (trial % 3 == 0) c = c.array().round();
      const Assignment a = solve_assignment(c);
      REQUIRE(a.is_permutation());
      double sum = 0.0;
      for (int i = 0; i < n; ++i) sum += c(i, a.goal_of[i]);
      CHECK(sum == a.total_cost);
      CHECK(a.total_cost == oracle::brute_force_assignment(c));
    }
  }

  TEST_CASE("adding a constant shifts the optimum by n times it") {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 2 + static_cast<int>(rng.below(6));
      const CostMatrix c = CostMatrix::NullaryExpr(n, n, [&] { return std::round(rng.uniform(0, 50)); });
      const Assignment a = solve_assignment(c);
      const Assignment b = solve_assignment((c.array() + 7.0).matrix());
      CHECK(b.total_cost == a.total_cost + 7.0 * n);
    }
  }

  TEST_CASE("deterministic") {
    Rng rng(4);
    const CostMatrix c = CostMatrix::NullaryExpr(40, 40, [&] { return rng.uniform(0, 1); });
    CHECK(solve_assignment(c).goal_of == solve_assignment(c).goal_of);
  }

  TEST_CASE("invalid cost matrices") {
    CHECK_THROWS_AS(solve_assignment(CostMatrix::Zero(2, 3)), Error);
    CostMatrix c = CostMatrix::Zero(2, 2);
    c(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(solve_assignment(c), Error);
    CHECK(solve_assignment(CostMatrix(0, 0)).goal_of.empty());
  }

  TEST_CASE("build_cost_matrix") {
    const TrajectoryGenerator gen(default_limits(), default_limits());
    const std::vector<Vec3> starts{Vec3(0, 0, 0), Vec3(5, 5, 0)};
    const std::vector<Vec3> goals{Vec3(0, 0, 0), Vec3(20, 0, 0)};
    const CostMatrix c = build_cost_matrix(starts, goals, gen);
    CHECK(c(0, 0) == 0.0);
    CHECK(c(0, 1) == doctest::Approx(2 * 0.75 + (20 - 0.15) / 0.2));
    const double d10 = std::hypot(5.0, 5.0);
    CHECK(c(1, 0) == doctest::Approx(gen.duration(d10, Direction::Horizontal)));
    CHECK((c.array() >= 0).all());
  }

  TEST_CASE("cost grows by distance over speed when cruising") {
    const TrajectoryGenerator gen(default_limits(), default_limits());
    const std::vector<Vec3> starts{Vec3::Zero()};
    const std::vector<Vec3> near{Vec3(4, 0, 0)};
    const std::vector<Vec3> far{Vec3(8, 0, 0)};
    const double a = build_cost_matrix(starts, near, gen)(0, 0);
    const double b = build_cost_matrix(starts, far, gen)(0, 0);
    CHECK(b - a == doctest::Approx(4.0 / 0.2).epsilon(1e-12));
  }
}
