#include "oracles.hpp"

#include "swarmplan/metrics.hpp"
#include "swarmplan/planner.hpp"
#include "swarmplan/random.hpp"

#include <doctest.h>

#include <cmath>

using namespace swarmplan;

namespace {

const TrajectoryGenerator kGen(default_limits(), default_limits());

Scenario two_agent_scenario() {
  Scenario sc;
  sc.starts = {Vec3(0, 0, 0), Vec3(0, 4, 0)};
  sc.goals = {Vec3(3, 0, 0), Vec3(3, 4, 0)};
  sc.cylinders.assign(2, Cylinder{});
  sc.side_length = 4.0;
  return sc;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("decompose a direct flight") {
    const double spacing = 0.4 + kContactMargin;
    const Trajectory t = build_delay_trajectory(0, Vec3::Zero(), Vec3(3, 0, 0), 0.0,
                                                DelayLayout::for_spacing(spacing), false, kGen);
    const AgentTimes a = decompose(t);
    CHECK(a.wait == 0.0);
    CHECK(a.vertical == doctest::Approx(2 * kGen.duration(spacing, Direction::Vertical)).epsilon(1e-12));
    CHECK(a.horizontal == doctest::Approx(kGen.duration(3.0, Direction::Horizontal)).epsilon(1e-12));
    CHECK(a.total() == doctest::Approx(t.end_time() - t.start_time()).epsilon(1e-12));
  }

  TEST_CASE("decompose a delayed flight") {
    const Trajectory t = build_delay_trajectory(0, Vec3::Zero(), Vec3(3, 0, 0), 5.0,
                                                DelayLayout::for_spacing(0.4), true, kGen);
    const AgentTimes a = decompose(t);
    CHECK(a.wait >= 5.0 - 1e-9);
    CHECK(std::abs(a.total() - (t.end_time() - t.start_time())) <= 1e-9);
  }

  TEST_CASE("characteristic_time") {
    const double S = 100.0;
    const double tc = characteristic_time(S, kGen);
    CHECK(tc == doctest::Approx(std::sqrt(2.0) * S / 0.2 + 2 * 0.75 - 2 * 0.075 / 0.2).epsilon(1e-12));
    CHECK(characteristic_time(2 * S, kGen) - tc == doctest::Approx(std::sqrt(2.0) * S / 0.2).epsilon(1e-12));
    const TrajectoryGenerator linear(default_limits(), default_limits(), 1);
    CHECK(characteristic_time(S, linear) == doctest::Approx(std::sqrt(2.0) * S / 0.2).epsilon(1e-14));
    CHECK_THROWS_AS(characteristic_time(0.0, kGen), Error);
  }

  TEST_CASE("t_p_metric") {
    TimeDecomposition d;
    d.agents = {{10, 3, 0}, {10, 3, 0}};
    CHECK(t_p_metric(d, 20.0) == doctest::Approx(0.5));
    const double before = t_p_metric(d, 20.0);
    d.agents[1].wait = 1.0;
    CHECK(t_p_metric(d, 20.0) > before);
    CHECK_THROWS_AS(t_p_metric(TimeDecomposition{}, 1.0), Error);

    const NormalizedMetrics m = normalize(d, 20.0);
    CHECK(m.total == doctest::Approx(27.0 / 20.0));
    CHECK(m.total >= 1.0);
    CHECK(m.wait == doctest::Approx(0.5 / 10.0));
  }

  TEST_CASE("capt_baseline: single agent") {
    Scenario sc;
    sc.starts = {Vec3(0, 0, 0)};
    sc.goals = {Vec3(3, 4, 0)};
    sc.cylinders.assign(1, Cylinder{});
    const BaselineResult b = capt_baseline(sc, 10.0);
    CHECK(b.duration == doctest::Approx(25.0));
    CHECK(b.t_p == doctest::Approx(2.5));
    CHECK((oracle::position(b.plan.trajectories[0], 25.0) - sc.goals[0]).norm() <= 1e-12);
  }

  TEST_CASE("capt_baseline: equal lengths are synchronised anyway") {
    const Scenario sc = two_agent_scenario();
    const BaselineResult b = capt_baseline(sc, 10.0);
    CHECK(b.times.agents[0].horizontal == doctest::Approx(15.0));
    CHECK(b.times.agents[1].horizontal == doctest::Approx(15.0));
  }

  TEST_CASE("capt_baseline assignment minimises squared distance") {
    Rng rng(61);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 1 + static_cast<int>(rng.below(7));
      Scenario sc;
      for (int i = 0; i < n; ++i) {
        sc.starts.emplace_back(rng.uniform(0, 5), rng.uniform(0, 5), 0);
        sc.goals.emplace_back(rng.uniform(0, 5), rng.uniform(0, 5), 0);
      }
      sc.cylinders.assign(n, Cylinder{});
      Eigen::MatrixXd sq(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) sq(i, j) = (sc.starts[i] - sc.goals[j]).squaredNorm();
      }
      const BaselineResult b = capt_baseline(sc, 1.0);
      double cost = 0.0;
      for (int i = 0; i < n; ++i) cost += sq(i, b.plan.goal_of[i]);
      CHECK(cost == doctest::Approx(oracle::brute_force_assignment(sq)).epsilon(1e-12));
      for (const auto& t : b.plan.trajectories) CHECK(t.end_time() == doctest::Approx(b.duration));
    }
  }

  TEST_CASE("plan_scenario reports consistent decompositions") {
    const Scenario sc = random_scenario({0.1, 20, 0.15}, 9);
    for (auto method : {Method::Delays, Method::Altitudes, Method::Baseline}) {
      PlannerConfig cfg;
      cfg.method = method;
      const PlanResult r = plan_scenario(sc, cfg);
      REQUIRE(r.times.agents.size() == 20u);
      for (std::size_t i = 0; i < 20; ++i) {
        const auto& t = r.plan.trajectories[i];
        CHECK(std::abs(r.times.agents[i].total() - (t.end_time() - t.start_time())) <= 1e-9);
      }
      CHECK(r.metrics.t_p >= 0.0);
      CHECK(r.metrics.total >= 1.0);
      CHECK(r.timings.assign >= 0.0);
      CHECK(r.timings.trajgen >= 0.0);
      CHECK(r.timings.collision >= 0.0);
    }
  }
}
