#include "oracles.hpp"

#include "swarmplan/random.hpp"
#include "swarmplan/resolve.hpp"
#include "swarmplan/scenario.hpp"
#include "swarmplan/verify.hpp"

#include <doctest.h>

#include <cmath>

using namespace swarmplan;

namespace {

const TrajectoryGenerator kGen(default_limits(), default_limits());

double spacing() { return 0.4 + kContactMargin; }

int count_kind(const Trajectory& t, SegmentKind kind) {
  int n = 0;
  for (const auto& s : t.segments) n += s.kind == kind ? 1 : 0;
  return n;
}

// Whole-plan safety by 1 ms sampling with parked agents.
double sampled_plan_clearance(const std::vector<Trajectory>& trajs, const std::vector<Cylinder>& cyl) {
  double end = 0.0;
  for (const auto& t : trajs) end = std::max(end, t.end_time());
  double worst = kInf;
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    for (std::size_t j = i + 1; j < trajs.size(); ++j) {
      worst = std::min(worst, oracle::sampled_clearance(trajs[i], trajs[j], cyl[i], cyl[j], 0.0, end).value);
    }
  }
  return worst;
}

void check_boundary_conditions(const Plan& plan, std::span<const Vec3> starts, std::span<const Vec3> goals) {
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const Trajectory& t = plan.trajectories[i];
    CHECK(t.start_time() == 0.0);
    CHECK((oracle::segment_position(t.segments.front(), 0.0) - starts[i]).norm() <= 1e-9);
    CHECK((oracle::segment_position(t.segments.back(), t.end_time()) - goals[i]).norm() <= 1e-9);
    for (int k = 1; k <= 3; ++k) {
      CHECK(oracle::segment_derivative(t.segments.front(), k, 0.0).norm() <= 1e-9);
      CHECK(oracle::segment_derivative(t.segments.back(), k, t.end_time()).norm() <= 1e-9);
    }
    for (std::size_t k = 1; k < t.segments.size(); ++k) {
      CHECK(t.segments[k - 1].interval.tf == t.segments[k].interval.t0);
    }
  }
}

}  // namespace

TEST_SUITE("resolve") {
  TEST_CASE("layouts") {
    const std::vector<Cylinder> cyl{{0.15, 0.4}, {0.2, 0.3}};
    CHECK(layer_spacing(cyl) == 0.4 + kContactMargin);
    const DelayLayout d = DelayLayout::for_spacing(0.5);
    CHECK(d.traversal == 0.5);
    CHECK(d.holding == 1.0);
    const std::vector<char> holds{0, 1, 0};
    const AltitudeLayout a = AltitudeLayout::build(holds, 0.5);
    CHECK(a.traversal == std::vector<double>{0.5, 1.5, 2.0});
    CHECK(!a.holding[0]);
    CHECK(*a.holding[1] == 1.0);
    CHECK(a.layers() == 3);
    CHECK(a.holding_count() == 1);
  }

  TEST_CASE("parse_method") {
    CHECK(parse_method("delays") == Method::Delays);
    CHECK(parse_method("altitudes") == Method::Altitudes);
    CHECK(parse_method("baseline") == Method::Baseline);
    CHECK_THROWS_AS(parse_method("teleport"), Error);
  }

  TEST_CASE("build_delay_trajectory structure") {
    const DelayLayout layout = DelayLayout::for_spacing(spacing());
    const Vec3 s(0, 0, 0), g(3, 4, 0);
    const Trajectory direct = build_delay_trajectory(0, s, g, 0.0, layout, false, kGen);
    CHECK(count_kind(direct, SegmentKind::Wait) == 0);
    CHECK(count_kind(direct, SegmentKind::Horizontal) == 3);
    CHECK(count_kind(direct, SegmentKind::Vertical) == 6);
    CHECK((direct.end_position() - g).norm() <= 1e-9);
    const double hop = kGen.duration(spacing(), Direction::Vertical);
    CHECK(direct.end_time() == doctest::Approx(2 * hop + kGen.duration(5.0, Direction::Horizontal)).epsilon(1e-12));

    const Trajectory held = build_delay_trajectory(0, s, g, 5.0, layout, true, kGen);
    CHECK(count_kind(held, SegmentKind::Wait) == 1);
    double wait = 0.0;
    for (const auto& seg : held.segments) wait += seg.kind == SegmentKind::Wait ? seg.duration() : 0.0;
    CHECK(wait == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(held.segments[3].position(held.segments[3].interval.t0).z() == doctest::Approx(layout.holding));
    CHECK((held.end_position() - g).norm() <= 1e-9);
    CHECK_THROWS_AS(build_delay_trajectory(0, s, g, -1.0, layout, false, kGen), Error);
  }

  TEST_CASE("delays: disjoint paths need no delay") {
    const std::vector<Vec3> starts{Vec3(0, 0, 0), Vec3(0, 5, 0)};
    const std::vector<Vec3> goals{Vec3(3, 0, 0), Vec3(3, 5, 0)};
    const std::vector<Cylinder> cyl(2);
    const Plan plan = resolve_by_delays(starts, goals, cyl, kGen, {});
    CHECK(plan.delays == std::vector<double>{0.0, 0.0});
    CHECK(plan.increments == 0);
  }

  TEST_CASE("delays: exchange on one line") {
    const std::vector<Vec3> starts{Vec3(0, 0, 0), Vec3(2, 0, 0)};
    const std::vector<Vec3> goals{Vec3(2, 0, 0), Vec3(0, 0, 0)};
    const std::vector<Cylinder> cyl(2);
    ResolveOptions opt;
    opt.ground_wait = false;  // each start is the other's goal
    opt.seed = 7;
    const Plan plan = resolve_by_delays(starts, goals, cyl, kGen, opt);
    const int first = random_order(2, opt.seed)[0];
    CHECK(plan.delays[first] == 0.0);
    CHECK(plan.delays[1 - first] > 0.0);
    CHECK(!all_agents_collisions(plan.trajectories, cyl).any());
    CHECK(sampled_plan_clearance(plan.trajectories, cyl) > 0.0);
    CHECK(plan.increments <= plan.increment_bound);
    check_boundary_conditions(plan, starts, goals);
  }

  TEST_CASE("delays: single agent") {
    const std::vector<Vec3> starts{Vec3(1, 1, 0)};
    const std::vector<Vec3> goals{Vec3(2, 1, 0)};
    const Plan plan = resolve_by_delays(starts, goals, std::vector<Cylinder>(1), kGen, {});
    CHECK(plan.delays == std::vector<double>{0.0});
  }

  TEST_CASE("delays: invalid options") {
    const std::vector<Vec3> starts{Vec3(1, 1, 0)};
    const std::vector<Vec3> goals{Vec3(2, 1, 0)};
    ResolveOptions opt;
    opt.tau_inc = 0.0;
    CHECK_THROWS_AS(resolve_by_delays(starts, goals, std::vector<Cylinder>(1), kGen, opt), Error);
    CHECK_THROWS_AS(resolve_by_delays(starts, goals, std::vector<Cylinder>(2), kGen, {}), Error);
  }

  TEST_CASE("enlarge_for_exit_collisions") {
    const std::vector<Cylinder> cyl{{0.15, 0.4}, {0.25, 0.4}};
    const auto [bigger, l_exit] = enlarge_for_exit_collisions(cyl, kGen, spacing());
    const double t_exit = kGen.duration(spacing(), Direction::Vertical);
    CHECK(t_exit == doctest::Approx(2.75).epsilon(1e-5));
    CHECK(l_exit == doctest::Approx(0.2 * t_exit));
    CHECK(bigger[0].radius - cyl[0].radius == doctest::Approx(0.5 * l_exit));
    CHECK(bigger[1].radius - cyl[1].radius == doctest::Approx(0.5 * l_exit));
    CHECK(bigger[0].height == cyl[0].height);

    const TrajectoryGenerator crawl({{1e-9, 0.5, 10}}, default_limits());
    const auto [same, tiny] = enlarge_for_exit_collisions(cyl, crawl, spacing());
    CHECK(tiny < 1e-8);
    CHECK(same[0].radius == doctest::Approx(0.15));
  }

  TEST_CASE("assign_altitudes") {
    const std::vector<int> identity{0, 1, 2};
    CollisionFlags none(3);
    const AltitudeAssignment one = assign_altitudes(none, identity);
    CHECK(one.layers == 1);
    CHECK(one.layer_of == std::vector<int>{0, 0, 0});

    CollisionFlags clique(3);
    clique.set(0, 1);
    clique.set(0, 2);
    clique.set(1, 2);
    CHECK(assign_altitudes(clique, identity).layers == 3);
    CHECK(assign_altitudes(clique, std::uint64_t{5}).layers == 3);

    CollisionFlags path(3);
    path.set(0, 1);
    path.set(1, 2);
    const AltitudeAssignment p = assign_altitudes(path, identity);
    CHECK(p.layers == 2);
    CHECK(p.layer_of == std::vector<int>{0, 1, 0});
    const Eigen::MatrixXi B = p.matrix();
    CHECK((B.rowwise().sum().array() == 1).all());
    const Eigen::MatrixXi BtB = B.transpose() * B;
    CHECK(BtB(0, 1) == 0);
    CHECK(BtB(0, 0) == 2);
  }

  TEST_CASE("assign_altitudes keeps flagged pairs apart") {
    Rng rng(51);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 2 + static_cast<int>(rng.below(30));
      CollisionFlags f(n);
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          if (rng.uniform() < 0.3) f.set(i, j);
        }
      }
      const AltitudeAssignment a = assign_altitudes(f, std::uint64_t(trial));
      CHECK(a.layers <= n);
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          if (f(i, j)) CHECK(a.layer_of[i] != a.layer_of[j]);
        }
      }
    }
  }

  TEST_CASE("altitudes: no conflicts reduces to direct flight") {
    const std::vector<Vec3> starts{Vec3(0, 0, 0), Vec3(0, 5, 0)};
    const std::vector<Vec3> goals{Vec3(3, 0, 0), Vec3(3, 5, 0)};
    const std::vector<Cylinder> cyl(2);
    const Plan alt = resolve_by_altitudes(starts, goals, cyl, kGen, {});
    const Plan del = resolve_by_delays(starts, goals, cyl, kGen, {});
    REQUIRE(alt.altitudes.has_value());
    CHECK(alt.altitudes->layers == 1);
    for (int i = 0; i < 2; ++i) {
      CHECK(alt.trajectories[i].end_time() == doctest::Approx(del.trajectories[i].end_time()).epsilon(1e-12));
      for (double t = 0.0; t <= del.trajectories[i].end_time(); t += 0.05) {
        CHECK((oracle::position(alt.trajectories[i], t) - oracle::position(del.trajectories[i], t)).norm() <= 1e-9);
      }
    }
  }

  TEST_CASE("altitudes: three mutually crossing agents") {
    const std::vector<Vec3> starts{Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(1, 1.732, 0)};
    const std::vector<Vec3> goals{Vec3(2, 1.2, 0), Vec3(0, 1.2, 0), Vec3(1, -0.6, 0)};
    const std::vector<Cylinder> cyl(3);
    for (auto mode : {HorizontalStart::OnArrival, HorizontalStart::AllArrived}) {
      ResolveOptions opt;
      opt.horizontal_start = mode;
      const Plan plan = resolve_by_altitudes(starts, goals, cyl, kGen, opt);
      REQUIRE(plan.altitudes.has_value());
      CHECK(plan.altitudes->layers <= 3);
      CHECK(plan.altitudes->layers >= 2);
      CHECK(!all_agents_collisions(plan.trajectories, cyl).any());
      CHECK(sampled_plan_clearance(plan.trajectories, cyl) > 0.0);
      check_boundary_conditions(plan, starts, goals);
    }
  }

  TEST_CASE("random scenarios: safe, bounded, deterministic") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      const Scenario sc = random_scenario({std::pow(10.0, -0.5), 12, 0.15}, seed);
      for (auto method : {Method::Delays, Method::Altitudes}) {
        ResolveOptions opt;
        opt.seed = seed;
        opt.ground_wait = false;
        auto run = [&] {
          return method == Method::Delays ? resolve_by_delays(sc.starts, sc.goals, sc.cylinders, kGen, opt)
                                          : resolve_by_altitudes(sc.starts, sc.goals, sc.cylinders, kGen, opt);
        };
        const Plan plan = run();
        CHECK(!all_agents_collisions(plan.trajectories, sc.cylinders).any());
        const auto report = verify_plan(plan.trajectories, sc.cylinders);
        CHECK(report.pass());
        CHECK(plan.increments <= plan.increment_bound);
        check_boundary_conditions(plan, sc.starts, sc.goals);
        if (plan.altitudes) {
          CHECK(plan.altitudes->layers <= sc.size());
          CHECK(plan.layout->holding_count() <= plan.altitudes->layers - 1);
        }
        const Plan again = run();
        REQUIRE(again.trajectories.size() == plan.trajectories.size());
        for (std::size_t i = 0; i < plan.trajectories.size(); ++i) {
          const auto& a = plan.trajectories[i].segments;
          const auto& b = again.trajectories[i].segments;
          REQUIRE(a.size() == b.size());
          for (std::size_t k = 0; k < a.size(); ++k) {
            CHECK(a[k].interval == b[k].interval);
            CHECK(a[k].p.coeffs() == b[k].p.coeffs());
            CHECK(a[k].anchor == b[k].anchor);
          }
        }
      }
    }
  }

  TEST_CASE("delay_increment_bound") {
    CHECK(delay_increment_bound(1, 1.0, 0.1) == 10);
    CHECK(delay_increment_bound(4, 2.05, 0.1) == 10 * 21);
  }
}
