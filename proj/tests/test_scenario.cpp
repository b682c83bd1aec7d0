#include "swarmplan/scenario.hpp"

#include <doctest.h>

#include <cmath>

using namespace swarmplan;

TEST_SUITE("scenario") {
  TEST_CASE("density of a single disc with no free area is one") {
    CHECK(density_for_side_length(1, 0.15, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  }

  TEST_CASE("side length and density are inverses") {
    for (int n : {1, 2, 10, 100, 1000}) {
      for (double log_eta : {-3.0, -2.0, -1.5, -1.0, -0.5, -0.1}) {
        const double eta = std::pow(10.0, log_eta);
        const double side = side_length_for_density({eta, n, 0.15});
        CHECK(side >= 0.0);
        if (side > 0.0) {
          CHECK(density_for_side_length(n, 0.15, side) == doctest::Approx(eta).epsilon(1e-12));
        }
      }
    }
    const double s = side_length_for_density({std::pow(10.0, -1.5), 100, 0.15});
    CHECK(density_for_side_length(100, 0.15, s) == doctest::Approx(std::pow(10.0, -1.5)).epsilon(1e-12));
  }

  TEST_CASE("side length grows without bound as density vanishes") {
    double prev = 0.0;
    for (double eta = 0.5; eta > 1e-8; eta /= 3) {
      const double s = side_length_for_density({eta, 50, 0.15});
      CHECK(s > prev);
      prev = s;
    }
    CHECK(prev > 1e3);
  }

  TEST_CASE("infeasible densities") {
    try {
      side_length_for_density({0.95, 10, 0.15});
      FAIL("expected InfeasibleDensity");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InfeasibleDensity);
    }
    CHECK_THROWS_AS(side_length_for_density({kPackingLimit, 10, 0.15}), Error);
    CHECK_THROWS_AS(side_length_for_density({0.1, 0, 0.15}), Error);
    CHECK_THROWS_AS(side_length_for_density({-0.1, 3, 0.15}), Error);
  }

  TEST_CASE("random_scenario") {
    const Scenario two = random_scenario({1e-4, 2, 0.15}, 3);
    CHECK(two.size() == 2);
    CHECK((two.starts[0] - two.starts[1]).head<2>().norm() > 0.3);
    CHECK(validate(two).ok());

    const Scenario a = random_scenario({0.1, 30, 0.15}, 42);
    const Scenario b = random_scenario({0.1, 30, 0.15}, 42);
    CHECK(a.starts == b.starts);
    CHECK(a.goals == b.goals);
    CHECK(a.side_length == b.side_length);
    const Scenario c = random_scenario({0.1, 30, 0.15}, 43);
    CHECK(a.starts != c.starts);

    const Scenario dense = random_scenario({std::pow(10.0, -0.5), 100, 0.15}, 1);
    CHECK(validate(dense).ok());
    for (const auto& p : dense.starts) {
      CHECK(p.z() == 0.0);
      CHECK(p.x() >= 0.0);
      CHECK(p.x() <= dense.side_length);
    }
  }

  TEST_CASE("sampled scenarios always validate") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      for (double eta : {1e-3, 1e-2, 1e-1, std::pow(10.0, -0.5)}) {
        CHECK(validate(random_scenario({eta, 40, 0.15}, seed)).ok());
      }
    }
  }

  TEST_CASE("sampling timeout near the packing limit") {
    try {
      random_scenario({0.85, 200, 0.15}, 1);
      FAIL("expected SamplingTimeout");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SamplingTimeout);
    }
  }

  TEST_CASE("validate") {
    Scenario sc;
    sc.starts = {Vec3(0, 0, 0), Vec3(0.1, 0, 0)};
    sc.goals = {Vec3(5, 0, 0), Vec3(7, 0, 0)};
    sc.cylinders.assign(2, Cylinder{});
    ValidationReport r = validate(sc);
    CHECK(!r.ok());
    CHECK(r.violations.size() == 1);

    sc.starts[1] = Vec3(3, 0, 0);
    r = validate(sc);
    CHECK(r.ok());
    CHECK(r.ground_wait_allowed);

    sc.goals[1] = sc.starts[0];
    r = validate(sc);
    CHECK(r.ok());
    CHECK(!r.ground_wait_allowed);

    sc.goals[1] = Vec3(7, 0, 0.5);
    CHECK(!validate(sc).ok());
  }
}
