// Command-line front end: scenario generation, planning, verification and
// Monte Carlo sweeps.

#include "swarmplan/io.hpp"
#include "swarmplan/planner.hpp"
#include "swarmplan/scenario.hpp"
#include "swarmplan/verify.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

using namespace swarmplan;

namespace {

enum ExitCode { kOk = 0, kInfeasible = 2, kVerification = 3, kInternal = 4 };

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InfeasibleDensity:
    case ErrorCode::SamplingTimeout:
    case ErrorCode::InvalidInput:
    case ErrorCode::DegenerateDisplacement:
    case ErrorCode::MixedHeading:
      return kInfeasible;
    case ErrorCode::VerificationFailure:
      return kVerification;
    default:
      return kInternal;
  }
}

// Accepts plain numbers and powers of ten written as "10^-1.5".
double parse_eta(const std::string& s) {
  try {
    if (s.rfind("10^", 0) == 0) return std::pow(10.0, std::stod(s.substr(3)));
    return std::stod(s);
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidInput, "cannot parse density '" + s + "'");
  }
}

struct Options {
  std::string scenario;
  std::string plan;
  std::string method = "delays";
  std::vector<std::string> methods{"delays", "altitudes", "baseline"};
  double tau_inc = 0.1;
  std::uint64_t seed = 1;
  std::string eta = "10^-1.5";
  int n = 10;
  double radius = 0.15;
  double height = 0.4;
  std::string out;
  double oracle_dt = 1e-3;
  std::vector<int> sweep_n{2, 4, 8, 16, 32, 64};
  std::vector<std::string> sweep_eta{"10^-1.5"};
  int trials = 10;
  int jobs = 1;
};

int cmd_gen(const Options& o) {
  const DensitySpec spec{parse_eta(o.eta), o.n, o.radius};
  const Scenario sc = random_scenario(spec, o.seed, Cylinder{o.radius, o.height});
  const std::string text = scenario_to_json(sc);
  if (o.out.empty()) {
    std::cout << text;
  } else {
    write_file(o.out, text);
  }
  std::fprintf(stderr, "n=%d eta=%.6g side_length=%.6f m\n", sc.size(),
               density_for_side_length(sc.size(), o.radius, sc.side_length), sc.side_length);
  return kOk;
}

int cmd_plan(const Options& o) {
  const Scenario sc = scenario_from_json(read_file(o.scenario));
  PlannerConfig cfg;
  cfg.method = parse_method(o.method);
  cfg.tau_inc = o.tau_inc;
  cfg.seed = o.seed;
  const PlanResult result = plan_scenario(sc, cfg);
  const std::string text = plan_to_json(result.plan, sc.cylinders, result.times);
  if (o.out.empty()) {
    std::cout << text;
  } else {
    write_file(o.out, text);
  }
  const AgentTimes m = result.times.mean();
  std::fprintf(stderr,
               "method=%s n=%d t_horz=%.3f t_vert=%.3f t_wait=%.3f t_total=%.3f t_p=%.4f "
               "altitudes=%d increments=%zu/%zu\n",
               to_string(result.plan.method), sc.size(), m.horizontal, m.vertical, m.wait, m.total(),
               result.metrics.t_p, result.plan.altitudes ? result.plan.altitudes->layers : 1,
               result.plan.increments, result.plan.increment_bound);
  return kOk;
}

int cmd_verify(const Options& o) {
  const LoadedPlan loaded = plan_from_json(read_file(o.plan));
  const VerifyReport report = verify_plan(loaded.plan.trajectories, loaded.cylinders, o.oracle_dt);
  std::printf("agent,min_clearance_m\n");
  for (std::size_t i = 0; i < report.agent_min_clearance.size(); ++i) {
    std::printf("%zu,%.9g\n", i, report.agent_min_clearance[i]);
  }
  std::fprintf(stderr, "samples=%zu closest: agents %d,%d at t=%.4f clearance=%.9g m\n", report.samples,
               report.closest.agent_i, report.closest.agent_j, report.closest.t, report.closest.clearance);
  if (!report.pass()) {
    const auto& c = *report.first_collision;
    std::fprintf(stderr, "FAIL: agents %d and %d collide at t=%.4f (clearance %.9g m)\n", c.agent_i,
                 c.agent_j, c.t, c.clearance);
    return kVerification;
  }
  std::fprintf(stderr, "PASS\n");
  return kOk;
}

int cmd_sweep(const Options& o) {
  struct Cell {
    int n;
    double eta;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (int n : o.sweep_n) {
    for (const auto& e : o.sweep_eta) {
      for (int t = 0; t < o.trials; ++t) cells.push_back({n, parse_eta(e), o.seed + static_cast<std::uint64_t>(t)});
    }
  }
  std::vector<Method> methods;
  for (const auto& m : o.methods) methods.push_back(parse_method(m));

  std::vector<std::vector<std::string>> rows(cells.size());
  std::atomic<std::size_t> next{0};
  std::atomic<int> failures{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < cells.size(); k = next++) {
      const Cell& c = cells[k];
      try {
        const Scenario sc = random_scenario({c.eta, c.n, o.radius}, c.seed, Cylinder{o.radius, o.height});
        for (Method m : methods) {
          PlannerConfig cfg;
          cfg.method = m;
          cfg.tau_inc = o.tau_inc;
          cfg.seed = c.seed;
          rows[k].push_back(to_csv(metrics_row(sc, plan_scenario(sc, cfg))));
        }
      } catch (const std::exception& e) {
        ++failures;
        const std::lock_guard<std::mutex> lock(log_mutex);
        std::fprintf(stderr, "cell n=%d eta=%g seed=%llu failed: %s\n", c.n, c.eta,
                     static_cast<unsigned long long>(c.seed), e.what());
      }
    }
  };
  std::vector<std::thread> pool;
  for (int j = 0; j < std::max(1, o.jobs); ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::string csv = csv_header() + "\n";
  for (const auto& cell_rows : rows) {
    for (const auto& r : cell_rows) csv += r + "\n";
  }
  if (o.out.empty()) {
    std::cout << csv;
  } else {
    write_file(o.out, csv);
  }
  std::fprintf(stderr, "%zu cells, %d failed\n", cells.size(), failures.load());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Centralized goal assignment and collision-free trajectory planning for aerial swarms"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("gen", "Generate a random scenario at a given density");
  gen->add_option("--n", o.n, "Number of agents")->check(CLI::PositiveNumber);
  gen->add_option("--eta", o.eta, "Area density, e.g. 0.01 or 10^-1.5");
  gen->add_option("--seed", o.seed, "Random seed");
  gen->add_option("--radius", o.radius, "Vehicle radius (m)")->check(CLI::PositiveNumber);
  gen->add_option("--height", o.height, "Vehicle height (m)")->check(CLI::PositiveNumber);
  gen->add_option("--out", o.out, "Output scenario file (stdout if omitted)");

  auto* plan = app.add_subcommand("plan", "Assign goals and plan collision-free trajectories");
  plan->add_option("--scenario", o.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  plan->add_option("--method", o.method, "delays | altitudes | baseline")
      ->check(CLI::IsMember({"delays", "altitudes", "baseline"}));
  plan->add_option("--tau-inc", o.tau_inc, "Delay increment (s)")->check(CLI::PositiveNumber);
  plan->add_option("--seed", o.seed, "Seed for the agent ordering");
  plan->add_option("--out", o.out, "Output plan file (stdout if omitted)");

  auto* verify = app.add_subcommand("verify", "Check a plan by dense time sampling");
  verify->add_option("--plan", o.plan, "Plan file")->required()->check(CLI::ExistingFile);
  verify->add_option("--scenario", o.scenario, "Scenario file (unused; plans are self-contained)");
  verify->add_option("--oracle-dt", o.oracle_dt, "Sampling step (s)")->check(CLI::PositiveNumber);

  auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep writing the metrics CSV");
  sweep->add_option("--sweep-n", o.sweep_n, "Agent counts")->delimiter(',');
  sweep->add_option("--sweep-eta", o.sweep_eta, "Densities")->delimiter(',');
  sweep->add_option("--trials", o.trials, "Seeds per cell")->check(CLI::PositiveNumber);
  sweep->add_option("--method", o.methods, "Methods to run")->delimiter(',');
  sweep->add_option("--tau-inc", o.tau_inc, "Delay increment (s)")->check(CLI::PositiveNumber);
  sweep->add_option("--seed", o.seed, "First seed");
  sweep->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("--out", o.out, "Output CSV file (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (gen->parsed()) return cmd_gen(o);
    if (plan->parsed()) return cmd_plan(o);
    if (verify->parsed()) return cmd_verify(o);
    if (sweep->parsed()) return cmd_sweep(o);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kInternal;
  }
  return kInternal;
}
