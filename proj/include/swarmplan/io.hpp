#pragma once

// JSON scenario and plan files and the metrics CSV.

#include "swarmplan/metrics.hpp"
#include "swarmplan/planner.hpp"
#include "swarmplan/resolve.hpp"
#include "swarmplan/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace swarmplan {

std::string scenario_to_json(const Scenario& sc);
/// Throws InvalidInput on malformed documents.
Scenario scenario_from_json(const std::string& text);

/// Self-contained: carries the cylinders, so it can be verified without the
/// scenario.
std::string plan_to_json(const Plan& plan, std::span<const Cylinder> cylinders,
                         const TimeDecomposition& times);

struct LoadedPlan {
  Plan plan;
  std::vector<Cylinder> cylinders;
};

LoadedPlan plan_from_json(const std::string& text);

std::string read_file(const std::filesystem::path& path);
/// Writes atomically-enough for our use: whole contents, truncating.
void write_file(const std::filesystem::path& path, const std::string& contents);

struct MetricsRow {
  std::uint64_t seed = 0;
  int n = 0;
  double eta = 0.0;
  Method method = Method::Delays;
  AgentTimes mean;
  double t_p = 0.0;
  int m_altitudes = 0;
  StageTimings wall;
};

MetricsRow metrics_row(const Scenario& sc, const PlanResult& result);

std::string csv_header();
std::string to_csv(const MetricsRow& row);

}  // namespace swarmplan
