#include "swarmplan/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace swarmplan {

namespace {

using nlohmann::json;

json xy(const Vec3& v) { return json::array({v.x(), v.y()}); }
json xyz(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 read_vec(const json& j) {
  if (!j.is_array() || (j.size() != 2 && j.size() != 3)) {
    throw Error(ErrorCode::InvalidInput, "expected a 2- or 3-element coordinate array");
  }
  return {j[0].get<double>(), j[1].get<double>(), j.size() == 3 ? j[2].get<double>() : 0.0};
}

SegmentKind parse_kind(const std::string& s) {
  if (s == "horizontal") return SegmentKind::Horizontal;
  if (s == "vertical") return SegmentKind::Vertical;
  if (s == "wait") return SegmentKind::Wait;
  throw Error(ErrorCode::InvalidInput, "unknown segment kind '" + s + "'");
}

template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, e.what());
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string scenario_to_json(const Scenario& sc) {
  json j;
  j["n"] = sc.size();
  j["seed"] = sc.seed;
  j["side_length"] = sc.side_length;
  j["eta"] = sc.eta;
  const Cylinder first = sc.cylinders.empty() ? Cylinder{} : sc.cylinders.front();
  j["radius"] = first.radius;
  j["height"] = first.height;
  const bool uniform = std::all_of(sc.cylinders.begin(), sc.cylinders.end(), [&](const Cylinder& c) {
    return c.radius == first.radius && c.height == first.height;
  });
  if (!uniform) {
    json cyl = json::array();
    for (const auto& c : sc.cylinders) cyl.push_back({c.radius, c.height});
    j["cylinders"] = cyl;
  }
  json starts = json::array();
  json goals = json::array();
  for (const auto& s : sc.starts) starts.push_back(xy(s));
  for (const auto& g : sc.goals) goals.push_back(xy(g));
  j["starts"] = starts;
  j["goals"] = goals;
  j["limits"] = {{"horz", sc.limits_horz.delta}, {"vert", sc.limits_vert.delta}};
  return j.dump(2) + "\n";
}

Scenario scenario_from_json(const std::string& text) {
  return guarded([&] {
    const json j = json::parse(text);
    Scenario sc;
    sc.seed = j.value("seed", std::uint64_t{0});
    sc.side_length = j.value("side_length", 0.0);
    sc.eta = j.value("eta", 0.0);
    for (const auto& s : j.at("starts")) sc.starts.push_back(read_vec(s));
    for (const auto& g : j.at("goals")) sc.goals.push_back(read_vec(g));
    if (j.contains("n") && j["n"].get<int>() != sc.size()) {
      throw Error(ErrorCode::InvalidInput, "'n' disagrees with the number of starts");
    }
    if (j.contains("cylinders")) {
      for (const auto& c : j["cylinders"]) sc.cylinders.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
    } else {
      const Cylinder c{j.value("radius", 0.15), j.value("height", 0.4)};
      sc.cylinders.assign(sc.starts.size(), c);
    }
    if (j.contains("limits")) {
      sc.limits_horz.delta = j["limits"].at("horz").get<std::vector<double>>();
      sc.limits_vert.delta = j["limits"].at("vert").get<std::vector<double>>();
    }
    if (sc.side_length == 0.0 && sc.eta > 0.0 && !sc.cylinders.empty()) {
      sc.side_length = side_length_for_density({sc.eta, sc.size(), sc.cylinders.front().radius});
    }
    return sc;
  });
}

std::string plan_to_json(const Plan& plan, std::span<const Cylinder> cylinders,
                         const TimeDecomposition& times) {
  json j;
  j["method"] = to_string(plan.method);
  j["n"] = plan.trajectories.size();
  j["ground_wait"] = plan.ground_wait;
  j["goal_of"] = plan.goal_of;
  j["delays"] = plan.delays;
  j["holds"] = std::vector<int>(plan.holds.begin(), plan.holds.end());
  j["increments"] = plan.increments;
  j["increment_bound"] = plan.increment_bound;
  if (plan.method == Method::Baseline) j["collisions_resolved"] = false;
  if (plan.altitudes) {
    j["altitudes"] = {{"layers", plan.altitudes->layers}, {"layer_of", plan.altitudes->layer_of}};
  }
  if (plan.layout) {
    json hold = json::array();
    for (const auto& h : plan.layout->holding) hold.push_back(h ? json(*h) : json(nullptr));
    j["layout"] = {{"spacing", plan.layout->spacing}, {"traversal", plan.layout->traversal}, {"holding", hold}};
  }
  json cyl = json::array();
  for (const auto& c : cylinders) cyl.push_back({c.radius, c.height});
  j["cylinders"] = cyl;
  json tj = json::array();
  for (const auto& a : times.agents) {
    tj.push_back({{"horizontal", a.horizontal}, {"vertical", a.vertical}, {"wait", a.wait}, {"total", a.total()}});
  }
  j["times"] = tj;
  json trajs = json::array();
  for (const auto& t : plan.trajectories) {
    json segs = json::array();
    for (const auto& s : t.segments) {
      segs.push_back({{"t0", s.interval.t0},
                      {"tf", s.interval.tf},
                      {"kind", to_string(s.kind)},
                      {"anchor", xyz(s.anchor)},
                      {"heading", xyz(s.heading)},
                      {"coeffs", s.p.coeffs()}});
    }
    trajs.push_back({{"agent_id", t.agent_id}, {"segments", segs}});
  }
  j["trajectories"] = trajs;
  return j.dump(2) + "\n";
}

LoadedPlan plan_from_json(const std::string& text) {
  return guarded([&] {
    const json j = json::parse(text);
    LoadedPlan out;
    out.plan.method = parse_method(j.at("method").get<std::string>());
    out.plan.ground_wait = j.value("ground_wait", true);
    out.plan.goal_of = j.value("goal_of", std::vector<int>{});
    out.plan.delays = j.value("delays", std::vector<double>{});
    for (int h : j.value("holds", std::vector<int>{})) out.plan.holds.push_back(static_cast<char>(h));
    out.plan.increments = j.value("increments", std::size_t{0});
    out.plan.increment_bound = j.value("increment_bound", std::size_t{0});
    if (j.contains("altitudes")) {
      AltitudeAssignment a;
      a.layers = j["altitudes"].at("layers").get<int>();
      a.layer_of = j["altitudes"].at("layer_of").get<std::vector<int>>();
      out.plan.altitudes = a;
    }
    if (j.contains("layout")) {
      AltitudeLayout layout;
      layout.spacing = j["layout"].at("spacing").get<double>();
      layout.traversal = j["layout"].at("traversal").get<std::vector<double>>();
      for (const auto& h : j["layout"].at("holding")) {
        layout.holding.push_back(h.is_null() ? std::nullopt : std::optional<double>(h.get<double>()));
      }
      out.plan.layout = layout;
    }
    for (const auto& c : j.at("cylinders")) out.cylinders.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
    for (const auto& tj : j.at("trajectories")) {
      Trajectory t;
      t.agent_id = tj.at("agent_id").get<int>();
      for (const auto& s : tj.at("segments")) {
        t.segments.push_back(make_segment(Polynomial(s.at("coeffs").get<std::vector<double>>()),
                                          read_vec(s.at("heading")), read_vec(s.at("anchor")),
                                          {s.at("t0").get<double>(), s.at("tf").get<double>()},
                                          parse_kind(s.at("kind").get<std::string>())));
      }
      out.plan.trajectories.push_back(std::move(t));
    }
    if (out.cylinders.size() != out.plan.trajectories.size()) {
      throw Error(ErrorCode::InvalidInput, "plan needs one cylinder per trajectory");
    }
    return out;
  });
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path.string());
  out << contents;
}

MetricsRow metrics_row(const Scenario& sc, const PlanResult& result) {
  MetricsRow row;
  row.seed = sc.seed;
  row.n = sc.size();
  row.eta = sc.eta;
  row.method = result.plan.method;
  row.mean = result.times.mean();
  row.t_p = result.metrics.t_p;
  row.m_altitudes = result.plan.altitudes ? result.plan.altitudes->layers
                                          : (result.plan.method == Method::Baseline ? 0 : 1);
  row.wall = result.timings;
  return row;
}

std::string csv_header() {
  return "seed,n,eta,method,t_horz_mean,t_vert_mean,t_wait_mean,t_total_mean,t_p,m_altitudes,"
         "wall_time_assign,wall_time_trajgen,wall_time_collision";
}

std::string to_csv(const MetricsRow& r) {
  std::ostringstream ss;
  ss << r.seed << ',' << r.n << ',' << fmt(r.eta) << ',' << to_string(r.method) << ','
     << fmt(r.mean.horizontal) << ',' << fmt(r.mean.vertical) << ',' << fmt(r.mean.wait) << ','
     << fmt(r.mean.total()) << ',' << fmt(r.t_p) << ',' << r.m_altitudes << ',' << fmt(r.wall.assign)
     << ',' << fmt(r.wall.trajgen) << ',' << fmt(r.wall.collision);
  return ss.str();
}

}  // namespace swarmplan
