#include "scenfuzz/scenario.hpp"

#include <cmath>
#include <sstream>

#include "scenfuzz/serialize.hpp"

namespace scenfuzz {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::vector<std::string> validate_intrinsic(const Scenario& s,
                                            const ValidationLimits& limits) {
  std::vector<std::string> out;
  if (s.id.empty()) out.push_back("scenario id must be non-empty");
  if (s.map_ref.empty()) out.push_back("map reference must be non-empty");
  if (!(s.duration_limit > 0.0))
    out.push_back("duration_limit must be > 0, got " + fmt(s.duration_limit));
  if (s.npcs.empty()) out.push_back("scenario needs at least 1 NPC");
  if (static_cast<int>(s.npcs.size()) > limits.max_npc)
    out.push_back("scenario has " + std::to_string(s.npcs.size()) +
                  " NPCs, max is " + std::to_string(limits.max_npc));
  for (std::size_t i = 0; i < s.npcs.size(); ++i) {
    const auto& npc = s.npcs[i];
    const std::string tag = "npc " + std::to_string(i);
    if (npc.length <= 0.0 || npc.width <= 0.0)
      out.push_back(tag + ": footprint dimensions must be > 0");
    if (npc.waypoints.size() < 2)
      out.push_back(tag + ": needs >= 2 waypoints, has " +
                    std::to_string(npc.waypoints.size()));
    for (std::size_t w = 0; w < npc.waypoints.size(); ++w) {
      const double v = npc.waypoints[w].speed;
      if (!(v >= 0.0 && v <= limits.v_max))
        out.push_back(tag + " waypoint " + std::to_string(w) + ": speed " + fmt(v) +
                      " outside [0, " + fmt(limits.v_max) + "]");
    }
    if (npc.route.lane_sequence.empty())
      out.push_back(tag + ": route lane sequence is empty");
  }
  return out;
}

std::vector<std::string> validate(const Scenario& s, const MapModel& m,
                                  const ValidationLimits& limits) {
  std::vector<std::string> out = validate_intrinsic(s, limits);
  if (!s.map_ref.empty() && s.map_ref != m.name)
    out.push_back("scenario references map '" + s.map_ref + "' but got '" + m.name +
                  "'");

  for (std::size_t i = 0; i < s.npcs.size(); ++i) {
    const auto& npc = s.npcs[i];
    const std::string tag = "npc " + std::to_string(i);
    bool lanes_ok = true;
    for (const auto& id : npc.route.lane_sequence) {
      if (!m.find_lane(id)) {
        out.push_back(tag + ": route lane " + id + " not in map");
        lanes_ok = false;
      }
    }
    if (!lanes_ok || npc.route.lane_sequence.empty()) continue;
    for (std::size_t k = 1; k < npc.route.lane_sequence.size(); ++k) {
      const auto& a = npc.route.lane_sequence[k - 1];
      const auto& b = npc.route.lane_sequence[k];
      if (!m.linked(a, b))
        out.push_back(tag + ": route lanes " + a + " -> " + b +
                      " are not connected by successor or neighbor links");
    }
    const Lane& first = m.lane(npc.route.lane_sequence.front());
    const Lane& last = m.lane(npc.route.lane_sequence.back());
    if (first.centerline.project(npc.route.start.position()).distance >
        0.5 * first.width + 0.5)
      out.push_back(tag + ": route start not on first lane " + first.id);
    if (last.centerline.project(npc.route.goal).distance > 0.5 * last.width + 0.5)
      out.push_back(tag + ": route goal not on last lane " + last.id);

    const Polyline path = m.route_path(npc.route);
    if (path.points.size() >= 2) {
      double prev = -1e-9;
      for (std::size_t w = 0; w < npc.waypoints.size(); ++w) {
        const double arc = path.project(npc.waypoints[w].position).arc;
        if (arc < prev - 1e-6) {
          out.push_back(tag + " waypoint " + std::to_string(w) +
                        ": arc length decreases along route");
          break;
        }
        prev = arc;
      }
    }
  }

  const Lane* start_lane = m.nearest_lane(s.ego_start.position());
  const Lane* dest_lane = m.nearest_lane(s.ego_destination);
  if (!start_lane || !dest_lane) {
    out.push_back("ego start or destination not near any lane");
  } else if (!m.reachable(start_lane->id, dest_lane->id)) {
    out.push_back("ego destination lane " + dest_lane->id +
                  " not reachable from start lane " + start_lane->id);
  }
  return out;
}

Scenario load_scenario(const std::string& path) {
  const Json j = load_json_file(path);
  Scenario s;
  try {
    s = scenario_from_json(j);
  } catch (const Json::exception& e) {
    throw ScenarioError("malformed scenario " + path + ": " + e.what());
  }
  const auto problems = validate_intrinsic(s);
  if (!problems.empty()) {
    std::string msg = "invalid scenario " + path + ":";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ScenarioError(msg);
  }
  return s;
}

void save_scenario(const Scenario& s, const std::string& path) {
  write_json_file(scenario_to_json(s), path);
}

bool structurally_equal(const Scenario& a, const Scenario& b) {
  auto point_eq = [](const Eigen::Vector2d& p, const Eigen::Vector2d& q) {
    return p.x() == q.x() && p.y() == q.y();
  };
  auto pose_eq = [](const Pose2D& p, const Pose2D& q) {
    return p.x == q.x && p.y == q.y && p.heading == q.heading;
  };
  auto route_eq = [&](const Route& r, const Route& q) {
    return pose_eq(r.start, q.start) && point_eq(r.goal, q.goal) &&
           r.lane_sequence == q.lane_sequence;
  };
  if (a.id != b.id || a.map_ref != b.map_ref || a.duration_limit != b.duration_limit)
    return false;
  if (!pose_eq(a.ego_start, b.ego_start) ||
      !point_eq(a.ego_destination, b.ego_destination))
    return false;
  if (a.npcs.size() != b.npcs.size()) return false;
  for (std::size_t i = 0; i < a.npcs.size(); ++i) {
    const auto& x = a.npcs[i];
    const auto& y = b.npcs[i];
    if (x.length != y.length || x.width != y.width) return false;
    if (!route_eq(x.route, y.route)) return false;
    if (x.waypoints.size() != y.waypoints.size()) return false;
    for (std::size_t w = 0; w < x.waypoints.size(); ++w) {
      if (!point_eq(x.waypoints[w].position, y.waypoints[w].position) ||
          x.waypoints[w].speed != y.waypoints[w].speed)
        return false;
    }
  }
  return true;
}

}  // namespace scenfuzz
