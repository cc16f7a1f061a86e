#include "scenfuzz/serialize.hpp"

#include <fstream>

namespace scenfuzz {

Json pose_to_json(const Pose2D& p) {
  return Json{{"x", p.x}, {"y", p.y}, {"heading", p.heading}};
}

Pose2D pose_from_json(const Json& j) {
  return Pose2D(j.at("x").get<double>(), j.at("y").get<double>(),
                j.at("heading").get<double>());
}

Json point_to_json(const Eigen::Vector2d& p) {
  return Json{{"x", p.x()}, {"y", p.y()}};
}

Eigen::Vector2d point_from_json(const Json& j) {
  return {j.at("x").get<double>(), j.at("y").get<double>()};
}

Json polyline_to_json(const Polyline& p) {
  Json arr = Json::array();
  for (const auto& pt : p.points) arr.push_back(Json::array({pt.x(), pt.y()}));
  return arr;
}

Polyline polyline_from_json(const Json& j) {
  Polyline p;
  for (const auto& pt : j) {
    p.points.emplace_back(pt.at(0).get<double>(), pt.at(1).get<double>());
  }
  return p;
}

Json route_to_json(const Route& r) {
  return Json{{"start", pose_to_json(r.start)},
              {"goal", point_to_json(r.goal)},
              {"lanes", r.lane_sequence}};
}

Route route_from_json(const Json& j) {
  Route r;
  r.start = pose_from_json(j.at("start"));
  r.goal = point_from_json(j.at("goal"));
  r.lane_sequence = j.at("lanes").get<std::vector<std::string>>();
  return r;
}

Json scenario_to_json(const Scenario& s) {
  Json npcs = Json::array();
  for (const auto& npc : s.npcs) {
    Json wps = Json::array();
    for (const auto& w : npc.waypoints) {
      wps.push_back(Json{{"x", w.position.x()}, {"y", w.position.y()}, {"speed", w.speed}});
    }
    npcs.push_back(Json{{"length", npc.length},
                        {"width", npc.width},
                        {"route", route_to_json(npc.route)},
                        {"waypoints", wps}});
  }
  return Json{{"id", s.id},
              {"map", s.map_ref},
              {"ego",
               Json{{"start", pose_to_json(s.ego_start)},
                    {"destination", point_to_json(s.ego_destination)}}},
              {"duration_limit", s.duration_limit},
              {"npcs", npcs}};
}

Scenario scenario_from_json(const Json& j) {
  Scenario s;
  s.id = j.at("id").get<std::string>();
  s.map_ref = j.at("map").get<std::string>();
  s.ego_start = pose_from_json(j.at("ego").at("start"));
  s.ego_destination = point_from_json(j.at("ego").at("destination"));
  s.duration_limit = j.at("duration_limit").get<double>();
  for (const auto& n : j.at("npcs")) {
    NpcConfig npc;
    npc.length = n.at("length").get<double>();
    npc.width = n.at("width").get<double>();
    npc.route = route_from_json(n.at("route"));
    for (const auto& w : n.at("waypoints")) {
      Waypoint wp;
      wp.position = {w.at("x").get<double>(), w.at("y").get<double>()};
      wp.speed = w.at("speed").get<double>();
      npc.waypoints.push_back(wp);
    }
    s.npcs.push_back(std::move(npc));
  }
  return s;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw ScenarioError("parse error in " + path + ": " + e.what());
  }
  return j;
}

void write_json_file(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ScenarioError("cannot write file: " + path);
  out << j.dump(2) << '\n';
}

}  // namespace scenfuzz
