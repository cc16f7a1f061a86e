#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "scenfuzz/geometry.hpp"

namespace scenfuzz {

struct Lane {
  std::string id;
  Polyline centerline;  // ordered in the direction of travel
  double width = 3.5;
  std::vector<std::string> successors;
  std::string left_neighbor;   // empty when there is none
  std::string right_neighbor;
  bool left_crossable = false;
  bool right_crossable = false;
};

struct Route {
  Pose2D start;
  Eigen::Vector2d goal{0.0, 0.0};
  std::vector<std::string> lane_sequence;
};

struct SpawnRoute {
  std::string name;
  Route route;
};

struct MapModel {
  std::string name;
  std::vector<Lane> lanes;
  std::vector<Polyline> illegal_lines;
  std::vector<SpawnRoute> spawn_routes;

  void rebuild_index();
  const Lane* find_lane(const std::string& id) const;
  const Lane& lane(const std::string& id) const;  // throws on unknown id
  const Lane* nearest_lane(const Eigen::Vector2d& p) const;

  // Direct link: successor in either direction or a neighbor relation.
  bool linked(const std::string& from, const std::string& to) const;
  // BFS over successors and crossable neighbor boundaries.
  bool reachable(const std::string& from, const std::string& to) const;

  // Concrete geometric path for a route: centerlines concatenated across
  // successor links; neighbor hops jump laterally halfway along the lane.
  // The path starts at the projection of route.start and ends at the
  // projection of route.goal.
  Polyline route_path(const Route& route) const;

 private:
  std::unordered_map<std::string, std::size_t> index_;
};

MapModel load_map(const std::string& path);
void save_map(const MapModel& m, const std::string& path);

// Human-readable invariant violations; empty means the map is usable.
std::vector<std::string> validate_map(const MapModel& m);

}  // namespace scenfuzz
