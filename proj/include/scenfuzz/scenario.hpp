#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "scenfuzz/map.hpp"

namespace scenfuzz {

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Waypoint {
  Eigen::Vector2d position{0.0, 0.0};
  double speed = 0.0;  // target speed at this position, m/s
};

struct NpcConfig {
  Route route;
  std::vector<Waypoint> waypoints;  // ordered by arc length along the route
  double length = 4.5;
  double width = 2.0;
};

struct Scenario {
  std::string id;
  std::string map_ref;
  Pose2D ego_start;
  Eigen::Vector2d ego_destination{0.0, 0.0};
  std::vector<NpcConfig> npcs;
  double duration_limit = 60.0;  // simulated seconds
};

struct ValidationLimits {
  double v_max = 25.0;  // waypoint speed bound, m/s
  int max_npc = 5;
};

// Parses and checks intrinsic invariants (speed bounds, waypoint counts,
// duration). Map-dependent checks live in validate().
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& s, const std::string& path);

// Full invariant check against a map. Deterministic and order-stable.
std::vector<std::string> validate(const Scenario& s, const MapModel& m,
                                  const ValidationLimits& limits = {});

// Intrinsic checks only (no map).
std::vector<std::string> validate_intrinsic(const Scenario& s,
                                            const ValidationLimits& limits = {});

bool structurally_equal(const Scenario& a, const Scenario& b);

}  // namespace scenfuzz
