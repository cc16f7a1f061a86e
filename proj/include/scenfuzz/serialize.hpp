#pragma once

#include <json.hpp>
#include <string>

#include "scenfuzz/scenario.hpp"

namespace scenfuzz {

using Json = nlohmann::json;

Json pose_to_json(const Pose2D& p);
Pose2D pose_from_json(const Json& j);

Json point_to_json(const Eigen::Vector2d& p);
Eigen::Vector2d point_from_json(const Json& j);

Json polyline_to_json(const Polyline& p);
Polyline polyline_from_json(const Json& j);

Json route_to_json(const Route& r);
Route route_from_json(const Json& j);

Json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const Json& j);

Json load_json_file(const std::string& path);
void write_json_file(const Json& j, const std::string& path);

}  // namespace scenfuzz
