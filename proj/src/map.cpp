#include "scenfuzz/map.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>

#include "scenfuzz/serialize.hpp"

namespace scenfuzz {

void MapModel::rebuild_index() {
  index_.clear();
  for (std::size_t i = 0; i < lanes.size(); ++i) index_[lanes[i].id] = i;
}

const Lane* MapModel::find_lane(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &lanes[it->second];
}

const Lane& MapModel::lane(const std::string& id) const {
  const Lane* l = find_lane(id);
  if (!l) throw ScenarioError("unknown lane id: " + id);
  return *l;
}

const Lane* MapModel::nearest_lane(const Eigen::Vector2d& p) const {
  const Lane* best = nullptr;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& l : lanes) {
    const double d = l.centerline.project(p).distance;
    if (d < best_d) {
      best_d = d;
      best = &l;
    }
  }
  return best;
}

bool MapModel::linked(const std::string& from, const std::string& to) const {
  const Lane* a = find_lane(from);
  if (!a) return false;
  if (std::find(a->successors.begin(), a->successors.end(), to) != a->successors.end())
    return true;
  return a->left_neighbor == to || a->right_neighbor == to;
}

bool MapModel::reachable(const std::string& from, const std::string& to) const {
  if (!find_lane(from) || !find_lane(to)) return false;
  std::set<std::string> seen{from};
  std::deque<std::string> queue{from};
  while (!queue.empty()) {
    const std::string cur = queue.front();
    queue.pop_front();
    if (cur == to) return true;
    const Lane& l = lane(cur);
    std::vector<std::string> next = l.successors;
    if (!l.left_neighbor.empty() && l.left_crossable) next.push_back(l.left_neighbor);
    if (!l.right_neighbor.empty() && l.right_crossable) next.push_back(l.right_neighbor);
    for (const auto& n : next) {
      if (find_lane(n) && seen.insert(n).second) queue.push_back(n);
    }
  }
  return false;
}

namespace {

// Appends slice points to `out`, skipping near-duplicates at junctions.
void append_slice(const Polyline& line, double s0, double s1,
                  std::vector<Eigen::Vector2d>& out) {
  for (const auto& p : polyline_slice(line, s0, s1).points) {
    if (out.empty() || (out.back() - p).norm() > 1e-9) out.push_back(p);
  }
}

}  // namespace

Polyline MapModel::route_path(const Route& route) const {
  std::vector<Eigen::Vector2d> pts;
  if (route.lane_sequence.empty()) return Polyline{pts};
  double s_enter =
      lane(route.lane_sequence.front()).centerline.project(route.start.position()).arc;
  for (std::size_t i = 0; i < route.lane_sequence.size(); ++i) {
    const Lane& cur = lane(route.lane_sequence[i]);
    const bool last = i + 1 == route.lane_sequence.size();
    if (last) {
      const double s_goal = cur.centerline.project(route.goal).arc;
      append_slice(cur.centerline, s_enter, s_goal, pts);
      break;
    }
    const Lane& next = lane(route.lane_sequence[i + 1]);
    const bool is_successor =
        std::find(cur.successors.begin(), cur.successors.end(), next.id) !=
        cur.successors.end();
    if (is_successor) {
      append_slice(cur.centerline, s_enter, cur.centerline.length(), pts);
      s_enter = 0.0;
    } else {
      // Neighbor hop: leave halfway through the remaining stretch; the
      // lateral jump is smoothed out by whoever samples waypoints on it.
      const double s_exit = 0.5 * (s_enter + cur.centerline.length());
      append_slice(cur.centerline, s_enter, s_exit, pts);
      s_enter = next.centerline.project(cur.centerline.point_at(s_exit)).arc;
    }
  }
  return Polyline{pts};
}

std::vector<std::string> validate_map(const MapModel& m) {
  std::vector<std::string> out;
  for (const auto& l : m.lanes) {
    if (l.width <= 0.0) out.push_back("lane " + l.id + ": width must be > 0");
    if (l.centerline.points.size() < 2)
      out.push_back("lane " + l.id + ": centerline needs >= 2 points");
    else if (l.centerline.length() <= 0.0)
      out.push_back("lane " + l.id + ": centerline has zero length");
    for (const auto& s : l.successors) {
      if (!m.find_lane(s))
        out.push_back("lane " + l.id + ": successor " + s + " does not resolve");
    }
    if (!l.left_neighbor.empty() && !m.find_lane(l.left_neighbor))
      out.push_back("lane " + l.id + ": left neighbor " + l.left_neighbor +
                    " does not resolve");
    if (!l.right_neighbor.empty() && !m.find_lane(l.right_neighbor))
      out.push_back("lane " + l.id + ": right neighbor " + l.right_neighbor +
                    " does not resolve");
  }
  for (std::size_t i = 0; i < m.illegal_lines.size(); ++i) {
    if (m.illegal_lines[i].points.size() < 2)
      out.push_back("illegal line " + std::to_string(i) + ": needs >= 2 points");
  }
  for (const auto& sr : m.spawn_routes) {
    for (const auto& id : sr.route.lane_sequence) {
      if (!m.find_lane(id))
        out.push_back("spawn route " + sr.name + ": lane " + id + " does not resolve");
    }
  }
  return out;
}

MapModel load_map(const std::string& path) {
  const Json j = load_json_file(path);
  MapModel m;
  m.name = j.at("name").get<std::string>();
  for (const auto& lj : j.at("lanes")) {
    Lane l;
    l.id = lj.at("id").get<std::string>();
    l.width = lj.at("width").get<double>();
    l.centerline = polyline_from_json(lj.at("centerline"));
    if (lj.contains("successors"))
      l.successors = lj.at("successors").get<std::vector<std::string>>();
    if (lj.contains("left") && !lj.at("left").is_null())
      l.left_neighbor = lj.at("left").get<std::string>();
    if (lj.contains("right") && !lj.at("right").is_null())
      l.right_neighbor = lj.at("right").get<std::string>();
    l.left_crossable = lj.value("left_crossable", false);
    l.right_crossable = lj.value("right_crossable", false);
    m.lanes.push_back(std::move(l));
  }
  if (j.contains("illegal_lines")) {
    for (const auto& pl : j.at("illegal_lines"))
      m.illegal_lines.push_back(polyline_from_json(pl));
  }
  if (j.contains("spawn_routes")) {
    for (const auto& rj : j.at("spawn_routes")) {
      SpawnRoute sr;
      sr.name = rj.at("name").get<std::string>();
      sr.route = route_from_json(rj);
      m.spawn_routes.push_back(std::move(sr));
    }
  }
  m.rebuild_index();
  const auto problems = validate_map(m);
  if (!problems.empty()) {
    std::string msg = "invalid map " + path + ":";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ScenarioError(msg);
  }
  return m;
}

void save_map(const MapModel& m, const std::string& path) {
  Json lanes = Json::array();
  for (const auto& l : m.lanes) {
    Json lj{{"id", l.id},
            {"width", l.width},
            {"centerline", polyline_to_json(l.centerline)},
            {"successors", l.successors},
            {"left_crossable", l.left_crossable},
            {"right_crossable", l.right_crossable}};
    lj["left"] = l.left_neighbor.empty() ? Json(nullptr) : Json(l.left_neighbor);
    lj["right"] = l.right_neighbor.empty() ? Json(nullptr) : Json(l.right_neighbor);
    lanes.push_back(std::move(lj));
  }
  Json lines = Json::array();
  for (const auto& pl : m.illegal_lines) lines.push_back(polyline_to_json(pl));
  Json routes = Json::array();
  for (const auto& sr : m.spawn_routes) {
    Json rj = route_to_json(sr.route);
    rj["name"] = sr.name;
    routes.push_back(std::move(rj));
  }
  write_json_file(Json{{"name", m.name},
                       {"lanes", lanes},
                       {"illegal_lines", lines},
                       {"spawn_routes", routes}},
                  path);
}

}  // namespace scenfuzz
