#include "scenfuzz/controller.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>

namespace scenfuzz {

namespace {

Eigen::Vector2d heading_vec(double heading) {
  return {std::cos(heading), std::sin(heading)};
}

class ReferenceController final : public AdsController {
 public:
  explicit ReferenceController(const ReferenceControllerParams& p) : p_(p) {}

  ControllerCommand step(const WorldView& view) override {
    if (!planned_) plan_initial_path(view);

    const VehicleState& ego = view.frame.ego;
    const Eigen::Vector2d pos = ego.pose.position();
    const double v = ego.velocity;
    const auto proj = path_.project(pos);
    const double s_ego = proj.arc;

    if (maneuver_active_ && s_ego > maneuver_end_s_) {
      maneuver_active_ = false;
      cooldown_ticks_ = 20;
    }
    if (cooldown_ticks_ > 0) --cooldown_ticks_;

    LeadInfo lead = find_lead(view, s_ego);

    if (!maneuver_active_ && cooldown_ticks_ == 0) {
      maybe_start_lane_change(view, s_ego, lead);
      if (maneuver_active_) {
        // path was rebuilt; refresh the projection and the lead
        const auto proj2 = path_.project(pos);
        lead = find_lead(view, proj2.arc);
        return compute_command(view, proj2.arc, lead);
      }
    }
    return compute_command(view, s_ego, lead);
  }

 private:
  struct LeadInfo {
    bool present = false;
    double gap = std::numeric_limits<double>::infinity();  // bumper to bumper
    double speed_along = 0.0;  // lead speed projected on the path
  };

  void plan_initial_path(const WorldView& view) {
    const std::vector<std::string> lanes =
        plan_lanes(view.map, view.frame.ego.pose, view.destination);
    Route route;
    route.start = view.frame.ego.pose;
    route.goal = view.destination;
    route.lane_sequence = lanes;
    if (!lanes.empty()) {
      path_ = view.map.route_path(route);
    }
    if (path_.points.size() < 2) {
      // no usable lane path: aim straight at the destination
      path_ = Polyline{{view.frame.ego.pose.position(), view.destination}};
    }
    planned_ = true;
  }

  // Shortest lane chain from the ego pose to the destination over successor
  // links and crossable neighbor boundaries.
  static std::vector<std::string> plan_lanes(const MapModel& map, const Pose2D& start,
                                             const Eigen::Vector2d& goal) {
    const Lane* from = nearest_directional_lane(map, start.position(), start.heading);
    const Lane* to = map.nearest_lane(goal);
    if (!from || !to) return {};
    std::set<std::string> seen{from->id};
    std::deque<std::vector<std::string>> queue{{from->id}};
    while (!queue.empty()) {
      std::vector<std::string> chain = queue.front();
      queue.pop_front();
      if (chain.back() == to->id) return chain;
      const Lane& l = map.lane(chain.back());
      std::vector<std::string> next = l.successors;
      if (!l.left_neighbor.empty() && l.left_crossable) next.push_back(l.left_neighbor);
      if (!l.right_neighbor.empty() && l.right_crossable)
        next.push_back(l.right_neighbor);
      for (const auto& n : next) {
        if (!map.find_lane(n) || !seen.insert(n).second) continue;
        std::vector<std::string> ext = chain;
        ext.push_back(n);
        queue.push_back(std::move(ext));
      }
    }
    return {};
  }

  static const Lane* nearest_directional_lane(const MapModel& map,
                                              const Eigen::Vector2d& pos,
                                              double heading) {
    const Lane* best = nullptr;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& l : map.lanes) {
      const auto proj = l.centerline.project(pos);
      const Eigen::Vector2d tangent = l.centerline.tangent_at(proj.arc);
      if (tangent.dot(heading_vec(heading)) < 0.2) continue;
      if (proj.distance < best_d) {
        best_d = proj.distance;
        best = &l;
      }
    }
    return best ? best : map.nearest_lane(pos);
  }

  // Nearest in-corridor vehicle ahead of the ego along the current path.
  // Vehicles above static_npc_speed also contribute constant-velocity
  // predicted positions; slower ones are taken where they stand.
  LeadInfo find_lead(const WorldView& view, double s_ego) const {
    LeadInfo lead;
    const VehicleState& ego = view.frame.ego;
    for (std::size_t i = 0; i < view.frame.npcs.size(); ++i) {
      const VehicleState& npc = view.frame.npcs[i];
      const double npc_len = view.scenario.npcs[i].length;
      const double npc_wid = view.scenario.npcs[i].width;
      const double corridor =
          0.5 * (view.scenario.npcs[i].width + 2.06) + p_.corridor_margin;
      (void)npc_wid;
      std::vector<Eigen::Vector2d> samples{npc.pose.position()};
      if (std::abs(npc.velocity) >= p_.static_npc_speed) {
        const Eigen::Vector2d dir = heading_vec(npc.pose.heading);
        for (double dt = 0.5; dt <= p_.prediction_horizon + 1e-9; dt += 0.5) {
          samples.push_back(npc.pose.position() + npc.velocity * dt * dir);
        }
      }
      for (const auto& sample : samples) {
        const auto proj = path_.project(sample);
        if (std::abs(proj.lateral) > corridor) continue;
        if (proj.arc <= s_ego || proj.arc - s_ego > p_.lead_horizon) continue;
        const double gap = proj.arc - s_ego - 0.5 * (4.7 + npc_len);
        if (gap < lead.gap) {
          lead.present = true;
          lead.gap = gap;
          const Eigen::Vector2d tangent = path_.tangent_at(proj.arc);
          lead.speed_along =
              std::max(0.0, npc.velocity * heading_vec(npc.pose.heading).dot(tangent));
        }
      }
    }
    (void)ego;
    return lead;
  }

  void maybe_start_lane_change(const WorldView& view, double s_ego, const LeadInfo& lead) {
    if (!lead.present || lead.gap > p_.lane_change_trigger_gap) return;
    if (lead.speed_along > p_.lane_change_lead_factor * p_.cruise_speed) return;
    const double remaining = path_.length() - s_ego;
    if (remaining < p_.lane_change_span + 2.0 * p_.lane_change_blend + 12.0) return;

    const Eigen::Vector2d pos = view.frame.ego.pose.position();
    const Lane* current =
        nearest_directional_lane(view.map, pos, view.frame.ego.pose.heading);
    if (!current) return;
    const Lane* target = nullptr;
    for (const auto& [id, crossable] :
         {std::pair{current->left_neighbor, current->left_crossable},
          std::pair{current->right_neighbor, current->right_crossable}}) {
      if (id.empty() || !crossable) continue;
      const Lane* cand = view.map.find_lane(id);
      if (!cand) continue;
      if (target_lane_clear(view, *cand)) {
        target = cand;
        break;
      }
    }
    if (!target) return;

    // Commit: diagonal into the neighbor lane, run alongside, merge back.
    // The gap is not checked again while the maneuver runs.
    const auto tproj = target->centerline.project(pos);
    const double t0 = tproj.arc + p_.lane_change_blend;
    const double t1 = t0 + p_.lane_change_span;
    const Polyline side = polyline_slice(target->centerline, t0, t1);
    if (side.points.size() < 2) return;
    const double s_back = s_ego + p_.lane_change_blend + p_.lane_change_span +
                          p_.lane_change_blend;
    const Polyline tail = polyline_slice(path_, s_back, path_.length());

    std::vector<Eigen::Vector2d> pts{pos};
    auto push = [&pts](const Eigen::Vector2d& p) {
      if ((pts.back() - p).norm() > 1e-9) pts.push_back(p);
    };
    for (const auto& p : side.points) push(p);
    for (const auto& p : tail.points) push(p);
    if (pts.size() < 2) return;
    path_ = Polyline{pts};
    maneuver_active_ = true;
    const auto back_proj = path_.project(side.points.back());
    maneuver_end_s_ = back_proj.arc + p_.lane_change_blend;
  }

  // One-shot clearance check on current positions only.
  bool target_lane_clear(const WorldView& view, const Lane& target) const {
    const auto ego_proj = target.centerline.project(view.frame.ego.pose.position());
    for (std::size_t i = 0; i < view.frame.npcs.size(); ++i) {
      const auto proj = target.centerline.project(view.frame.npcs[i].pose.position());
      if (proj.distance > 0.5 * target.width + 0.3) continue;
      if (std::abs(proj.arc - ego_proj.arc) < p_.lane_change_clear_gap) return false;
    }
    return true;
  }

  double curvature_speed_limit(double s_ego) const {
    const double horizon = 22.0;
    const double step = 2.5;
    double limit = std::numeric_limits<double>::infinity();
    Eigen::Vector2d prev_t = path_.tangent_at(s_ego);
    for (double d = step; d <= horizon; d += step) {
      const double s = s_ego + d;
      if (s >= path_.length()) break;
      const Eigen::Vector2d t = path_.tangent_at(s);
      const double dh = std::acos(std::clamp(prev_t.dot(t), -1.0, 1.0));
      prev_t = t;
      const double kappa = dh / step;
      if (kappa > 1e-4) {
        limit = std::min(limit, std::sqrt(p_.lateral_accel_max / kappa));
      }
    }
    return std::max(limit, 2.5);  // always willing to creep through a turn
  }

  // Crossing-traffic conflicts ahead; arrival times use current speeds, and
  // slow vehicles are skipped outright.
  double yield_speed_limit(const WorldView& view, double s_ego, double v_ego) const {
    double limit = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < view.frame.npcs.size(); ++i) {
      const VehicleState& npc = view.frame.npcs[i];
      if (std::abs(npc.velocity) < p_.static_npc_speed) continue;
      const Eigen::Vector2d dir = heading_vec(npc.pose.heading);
      // scan the path ahead for the closest approach to the NPC's ray
      double best_err = 1.6;
      double conflict_s = -1.0, conflict_d = 0.0;
      for (double d = 2.0; d <= 50.0; d += 2.0) {
        const double s = s_ego + d;
        if (s >= path_.length()) break;
        const Eigen::Vector2d pp = path_.point_at(s);
        const Eigen::Vector2d rel = pp - npc.pose.position();
        const double along = rel.dot(dir);
        if (along < 0.0) continue;  // behind the NPC
        const double off = std::abs(rel.x() * dir.y() - rel.y() * dir.x());
        if (off < best_err) {
          best_err = off;
          conflict_s = s;
          conflict_d = along;
        }
      }
      if (conflict_s < 0.0) continue;
      const Eigen::Vector2d path_t = path_.tangent_at(conflict_s);
      if (path_t.dot(dir) > 0.87) continue;  // same direction: corridor logic owns it
      const double t_npc = conflict_d / std::max(std::abs(npc.velocity), 0.1);
      const double t_ego = (conflict_s - s_ego) / std::max(v_ego, 1.0);
      if (t_npc > p_.yield_horizon) continue;
      if (std::abs(t_npc - t_ego) > p_.yield_ttc_window) continue;
      const double stop_dist =
          std::max(conflict_s - s_ego - p_.yield_stop_margin, 0.0);
      limit = std::min(limit, std::sqrt(2.0 * p_.comfort_decel * stop_dist));
    }
    return limit;
  }

  ControllerCommand compute_command(const WorldView& view, double s_ego,
                                    const LeadInfo& lead) const {
    const VehicleState& ego = view.frame.ego;
    const double v = ego.velocity;

    // pure-pursuit steering
    const double lookahead =
        std::clamp(p_.lookahead_gain * std::abs(v), p_.lookahead_min, p_.lookahead_max);
    const Eigen::Vector2d target = path_.point_at(s_ego + lookahead);
    const Eigen::Vector2d rel = target - ego.pose.position();
    double steering = 0.0;
    if (rel.norm() > 0.3) {
      const double alpha =
          wrap_angle(std::atan2(rel.y(), rel.x()) - ego.pose.heading);
      steering = std::atan2(2.0 * 2.8 * std::sin(alpha), std::max(lookahead, 1.0));
    }

    // longitudinal target speed
    double v_des = p_.cruise_speed;
    v_des = std::min(v_des, curvature_speed_limit(s_ego));

    const double remaining = path_.length() - s_ego;
    v_des = std::min(v_des, std::sqrt(2.0 * p_.comfort_decel *
                                      std::max(remaining - 0.4, 0.0)));

    if (lead.present) {
      const double safe = p_.safe_gap_base + p_.safe_gap_per_speed * v;
      if (lead.gap < 2.2) {
        v_des = 0.0;
      } else if (lead.gap < safe) {
        v_des = std::min(v_des,
                         std::max(0.0, lead.speed_along + 0.5 * (lead.gap - safe)));
      }
    }

    v_des = std::min(v_des, yield_speed_limit(view, s_ego, v));

    ControllerCommand cmd;
    cmd.target_steering = std::clamp(steering, -0.6, 0.6);
    cmd.target_acceleration = std::clamp(p_.accel_gain * (v_des - v), -8.0, 4.0);
    return cmd;
  }

  ReferenceControllerParams p_;
  bool planned_ = false;
  Polyline path_;
  bool maneuver_active_ = false;
  double maneuver_end_s_ = 0.0;
  int cooldown_ticks_ = 0;
};

}  // namespace

std::unique_ptr<AdsController> make_reference_controller(
    const ReferenceControllerParams& params) {
  return std::make_unique<ReferenceController>(params);
}

std::unique_ptr<AdsController> make_controller(const std::string& name) {
  if (name == "reference") return make_reference_controller();
  throw ScenarioError("unknown controller: " + name);
}

}  // namespace scenfuzz
