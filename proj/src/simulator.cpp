#include "scenfuzz/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "scenfuzz/rng.hpp"
#include "scenfuzz/serialize.hpp"

namespace scenfuzz {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::TimeLimit: return "time_limit";
    case Termination::DestinationReached: return "destination_reached";
    case Termination::CollisionDetected: return "collision_detected";
    case Termination::LineHitDetected: return "line_hit_detected";
  }
  return "unknown";
}

Termination termination_from_string(const std::string& s) {
  if (s == "time_limit") return Termination::TimeLimit;
  if (s == "destination_reached") return Termination::DestinationReached;
  if (s == "collision_detected") return Termination::CollisionDetected;
  if (s == "line_hit_detected") return Termination::LineHitDetected;
  throw ScenarioError("unknown termination: " + s);
}

VehicleState bicycle_step(const VehicleState& state, const ControllerCommand& cmd,
                          double dt, const SimParams& p) {
  const double a = std::clamp(cmd.target_acceleration, p.accel_min, p.accel_max);
  const double steer = std::clamp(cmd.target_steering, -p.steer_max, p.steer_max);
  VehicleState next = state;
  const double v = state.velocity;
  next.pose.x = state.pose.x + v * std::cos(state.pose.heading) * dt;
  next.pose.y = state.pose.y + v * std::sin(state.pose.heading) * dt;
  next.pose.heading =
      wrap_angle(state.pose.heading + v / p.ego_wheelbase * std::tan(steer) * dt);
  next.velocity = std::clamp(v + a * dt, 0.0, p.v_max);
  next.acceleration = dt > 0.0 ? (next.velocity - v) / dt : 0.0;
  return next;
}

namespace {

Polyline waypoint_path(const NpcConfig& cfg, std::vector<double>* arcs,
                       std::vector<double>* speeds) {
  Polyline path;
  arcs->clear();
  speeds->clear();
  double arc = 0.0;
  for (const auto& wp : cfg.waypoints) {
    if (!path.points.empty()) {
      const double seg = (wp.position - path.points.back()).norm();
      if (seg <= 1e-9) {
        // coincident waypoint: keep the later target speed at the same arc
        speeds->back() = wp.speed;
        continue;
      }
      arc += seg;
    }
    path.points.push_back(wp.position);
    arcs->push_back(arc);
    speeds->push_back(wp.speed);
  }
  return path;
}

}  // namespace

NpcPlayback::NpcPlayback(const NpcConfig& cfg) {
  path_ = waypoint_path(cfg, &waypoint_arcs_, &waypoint_speeds_);
  path_length_ = path_.length();
  state_.pose = cfg.route.start;
  if (!path_.points.empty()) {
    state_.pose.x = path_.points.front().x();
    state_.pose.y = path_.points.front().y();
  }
  if (path_.points.size() >= 2) {
    const Eigen::Vector2d t = path_.tangent_at(0.0);
    state_.pose.heading = wrap_angle(std::atan2(t.y(), t.x()));
  }
  state_.velocity = speed_at(0.0);
  state_.acceleration = 0.0;
}

double NpcPlayback::speed_at(double arc) const {
  if (waypoint_speeds_.empty()) return 0.0;
  if (path_length_ > 0.0 && arc >= path_length_) return 0.0;  // parked at the end
  if (arc <= waypoint_arcs_.front()) return waypoint_speeds_.front();
  for (std::size_t i = 1; i < waypoint_arcs_.size(); ++i) {
    if (arc <= waypoint_arcs_[i]) {
      const double span = waypoint_arcs_[i] - waypoint_arcs_[i - 1];
      const double u = span > 0.0 ? (arc - waypoint_arcs_[i - 1]) / span : 1.0;
      return waypoint_speeds_[i - 1] + u * (waypoint_speeds_[i] - waypoint_speeds_[i - 1]);
    }
  }
  return waypoint_speeds_.back();
}

void NpcPlayback::advance(double dt) {
  const double v = speed_at(arc_);
  const double prev_v = state_.velocity;
  arc_ = std::min(arc_ + v * dt, path_length_);
  if (path_.points.size() >= 2) {
    const Eigen::Vector2d p = path_.point_at(arc_);
    const Eigen::Vector2d t = path_.tangent_at(std::min(arc_, path_length_ - 1e-9));
    state_.pose.x = p.x();
    state_.pose.y = p.y();
    state_.pose.heading = wrap_angle(std::atan2(t.y(), t.x()));
  }
  state_.velocity = speed_at(arc_);
  state_.acceleration = dt > 0.0 ? (state_.velocity - prev_v) / dt : 0.0;
}

VehicleState initial_npc_state(const NpcConfig& npc) {
  return NpcPlayback(npc).state();
}

VehicleState npc_motion_step(const NpcConfig& npc, const VehicleState& state, double dt) {
  NpcPlayback playback(npc);
  std::vector<double> arcs, speeds;
  const Polyline path = waypoint_path(npc, &arcs, &speeds);
  // Recover progress from the position, then advance one step.
  const double arc =
      path.points.size() >= 2 ? path.project(state.pose.position()).arc : 0.0;
  const double v = playback.speed_at(arc);
  const double new_arc = std::min(arc + v * dt, path.length());
  VehicleState next = state;
  if (path.points.size() >= 2) {
    const Eigen::Vector2d p = path.point_at(new_arc);
    const Eigen::Vector2d t = path.tangent_at(std::min(new_arc, path.length() - 1e-9));
    next.pose.x = p.x();
    next.pose.y = p.y();
    next.pose.heading = wrap_angle(std::atan2(t.y(), t.x()));
  }
  next.velocity = playback.speed_at(new_arc);
  next.acceleration = dt > 0.0 ? (next.velocity - state.velocity) / dt : 0.0;
  return next;
}

OrientedBox vehicle_box(const VehicleState& state, double length, double width) {
  return OrientedBox{state.pose, length, width};
}

namespace {

bool command_finite(const ControllerCommand& c) {
  return std::isfinite(c.target_acceleration) && std::isfinite(c.target_steering);
}

struct LineBounds {
  double min_x, max_x, min_y, max_y;
};

LineBounds bounds_of(const Polyline& p) {
  LineBounds b{1e300, -1e300, 1e300, -1e300};
  for (const auto& pt : p.points) {
    b.min_x = std::min(b.min_x, pt.x());
    b.max_x = std::max(b.max_x, pt.x());
    b.min_y = std::min(b.min_y, pt.y());
    b.max_y = std::max(b.max_y, pt.y());
  }
  return b;
}

}  // namespace

ObservationTrace simulate(const Scenario& s, const MapModel& m,
                          AdsController& controller, std::uint64_t rng_seed,
                          const SimParams& params) {
  ObservationTrace trace;
  trace.scenario_id = s.id;
  trace.rng_seed = rng_seed;

  Rng rng(derive_seed(rng_seed, 0x51ac));

  VehicleState ego;
  ego.pose = s.ego_start;

  std::vector<NpcPlayback> npcs;
  npcs.reserve(s.npcs.size());
  for (const auto& cfg : s.npcs) npcs.emplace_back(cfg);

  std::vector<LineBounds> line_bounds;
  line_bounds.reserve(m.illegal_lines.size());
  for (const auto& l : m.illegal_lines) line_bounds.push_back(bounds_of(l));

  const int steps_per_record =
      std::max(1, static_cast<int>(std::lround(params.recording_period /
                                               params.physics_step)));
  const long total_records = static_cast<long>(
      std::floor(s.duration_limit / params.recording_period + 1e-9));

  auto make_frame = [&](double t) {
    Frame f;
    f.timestamp = t;
    f.ego = ego;
    f.npcs.reserve(npcs.size());
    for (const auto& n : npcs) f.npcs.push_back(n.state());
    return f;
  };

  auto control = [&](const Frame& f) {
    const WorldView view{f, m, s, s.ego_destination};
    const ControllerCommand cmd = controller.step(view);
    if (!command_finite(cmd)) {
      throw ControllerFault("controller returned non-finite command at t=" +
                            std::to_string(f.timestamp));
    }
    return cmd;
  };

  ControllerCommand cmd = control(make_frame(0.0));

  double prev_ego_v = ego.velocity;
  std::vector<double> prev_npc_v;
  for (const auto& n : npcs) prev_npc_v.push_back(n.state().velocity);
  double prev_record_t = 0.0;

  trace.termination = Termination::TimeLimit;
  for (long record = 1; record <= total_records; ++record) {
    for (int k = 0; k < steps_per_record; ++k) {
      ego = bicycle_step(ego, cmd, params.physics_step, params);
      for (auto& n : npcs) n.advance(params.physics_step);
    }
    const double nominal_t =
        static_cast<double>(record) * params.recording_period;
    double t = nominal_t;
    if (params.jitter_recording) {
      t = nominal_t + rng.uniform(-0.02, 0.02);
      t = std::max(t, prev_record_t + 1e-3);  // keep timestamps increasing
    }

    Frame frame = make_frame(t);
    // Acceleration bookkeeping: recorded acceleration is the mean over the
    // recording interval, so dv/dt holds exactly between frames.
    const double dt_rec = t - prev_record_t;
    frame.ego.acceleration = dt_rec > 0.0 ? (ego.velocity - prev_ego_v) / dt_rec : 0.0;
    for (std::size_t i = 0; i < frame.npcs.size(); ++i) {
      frame.npcs[i].acceleration =
          dt_rec > 0.0 ? (frame.npcs[i].velocity - prev_npc_v[i]) / dt_rec : 0.0;
    }
    prev_ego_v = ego.velocity;
    for (std::size_t i = 0; i < npcs.size(); ++i)
      prev_npc_v[i] = npcs[i].state().velocity;
    prev_record_t = t;

    const OrientedBox ego_box =
        vehicle_box(frame.ego, params.ego_length, params.ego_width);

    bool collided = false;
    for (std::size_t i = 0; i < frame.npcs.size() && !collided; ++i) {
      const double reach = 0.5 * (std::hypot(params.ego_length, params.ego_width) +
                                  std::hypot(s.npcs[i].length, s.npcs[i].width));
      if ((frame.npcs[i].pose.position() - frame.ego.pose.position()).norm() > reach)
        continue;
      collided = boxes_overlap(
          ego_box, vehicle_box(frame.npcs[i], s.npcs[i].length, s.npcs[i].width));
    }

    if (!trace.line_hit) {
      const double half_diag = 0.5 * std::hypot(params.ego_length, params.ego_width);
      for (std::size_t i = 0; i < m.illegal_lines.size(); ++i) {
        const LineBounds& b = line_bounds[i];
        if (frame.ego.pose.x < b.min_x - half_diag ||
            frame.ego.pose.x > b.max_x + half_diag ||
            frame.ego.pose.y < b.min_y - half_diag ||
            frame.ego.pose.y > b.max_y + half_diag)
          continue;
        if (box_to_polyline_distance(ego_box, m.illegal_lines[i]) == 0.0) {
          trace.line_hit = true;
          break;
        }
      }
    }

    trace.frames.push_back(std::move(frame));

    if (collided) {
      trace.termination = Termination::CollisionDetected;
      break;
    }
    const double dist_to_dest =
        (ego.pose.position() - s.ego_destination).norm();
    if (dist_to_dest <= params.destination_threshold &&
        std::abs(ego.velocity) < params.stop_speed) {
      trace.termination = Termination::DestinationReached;
      break;
    }
    if (record == total_records) {
      trace.termination = Termination::TimeLimit;
      break;
    }
    cmd = control(trace.frames.back());
  }
  return trace;
}

namespace {

Json vehicle_to_json(const VehicleState& v) {
  return Json::array({v.pose.x, v.pose.y, v.pose.heading, v.velocity, v.acceleration});
}

VehicleState vehicle_from_json(const Json& j) {
  VehicleState v;
  v.pose = Pose2D(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>());
  v.velocity = j.at(3).get<double>();
  v.acceleration = j.at(4).get<double>();
  return v;
}

}  // namespace

void save_trace(const ObservationTrace& t, const std::string& path) {
  Json frames = Json::array();
  for (const auto& f : t.frames) {
    Json vehicles = Json::array();
    vehicles.push_back(vehicle_to_json(f.ego));
    for (const auto& n : f.npcs) vehicles.push_back(vehicle_to_json(n));
    frames.push_back(Json{{"t", f.timestamp}, {"vehicles", vehicles}});
  }
  write_json_file(Json{{"scenario_id", t.scenario_id},
                       {"rng_seed", t.rng_seed},
                       {"termination", to_string(t.termination)},
                       {"line_hit", t.line_hit},
                       {"frames", frames}},
                  path);
}

ObservationTrace load_trace(const std::string& path) {
  const Json j = load_json_file(path);
  ObservationTrace t;
  t.scenario_id = j.at("scenario_id").get<std::string>();
  t.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  t.termination = termination_from_string(j.at("termination").get<std::string>());
  t.line_hit = j.at("line_hit").get<bool>();
  for (const auto& fj : j.at("frames")) {
    Frame f;
    f.timestamp = fj.at("t").get<double>();
    const auto& vehicles = fj.at("vehicles");
    f.ego = vehicle_from_json(vehicles.at(0));
    for (std::size_t i = 1; i < vehicles.size(); ++i)
      f.npcs.push_back(vehicle_from_json(vehicles.at(i)));
    t.frames.push_back(std::move(f));
  }
  return t;
}

}  // namespace scenfuzz
