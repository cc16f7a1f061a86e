#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "scenfuzz/scenario.hpp"

namespace scenfuzz {

struct VehicleState {
  Pose2D pose;
  double velocity = 0.0;      // m/s, signed along heading
  double acceleration = 0.0;  // m/s^2
};

struct Frame {
  double timestamp = 0.0;  // seconds since scenario start
  VehicleState ego;
  std::vector<VehicleState> npcs;  // same order as Scenario::npcs
};

enum class Termination { TimeLimit, DestinationReached, CollisionDetected, LineHitDetected };

const char* to_string(Termination t);
Termination termination_from_string(const std::string& s);

struct ObservationTrace {
  std::string scenario_id;
  std::uint64_t rng_seed = 0;
  std::vector<Frame> frames;
  Termination termination = Termination::TimeLimit;
  bool line_hit = false;  // an illegal line was touched at some frame
};

struct ControllerCommand {
  double target_acceleration = 0.0;  // m/s^2
  double target_steering = 0.0;      // front-wheel angle, radians
};

struct WorldView {
  const Frame& frame;  // ground-truth current frame (perception bypass)
  const MapModel& map;
  const Scenario& scenario;
  Eigen::Vector2d destination;
};

class AdsController {
 public:
  virtual ~AdsController() = default;
  virtual ControllerCommand step(const WorldView& view) = 0;
};

using ControllerFactory = std::function<std::unique_ptr<AdsController>()>;

// Thrown when the controller emits a non-finite command; the fuzz loop logs
// the run and moves on.
struct ControllerFault : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SimParams {
  double physics_step = 0.02;     // s
  double recording_period = 0.1;  // s; also the controller cadence
  double ego_wheelbase = 2.8;     // m
  double ego_length = 4.7;
  double ego_width = 2.06;
  double v_max = 25.0;
  double accel_min = -8.0;
  double accel_max = 4.0;
  double steer_max = 0.6;
  double destination_threshold = 1.0;  // m
  double stop_speed = 0.1;             // m/s, "stopped" bound
  bool jitter_recording = false;  // test mode: nonuniform frame timestamps
};

// One explicit-Euler step of the kinematic bicycle model. Velocity is kept
// in [0, v_max]; commands are clamped to the actuator bounds first.
VehicleState bicycle_step(const VehicleState& state, const ControllerCommand& cmd,
                          double dt, const SimParams& p);

// Open-loop playback of an NPC along its waypoint path. Speed is the linear
// interpolation of waypoint target speeds in arc length; heading follows the
// path tangent; the vehicle parks at the end of the path.
class NpcPlayback {
 public:
  explicit NpcPlayback(const NpcConfig& cfg);
  const VehicleState& state() const { return state_; }
  void advance(double dt);
  double speed_at(double arc) const;

 private:
  Polyline path_;
  std::vector<double> waypoint_arcs_;
  std::vector<double> waypoint_speeds_;
  double arc_ = 0.0;
  double path_length_ = 0.0;
  VehicleState state_;
};

// Stateless single step used by tests and tooling; simulate() keeps
// per-vehicle playback state instead of re-projecting every step.
VehicleState npc_motion_step(const NpcConfig& npc, const VehicleState& state, double dt);

VehicleState initial_npc_state(const NpcConfig& npc);

OrientedBox vehicle_box(const VehicleState& state, double length, double width);

// Deterministic fixed-step simulation. Frames are recorded every
// recording_period; collision and destination arrival are checked at recorded
// frames (collision terminates the run, illegal-line touches are recorded but
// do not).
ObservationTrace simulate(const Scenario& s, const MapModel& m,
                          AdsController& controller, std::uint64_t rng_seed,
                          const SimParams& params = {});

void save_trace(const ObservationTrace& t, const std::string& path);
ObservationTrace load_trace(const std::string& path);

}  // namespace scenfuzz
