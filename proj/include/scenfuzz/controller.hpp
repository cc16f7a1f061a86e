#pragma once

#include <memory>
#include <string>

#include "scenfuzz/simulator.hpp"

namespace scenfuzz {

struct ReferenceControllerParams {
  double cruise_speed = 11.0;        // m/s on open road
  double lookahead_gain = 0.7;       // s of travel ahead for pure pursuit
  double lookahead_min = 3.0;        // m
  double lookahead_max = 12.0;       // m
  double accel_gain = 2.0;           // (m/s³)/(m/s) speed-error feedback
  double comfort_decel = 2.4;        // m/s², used for planned stops
  double lateral_accel_max = 2.6;    // m/s², curvature speed limit
  double safe_gap_base = 4.5;        // m
  double safe_gap_per_speed = 1.0;   // s, headway term
  double corridor_margin = 0.4;      // m added to half widths
  double lead_horizon = 55.0;        // m, how far ahead leads matter
  double static_npc_speed = 0.5;     // m/s: below this, no motion prediction
  double prediction_horizon = 1.5;   // s of constant-velocity prediction
  double lane_change_lead_factor = 0.55;  // lead slower than this * cruise
  double lane_change_trigger_gap = 28.0;  // m, lead closer than this
  double lane_change_clear_gap = 12.0;    // m clear in target lane (checked once)
  double lane_change_span = 42.0;         // m spent in the neighbor lane
  double lane_change_blend = 16.0;        // m of each diagonal blend
  double yield_ttc_window = 1.7;     // s, arrival-time overlap that forces a yield
  double yield_horizon = 7.0;        // s, conflicts further out are ignored
  double yield_stop_margin = 4.5;    // m, stop this far before the conflict point
};

// Rule-based lane-following planner used as the ADS under test: pure-pursuit
// steering, gap keeping, opportunistic lane changes, and time-to-conflict
// yielding at intersections. It keeps a handful of simplifications that a
// production stack would not (no motion prediction for NPCs slower than
// static_npc_speed, lane changes committed without re-checking the gap,
// arrival times from current speeds only), so adversarial NPC motion can
// drive it into collisions, line hits, and missed destinations.
std::unique_ptr<AdsController> make_reference_controller(
    const ReferenceControllerParams& params = {});

// Name-based lookup for the CLI; throws on unknown names.
std::unique_ptr<AdsController> make_controller(const std::string& name);

}  // namespace scenfuzz
