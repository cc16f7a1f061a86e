#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace scenfuzz {

inline constexpr double kPi = 3.14159265358979323846;

// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  // radians, kept in (-pi, pi]

  Pose2D() = default;
  Pose2D(double x_, double y_, double heading_)
      : x(x_), y(y_), heading(wrap_angle(heading_)) {}

  Eigen::Vector2d position() const { return {x, y}; }
};

// Rectangle with a pose at its geometric center; length runs along heading.
struct OrientedBox {
  Pose2D center;
  double length = 1.0;
  double width = 1.0;

  std::array<Eigen::Vector2d, 4> corners() const;
  bool contains(const Eigen::Vector2d& p) const;
};

// Open polygonal chain, >= 2 points, consecutive points distinct.
struct Polyline {
  std::vector<Eigen::Vector2d> points;

  Polyline() = default;
  explicit Polyline(std::vector<Eigen::Vector2d> pts) : points(std::move(pts)) {}

  double length() const;
  Eigen::Vector2d point_at(double arc) const;    // arc clamped to [0, length]
  Eigen::Vector2d tangent_at(double arc) const;  // unit tangent of hosting segment
  Eigen::Vector2d front() const { return points.front(); }
  Eigen::Vector2d back() const { return points.back(); }

  struct Projection {
    double arc = 0.0;       // arc length of the closest point
    double lateral = 0.0;   // signed offset, positive to the left of travel
    double distance = 0.0;  // unsigned distance
  };
  Projection project(const Eigen::Vector2d& p) const;
};

// Sub-polyline between two arc positions (clamped; empty when s1 <= s0).
Polyline polyline_slice(const Polyline& line, double s0, double s1);

double point_to_point_distance(const Eigen::Vector2d& a, const Eigen::Vector2d& b);

double point_segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                              const Eigen::Vector2d& b);

bool segments_intersect(const Eigen::Vector2d& a0, const Eigen::Vector2d& a1,
                        const Eigen::Vector2d& b0, const Eigen::Vector2d& b1);

// 0 when the segments touch or cross.
double segment_to_segment_distance(const Eigen::Vector2d& a0, const Eigen::Vector2d& a1,
                                   const Eigen::Vector2d& b0, const Eigen::Vector2d& b1);

// Separating-axis test; touching counts as overlap.
bool boxes_overlap(const OrientedBox& a, const OrientedBox& b);

// Shortest distance between two rectangles; exactly 0 iff they overlap or touch.
double box_to_box_distance(const OrientedBox& a, const OrientedBox& b);

// Shortest distance between a rectangle and a polyline; 0 iff they intersect
// or the polyline runs inside the box.
double box_to_polyline_distance(const OrientedBox& box, const Polyline& line);

}  // namespace scenfuzz
