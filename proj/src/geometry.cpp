#include "scenfuzz/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace scenfuzz {

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

std::array<Eigen::Vector2d, 4> OrientedBox::corners() const {
  const double c = std::cos(center.heading);
  const double s = std::sin(center.heading);
  const Eigen::Vector2d axis_l{c, s};
  const Eigen::Vector2d axis_w{-s, c};
  const Eigen::Vector2d o = center.position();
  const Eigen::Vector2d dl = 0.5 * length * axis_l;
  const Eigen::Vector2d dw = 0.5 * width * axis_w;
  return {o + dl + dw, o + dl - dw, o - dl - dw, o - dl + dw};
}

bool OrientedBox::contains(const Eigen::Vector2d& p) const {
  const double c = std::cos(center.heading);
  const double s = std::sin(center.heading);
  const Eigen::Vector2d d = p - center.position();
  const double u = c * d.x() + s * d.y();
  const double v = -s * d.x() + c * d.y();
  return std::abs(u) <= 0.5 * length && std::abs(v) <= 0.5 * width;
}

double Polyline::length() const {
  double total = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    total += (points[i] - points[i - 1]).norm();
  }
  return total;
}

Eigen::Vector2d Polyline::point_at(double arc) const {
  if (points.empty()) return Eigen::Vector2d::Zero();
  if (arc <= 0.0) return points.front();
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double seg = (points[i] - points[i - 1]).norm();
    if (arc <= seg) {
      const double u = seg > 0.0 ? arc / seg : 0.0;
      return points[i - 1] + u * (points[i] - points[i - 1]);
    }
    arc -= seg;
  }
  return points.back();
}

Eigen::Vector2d Polyline::tangent_at(double arc) const {
  if (points.size() < 2) return {1.0, 0.0};
  arc = std::max(arc, 0.0);
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double seg = (points[i] - points[i - 1]).norm();
    if (arc <= seg || i + 1 == points.size()) {
      return (points[i] - points[i - 1]).normalized();
    }
    arc -= seg;
  }
  return (points.back() - points[points.size() - 2]).normalized();
}

Polyline::Projection Polyline::project(const Eigen::Vector2d& p) const {
  Projection best;
  best.distance = std::numeric_limits<double>::infinity();
  double arc_base = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const Eigen::Vector2d a = points[i - 1];
    const Eigen::Vector2d b = points[i];
    const Eigen::Vector2d ab = b - a;
    const double seg = ab.norm();
    if (seg <= 0.0) continue;
    const double t = std::clamp((p - a).dot(ab) / (seg * seg), 0.0, 1.0);
    const Eigen::Vector2d q = a + t * ab;
    const double d = (p - q).norm();
    if (d < best.distance) {
      const Eigen::Vector2d tangent = ab / seg;
      best.distance = d;
      best.arc = arc_base + t * seg;
      best.lateral = tangent.x() * (p.y() - q.y()) - tangent.y() * (p.x() - q.x());
    }
    arc_base += seg;
  }
  return best;
}

double point_to_point_distance(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return (a - b).norm();
}

double point_segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                              const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 <= 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

namespace {

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

int orientation_sign(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                     const Eigen::Vector2d& c) {
  const double v = cross2(b - a, c - a);
  if (v > 0.0) return 1;
  if (v < 0.0) return -1;
  return 0;
}

bool on_segment(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                const Eigen::Vector2d& p) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

}  // namespace

bool segments_intersect(const Eigen::Vector2d& a0, const Eigen::Vector2d& a1,
                        const Eigen::Vector2d& b0, const Eigen::Vector2d& b1) {
  const int o1 = orientation_sign(a0, a1, b0);
  const int o2 = orientation_sign(a0, a1, b1);
  const int o3 = orientation_sign(b0, b1, a0);
  const int o4 = orientation_sign(b0, b1, a1);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a0, a1, b0)) return true;
  if (o2 == 0 && on_segment(a0, a1, b1)) return true;
  if (o3 == 0 && on_segment(b0, b1, a0)) return true;
  if (o4 == 0 && on_segment(b0, b1, a1)) return true;
  return false;
}

double segment_to_segment_distance(const Eigen::Vector2d& a0, const Eigen::Vector2d& a1,
                                   const Eigen::Vector2d& b0, const Eigen::Vector2d& b1) {
  if (segments_intersect(a0, a1, b0, b1)) return 0.0;
  double d = point_segment_distance(a0, b0, b1);
  d = std::min(d, point_segment_distance(a1, b0, b1));
  d = std::min(d, point_segment_distance(b0, a0, a1));
  d = std::min(d, point_segment_distance(b1, a0, a1));
  return d;
}

Polyline polyline_slice(const Polyline& line, double s0, double s1) {
  std::vector<Eigen::Vector2d> pts;
  s0 = std::clamp(s0, 0.0, line.length());
  s1 = std::clamp(s1, 0.0, line.length());
  if (s1 - s0 < 1e-9) return Polyline{pts};
  auto push = [&pts](const Eigen::Vector2d& p) {
    if (pts.empty() || (pts.back() - p).norm() > 1e-9) pts.push_back(p);
  };
  push(line.point_at(s0));
  double arc = 0.0;
  for (std::size_t i = 1; i < line.points.size(); ++i) {
    arc += (line.points[i] - line.points[i - 1]).norm();
    if (arc > s0 + 1e-9 && arc < s1 - 1e-9) push(line.points[i]);
  }
  push(line.point_at(s1));
  return Polyline{pts};
}

// Separating-axis overlap test for two oriented rectangles.
bool boxes_overlap(const OrientedBox& a, const OrientedBox& b) {
  const auto ca = a.corners();
  const auto cb = b.corners();
  const std::array<Eigen::Vector2d, 4> axes = {
      Eigen::Vector2d{std::cos(a.center.heading), std::sin(a.center.heading)},
      Eigen::Vector2d{-std::sin(a.center.heading), std::cos(a.center.heading)},
      Eigen::Vector2d{std::cos(b.center.heading), std::sin(b.center.heading)},
      Eigen::Vector2d{-std::sin(b.center.heading), std::cos(b.center.heading)}};
  for (const auto& axis : axes) {
    double amin = std::numeric_limits<double>::infinity(), amax = -amin;
    double bmin = amin, bmax = -amin;
    for (const auto& p : ca) {
      const double v = axis.dot(p);
      amin = std::min(amin, v);
      amax = std::max(amax, v);
    }
    for (const auto& p : cb) {
      const double v = axis.dot(p);
      bmin = std::min(bmin, v);
      bmax = std::max(bmax, v);
    }
    if (amax < bmin || bmax < amin) return false;
  }
  return true;
}

double box_to_box_distance(const OrientedBox& a, const OrientedBox& b) {
  if (boxes_overlap(a, b)) return 0.0;
  const auto ca = a.corners();
  const auto cb = b.corners();
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      best = std::min(best, segment_to_segment_distance(ca[i], ca[(i + 1) % 4],
                                                        cb[j], cb[(j + 1) % 4]));
    }
  }
  return best;
}

double box_to_polyline_distance(const OrientedBox& box, const Polyline& line) {
  const auto corners = box.corners();
  for (const auto& p : line.points) {
    if (box.contains(p)) return 0.0;
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < line.points.size(); ++i) {
    const Eigen::Vector2d& s0 = line.points[i - 1];
    const Eigen::Vector2d& s1 = line.points[i];
    for (int j = 0; j < 4; ++j) {
      const double d =
          segment_to_segment_distance(corners[j], corners[(j + 1) % 4], s0, s1);
      if (d == 0.0) return 0.0;
      best = std::min(best, d);
    }
  }
  return best;
}

}  // namespace scenfuzz
