#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>

namespace pwrcap {

// Planar position in meters.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
  friend constexpr bool operator==(Point a, Point b) = default;

  friend std::ostream& operator<<(std::ostream& os, Point p) {
    return os << '(' << p.x << ", " << p.y << ')';
  }
};

inline constexpr double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }

inline constexpr double squared_distance(Point a, Point b) {
  const Point d = a - b;
  return dot(d, d);
}

inline double distance(Point a, Point b) { return std::sqrt(squared_distance(a, b)); }

// Shortest distance from p to the closed segment [a, b].
inline double distance_to_segment(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + t * ab);
}

// Perpendicular distance from p to the line through a and b (a != b).
inline double distance_to_line(Point p, Point a, Point b) {
  const Point ab = b - a;
  const Point ap = p - a;
  return std::abs(ab.x * ap.y - ab.y * ap.x) / std::sqrt(dot(ab, ab));
}

// Closed segment vs closed disc; tangency counts as intersecting.
inline bool segment_intersects_disc(Point a, Point b, Point center, double radius) {
  return distance_to_segment(center, a, b) <= radius;
}

}  // namespace pwrcap
