#pragma once

#include <cmath>
#include <optional>
#include <span>

namespace smpred {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
};

// Ray with unit direction; intersections report the parameter t >= 0 along
// the direction, i.e. the Euclidean distance to the hit.
struct Ray {
  Vec2 origin;
  Vec2 dir;
};

// Smallest non-negative t with |origin + t*dir - center| == radius.
std::optional<double> ray_circle(const Ray& ray, Vec2 center, double radius);

// Smallest non-negative t where the ray crosses segment [a, b].
std::optional<double> ray_segment(const Ray& ray, Vec2 a, Vec2 b);

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

// Convex polygon with counter-clockwise or clockwise vertex order; boundary
// counts as inside.
bool point_in_convex_polygon(Vec2 p, std::span<const Vec2> vertices);

}  // namespace smpred
