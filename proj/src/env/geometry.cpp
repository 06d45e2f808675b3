#include "smpred/env/geometry.hpp"

#include <algorithm>

namespace smpred {

std::optional<double> ray_circle(const Ray& ray, Vec2 center, double radius) {
  const Vec2 oc = ray.origin - center;
  // |oc + t*dir|^2 = r^2 with |dir| == 1.
  const double b = oc.dot(ray.dir);
  const double c = oc.dot(oc) - radius * radius;
  const double disc = b * b - c;
  if (disc < 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  const double t0 = -b - sq;
  if (t0 >= 0.0) return t0;
  const double t1 = -b + sq;
  if (t1 >= 0.0) return t1;
  return std::nullopt;
}

std::optional<double> ray_segment(const Ray& ray, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double denom = ray.dir.cross(ab);
  if (denom == 0.0) return std::nullopt;  // parallel (collinear grazing ignored)
  const Vec2 ao = a - ray.origin;
  const double t = ao.cross(ab) / denom;
  const double u = ao.cross(ray.dir) / denom;
  if (t >= 0.0 && u >= 0.0 && u <= 1.0) return t;
  return std::nullopt;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = ab.dot(ab);
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + ab * t)).norm();
}

bool point_in_convex_polygon(Vec2 p, std::span<const Vec2> vertices) {
  bool has_pos = false, has_neg = false;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = vertices[i];
    const Vec2 b = vertices[(i + 1) % n];
    const double side = (b - a).cross(p - a);
    if (side > 0.0) has_pos = true;
    if (side < 0.0) has_neg = true;
    if (has_pos && has_neg) return false;
  }
  return true;
}

}  // namespace smpred
