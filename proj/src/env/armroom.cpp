#include "smpred/env/armroom.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "smpred/common/error.hpp"
#include "smpred/common/version.hpp"

namespace smpred {

namespace {

constexpr double kPi = std::numbers::pi;
const Rgb kWallColor{0.5, 0.5, 0.5};
const Rgb kNoHitColor{0.0, 0.0, 0.0};

bool inside_walls(Vec2 p, double margin = 0.0) {
  return p.x > margin && p.x < ArmRoom::kRoomWidth - margin && p.y > margin &&
         p.y < ArmRoom::kRoomWidth - margin;
}

}  // namespace

std::vector<Vec2> SceneObject::vertices() const {
  std::vector<Vec2> verts;
  if (kind == ObjectKind::kSquare) {
    const double r = size * std::numbers::sqrt2;  // circumradius of the square
    for (int k = 0; k < 4; ++k) {
      const double a = orientation + kPi / 4.0 + k * kPi / 2.0;
      verts.push_back({center.x + r * std::cos(a), center.y + r * std::sin(a)});
    }
  } else if (kind == ObjectKind::kTriangle) {
    for (int k = 0; k < 3; ++k) {
      const double a = orientation + k * 2.0 * kPi / 3.0;
      verts.push_back({center.x + size * std::cos(a), center.y + size * std::sin(a)});
    }
  }
  return verts;
}

bool SceneObject::contains(Vec2 p) const {
  if (kind == ObjectKind::kCircle) return (p - center).norm() <= size;
  const auto verts = vertices();
  return point_in_convex_polygon(p, verts);
}

double SceneObject::distance_to(Vec2 p) const {
  if (kind == ObjectKind::kCircle) return std::max(0.0, (p - center).norm() - size);
  const auto verts = vertices();
  if (point_in_convex_polygon(p, verts)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < verts.size(); ++i)
    best = std::min(best, point_segment_distance(p, verts[i], verts[(i + 1) % verts.size()]));
  return best;
}

std::optional<double> SceneObject::ray_hit(const Ray& ray) const {
  if (kind == ObjectKind::kCircle) return ray_circle(ray, center, size);
  const auto verts = vertices();
  std::optional<double> best;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const auto t = ray_segment(ray, verts[i], verts[(i + 1) % verts.size()]);
    if (t && (!best || *t < *best)) best = t;
  }
  return best;
}

ArmRoom::ArmRoom(std::vector<SceneObject> objects, SensorSpec sensor, std::uint64_t seed)
    : objects_(std::move(objects)), sensor_(sensor), seed_(seed) {
  for (const SceneObject& obj : objects_) {
    if (obj.size <= 0.0) throw GeometryError("scene object with non-positive size");
  }
}

ArmRoom ArmRoom::random(Rng& rng, SensorKind sensor) {
  const Vec2 base{kRoomWidth / 2.0, kRoomWidth / 2.0};
  const int count = 3 + static_cast<int>(rng.uniform_index(6));
  std::vector<SceneObject> objects;
  objects.reserve(count);
  for (int i = 0; i < count; ++i) {
    SceneObject obj;
    obj.kind = static_cast<ObjectKind>(rng.uniform_index(3));
    obj.size = rng.uniform(0.3, 1.5);
    obj.color = {rng.uniform(), rng.uniform(), rng.uniform()};
    obj.orientation = rng.uniform(0.0, 2.0 * kPi);
    bool placed = false;
    for (int attempt = 0; attempt < kMaxRejectionAttempts; ++attempt) {
      obj.center = {rng.uniform(0.0, kRoomWidth), rng.uniform(0.0, kRoomWidth)};
      bool inside;
      if (obj.kind == ObjectKind::kCircle) {
        inside = inside_walls(obj.center, obj.size);
      } else {
        inside = true;
        for (Vec2 v : obj.vertices()) inside = inside && inside_walls(v);
      }
      if (inside && obj.distance_to(base) >= kBaseClearance) {
        placed = true;
        break;
      }
    }
    if (!placed)
      throw GeometryError("scene generation failed: could not place object " +
                          std::to_string(i) + " after " +
                          std::to_string(kMaxRejectionAttempts) + " attempts");
    objects.push_back(obj);
  }
  SensorSpec spec = sensor == SensorKind::kDistanceRing ? SensorSpec::distance_ring()
                                                        : SensorSpec::rgb_panorama();
  return ArmRoom(std::move(objects), spec, rng.seed());
}

Position ArmRoom::arm_tip(const MotorState& m) {
  double angle = 0.0;
  double x = 0.0, y = 0.0;
  for (double joint : m) {
    if (joint < -kPi || joint > kPi)
      throw DomainError("arm joint angle outside [-pi, pi]: " + std::to_string(joint));
    angle += joint;
    x += std::cos(angle);
    y += std::sin(angle);
  }
  return {x, y};
}

Vec2 ArmRoom::tip_in_room(Position p) const {
  return base_ + translation_ + Vec2{p[0], p[1]};
}

bool ArmRoom::tip_valid(Vec2 tip_room) const {
  if (!inside_walls(tip_room)) return false;
  for (const SceneObject& obj : objects_)
    if (obj.contains(tip_room)) return false;
  return true;
}

RaycastHit ArmRoom::raycast(Vec2 origin, Vec2 dir) const {
  if (!tip_valid(origin))
    throw GeometryError("raycast origin not strictly inside free space");
  const Vec2 corners[4] = {{0.0, 0.0},
                           {kRoomWidth, 0.0},
                           {kRoomWidth, kRoomWidth},
                           {0.0, kRoomWidth}};
  const Ray ray{origin, dir};
  double best = sensor_.max_range;
  Rgb color = kNoHitColor;
  for (int i = 0; i < 4; ++i) {
    const auto t = ray_segment(ray, corners[i], corners[(i + 1) % 4]);
    if (t && *t < best) {
      best = *t;
      color = kWallColor;
    }
  }
  for (const SceneObject& obj : objects_) {
    const auto t = obj.ray_hit(ray);
    if (t && *t < best) {
      best = *t;
      color = obj.color;
    }
  }
  return {best, color};
}

std::optional<SensoryState> ArmRoom::sense(const MotorState& m) const {
  const Vec2 tip = tip_in_room(arm_tip(m));
  if (!tip_valid(tip)) return std::nullopt;
  SensoryState s;
  s.reserve(sensor_.sensory_dim());
  for (int k = 0; k < sensor_.ray_count; ++k) {
    const double a = sensor_.world_orientation + 2.0 * kPi * k / sensor_.ray_count;
    const RaycastHit hit = raycast(tip, {std::cos(a), std::sin(a)});
    if (sensor_.kind == SensorKind::kDistanceRing) {
      s.push_back(hit.distance);
    } else {
      s.push_back(hit.color.r);
      s.push_back(hit.color.g);
      s.push_back(hit.color.b);
    }
  }
  return s;
}

void ArmRoom::translate(Rng& rng) {
  const double half = kRoomWidth / 2.0;
  for (int attempt = 0; attempt < kMaxRejectionAttempts; ++attempt) {
    const Vec2 offset{rng.uniform(-half, half), rng.uniform(-half, half)};
    if (inside_walls(base_ + offset, kWallMargin)) {
      translation_ = offset;
      return;
    }
  }
  throw GeometryError("environment translation failed: no placement keeps the base inside");
}

void ArmRoom::set_translation(Vec2 t) { translation_ = t; }

MotorState ArmRoom::sample_motor(Rng& rng) const {
  return {rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi)};
}

nlohmann::json ArmRoom::to_json() const {
  nlohmann::json j;
  j["schema"] = "smpred.scene";
  j["version"] = kSceneSchemaVersion;
  j["kind"] = sensor_.kind == SensorKind::kDistanceRing ? "arm_distance" : "arm_rgb";
  j["seed"] = seed_;
  j["room_width"] = kRoomWidth;
  j["base"] = {base_.x, base_.y};
  j["translation"] = {translation_.x, translation_.y};
  j["sensor"] = {{"kind", to_string(sensor_.kind)},
                 {"ray_count", sensor_.ray_count},
                 {"max_range", sensor_.max_range},
                 {"world_orientation", sensor_.world_orientation}};
  nlohmann::json objs = nlohmann::json::array();
  for (const SceneObject& obj : objects_) {
    objs.push_back({{"kind", to_string(obj.kind)},
                    {"center", {obj.center.x, obj.center.y}},
                    {"size", obj.size},
                    {"color", {obj.color.r, obj.color.g, obj.color.b}},
                    {"orientation", obj.orientation}});
  }
  j["objects"] = std::move(objs);
  return j;
}

ArmRoom ArmRoom::from_json(const nlohmann::json& j) {
  if (j.value("schema", "") != "smpred.scene") throw IoError("not a scene document");
  if (j.value("version", -1) != kSceneSchemaVersion)
    throw IoError("unsupported scene schema version");
  const std::string kind = j.value("kind", "");
  if (kind != "arm_distance" && kind != "arm_rgb")
    throw IoError("scene kind is not an arm setup: " + kind);
  std::vector<SceneObject> objects;
  for (const auto& o : j.at("objects")) {
    SceneObject obj;
    obj.kind = object_kind_from_string(o.at("kind").get<std::string>());
    obj.center = {o.at("center")[0].get<double>(), o.at("center")[1].get<double>()};
    obj.size = o.at("size").get<double>();
    obj.color = {o.at("color")[0].get<double>(), o.at("color")[1].get<double>(),
                 o.at("color")[2].get<double>()};
    obj.orientation = o.at("orientation").get<double>();
    objects.push_back(obj);
  }
  const auto& sj = j.at("sensor");
  SensorSpec sensor;
  sensor.kind = sensor_kind_from_string(sj.at("kind").get<std::string>());
  sensor.ray_count = sj.at("ray_count").get<int>();
  sensor.max_range = sj.at("max_range").get<double>();
  sensor.world_orientation = sj.at("world_orientation").get<double>();
  ArmRoom room(std::move(objects), sensor, j.at("seed").get<std::uint64_t>());
  room.set_translation(
      {j.at("translation")[0].get<double>(), j.at("translation")[1].get<double>()});
  return room;
}

std::vector<MotorGridPoint> regular_motor_grid_arm(const ArmRoom& room) {
  // Joint values {-pi, -pi/2, 0, pi/2, pi}; the +-pi pair makes some motor
  // states redundant, which the group labels expose.
  std::array<double, 5> joints{};
  for (int i = 0; i < 5; ++i) joints[i] = -kPi + i * (kPi / 2.0);

  ArmRoom untranslated = room;
  untranslated.reset_translation();

  std::vector<MotorGridPoint> grid;
  std::map<std::pair<long long, long long>, int> groups;
  for (double j0 : joints) {
    for (double j1 : joints) {
      for (double j2 : joints) {
        MotorGridPoint pt;
        pt.m = {j0, j1, j2};
        pt.p = ArmRoom::arm_tip(pt.m);
        if (!untranslated.tip_valid(untranslated.tip_in_room(pt.p))) continue;
        const std::pair<long long, long long> key{
            static_cast<long long>(std::llround(pt.p[0] * 1e6)),
            static_cast<long long>(std::llround(pt.p[1] * 1e6))};
        auto [it, inserted] = groups.emplace(key, static_cast<int>(groups.size()));
        pt.group = it->second;
        grid.push_back(pt);
      }
    }
  }
  return grid;
}

std::string to_string(ObjectKind kind) {
  switch (kind) {
    case ObjectKind::kCircle:
      return "circle";
    case ObjectKind::kSquare:
      return "square";
    case ObjectKind::kTriangle:
      return "triangle";
  }
  throw ConfigError("unknown object kind");
}

ObjectKind object_kind_from_string(const std::string& name) {
  if (name == "circle") return ObjectKind::kCircle;
  if (name == "square") return ObjectKind::kSquare;
  if (name == "triangle") return ObjectKind::kTriangle;
  throw ConfigError("unknown object kind: " + name);
}

std::string to_string(SensorKind kind) {
  return kind == SensorKind::kDistanceRing ? "distance_ring" : "rgb_panorama";
}

SensorKind sensor_kind_from_string(const std::string& name) {
  if (name == "distance_ring") return SensorKind::kDistanceRing;
  if (name == "rgb_panorama") return SensorKind::kRgbPanorama;
  throw ConfigError("unknown sensor kind: " + name);
}

}  // namespace smpred
