#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "smpred/env/geometry.hpp"
#include "smpred/env/types.hpp"
#include "smpred/nn/rng.hpp"

namespace smpred {

struct Rgb {
  double r = 0.0, g = 0.0, b = 0.0;
};

enum class ObjectKind { kCircle, kSquare, kTriangle };

// A geometric obstacle in the room. `size` is the radius for circles, the
// half-side for squares, and the circumradius for (equilateral) triangles.
struct SceneObject {
  ObjectKind kind = ObjectKind::kCircle;
  Vec2 center;
  double size = 1.0;
  Rgb color;
  double orientation = 0.0;  // squares/triangles only

  std::vector<Vec2> vertices() const;  // polygon kinds
  bool contains(Vec2 p) const;
  double distance_to(Vec2 p) const;  // 0 when p is inside
  std::optional<double> ray_hit(const Ray& ray) const;
};

enum class SensorKind { kDistanceRing, kRgbPanorama };

// Ray fan fixed in the world frame: the sensor translates with the arm tip
// but never rotates.
struct SensorSpec {
  SensorKind kind = SensorKind::kDistanceRing;
  int ray_count = 10;            // 10 for the distance ring, 16 for the camera
  double max_range = 24.0;       // room diagonal bound, never truncates inside
  double world_orientation = 0.0;

  int sensory_dim() const {
    return kind == SensorKind::kDistanceRing ? ray_count : 3 * ray_count;
  }
  static SensorSpec distance_ring() { return {SensorKind::kDistanceRing, 10, 24.0, 0.0}; }
  static SensorSpec rgb_panorama() { return {SensorKind::kRgbPanorama, 16, 24.0, 0.0}; }
};

struct RaycastHit {
  double distance = 0.0;
  Rgb color;
};

// Three-segment arm (unit lengths) in a 12x12 walled room populated with
// random geometric objects. The environment (walls + objects) can translate
// relative to the arm base; sensing happens at the arm tip.
class ArmRoom {
 public:
  static constexpr double kRoomWidth = 12.0;
  static constexpr int kSegments = 3;
  static constexpr double kBaseClearance = 0.5;
  static constexpr double kWallMargin = 0.1;
  static constexpr int kMaxRejectionAttempts = 10'000;

  // 3..8 objects with random kind/size/color/orientation; centers redrawn
  // until the object is fully inside the walls and clear of the base disc.
  static ArmRoom random(Rng& rng, SensorKind sensor);
  ArmRoom(std::vector<SceneObject> objects, SensorSpec sensor, std::uint64_t seed = 0);

  // Tip position in the arm-base frame: sum of unit segments at cumulative
  // joint angles (zero reference along +x). Joints must lie in [-pi, pi].
  static Position arm_tip(const MotorState& m);

  // None when the tip falls outside the walls or inside an object; otherwise
  // the distance ring (10 reals) or RGB panorama (48 reals).
  std::optional<SensoryState> sense(const MotorState& m) const;

  // Nearest hit among walls and objects from a room-frame origin, clamped to
  // max_range (hit at max_range reports black). The origin must be strictly
  // inside the walls and outside every object.
  RaycastHit raycast(Vec2 origin, Vec2 dir) const;

  // Offset drawn uniform over the side-12 square centered on the initial
  // relative position, redrawn until the base keeps a 0.1 wall margin.
  void translate(Rng& rng);
  void reset_translation() { translation_ = {0.0, 0.0}; }
  Vec2 translation() const { return translation_; }
  void set_translation(Vec2 t);

  // Joint angles uniform in [-pi, pi]^3.
  MotorState sample_motor(Rng& rng) const;

  // Room-frame tip for a base-frame position p under the current translation.
  Vec2 tip_in_room(Position p) const;
  bool tip_valid(Vec2 tip_room) const;

  const std::vector<SceneObject>& objects() const { return objects_; }
  const SensorSpec& sensor() const { return sensor_; }
  Vec2 base() const { return base_; }
  std::uint64_t seed() const { return seed_; }

  nlohmann::json to_json() const;
  static ArmRoom from_json(const nlohmann::json& j);

 private:
  std::vector<SceneObject> objects_;
  SensorSpec sensor_;
  Vec2 base_{kRoomWidth / 2.0, kRoomWidth / 2.0};
  Vec2 translation_{0.0, 0.0};
  std::uint64_t seed_ = 0;
};

// 5 evenly spaced values per joint over [-pi, pi] (125 combinations), with
// tip positions from arm_tip, filtered to configurations valid in the
// untranslated scene. Deterministic; group labels cluster equal positions.
std::vector<MotorGridPoint> regular_motor_grid_arm(const ArmRoom& room);

std::string to_string(ObjectKind kind);
ObjectKind object_kind_from_string(const std::string& name);
std::string to_string(SensorKind kind);
SensorKind sensor_kind_from_string(const std::string& name);

}  // namespace smpred
