#include "smpred/env/gridworld.hpp"

#include <cmath>
#include <string>

#include "smpred/common/error.hpp"
#include "smpred/common/version.hpp"

namespace smpred {

namespace {

// Monomial basis {1, x, y, x^2, xy, y^2, x^3, x^2 y, x y^2, y^3}.
inline std::array<double, GridWorld::kMonomials> monomials(double x, double y) {
  return {1.0, x, y, x * x, x * y, y * y, x * x * x, x * x * y, x * y * y, y * y * y};
}

inline int wrap10(int v) {
  int r = v % GridWorld::kSize;
  return r < 0 ? r + GridWorld::kSize : r;
}

}  // namespace

GridWorld GridWorld::random(Rng& rng) {
  GridWorld world;
  world.seed_ = rng.seed();
  for (auto& dim : world.poly_)
    for (double& c : dim) c = rng.uniform(-1.0, 1.0);
  return world;
}

Position GridWorld::position_of(const MotorState& m) {
  if (m[0] < 0.0 || m[1] < 0.0)
    throw DomainError("gridworld position: m1 and m2 must be >= 0");
  const double x = std::sqrt(m[0]);
  const double y = std::sqrt(m[1]);
  const double rx = std::round(x);
  const double ry = std::round(y);
  if (std::abs(x - rx) > 1e-9 || std::abs(y - ry) > 1e-9 || rx > kWorkspace - 1 ||
      ry > kWorkspace - 1)
    throw DomainError("gridworld position: sqrt(m1), sqrt(m2) must be in {0..4}, got (" +
                      std::to_string(x) + ", " + std::to_string(y) + ")");
  return {rx, ry};
}

std::array<double, GridWorld::kSensoryDim> GridWorld::field_at(int cell_x, int cell_y) const {
  const double nx = wrap10(cell_x) / double(kSize - 1);
  const double ny = wrap10(cell_y) / double(kSize - 1);
  const auto basis = monomials(nx, ny);
  std::array<double, kSensoryDim> s{};
  for (int d = 0; d < kSensoryDim; ++d) {
    double acc = 0.0;
    for (int k = 0; k < kMonomials; ++k) acc += poly_[d][k] * basis[k];
    s[d] = acc;
  }
  return s;
}

std::array<double, GridWorld::kSensoryDim> GridWorld::sense_cell(int x, int y) const {
  return field_at(x + translation_[0], y + translation_[1]);
}

SensoryState GridWorld::sense(const MotorState& m) const {
  const Position p = position_of(m);
  const auto s = sense_cell(static_cast<int>(p[0]), static_cast<int>(p[1]));
  return SensoryState(s.begin(), s.end());
}

void GridWorld::translate(Rng& rng) {
  translation_[0] = static_cast<int>(rng.uniform_index(kSize));
  translation_[1] = static_cast<int>(rng.uniform_index(kSize));
}

void GridWorld::set_translation(int tx, int ty) {
  translation_ = {wrap10(tx), wrap10(ty)};
}

MotorState GridWorld::sample_motor(Rng& rng) const {
  const double x = static_cast<double>(rng.uniform_index(kWorkspace));
  const double y = static_cast<double>(rng.uniform_index(kWorkspace));
  return {x * x, y * y, rng.uniform()};
}

nlohmann::json GridWorld::to_json() const {
  nlohmann::json j;
  j["schema"] = "smpred.scene";
  j["version"] = kSceneSchemaVersion;
  j["kind"] = "grid_world";
  j["seed"] = seed_;
  j["poly_coeffs"] = poly_;
  j["translation"] = translation_;
  return j;
}

GridWorld GridWorld::from_json(const nlohmann::json& j) {
  if (j.value("schema", "") != "smpred.scene")
    throw IoError("not a scene document");
  if (j.value("version", -1) != kSceneSchemaVersion)
    throw IoError("unsupported scene schema version");
  if (j.value("kind", "") != "grid_world")
    throw IoError("scene kind is not grid_world");
  GridWorld world;
  world.seed_ = j.at("seed").get<std::uint64_t>();
  world.poly_ = j.at("poly_coeffs")
                    .get<std::array<std::array<double, kMonomials>, kSensoryDim>>();
  const auto t = j.at("translation").get<std::array<int, 2>>();
  world.set_translation(t[0], t[1]);
  return world;
}

std::vector<MotorGridPoint> regular_motor_grid_gridworld() {
  std::vector<MotorGridPoint> grid;
  grid.reserve(75);
  for (int x = 0; x < GridWorld::kWorkspace; ++x) {
    for (int y = 0; y < GridWorld::kWorkspace; ++y) {
      for (double m3 : {0.0, 0.5, 1.0}) {
        MotorGridPoint pt;
        pt.m = {double(x) * x, double(y) * y, m3};
        pt.p = {double(x), double(y)};
        pt.group = x * GridWorld::kWorkspace + y;
        grid.push_back(pt);
      }
    }
  }
  return grid;
}

}  // namespace smpred
