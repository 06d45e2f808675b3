#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "smpred/nn/matrix.hpp"
#include "smpred/nn/rng.hpp"

namespace smpred {

enum class ExplorationKind { kMtm, kMm, kMmt };

std::string to_string(ExplorationKind kind);
ExplorationKind exploration_from_string(const std::string& name);

// MMT translates the environment after every 100 attempted transitions.
inline constexpr std::size_t kMmtTranslationPeriod = 100;

// Per-channel affine map x -> x * scale + offset fitted so every channel
// spans [-0.8, 0.8] over the whole dataset. Motor channels pool the t and
// t+1 samples, likewise sensory channels.
struct Normalization {
  std::vector<double> motor_scale, motor_offset;
  std::vector<double> sensory_scale, sensory_offset;

  double apply_motor(std::size_t ch, double x) const { return x * motor_scale[ch] + motor_offset[ch]; }
  double apply_sensory(std::size_t ch, double x) const {
    return x * sensory_scale[ch] + sensory_offset[ch];
  }
  double invert_motor(std::size_t ch, double y) const {
    return (y - motor_offset[ch]) / motor_scale[ch];
  }
  double invert_sensory(std::size_t ch, double y) const {
    return (y - sensory_offset[ch]) / sensory_scale[ch];
  }

  nlohmann::json to_json() const;
  static Normalization from_json(const nlohmann::json& j);
};

struct Provenance {
  std::string setup;        // grid_world | arm_distance | arm_rgb
  std::string exploration;  // mtm | mm | mmt
  std::uint64_t seed = 0;
  nlohmann::json scene;  // exact scene replay document

  nlohmann::json to_json() const;
  static Provenance from_json(const nlohmann::json& j);
};

// Sensorimotor transitions (m_t, s_t) -> (m_next, s_next), stored column-block
// wise as four row-major arrays for cheap minibatch assembly.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::size_t motor_dim, std::size_t sensory_dim);

  std::size_t size() const { return n_; }
  std::size_t motor_dim() const { return motor_dim_; }
  std::size_t sensory_dim() const { return sensory_dim_; }

  void append(std::span<const double> m_t, std::span<const double> s_t,
              std::span<const double> m_next, std::span<const double> s_next);

  std::span<const double> m_t(std::size_t i) const { return {m_t_.data() + i * motor_dim_, motor_dim_}; }
  std::span<const double> s_t(std::size_t i) const {
    return {s_t_.data() + i * sensory_dim_, sensory_dim_};
  }
  std::span<const double> m_next(std::size_t i) const {
    return {m_next_.data() + i * motor_dim_, motor_dim_};
  }
  std::span<const double> s_next(std::size_t i) const {
    return {s_next_.data() + i * sensory_dim_, sensory_dim_};
  }

  // Fits every channel to span [-0.8, 0.8] and applies the map in place.
  // Throws DegenerateError naming the channel when one is constant.
  void normalize();
  bool normalized() const { return norm_.has_value(); }
  const Normalization& norm() const;

  // `size` transitions drawn uniformly with replacement; fills the four batch
  // matrices (resized as needed).
  void minibatch(Rng& rng, std::size_t size, Matrix& m_t, Matrix& s_t, Matrix& m_next,
                 Matrix& s_next) const;

  void save(const std::filesystem::path& path) const;
  static Dataset load(const std::filesystem::path& path);
  void export_csv(const std::filesystem::path& path) const;

  bool operator==(const Dataset& other) const;

  Provenance provenance;

 private:
  std::size_t n_ = 0;
  std::size_t motor_dim_ = 0;
  std::size_t sensory_dim_ = 0;
  std::vector<double> m_t_, s_t_, m_next_, s_next_;
  std::optional<Normalization> norm_;
};

}  // namespace smpred
