#include "smpred/study/config.hpp"

#include <sstream>

#include "smpred/common/error.hpp"

namespace smpred {

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

}  // namespace

ExperimentConfig ExperimentConfig::preset(const std::string& name) {
  ExperimentConfig config;
  if (name == "desk") {
    config.n_transitions = 200'000;
    config.trials = 5;
    config.train.max_epochs = 50'000;
    config.train.decay_epochs = 25'000;
    config.train.eval_every = 100;
  } else if (name == "paper") {
    config.n_transitions = 3'000'000;
    config.trials = 10;
    config.train.max_epochs = 2'000'000;
    config.train.decay_epochs = 1'000'000;
    config.train.eval_every = 1'000;
  } else {
    throw ConfigError("unknown preset: " + name + " (expected desk or paper)");
  }
  return config;
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json explorations = nlohmann::json::array();
  for (ExplorationKind kind : this->explorations) explorations.push_back(to_string(kind));
  nlohmann::json train = this->train.to_json();
  train.erase("seed");  // per-trial, derived from base_seed
  return {{"setup", to_string(setup)},
          {"explorations", std::move(explorations)},
          {"dim_h", dim_h},
          {"activation", to_string(activation)},
          {"trials", trials},
          {"n_transitions", n_transitions},
          {"base_seed", base_seed},
          {"train", std::move(train)}};
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig config;
  config.setup = setup_from_string(j.value("setup", "grid_world"));
  config.explorations.clear();
  if (j.contains("explorations")) {
    if (j.at("explorations").is_string()) {
      for (const std::string& name : split_list(j.at("explorations").get<std::string>()))
        config.explorations.push_back(exploration_from_string(name));
    } else {
      for (const auto& name : j.at("explorations"))
        config.explorations.push_back(exploration_from_string(name.get<std::string>()));
    }
  } else {
    config.explorations.push_back(ExplorationKind::kMmt);
  }
  if (config.explorations.empty())
    throw ConfigError("config: explorations must not be empty");
  config.dim_h = j.value("dim_h", std::size_t{3});
  config.activation = activation_from_string(j.value("activation", "selu"));
  config.trials = j.value("trials", 10);
  config.n_transitions = j.value("n_transitions", std::size_t{3'000'000});
  config.base_seed = j.value("base_seed", std::uint64_t{0});
  if (j.contains("train")) config.train = TrainConfig::from_json(j.at("train"));
  if (config.trials < 1) throw ConfigError("config: trials must be >= 1");
  if (config.n_transitions < 1) throw ConfigError("config: n_transitions must be >= 1");
  if (config.dim_h < 1) throw ConfigError("config: dim_h must be >= 1");
  return config;
}

void ExperimentConfig::apply_override(const std::string& dotted_key, const std::string& value) {
  nlohmann::json j = to_json();
  nlohmann::json* node = &j;
  std::string key = dotted_key;
  const auto dot = dotted_key.find('.');
  if (dot != std::string::npos) {
    const std::string head = dotted_key.substr(0, dot);
    key = dotted_key.substr(dot + 1);
    if (!node->contains(head))
      throw ConfigError("unknown config section: " + head);
    node = &(*node)[head];
  }
  if (!node->contains(key)) throw ConfigError("unknown config field: " + dotted_key);

  // Interpret the value with the type of the existing field.
  nlohmann::json& slot = (*node)[key];
  try {
    if (slot.is_string()) {
      slot = value;
    } else if (slot.is_array()) {
      nlohmann::json arr = nlohmann::json::array();
      for (const std::string& item : split_list(value)) arr.push_back(item);
      slot = std::move(arr);
    } else if (slot.is_boolean()) {
      slot = (value == "true" || value == "1" || value == "yes");
    } else {
      slot = nlohmann::json::parse(value);
    }
  } catch (const nlohmann::json::parse_error&) {
    throw ConfigError("cannot parse value for " + dotted_key + ": " + value);
  }
  *this = from_json(j);
}

std::uint64_t ExperimentConfig::hash() const {
  const std::string canonical = to_json().dump();
  std::uint64_t h = 0xCBF29CE484222325ull;  // FNV-1a
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

std::string ExperimentConfig::hash_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash()));
  return buf;
}

}  // namespace smpred
