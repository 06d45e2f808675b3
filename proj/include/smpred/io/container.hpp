#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include <json.hpp>

namespace smpred {

// On-disk container shared by dataset and checkpoint files:
//   8-byte magic | u64 LE header length | JSON header | u64 LE double count |
//   packed little-endian IEEE-754 doubles.
// Doubles are stored verbatim, so round trips are bit-exact.
struct Container {
  nlohmann::json header;
  std::vector<double> payload;
};

void write_container(const std::filesystem::path& path, const nlohmann::json& header,
                     std::span<const double> payload);
Container read_container(const std::filesystem::path& path);

inline constexpr char kContainerMagic[8] = {'S', 'M', 'P', 'B', 'I', 'N', '0', '1'};

}  // namespace smpred
