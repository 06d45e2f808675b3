#pragma once

namespace smpred {

inline constexpr const char* kVersion = "1.0.0";

// Bump these when the corresponding on-disk schema changes.
inline constexpr int kSceneSchemaVersion = 1;
inline constexpr int kDatasetSchemaVersion = 1;
inline constexpr int kCheckpointSchemaVersion = 1;
inline constexpr int kCloudSchemaVersion = 1;

}  // namespace smpred
