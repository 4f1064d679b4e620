#pragma once

namespace jmlm {

inline constexpr const char* kToolVersion = "0.1.0";

// Bumped whenever the corresponding on-disk layout changes.
inline constexpr int kConfigSchemaVersion = 1;
inline constexpr int kManifestFormatVersion = 1;
inline constexpr int kVocabFormatVersion = 1;
inline constexpr int kCheckpointFormatVersion = 1;
inline constexpr int kReportFormatVersion = 1;

} // namespace jmlm
