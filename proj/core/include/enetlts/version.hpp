#pragma once

namespace enetlts {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kArtifactFormatVersion = 1;

}  // namespace enetlts
