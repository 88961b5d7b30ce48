#pragma once

#include <string>
#include <vector>

#include "enetlts/data.hpp"

namespace enetlts {

/// Serialized model: the fit, the initial robust standardizer, and enough of
/// a configuration fingerprint to refuse mismatched prediction inputs.
/// Stored as JSON with round-trip-exact numbers.
struct ModelArtifact {
  int format_version = 1;
  std::string library_version;
  ModelFit fit;
  Standardizer scaler;  // robust initial standardizer (diagnostics)
  std::vector<std::string> feature_names;
  std::string response_name;
  int n_train = 0;
  int h = 0;
  std::uint64_t seed = 0;

  void save(const std::string& path) const;
  static ModelArtifact load(const std::string& path);

  /// Throws ValidationError when `columns` does not match the fingerprint.
  void check_features(const std::vector<std::string>& columns) const;
};

}  // namespace enetlts
