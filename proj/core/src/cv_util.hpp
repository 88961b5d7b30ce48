#pragma once

// Internal fold-assignment helpers shared by tuning and reweighting.

#include <numeric>
#include <vector>

#include "enetlts/data.hpp"
#include "enetlts/rng.hpp"

namespace enetlts::detail {

/// Fold id per position of `rows`. Stratified assignment shuffles each class
/// and deals round-robin, which spreads a class over as many folds as it has
/// members.
inline std::vector<int> assign_folds(const Dataset& data,
                                     const std::vector<int>& rows, int k,
                                     bool stratified, Rng& rng) {
  const int count = static_cast<int>(rows.size());
  std::vector<int> fold(static_cast<std::size_t>(count), 0);
  if (!stratified) {
    std::vector<int> pos(static_cast<std::size_t>(count));
    std::iota(pos.begin(), pos.end(), 0);
    rng.shuffle(pos);
    for (int i = 0; i < count; ++i) {
      fold[static_cast<std::size_t>(pos[static_cast<std::size_t>(i)])] = i % k;
    }
    return fold;
  }
  for (int c = 0; c < 2; ++c) {
    std::vector<int> pos;
    for (int i = 0; i < count; ++i) {
      if (static_cast<int>(data.y[rows[static_cast<std::size_t>(i)]]) == c) {
        pos.push_back(i);
      }
    }
    rng.shuffle(pos);
    for (std::size_t i = 0; i < pos.size(); ++i) {
      fold[static_cast<std::size_t>(pos[i])] = static_cast<int>(i) % k;
    }
  }
  return fold;
}

/// For the binomial family every training set (all folds but one) must keep
/// both classes.
inline bool folds_usable(const Dataset& data, const std::vector<int>& rows,
                         const std::vector<int>& fold, int k, bool binomial) {
  if (!binomial) return true;
  for (int f = 0; f < k; ++f) {
    int c0 = 0, c1 = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (fold[i] == f) continue;
      (data.y[rows[i]] == 0.0 ? c0 : c1)++;
    }
    if (c0 == 0 || c1 == 0) return false;
  }
  return true;
}

}  // namespace enetlts::detail
