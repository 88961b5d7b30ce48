#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace enetlts {

/// Purpose tags for keyed substreams. Every randomized stage of the pipeline
/// draws from its own stream, so results do not depend on scheduling or on
/// how much randomness other stages consumed.
enum class StreamPurpose : std::uint64_t {
  Elemental = 1,
  CvFolds = 2,
  ReweightCv = 3,
  ClassicCv = 4,
  SimTrain = 5,
  SimTest = 6,
  Study = 7,
  Bench = 8,
};

/// Philox4x32-10 counter-based generator.
///
/// Substreams are addressed by mixing stream tags into the 64-bit key, so a
/// (seed, tags...) tuple identifies an independent sequence regardless of
/// evaluation order or thread count. The same tuple always reproduces the
/// same draws, which is what the determinism guarantees of the search and
/// simulation modules are built on.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> tags);

  /// Derive an independent stream keyed by additional tags.
  Rng substream(std::initializer_list<std::uint64_t> tags) const;
  Rng substream(StreamPurpose purpose,
                std::initializer_list<std::uint64_t> tags = {}) const;

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01();
  /// Uniform in (0, 1]; safe as a log() argument.
  double uniform01_open();
  /// Standard normal via Box-Muller (one value cached per pair).
  double normal();
  /// Uniform integer in [0, bound); bound > 0. Unbiased (rejection).
  std::uint64_t uniform_int(std::uint64_t bound);

  /// k distinct values from [0, n), in draw order.
  std::vector<int> sample_without_replacement(int n, int k);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_int(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int pos_ = 4;
  bool has_cached_normal_ = false;
  double cached_normal_ = 0.0;

  void refill();
};

}  // namespace enetlts
