#include "enetlts/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace enetlts {
namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t mix_tag(std::uint64_t key, std::uint64_t tag) {
  return splitmix64(key ^ (splitmix64(tag) + 0x9E3779B97F4A7C15ull));
}

inline void philox_round(std::array<std::uint32_t, 4>& c, std::uint32_t k0,
                         std::uint32_t k1) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * c[2];
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
}

}  // namespace

Rng::Rng(std::uint64_t seed) : key_(splitmix64(seed)) {}

Rng::Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> tags)
    : Rng(seed) {
  for (std::uint64_t t : tags) key_ = mix_tag(key_, t);
}

Rng Rng::substream(std::initializer_list<std::uint64_t> tags) const {
  Rng out(0);
  out.key_ = key_;
  for (std::uint64_t t : tags) out.key_ = mix_tag(out.key_, t);
  return out;
}

Rng Rng::substream(StreamPurpose purpose,
                   std::initializer_list<std::uint64_t> tags) const {
  Rng out = substream({static_cast<std::uint64_t>(purpose)});
  for (std::uint64_t t : tags) out.key_ = mix_tag(out.key_, t);
  return out;
}

void Rng::refill() {
  std::array<std::uint32_t, 4> c = {static_cast<std::uint32_t>(counter_),
                                    static_cast<std::uint32_t>(counter_ >> 32),
                                    0u, 0u};
  const std::uint32_t k0 = static_cast<std::uint32_t>(key_);
  const std::uint32_t k1 = static_cast<std::uint32_t>(key_ >> 32);
  for (std::uint32_t r = 0; r < 10; ++r) {
    philox_round(c, k0 + r * kWeyl0, k1 + r * kWeyl1);
  }
  block_ = c;
  ++counter_;
  pos_ = 0;
}

std::uint32_t Rng::next_u32() {
  if (pos_ >= 4) refill();
  return block_[pos_++];
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t lo = next_u32();
  const std::uint64_t hi = next_u32();
  return (hi << 32) | lo;
}

double Rng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform01_open() {
  return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  const double u1 = uniform01_open();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  cached_normal_ = r * std::sin(theta);
  has_cached_normal_ = true;
  return r * std::cos(theta);
}

std::uint64_t Rng::uniform_int(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_int: bound must be > 0");
  // Lemire's multiply-shift with rejection of the biased low range.
  const std::uint64_t threshold = (-bound) % bound;
  for (;;) {
    const std::uint64_t x = next_u64();
    const unsigned __int128 m =
        static_cast<unsigned __int128>(x) * static_cast<unsigned __int128>(bound);
    const std::uint64_t low = static_cast<std::uint64_t>(m);
    if (low >= threshold) {
      return static_cast<std::uint64_t>(m >> 64);
    }
  }
}

std::vector<int> Rng::sample_without_replacement(int n, int k) {
  if (k > n || k < 0) {
    throw std::invalid_argument("sample_without_replacement: need 0 <= k <= n");
  }
  std::vector<int> pool(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
  std::vector<int> out(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const std::uint64_t j =
        static_cast<std::uint64_t>(i) + uniform_int(static_cast<std::uint64_t>(n - i));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    out[static_cast<std::size_t>(i)] = pool[static_cast<std::size_t>(i)];
  }
  return out;
}

}  // namespace enetlts
