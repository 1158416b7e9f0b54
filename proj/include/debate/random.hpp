#pragma once

// Deterministic random streams keyed by experiment coordinates.
//
// A stream is SplitMix64 run in counter mode from a 64-bit key. Keys are the
// leading bytes of a SHA-256 over a length-prefixed encoding of the stream
// coordinates, so adding a protocol or a label never shifts any other stream.

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "debate/core.hpp"
#include "debate/hash.hpp"

namespace debate {

class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t key = 0) noexcept : key_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return next_u64(); }

  result_type next_u64() noexcept {
    return mix64(key_ + (counter_++) * 0x9E3779B97F4A7C15ULL);
  }

  /// Uniform double in [0, 1) with 53 bits of resolution.
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("RandomStream::below(0)");
    // Lemire's multiply-and-reject.
    for (;;) {
      const unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
      const auto low = static_cast<std::uint64_t>(m);
      if (low >= n || low >= (-n) % n) return static_cast<std::uint64_t>(m >> 64);
    }
  }

  bool coin(double p) noexcept { return uniform() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t position() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Stream keyed by the master seed and an ordered list of labels.
inline RandomStream derive_stream(std::uint64_t master_seed,
                                  std::initializer_list<std::string_view> parts) {
  Sha256 h;
  h.update("debate-rng/v1");
  const std::string seed = std::to_string(master_seed);
  auto put = [&](std::string_view s) {
    const std::string len = std::to_string(s.size()) + ":";
    h.update(len).update(s);
  };
  put(seed);
  for (auto p : parts) put(p);
  const auto d = h.digest();
  std::uint64_t key = 0;
  for (int i = 0; i < 8; ++i) key = (key << 8) | d[static_cast<std::size_t>(i)];
  return RandomStream(key);
}

/// Per-unit stream. Distinct labels ("order", "generate", "judge-tie",
/// "silence-tiebreak", ...) are independent.
inline RandomStream derive_rng(std::uint64_t master_seed, std::string_view event_id,
                               int seed_index, ProtocolKind protocol,
                               std::string_view stream_label) {
  const std::string seed = std::to_string(seed_index);
  return derive_stream(master_seed,
                       {"unit", event_id, seed, to_string(protocol), stream_label});
}

inline RandomStream derive_rng(const RunUnit& unit, std::string_view stream_label) {
  return derive_rng(unit.master_seed, unit.event_id, unit.seed_index, unit.protocol,
                    stream_label);
}

}  // namespace debate
