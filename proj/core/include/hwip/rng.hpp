#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace hwip {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// The 64-bit key is the experiment seed and the upper half of the 128-bit
/// counter is a stream id, so `Philox(seed, stream)` yields statistically
/// independent substreams without any shared state. Satisfies
/// UniformRandomBitGenerator with 64-bit output.
class Philox {
 public:
  using result_type = std::uint64_t;

  Philox(std::uint64_t seed, std::uint64_t stream) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  /// Uniform double in the open interval (0, 1).
  double uniform_open() noexcept;

  void discard(std::uint64_t n) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;  // low half of the counter
  std::array<std::uint32_t, 4> buffer_{};
  unsigned used_ = 4;  // 32-bit words consumed from buffer_
};

/// Raw Philox4x32-10 block function, exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

/// Derives a stream id from structured coordinates (experiment tag, grid
/// index, replicate index, ...). Pure function; used as
/// `Philox(seed, stream_id({tag, i, r}))`.
std::uint64_t stream_id(std::initializer_list<std::uint64_t> parts) noexcept;

/// Stable 64-bit tag for a short ASCII label (FNV-1a).
std::uint64_t tag(const char* label) noexcept;

inline Philox substream(std::uint64_t seed, std::uint64_t replicate) noexcept {
  return Philox(seed, replicate);
}

}  // namespace hwip
