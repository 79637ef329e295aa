#pragma once

// Philox4x32-10 (Salmon et al., SC'11). Counter-based: the output block is a
// pure function of (counter, key), so any trial can be regenerated in isolation.

#include <array>
#include <cstdint>

namespace coklab {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) noexcept;

/// Sequential 32-bit words from the blocks (block, stream) keyed by seed.
/// Counter words 0-1 hold the block index, words 2-3 the stream id.
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream) noexcept;

  std::uint32_t next() noexcept {
    if (pos_ == 4) refill();
    return buffer_[pos_++];
  }
  std::uint64_t next64() noexcept {
    const std::uint64_t lo = next();
    return lo | (static_cast<std::uint64_t>(next()) << 32);
  }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() noexcept { return static_cast<double>(next64() >> 11) * 0x1.0p-53; }

 private:
  void refill() noexcept;

  PhiloxKey key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  PhiloxCounter buffer_{};
  int pos_ = 4;
};

}  // namespace coklab
