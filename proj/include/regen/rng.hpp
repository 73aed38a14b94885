#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace regen {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter block(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += 0x9E3779B9u;
        key[1] += 0xBB67AE85u;
      }
      const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }
};

// Identifies an independent random stream: the master seed is the Philox key,
// (replicate, substream) occupy the upper counter words and the lower 64 bits
// count draws, so streams never overlap.
struct StreamId {
  std::uint64_t seed = 0;
  std::uint32_t replicate = 0;
  std::uint32_t substream = 0;
};

class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(StreamId id) : id_(id) {}
  RandomStream(std::uint64_t seed, std::uint32_t replicate, std::uint32_t substream)
      : id_{seed, replicate, substream} {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (buffered_ == 0) refill();
    --buffered_;
    return buffer_[buffered_];
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  // Uniform on (0, 1].
  double uniform_open_low() { return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53; }
  double exponential() { return -std::log(uniform_open_low()); }

  // Box-Muller; the second variate of each pair is kept for the next call.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_open_low()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
  }

  const StreamId& id() const noexcept { return id_; }

 private:
  void refill() {
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(position_),
                                  static_cast<std::uint32_t>(position_ >> 32), id_.replicate, id_.substream};
    const Philox4x32::Key key{static_cast<std::uint32_t>(id_.seed), static_cast<std::uint32_t>(id_.seed >> 32)};
    const auto out = Philox4x32::block(ctr, key);
    ++position_;
    // Served back to front by operator().
    buffer_[1] = (std::uint64_t{out[1]} << 32) | out[0];
    buffer_[0] = (std::uint64_t{out[3]} << 32) | out[2];
    buffered_ = 2;
  }

  StreamId id_;
  std::uint64_t position_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace regen

namespace regen::streams {
// Substream roles. Path blocks use substreams [0, kPathBlocksEnd); the rest are
// single-purpose.
inline constexpr std::uint32_t kPathBlocksEnd = 0x80000000u;
inline constexpr std::uint32_t kGapMarks = 0x80000001u;
inline constexpr std::uint32_t kAtoms = 0x80000002u;
inline constexpr std::uint32_t kLimitPaths = 0x80000003u;
}  // namespace regen::streams
